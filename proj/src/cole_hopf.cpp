#include "vvlab/cole_hopf.hpp"

#include "vvlab/kernels.hpp"
#include "vvlab/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vvlab {

namespace {

constexpr std::size_t kMaxTensorNodes = std::size_t(1) << 24;

struct ReducedEval {
    const FnSpec* g;
    std::vector<double> x;  // evaluation point in the reduced space
    int dim;
    bool radial;  // fully degenerate neg_proj_norm point
};

// g = -|P_k(y)| only depends on the first k coordinates, and the remaining
// Gaussian factors integrate out exactly. Collapse to the k-dimensional
// problem; at P_k(x) = 0 hand over to the radial 1D quadrature.
ReducedEval reduce(const ProblemSpec& problem, std::span<const double> x) {
    if (static_cast<int>(x.size()) != problem.d)
        throw std::invalid_argument("viscous point: x dimension mismatch");
    if (problem.g.tag() == FnTag::neg_proj_norm) {
        const int k = problem.g.proj_k();
        std::vector<double> xr(x.begin(), x.begin() + k);
        double n2 = 0.0;
        for (double v : xr) n2 += v * v;
        return {&problem.g, std::move(xr), k, n2 == 0.0};
    }
    return {&problem.g, std::vector<double>(x.begin(), x.end()),
            static_cast<int>(x.size()), false};
}

struct TensorGrid {
    double h;
    int m;        // nodes per axis = 2m + 1, centered on x
    int dim;
    std::size_t total;
};

TensorGrid make_tensor(double radius, double spacing, int dim) {
    const int m = std::max(2, static_cast<int>(std::ceil(radius / spacing)));
    TensorGrid t{radius / m, m, dim, 1};
    const std::size_t per_axis = 2 * static_cast<std::size_t>(m) + 1;
    for (int a = 0; a < dim; ++a) {
        if (t.total > kMaxTensorNodes / per_axis)
            throw std::invalid_argument("viscous point: quadrature tensor too large");
        t.total *= per_axis;
    }
    return t;
}

// Fills `expo` with -g(y)/eps - |y - x|^2 / (2 eps tau) over the tensor.
void fill_exponents(const ReducedEval& r, double eps, double tau,
                    const TensorGrid& tg, std::vector<double>& expo) {
    expo.resize(tg.total);
    const int dim = tg.dim;
    const int n = 2 * tg.m + 1;
    const double inv2 = 1.0 / (2.0 * eps * tau);
    std::vector<double> y(dim);
    std::vector<int> idx(dim, 0);
    const FnSpec& g = *r.g;
    for (std::size_t flat = 0; flat < tg.total; ++flat) {
        double q = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double dy = (idx[a] - tg.m) * tg.h;
            y[a] = r.x[a] + dy;
            q += dy * dy;
        }
        expo[flat] = -g(y) / eps - q * inv2;
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == n) idx[a] = 0, --a;
    }
}

double log_integral(const ReducedEval& r, double eps, double tau,
                    const TensorGrid& tg) {
    static thread_local std::vector<double> expo;
    fill_exponents(r, eps, tau, tg, expo);
    return kernels::log_sum_exp(expo) + tg.dim * std::log(tg.h);
}

void check_radius(double radius, double eps, double tau, double L_g) {
    const double admissible = tau * L_g + 10.0 * std::sqrt(eps * tau);
    if (radius < admissible - 1e-12)
        throw std::invalid_argument(
            "viscous point: truncation radius below the admissibility bound");
}

struct QuadSetup {
    double radius;
    double spacing;
};

QuadSetup resolve_quad(const QuadratureSpec& quad, const ProblemSpec& problem,
                       double eps, double tau) {
    const double sigma = std::sqrt(eps * tau);
    double radius = quad.radius > 0.0 ? quad.radius
                                      : tau * problem.L_g() + 12.0 * sigma;
    check_radius(radius, eps, tau, problem.L_g());
    double spacing = quad.spacing > 0.0 ? quad.spacing
                                        : std::min(0.25 * sigma, 0.05);
    return {radius, spacing};
}

void check_point_pre(const ProblemSpec& problem, double t, double eps) {
    if (!problem.f.is_zero())
        throw std::invalid_argument("viscous point evaluation requires f == 0");
    if (!(eps > 0.0)) throw std::invalid_argument("viscous point: eps must be > 0");
    if (t < 0.0 || t > problem.T)
        throw std::invalid_argument("viscous point: t outside [0, T]");
}

}  // namespace

double viscous_value_point(const ProblemSpec& problem, std::span<const double> x,
                           double t, double eps, const QuadratureSpec& quad) {
    check_point_pre(problem, t, eps);
    if (t == problem.T) return problem.g(x);
    const double tau = problem.T - t;

    const ReducedEval r = reduce(problem, x);
    if (r.radial)
        return radial_viscous_value(RadialCase(r.dim, problem.d, tau, eps));

    const QuadSetup qs = resolve_quad(quad, problem, eps, tau);
    const double lead = 0.5 * r.dim * eps *
                        std::log(2.0 * std::numbers::pi * eps * tau);

    double spacing = qs.spacing;
    double value = lead - eps * log_integral(r, eps, tau,
                                             make_tensor(qs.radius, spacing, r.dim));
    for (int i = 0; i < quad.max_refine; ++i) {
        spacing *= 0.5;
        const double refined =
            lead - eps * log_integral(r, eps, tau,
                                      make_tensor(qs.radius, spacing, r.dim));
        const bool done = std::fabs(refined - value) <= quad.tol;
        value = refined;
        if (done) break;
    }
    if (!std::isfinite(value))
        throw std::runtime_error("viscous point: non-finite value");
    return value;
}

std::vector<double> viscous_gradient_point(const ProblemSpec& problem,
                                           std::span<const double> x, double t,
                                           double eps, const QuadratureSpec& quad) {
    check_point_pre(problem, t, eps);
    if (t == problem.T)
        throw std::invalid_argument("viscous gradient: t must be < T");
    const double tau = problem.T - t;

    std::vector<double> grad(problem.d, 0.0);
    const ReducedEval r = reduce(problem, x);
    if (r.radial) return grad;  // Gibbs mean at the symmetry point

    const QuadSetup qs = resolve_quad(quad, problem, eps, tau);
    const TensorGrid tg = make_tensor(qs.radius, qs.spacing, r.dim);

    static thread_local std::vector<double> expo;
    fill_exponents(r, eps, tau, tg, expo);
    const double m = kernels::max_value(expo);

    // Per-axis Gibbs mean <y_a> = sum y_a w / sum w, log-domain shifted.
    const int n = 2 * tg.m + 1;
    static thread_local std::vector<double> coord;
    coord.resize(tg.total);
    for (int a = 0; a < r.dim; ++a) {
        std::size_t inner = 1;
        for (int b = a + 1; b < r.dim; ++b) inner *= n;
        for (std::size_t flat = 0; flat < tg.total; ++flat) {
            const int ia = static_cast<int>((flat / inner) % n);
            coord[flat] = r.x[a] + (ia - tg.m) * tg.h;
        }
        const auto acc = kernels::sum_exp_weighted(expo, coord, m);
        grad[a] = (r.x[a] - acc.weighted / acc.sum) / tau;
    }
    return grad;
}

ViscousSolution viscous_solve_grid(const ProblemSpec& problem, double t,
                                   const Grid& grid, double eps, double dt) {
    if (!(eps > 0.0)) throw std::invalid_argument("viscous grid: eps must be > 0");
    if (t < 0.0 || t >= problem.T)
        throw std::invalid_argument("viscous grid: t outside [0, T)");
    const double horizon = problem.T - t;
    if (!(dt > 0.0) || dt > horizon + 1e-12)
        throw std::invalid_argument("viscous grid: dt invalid");
    if (grid.dim() != problem.d)
        throw std::invalid_argument("viscous grid: grid dimension mismatch");

    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
    const double step = horizon / steps;
    const double var = eps * step;
    const double kernel_radius = 8.0 * std::sqrt(var);
    for (int a = 0; a < grid.dim(); ++a)
        if (kernel_radius > grid.axis(a).hi - grid.axis(a).lo)
            throw std::invalid_argument("viscous grid: heat kernel wider than grid");

    // march W = log v = -phi/eps backward in time
    ScalarField W = sample_function(problem.g, grid);
    for (double& v : W.values) v = -v / eps;
    const bool has_source = !problem.f.is_zero();
    ScalarField f_field = has_source ? sample_function(problem.f, grid)
                                     : ScalarField(grid);

    std::vector<double> line, out, expo;
    for (int s = 0; s < steps; ++s) {
        for (int a = 0; a < grid.dim(); ++a) {
            const int n = grid.axis(a).n;
            const double h = grid.axis(a).spacing();
            const int w = std::max(1, static_cast<int>(std::ceil(kernel_radius / h)));
            // Normalize by the discrete (possibly boundary-clipped) kernel
            // mass instead of the analytic h / sqrt(2 pi var): the step then
            // becomes a stochastic matrix, preserving constants exactly and
            // obeying the discrete maximum principle.
            std::vector<double> mass_prefix(2 * w + 2, 0.0);
            for (int k = -w; k <= w; ++k)
                mass_prefix[k + w + 1] =
                    mass_prefix[k + w] +
                    std::exp(-(k * h) * (k * h) / (2.0 * var));
            const std::size_t stride = grid.stride(a);
            const std::size_t block = stride * n;
            line.resize(n);
            out.resize(n);
            for (std::size_t base = 0; base < grid.size(); base += block) {
                for (std::size_t off = 0; off < stride; ++off) {
                    double* p = W.values.data() + base + off;
                    for (int i = 0; i < n; ++i) line[i] = p[i * stride];
                    for (int i = 0; i < n; ++i) {
                        const int j0 = std::max(0, i - w);
                        const int j1 = std::min(n - 1, i + w);
                        expo.resize(j1 - j0 + 1);
                        for (int j = j0; j <= j1; ++j) {
                            const double dy = (i - j) * h;
                            expo[j - j0] = line[j] - dy * dy / (2.0 * var);
                        }
                        const double mass = mass_prefix[j1 - i + w + 1] -
                                            mass_prefix[j0 - i + w];
                        out[i] = kernels::log_sum_exp(expo) - std::log(mass);
                    }
                    for (int i = 0; i < n; ++i) p[i * stride] = out[i];
                }
            }
        }
        if (has_source)
            for (std::size_t i = 0; i < W.values.size(); ++i)
                W.values[i] -= f_field.values[i] * step / eps;
    }

    ScalarField phi(grid);
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        phi.values[i] = -eps * W.values[i];
    phi.check_finite();

    // Influence of the truncated boundary reaches inward like the Lipschitz
    // drift plus the aggregate diffusion tail over the whole horizon; the
    // per-step tails compose to variance eps * horizon, not steps times the
    // per-step radius.
    const double margin = problem.L() * horizon + 8.0 * std::sqrt(eps * horizon);
    return {problem, eps, t, std::move(phi), margin, step, steps};
}

}  // namespace vvlab
