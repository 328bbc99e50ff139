#include "vvlab/rate.hpp"

#include "vvlab/cole_hopf.hpp"
#include "vvlab/hopf_lax.hpp"
#include "vvlab/radial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace vvlab {

void RateTable::validate() const {
    if (rows.empty()) throw std::invalid_argument("RateTable: no rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RateRow& r = rows[i];
        if (!(r.eps > 0.0) || !std::isfinite(r.phi_eps) || !std::isfinite(r.phi_zero))
            throw std::invalid_argument("RateTable: bad row");
        if (i > 0 && !(r.eps < rows[i - 1].eps))
            throw std::invalid_argument("RateTable: eps must be strictly decreasing");
    }
}

namespace {

// Grid-restricted minimization of g(y) + |x - y|^2 / (2 tau) on a fine
// tensor sampling around x. Point-scale surrogate of the Hopf-Lax solve.
double inviscid_value_point(const ProblemSpec& problem, std::span<const double> x,
                            double tau) {
    if (tau == 0.0) return problem.g(x);
    const int d = problem.d;
    const double radius = problem.L() * tau + 0.5;
    const double spacing = d == 1 ? 4e-4 : 2e-3;
    const int m = static_cast<int>(std::ceil(radius / spacing));
    const double h = radius / m;
    const int n = 2 * m + 1;

    std::vector<double> y(d);
    std::vector<int> idx(d, 0);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t flat = 0; flat < total; ++flat) {
        double q = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dy = (idx[a] - m) * h;
            y[a] = x[a] + dy;
            q += dy * dy;
        }
        best = std::min(best, problem.g(y) + q / (2.0 * tau));
        int a = d - 1;
        while (a >= 0 && ++idx[a] == n) idx[a] = 0, --a;
    }
    return best;
}

// Flat index of the grid node closest to x.
std::size_t nearest_flat_index(const Grid& grid, std::span<const double> x) {
    std::size_t flat = 0;
    for (int a = 0; a < grid.dim(); ++a) {
        const Axis& ax = grid.axis(a);
        int i = static_cast<int>(std::lround((x[a] - ax.lo) / ax.spacing()));
        i = std::clamp(i, 0, ax.n - 1);
        flat += static_cast<std::size_t>(i) * grid.stride(a);
    }
    return flat;
}

RateRow grid_row(const ProblemSpec& problem, std::span<const double> x, double t,
                 double eps, const Grid* user_grid) {
    if (problem.f.is_zero()) {
        if (user_grid != nullptr) {
            // Pin both evaluations to the node nearest x so the gap reflects
            // the grid resolution, not a mismatch of evaluation points.
            const std::size_t at = nearest_flat_index(*user_grid, x);
            const std::vector<double> xn = user_grid->point(at);
            const double phi_eps = viscous_value_point(problem, xn, t, eps);
            const InviscidSolution is = hopf_lax_solve(problem, t, *user_grid);
            const double phi_zero = is.field.values[at];
            return {eps, phi_eps, phi_zero, phi_eps - phi_zero};
        }
        const double phi_eps = viscous_value_point(problem, x, t, eps);
        const double phi_zero = inviscid_value_point(problem, x, problem.T - t);
        return {eps, phi_eps, phi_zero, phi_eps - phi_zero};
    }
    // f != 0: marched solvers on a shared grid, read at the node nearest x
    const double tau = problem.T - t;
    std::vector<Axis> axes;
    if (user_grid == nullptr) {
        const double radius = problem.L() * tau + 12.0 * std::sqrt(eps * tau) + 1.0;
        for (int a = 0; a < problem.d; ++a) {
            const int n = 2 * static_cast<int>(std::ceil(radius / 0.01)) + 1;
            axes.push_back({x[a] - radius, x[a] + radius, n});
        }
    }
    const Grid grid = user_grid != nullptr ? *user_grid : Grid(axes);
    const double dt = std::min(0.01, tau);
    const ViscousSolution vs = viscous_solve_grid(problem, t, grid, eps, dt);
    const InviscidSolution is = lax_oleinik_time_march(problem, t, grid, dt);
    const std::size_t at = nearest_flat_index(grid, x);
    const double pe = vs.field.values[at], p0 = is.field.values[at];
    return {eps, pe, p0, pe - p0};
}

}  // namespace

RateTable sweep_epsilon(const ProblemSpec& problem, std::span<const double> x,
                        double t, std::span<const double> eps_list,
                        SweepBackend backend, int threads, const Grid* user_grid) {
    if (eps_list.empty()) throw std::invalid_argument("sweep_epsilon: empty eps list");
    for (double e : eps_list)
        if (!(e > 0.0) || e > 1.0)
            throw std::invalid_argument("sweep_epsilon: eps must lie in (0, 1]");
    if (static_cast<int>(x.size()) != problem.d)
        throw std::invalid_argument("sweep_epsilon: x dimension mismatch");

    std::vector<double> eps(eps_list.begin(), eps_list.end());
    std::sort(eps.begin(), eps.end(), std::greater<>());
    if (std::adjacent_find(eps.begin(), eps.end()) != eps.end())
        throw std::invalid_argument("sweep_epsilon: duplicate eps");

    RateTable table;
    table.problem_name = to_string(problem.g.tag());
    table.x.assign(x.begin(), x.end());
    table.t = t;
    table.rows.resize(eps.size());

    if (backend == SweepBackend::radial) {
        if (problem.g.tag() != FnTag::neg_proj_norm || !problem.f.is_zero())
            throw std::invalid_argument(
                "sweep_epsilon: radial backend needs g = neg_proj_norm and f = 0");
        for (double xi : x)
            if (xi != 0.0)
                throw std::invalid_argument("sweep_epsilon: radial backend needs x = 0");
        const double tau = problem.T - t;
        const int k = problem.g.proj_k();
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const RadialCase c(k, problem.d, tau, eps[i]);
            const double gap = radial_gap(c);
            const double phi0 = -0.5 * tau;
            table.rows[i] = {eps[i], phi0 + gap, phi0, gap};
        }
        return table;
    }

    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(eps.size())));
    if (nthreads == 1) {
        for (std::size_t i = 0; i < eps.size(); ++i)
            table.rows[i] = grid_row(problem, x, t, eps[i], user_grid);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < eps.size();)
                    table.rows[i] = grid_row(problem, x, t, eps[i], user_grid);
            });
        for (auto& th : pool) th.join();
    }
    return table;
}

RateFit fit_rate_model(const RateTable& table, const RateBasis& basis) {
    table.validate();
    const int k = basis.size();
    if (k == 0) return {basis, 0, 0, 0, 0};
    if (static_cast<int>(table.rows.size()) < k)
        throw std::invalid_argument("fit_rate_model: fewer rows than basis functions");

    auto columns = [&](double e) {
        std::vector<double> c;
        if (basis.eps_log_eps) c.push_back(e * std::log(e));
        if (basis.eps) c.push_back(e);
        if (basis.sqrt_eps) c.push_back(std::sqrt(e));
        return c;
    };

    double ata[3][3] = {};
    double atb[3] = {};
    for (const RateRow& r : table.rows) {
        const auto c = columns(r.eps);
        for (int i = 0; i < k; ++i) {
            atb[i] += c[i] * r.gap;
            for (int j = 0; j < k; ++j) ata[i][j] += c[i] * c[j];
        }
    }

    // Gaussian elimination with partial pivoting on the k x k system
    int perm[3] = {0, 1, 2};
    double scale = 0.0;
    for (int i = 0; i < k; ++i) scale = std::max(scale, std::fabs(ata[i][i]));
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(ata[r][col]) > std::fabs(ata[piv][col])) piv = r;
        if (std::fabs(ata[piv][col]) < 1e-14 * scale)
            throw std::invalid_argument("fit_rate_model: rank-deficient basis for this table");
        std::swap(ata[col], ata[piv]);
        std::swap(atb[col], atb[piv]);
        std::swap(perm[col], perm[piv]);
        for (int r = col + 1; r < k; ++r) {
            const double f = ata[r][col] / ata[col][col];
            for (int cc = col; cc < k; ++cc) ata[r][cc] -= f * ata[col][cc];
            atb[r] -= f * atb[col];
        }
    }
    double coef[3] = {};
    for (int r = k - 1; r >= 0; --r) {
        double s = atb[r];
        for (int cc = r + 1; cc < k; ++cc) s -= ata[r][cc] * coef[cc];
        coef[r] = s / ata[r][r];
    }

    RateFit fit;
    fit.basis = basis;
    int idx = 0;
    if (basis.eps_log_eps) fit.coef_eps_log_eps = coef[idx++];
    if (basis.eps) fit.coef_eps = coef[idx++];
    if (basis.sqrt_eps) fit.coef_sqrt_eps = coef[idx++];

    for (const RateRow& r : table.rows) {
        const auto c = columns(r.eps);
        double pred = 0.0;
        for (int i = 0; i < k; ++i) pred += c[i] * coef[i];
        fit.residual_linf = std::max(fit.residual_linf, std::fabs(pred - r.gap));
    }
    return fit;
}

bool BoundsReport::all_pass() const {
    for (const BoundClause& c : clauses)
        if (c.enabled && !c.pass) return false;
    return true;
}

namespace {

RateTable drop_largest_eps(const RateTable& t) {
    RateTable out = t;
    out.rows.erase(out.rows.begin());
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

BoundsReport check_paper_bounds(const RateTable& table, const ProblemSpec& problem,
                                double t) {
    table.validate();
    const int d = problem.d;
    const double T = problem.T;
    const double L = problem.L();
    const double lambda = problem.lambda();
    BoundsReport rep;

    {  // (a) sqrt-eps shape: implied constant bounded and stable
        BoundClause c{.name = "sqrt_eps_shape", .enabled = true};
        double cmax = 0.0, cmin = std::numeric_limits<double>::infinity();
        for (const RateRow& r : table.rows) {
            const double ratio = std::fabs(r.gap) / std::sqrt(r.eps);
            cmax = std::max(cmax, ratio);
            cmin = std::min(cmin, ratio);
        }
        c.constant = cmax;
        c.pass = std::isfinite(cmax);
        if (table.rows.size() >= 3 && cmax > 0.0) {
            double cmax2 = 0.0;
            for (std::size_t i = 1; i < table.rows.size(); ++i)
                cmax2 = std::max(cmax2,
                                 std::fabs(table.rows[i].gap) / std::sqrt(table.rows[i].eps));
            c.pass = c.pass && cmax2 >= 0.5 * cmax;
        }
        c.detail = "C=" + fmt(cmax) + " ratio_max_min=" +
                   (cmin > 0.0 ? fmt(cmax / cmin) : std::string("inf"));
        rep.clauses.push_back(std::move(c));
    }

    {  // (b) semiconcave upper bound
        BoundClause c{.name = "semiconcave_upper", .enabled = std::isfinite(lambda)};
        if (c.enabled) {
            const double tol = 1e-8;
            double worst = std::numeric_limits<double>::infinity();
            for (const RateRow& r : table.rows) {
                const double rhs = 0.5 * (T - t) * d * lambda * r.eps + tol;
                worst = std::min(worst, rhs - r.gap);
            }
            c.slack = worst;
            c.pass = worst >= 0.0;
            c.detail = "min_slack=" + fmt(worst);
        }
        rep.clauses.push_back(std::move(c));
    }

    {  // (c) non-semiconcave upper bound, f == 0
        BoundClause c{.name = "upper_no_semiconcavity", .enabled = problem.f.is_zero()};
        if (c.enabled) {
            const double tol = 1e-8;
            const double Lg = problem.L_g();
            double worst = std::numeric_limits<double>::infinity();
            for (const RateRow& r : table.rows) {
                const double rhs = -0.5 * d * r.eps * std::log(r.eps) +
                                   0.5 * d * r.eps * std::log(T) +
                                   r.eps * (3.0 * Lg * Lg + 2.0 * Lg) + tol;
                worst = std::min(worst, rhs - r.gap);
            }
            c.slack = worst;
            c.pass = worst >= 0.0;
            c.detail = "min_slack=" + fmt(worst);
        }
        rep.clauses.push_back(std::move(c));
    }

    {  // (d) eps log eps lower bound with fitted constant
        BoundClause c{.name = "eps_log_eps_lower",
                      .enabled = table.rows.size() >= 2};
        if (c.enabled) {
            RateBasis basis{.eps_log_eps = true, .eps = true, .sqrt_eps = false};
            const RateFit fit = fit_rate_model(table, basis);
            const double c_fit = -fit.coef_eps;
            c.constant = c_fit;
            const double tol = 1e-8;
            double worst = std::numeric_limits<double>::infinity();
            for (const RateRow& r : table.rows) {
                const double rhs = 0.5 * d * r.eps * std::log(r.eps) - c_fit * r.eps - tol;
                worst = std::min(worst, r.gap - rhs);
            }
            c.slack = worst;
            // The stability gate only makes sense when the fitted constant is
            // positive: a negative C_fit means the gap sits strictly above the
            // eps log eps envelope and the bound is satisfied with room to
            // spare regardless of the fit.
            bool stable = true;
            if (c_fit > 0.0 && table.rows.size() >= 3) {
                const RateFit fit2 = fit_rate_model(drop_largest_eps(table), basis);
                stable = std::fabs(-fit2.coef_eps - c_fit) <= 0.1 * std::fabs(c_fit) + 1e-9;
            }
            c.pass = worst >= 0.0 && stable && std::isfinite(c_fit);
            c.detail = "C_fit=" + fmt(c_fit) + " min_slack=" + fmt(worst) +
                       (stable ? "" : " unstable");
        }
        rep.clauses.push_back(std::move(c));
    }

    {  // (e) terminal window
        BoundClause c{.name = "terminal_window", .enabled = true};
        const double eta = T - t;
        const double tol = 1e-6;
        double worst = std::numeric_limits<double>::infinity();
        for (const RateRow& r : table.rows) {
            const double rhs = 3.0 * L * L * eta + 2.0 * L * std::sqrt(r.eps * eta) + tol;
            worst = std::min(worst, rhs - std::fabs(r.gap));
        }
        c.slack = worst;
        c.pass = worst >= 0.0;
        c.detail = "eta=" + fmt(eta) + " min_slack=" + fmt(worst);
        rep.clauses.push_back(std::move(c));
    }

    return rep;
}

}  // namespace vvlab
