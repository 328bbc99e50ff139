#include "vvlab/supconv.hpp"

#include <cmath>
#include <stdexcept>

namespace vvlab {

SupConvReport supconv_report(const ProblemSpec& problem, double t, const Grid& grid,
                             double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("supconv_report: delta must be > 0");

    const InviscidSolution inviscid = hopf_lax_solve(problem, t, grid);
    const ScalarField& phi0 = inviscid.field;
    const ScalarField phid = sup_convolution(phi0, delta);

    const double L = problem.L();
    const double margin = inviscid.trusted_margin + L * delta;

    double h = 0.0;
    for (int a = 0; a < grid.dim(); ++a) h = std::max(h, grid.axis(a).spacing());

    SupConvReport r{};
    r.delta = delta;
    r.h_max = h;
    r.measured_lipschitz = estimate_lipschitz_interior(phid, margin);

    // In d >= 2 the discrete envelope misses off-grid maximizers by an amount
    // oscillating with amplitude O(h^2 (1/delta + 1/tau)), which h-scale second
    // differences amplify to O(d (1/delta + 1/tau)). Widen the stencil until
    // that amplified noise is below 0.02; the semiconcavity inequalities are
    // scale-free, so the wide stencil stays a valid certificate.
    const double tau = problem.T - t;
    const double osc = grid.dim() * (1.0 / delta + 1.0 / tau) / 2.0;
    int step = 1;
    if (grid.dim() > 1)
        step = static_cast<int>(std::ceil(std::sqrt(osc / 0.02)));
    r.stencil_step = step;
    const SecondDiffBounds sd =
        estimate_second_difference_bounds_interior(phid, margin + step * h, step);
    r.max_second_diff = sd.max_cc;
    r.min_second_diff = sd.min_cc;
    r.sandwich_min = min_diff_interior(phid, phi0, margin);
    r.sandwich_max = max_diff_interior(phid, phi0, margin);

    r.tol_lipschitz = 1e-6;
    r.tol_second_diff = 1e-6 + h * h / (delta * delta) + osc / (step * step);
    r.tol_sandwich = 1e-8 + h * h / (2.0 * delta);

    const double lambda = problem.lambda();
    r.lipschitz_ok = r.measured_lipschitz <= L + r.tol_lipschitz;
    r.semiconcave_ok = !std::isfinite(lambda) ||
                       r.max_second_diff <= lambda + r.tol_second_diff;
    r.semiconvex_ok = r.min_second_diff >= -1.0 / delta - r.tol_second_diff;
    r.sandwich_ok = r.sandwich_min >= -r.tol_sandwich &&
                    r.sandwich_max <= 2.0 * L * delta + r.tol_sandwich;
    return r;
}

}  // namespace vvlab
