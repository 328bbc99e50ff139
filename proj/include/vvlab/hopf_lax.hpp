#pragma once

#include "vvlab/envelope.hpp"
#include "vvlab/functions.hpp"

namespace vvlab {

/// Inviscid solution slice at a fixed time, with the interior margin inside
/// which grid truncation provably does not move the minimizer off the hull.
struct InviscidSolution {
    ProblemSpec problem;
    double t;
    ScalarField field;
    double trusted_margin;  // L * (T - t)
    double dt_used = 0.0;   // 0 for the single-step f == 0 path
    int steps = 0;
};

/// Single Hopf-Lax inf-convolution with tau = T - t. Requires f == 0.
InviscidSolution hopf_lax_solve(const ProblemSpec& problem, double t, const Grid& grid);

/// Backward Lax-Oleinik march with Lie splitting of the running cost:
///   phi_{s - dt} = inf-convolution(phi_s, dt) + dt * f.
/// Reproduces hopf_lax_solve when f == 0 (quadratic kernels compose).
InviscidSolution lax_oleinik_time_march(const ProblemSpec& problem, double t,
                                        const Grid& grid, double dt);

}  // namespace vvlab
