#pragma once

#include "vvlab/hopf_lax.hpp"

namespace vvlab {

/// Measured regularity of the sup-convolution phi^{0,delta} against the
/// inviscid solution, restricted to the trusted interior window.
struct SupConvReport {
    double delta;
    double h_max;              // coarsest grid spacing used
    int stencil_step;          // second-difference stencil width in grid steps
    double measured_lipschitz;
    double max_second_diff;
    double min_second_diff;
    double sandwich_min;       // min (phi^{0,delta} - phi^0)
    double sandwich_max;

    // clause tolerances actually applied
    double tol_lipschitz;
    double tol_second_diff;
    double tol_sandwich;

    bool lipschitz_ok;     // measured <= L + tol
    bool semiconcave_ok;   // max second diff <= lambda + tol (skipped when lambda = inf)
    bool semiconvex_ok;    // min second diff >= -1/delta - tol
    bool sandwich_ok;      // -tol <= gap <= 2 L delta + tol

    bool all_ok() const {
        return lipschitz_ok && semiconcave_ok && semiconvex_ok && sandwich_ok;
    }
};

/// Builds phi^0 by Hopf-Lax, regularizes by sup-convolution with `delta`,
/// and measures every clause inside the trusted interior (boundary margin
/// L (T - t) + L delta).
SupConvReport supconv_report(const ProblemSpec& problem, double t, const Grid& grid,
                             double delta);

}  // namespace vvlab
