#pragma once

#include "vvlab/functions.hpp"

#include <vector>

namespace vvlab {

/// Truncated tensor quadrature controls for the log-domain integral
/// representation of the viscous value. Zeros select the defaults:
/// radius (T - t) L_g + 12 sqrt(eps (T - t)), node spacing
/// min(0.25 sqrt(eps (T - t)), 0.05), one node-doubling check.
struct QuadratureSpec {
    double radius = 0.0;
    double spacing = 0.0;
    double tol = 1e-9;
    int max_refine = 2;
};

/// phi^eps_t(x) for f == 0 via the log-domain Gaussian integral
///   (eps d / 2) log(2 pi eps (T-t)) - eps log int exp[-g/eps - |y-x|^2/(2 eps (T-t))] dy.
/// Radial terminal costs reduce to the projection rank k; the fully
/// degenerate point P_k(x) = 0 delegates to the radial 1D quadrature.
double viscous_value_point(const ProblemSpec& problem, std::span<const double> x,
                           double t, double eps, const QuadratureSpec& quad = {});

/// grad phi^eps_t(x) = (x - <y>) / (T - t), <y> the Gibbs mean under the
/// same weights, accumulated as a log-domain weighted-mean ratio.
std::vector<double> viscous_gradient_point(const ProblemSpec& problem,
                                           std::span<const double> x, double t,
                                           double eps,
                                           const QuadratureSpec& quad = {});

struct ViscousSolution {
    ProblemSpec problem;
    double eps;
    double t;
    ScalarField field;
    double trusted_margin;
    double dt_used;
    int steps;
};

/// Grid march of the Cole-Hopf transformed linear equation: alternating
/// log-domain Gaussian convolution steps (variance eps dt, kernel truncated
/// at 8 standard deviations) and potential steps subtracting f dt / eps.
ViscousSolution viscous_solve_grid(const ProblemSpec& problem, double t,
                                   const Grid& grid, double eps, double dt);

}  // namespace vvlab
