#pragma once

#include "vvlab/functions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vvlab {

enum class SweepBackend { grid, radial };

struct RateRow {
    double eps;
    double phi_eps;
    double phi_zero;
    double gap;  // phi_eps - phi_zero
};

struct RateTable {
    std::string problem_name;
    std::vector<double> x;
    double t = 0.0;
    std::vector<RateRow> rows;  // eps strictly decreasing

    void validate() const;
};

struct RateBasis {
    bool eps_log_eps = true;
    bool eps = true;
    bool sqrt_eps = false;

    int size() const { return (eps_log_eps ? 1 : 0) + (eps ? 1 : 0) + (sqrt_eps ? 1 : 0); }
};

struct RateFit {
    RateBasis basis;
    double coef_eps_log_eps = 0.0;
    double coef_eps = 0.0;
    double coef_sqrt_eps = 0.0;
    double residual_linf = 0.0;
};

/// Gap rows at a point: radial backend uses the 1D closed-form quadrature,
/// grid backend pairs the viscous point evaluator (or grid march for f != 0)
/// with the Hopf-Lax / Lax-Oleinik solve. The grid backend discretizes at an
/// internal resolution unless `user_grid` pins an explicit one.
RateTable sweep_epsilon(const ProblemSpec& problem, std::span<const double> x,
                        double t, std::span<const double> eps_list,
                        SweepBackend backend, int threads = 1,
                        const Grid* user_grid = nullptr);

/// Least squares over the chosen basis via the (<= 3x3) normal equations.
RateFit fit_rate_model(const RateTable& table, const RateBasis& basis);

struct BoundClause {
    std::string name;
    bool enabled = false;
    bool pass = true;
    double slack = 0.0;   // worst margin by which the inequality held (>= 0 good)
    double constant = 0.0;  // fitted constant where applicable
    std::string detail;
};

struct BoundsReport {
    std::vector<BoundClause> clauses;
    bool all_pass() const;
};

/// The five per-table bound checks: sqrt-eps shape, the semiconcave upper
/// bound, the non-semiconcave upper bound (f == 0), the eps log eps lower
/// bound with fitted constant, and the terminal-window bound.
BoundsReport check_paper_bounds(const RateTable& table, const ProblemSpec& problem,
                                double t);

}  // namespace vvlab
