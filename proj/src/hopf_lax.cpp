#include "vvlab/hopf_lax.hpp"

#include <cmath>
#include <stdexcept>

namespace vvlab {

InviscidSolution hopf_lax_solve(const ProblemSpec& problem, double t, const Grid& grid) {
    if (!problem.f.is_zero())
        throw std::invalid_argument("hopf_lax_solve: requires f == 0");
    if (t < 0.0 || t > problem.T)
        throw std::invalid_argument("hopf_lax_solve: t outside [0, T]");

    ScalarField g = sample_function(problem.g, grid);
    const double tau = problem.T - t;
    if (tau == 0.0)
        return {problem, t, std::move(g), 0.0};

    ScalarField phi = quadratic_inf_convolution(g, tau);
    return {problem, t, std::move(phi), problem.L() * tau};
}

InviscidSolution lax_oleinik_time_march(const ProblemSpec& problem, double t,
                                        const Grid& grid, double dt) {
    const double horizon = problem.T - t;
    if (!(dt > 0.0)) throw std::invalid_argument("lax_oleinik: dt must be > 0");
    if (dt > horizon + 1e-12)
        throw std::invalid_argument("lax_oleinik: dt exceeds T - t");
    if (t < 0.0) throw std::invalid_argument("lax_oleinik: t outside [0, T]");

    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
    const double step = horizon / steps;

    ScalarField phi = sample_function(problem.g, grid);
    const bool has_source = !problem.f.is_zero();
    ScalarField f_field = has_source ? sample_function(problem.f, grid)
                                     : ScalarField(grid);
    for (int m = 0; m < steps; ++m) {
        phi = quadratic_inf_convolution(phi, step);
        if (has_source)
            for (std::size_t i = 0; i < phi.values.size(); ++i)
                phi.values[i] += step * f_field.values[i];
    }
    return {problem, t, std::move(phi), problem.L() * horizon, step, steps};
}

}  // namespace vvlab
