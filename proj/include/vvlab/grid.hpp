#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vvlab {

struct Axis {
    double lo;
    double hi;
    int n;

    double spacing() const { return (hi - lo) / (n - 1); }
    bool operator==(const Axis&) const = default;
};

/// Rectangular tensor grid, row-major with the last axis fastest.
class Grid {
public:
    explicit Grid(std::vector<Axis> axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int a) const { return axes_[a]; }
    std::size_t size() const { return size_; }
    std::size_t stride(int a) const { return strides_[a]; }

    double coord(int a, int i) const {
        return axes_[a].lo + i * axes_[a].spacing();
    }
    std::vector<double> point(std::size_t flat) const;
    std::vector<int> multi_index(std::size_t flat) const;

    bool operator==(const Grid&) const = default;

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t size_;
};

/// Dense real samples over a Grid; values finite by construction checks.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField(Grid g, std::vector<double> v);
    explicit ScalarField(Grid g);  // zero-filled

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    void check_finite() const;
};

double sup_norm_diff(const ScalarField& a, const ScalarField& b);

/// Max over axes and points of |forward difference| / h.
double estimate_lipschitz(const ScalarField& f);

struct SecondDiffBounds {
    double max_cc;  // semiconcavity estimate
    double min_cc;  // semiconvexity estimate
};

/// Centered second differences (f(x+h) - 2 f(x) + f(x-h)) / h^2 per axis.
SecondDiffBounds estimate_second_difference_bounds(const ScalarField& f);

// Restrictions of the estimators to an interior window: points at least
// `margin` away from every face of the grid hull. Used for trusted-region
// reads where domain truncation contaminates the boundary.
double estimate_lipschitz_interior(const ScalarField& f, double margin);
// `step` widens the centered stencil to step * h per axis. Semiconcavity-type
// inequalities hold at every scale, and a wide stencil suppresses the
// O(h^2 / delta) envelope-discretization oscillation that dominates h-scale
// second differences in d >= 2.
SecondDiffBounds estimate_second_difference_bounds_interior(const ScalarField& f,
                                                            double margin,
                                                            int step = 1);
double max_diff_interior(const ScalarField& a, const ScalarField& b, double margin);
double min_diff_interior(const ScalarField& a, const ScalarField& b, double margin);

}  // namespace vvlab
