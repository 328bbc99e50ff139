#include "vvlab/grid.hpp"

#include "vvlab/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vvlab {

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw std::invalid_argument("Grid: dimension must be >= 1");
    size_ = 1;
    for (const Axis& a : axes_) {
        if (!(a.lo < a.hi)) throw std::invalid_argument("Grid: lo must be < hi");
        if (a.n < 2) throw std::invalid_argument("Grid: n must be >= 2");
        if (size_ > std::numeric_limits<std::size_t>::max() / a.n)
            throw std::invalid_argument("Grid: total point count overflows");
        size_ *= a.n;
    }
    strides_.resize(axes_.size());
    std::size_t s = 1;
    for (int a = dim() - 1; a >= 0; --a) {
        strides_[a] = s;
        s *= axes_[a].n;
    }
}

std::vector<double> Grid::point(std::size_t flat) const {
    std::vector<double> p(dim());
    for (int a = 0; a < dim(); ++a) {
        const int i = static_cast<int>((flat / strides_[a]) % axes_[a].n);
        p[a] = coord(a, i);
    }
    return p;
}

std::vector<int> Grid::multi_index(std::size_t flat) const {
    std::vector<int> idx(dim());
    for (int a = 0; a < dim(); ++a)
        idx[a] = static_cast<int>((flat / strides_[a]) % axes_[a].n);
    return idx;
}

ScalarField::ScalarField(Grid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("ScalarField: value count does not match grid");
    check_finite();
}

ScalarField::ScalarField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

void ScalarField::check_finite() const {
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("ScalarField: non-finite value");
}

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("field operation: grid mismatch");
}

// Visit every flat index whose point is at least `margin` inside the hull.
// An empty window is an error: every caller is measuring a trusted-region
// property, and a silent empty scan would report a vacuous bound.
template <typename F>
void for_interior(const Grid& g, double margin, F&& fn) {
    const int d = g.dim();
    std::vector<int> lo(d), hi(d), idx(d);
    for (int a = 0; a < d; ++a) {
        const double h = g.axis(a).spacing();
        const int m = margin > 0 ? static_cast<int>(std::ceil(margin / h - 1e-12)) : 0;
        lo[a] = m;
        hi[a] = g.axis(a).n - 1 - m;
        if (lo[a] > hi[a])
            throw std::invalid_argument(
                "interior window is empty: grid too small for margin " +
                std::to_string(margin));
        idx[a] = lo[a];
    }
    for (;;) {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat += idx[a] * g.stride(a);
        fn(flat, idx);
        int a = d - 1;
        while (a >= 0 && ++idx[a] > hi[a]) idx[a] = lo[a], --a;
        if (a < 0) break;
    }
}

}  // namespace

double sup_norm_diff(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    return kernels::max_abs_diff(a.values, b.values);
}

double estimate_lipschitz(const ScalarField& f) {
    const Grid& g = f.grid;
    double m = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const double h = g.axis(a).spacing();
        const std::size_t stride = g.stride(a);
        const int n = g.axis(a).n;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int ia = static_cast<int>((i / stride) % n);
            if (ia + 1 >= n) continue;
            const double d = std::fabs(f.values[i + stride] - f.values[i]) / h;
            if (d > m) m = d;
        }
    }
    return m;
}

SecondDiffBounds estimate_second_difference_bounds(const ScalarField& f) {
    const Grid& g = f.grid;
    for (int a = 0; a < g.dim(); ++a)
        if (g.axis(a).n < 3)
            throw std::invalid_argument("second differences need n >= 3 per axis");
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.dim(); ++a) {
        const double h2 = g.axis(a).spacing() * g.axis(a).spacing();
        const std::size_t stride = g.stride(a);
        const int n = g.axis(a).n;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int ia = static_cast<int>((i / stride) % n);
            if (ia < 1 || ia + 1 >= n) continue;
            const double d =
                (f.values[i + stride] - 2.0 * f.values[i] + f.values[i - stride]) / h2;
            if (d > mx) mx = d;
            if (d < mn) mn = d;
        }
    }
    return {mx, mn};
}

double estimate_lipschitz_interior(const ScalarField& f, double margin) {
    const Grid& g = f.grid;
    double m = 0.0;
    for_interior(g, margin, [&](std::size_t flat, const std::vector<int>& idx) {
        for (int a = 0; a < g.dim(); ++a) {
            if (idx[a] + 1 >= g.axis(a).n) continue;
            const double d =
                std::fabs(f.values[flat + g.stride(a)] - f.values[flat]) /
                g.axis(a).spacing();
            if (d > m) m = d;
        }
    });
    return m;
}

SecondDiffBounds estimate_second_difference_bounds_interior(const ScalarField& f,
                                                            double margin,
                                                            int step) {
    if (step < 1) throw std::invalid_argument("second differences need step >= 1");
    const Grid& g = f.grid;
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for_interior(g, margin, [&](std::size_t flat, const std::vector<int>& idx) {
        for (int a = 0; a < g.dim(); ++a) {
            if (idx[a] < step || idx[a] + step >= g.axis(a).n) continue;
            const double h = step * g.axis(a).spacing();
            const std::size_t s = step * g.stride(a);
            const double d =
                (f.values[flat + s] - 2.0 * f.values[flat] + f.values[flat - s]) /
                (h * h);
            if (d > mx) mx = d;
            if (d < mn) mn = d;
        }
    });
    return {mx, mn};
}

double max_diff_interior(const ScalarField& a, const ScalarField& b, double margin) {
    require_same_grid(a, b);
    double m = -std::numeric_limits<double>::infinity();
    for_interior(a.grid, margin, [&](std::size_t flat, const std::vector<int>&) {
        const double d = a.values[flat] - b.values[flat];
        if (d > m) m = d;
    });
    return m;
}

double min_diff_interior(const ScalarField& a, const ScalarField& b, double margin) {
    require_same_grid(a, b);
    double m = std::numeric_limits<double>::infinity();
    for_interior(a.grid, margin, [&](std::size_t flat, const std::vector<int>&) {
        const double d = a.values[flat] - b.values[flat];
        if (d < m) m = d;
    });
    return m;
}

}  // namespace vvlab
