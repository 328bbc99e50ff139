#include "vvlab/envelope.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vvlab {

namespace {

// One lower-envelope pass along a line with uniform spacing h:
//   out[i] = min_j in[j] + a (i - j)^2,  a = h^2 / (2 tau).
// Felzenszwalb-Huttenlocher parabola envelope, ties toward smaller j.
void envelope_line(const double* in, double* out, int n, double a) {
    static thread_local std::vector<int> v;
    static thread_local std::vector<double> z;
    v.resize(n);
    z.resize(n + 1);

    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        int p = v[k];
        double s = ((in[q] + a * q * q) - (in[p] + a * p * p)) / (2.0 * a * (q - p));
        while (s <= z[k]) {
            --k;
            p = v[k];
            s = ((in[q] + a * q * q) - (in[p] + a * p * p)) / (2.0 * a * (q - p));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        out[q] = in[p] + a * (q - p) * (q - p);
    }
}

void transform_axis(ScalarField& f, int axis, double tau) {
    const Grid& g = f.grid;
    const int n = g.axis(axis).n;
    const double h = g.axis(axis).spacing();
    const double a = h * h / (2.0 * tau);
    const std::size_t stride = g.stride(axis);
    const std::size_t size = g.size();
    const std::size_t block = stride * n;

    std::vector<double> line(n), out(n);
    for (std::size_t base = 0; base < size; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            double* p = f.values.data() + base + off;
            for (int i = 0; i < n; ++i) line[i] = p[i * stride];
            envelope_line(line.data(), out.data(), n, a);
            for (int i = 0; i < n; ++i) p[i * stride] = out[i];
        }
    }
}

}  // namespace

ScalarField quadratic_inf_convolution(const ScalarField& field, double tau) {
    if (!(tau > 0.0))
        throw std::invalid_argument("quadratic_inf_convolution: tau must be > 0");
    field.check_finite();
    ScalarField out = field;
    for (int a = 0; a < out.grid.dim(); ++a) transform_axis(out, a, tau);
    return out;
}

ScalarField sup_convolution(const ScalarField& field, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("sup_convolution: delta must be > 0");
    ScalarField neg = field;
    for (double& v : neg.values) v = -v;
    ScalarField env = quadratic_inf_convolution(neg, delta);
    for (double& v : env.values) v = -v;
    return env;
}

}  // namespace vvlab
