#include "vvlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace vvlab::kernels {

namespace {

double s_max_value(const double* v, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] > m) m = v[i];
    return m;
}

double s_max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double s_sum_exp(const double* v, std::size_t n, double shift) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - shift);
    return s;
}

SumExpResult s_sum_exp_weighted(const double* v, const double* y,
                                std::size_t n, double shift) {
    double s = 0.0, w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(v[i] - shift);
        s += e;
        if (y) w += y[i] * e;
    }
    return {s, w};
}

}  // namespace

const Ops scalar_ops = {"scalar", s_max_value, s_max_abs_diff, s_sum_exp,
                        s_sum_exp_weighted};

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    const double m = max_value(v);
    if (!std::isfinite(m)) return m;
    return m + std::log(sum_exp(v, m));
}

}  // namespace vvlab::kernels
