#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace vvlab::kernels {

// Hot inner loops used by the quadrature and field code. Each kernel has a
// scalar reference implementation and an AVX2 variant; the active set is
// picked once at startup from CPUID and can be forced with the environment
// variable VVLAB_KERNELS=scalar|avx2 before first use.

struct SumExpResult {
    double sum;       // sum_i exp(v[i] - shift)
    double weighted;  // sum_i y[i] * exp(v[i] - shift), 0 when y is null
};

struct Ops {
    const char* name;
    double (*max_value)(const double* v, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*sum_exp)(const double* v, std::size_t n, double shift);
    SumExpResult (*sum_exp_weighted)(const double* v, const double* y,
                                     std::size_t n, double shift);
};

extern const Ops scalar_ops;
extern const Ops avx2_ops;  // falls back to scalar_ops when not compiled in

const Ops& active();
bool avx2_available();

inline double max_value(std::span<const double> v) {
    return active().max_value(v.data(), v.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return active().max_abs_diff(a.data(), b.data(), a.size());
}
inline double sum_exp(std::span<const double> v, double shift) {
    return active().sum_exp(v.data(), v.size(), shift);
}
inline SumExpResult sum_exp_weighted(std::span<const double> v,
                                     std::span<const double> y, double shift) {
    return active().sum_exp_weighted(v.data(), y.data(), v.size(), shift);
}

// log(sum_i exp(v[i])) with the running-max shift; -inf for empty input.
double log_sum_exp(std::span<const double> v);

}  // namespace vvlab::kernels
