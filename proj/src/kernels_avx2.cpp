#include "vvlab/kernels.hpp"

#include <cmath>
#include <limits>

#if defined(VVLAB_BUILD_AVX2) && defined(__AVX2__)

#include <immintrin.h>

namespace vvlab::kernels {

namespace {

// Vector exp for doubles: range reduction by log 2 plus a Cephes-style
// rational approximation on [-ln2/2, ln2/2]. Inputs below -708 flush to 0,
// inputs are assumed <= ~0 shifted (no overflow path needed for our use,
// but we clamp the top as well).
inline __m256d exp_pd(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d hi = _mm256_set1_pd(709.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_GT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);

    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    __m256d r = _mm256_fnmadd_pd(n, c1, x);
    r = _mm256_fnmadd_pd(n, c2, r);
    const __m256d r2 = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    // scale by 2^n
    __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i nl = _mm256_cvtepi32_epi64(ni);
    nl = _mm256_slli_epi64(_mm256_add_epi64(nl, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(nl));

    return _mm256_and_pd(e, underflow);
}

inline double hmax(__m256d v) {
    __m128d a = _mm256_castpd256_pd128(v);
    __m128d b = _mm256_extractf128_pd(v, 1);
    a = _mm_max_pd(a, b);
    a = _mm_max_sd(a, _mm_unpackhi_pd(a, a));
    return _mm_cvtsd_f64(a);
}

inline double hsum(__m256d v) {
    __m128d a = _mm256_castpd256_pd128(v);
    __m128d b = _mm256_extractf128_pd(v, 1);
    a = _mm_add_pd(a, b);
    a = _mm_add_sd(a, _mm_unpackhi_pd(a, a));
    return _mm_cvtsd_f64(a);
}

double v_max_value(const double* v, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    __m256d m = _mm256_set1_pd(ninf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(v + i));
    double r = n >= 4 ? hmax(m) : ninf;
    for (; i < n; ++i)
        if (v[i] > r) r = v[i];
    return r;
}

double v_max_abs_diff(const double* a, const double* b, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    double r = n >= 4 ? hmax(m) : 0.0;
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > r) r = d;
    }
    return r;
}

double v_sum_exp(const double* v, std::size_t n, double shift) {
    const __m256d sh = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), sh)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::exp(v[i] - shift);
    return s;
}

SumExpResult v_sum_exp_weighted(const double* v, const double* y,
                                std::size_t n, double shift) {
    if (!y) return {v_sum_exp(v, n, shift), 0.0};
    const __m256d sh = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    __m256d wacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d e = exp_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), sh));
        acc = _mm256_add_pd(acc, e);
        wacc = _mm256_fmadd_pd(_mm256_loadu_pd(y + i), e, wacc);
    }
    double s = hsum(acc), w = hsum(wacc);
    for (; i < n; ++i) {
        const double e = std::exp(v[i] - shift);
        s += e;
        w += y[i] * e;
    }
    return {s, w};
}

}  // namespace

const Ops avx2_ops = {"avx2", v_max_value, v_max_abs_diff, v_sum_exp,
                      v_sum_exp_weighted};

}  // namespace vvlab::kernels

#else

namespace vvlab::kernels {
const Ops avx2_ops = {"scalar", scalar_ops.max_value, scalar_ops.max_abs_diff,
                      scalar_ops.sum_exp, scalar_ops.sum_exp_weighted};
}  // namespace vvlab::kernels

#endif
