#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vvlab/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace vvlab;

namespace {

std::vector<double> random_values(std::size_t n, double lo, double hi,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
    const auto& s = kernels::scalar_ops;
    const auto& a = kernels::avx2_ops;
    INFO("active kernel set: ", kernels::active().name);

    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 63u, 64u, 1000u, 4097u}) {
        const auto v = random_values(n, -40.0, 5.0, 100 + n);
        const auto w = random_values(n, -3.0, 3.0, 200 + n);

        CHECK(s.max_value(v.data(), n) == a.max_value(v.data(), n));
        CHECK(s.max_abs_diff(v.data(), w.data(), n) ==
              a.max_abs_diff(v.data(), w.data(), n));

        const double shift = s.max_value(v.data(), n);
        const double se = s.sum_exp(v.data(), n, shift);
        const double ae = a.sum_exp(v.data(), n, shift);
        CHECK(std::fabs(se - ae) <= 1e-13 * std::fabs(se));

        const auto sw = s.sum_exp_weighted(v.data(), w.data(), n, shift);
        const auto aw = a.sum_exp_weighted(v.data(), w.data(), n, shift);
        CHECK(std::fabs(sw.sum - aw.sum) <= 1e-13 * std::fabs(sw.sum));
        CHECK(std::fabs(sw.weighted - aw.weighted) <=
              1e-13 * (std::fabs(sw.weighted) + sw.sum));
    }
}

TEST_CASE("sum_exp matches direct summation on tame inputs") {
    const auto v = random_values(257, -5.0, 2.0, 42);
    double direct = 0.0;
    for (double x : v) direct += std::exp(x);
    CHECK(kernels::sum_exp(v, 0.0) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("log_sum_exp basics") {
    CHECK(kernels::log_sum_exp({}) == -std::numeric_limits<double>::infinity());

    std::vector<double> single{3.25};
    CHECK(kernels::log_sum_exp(single) == doctest::Approx(3.25).epsilon(1e-15));

    // n equal entries: log n + value
    std::vector<double> eq(64, -2.0);
    CHECK(kernels::log_sum_exp(eq) ==
          doctest::Approx(-2.0 + std::log(64.0)).epsilon(1e-14));
}

TEST_CASE("log_sum_exp is shift invariant and overflow safe") {
    const auto v = random_values(333, -1.0, 1.0, 7);
    const double base = kernels::log_sum_exp(v);

    for (double c : {-1000.0, -700.0, 700.0, 1000.0}) {
        std::vector<double> shifted = v;
        for (double& x : shifted) x += c;
        const double r = kernels::log_sum_exp(shifted);
        CHECK(std::isfinite(r));
        CHECK(r == doctest::Approx(base + c).epsilon(1e-12));
    }
}

TEST_CASE("log_sum_exp dominated by the max term") {
    std::vector<double> v{0.0, -800.0, -900.0};
    CHECK(kernels::log_sum_exp(v) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("avx2 availability is consistent with the active set") {
    if (!kernels::avx2_available())
        CHECK(std::string_view(kernels::active().name) == "scalar");
}
