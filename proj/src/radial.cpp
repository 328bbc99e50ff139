#include "vvlab/radial.hpp"

#include "vvlab/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vvlab {

RadialCase::RadialCase(int k_, int d_, double tau_, double eps_)
    : k(k_), d(d_), tau(tau_), eps(eps_) {
    if (k < 1 || k > d) throw std::invalid_argument("RadialCase: need 1 <= k <= d");
    if (!(tau > 0.0)) throw std::invalid_argument("RadialCase: tau must be > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("RadialCase: eps must be > 0");
}

double gamma_fn(double x) {
    // Lanczos, g = 7, 9 terms.
    static const double coef[] = {
        0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (x < 0.5)
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    x -= 1.0;
    double a = coef[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double RadialCase::unit_ball_surface_factor() const {
    return k * std::pow(std::numbers::pi, k / 2.0) / gamma_fn(k / 2.0 + 1.0);
}

namespace {

// log of the Simpson approximation of int_lo^hi exp(l(r)) dr with n panels.
template <typename L>
double log_simpson(L&& l, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    std::vector<double> terms(n + 1);
    const double log2 = std::log(2.0), log4 = std::log(4.0);
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 0.0 : (i % 2 ? log4 : log2);
        terms[i] = l(lo + i * h) + w;
    }
    return std::log(h / 3.0) + kernels::log_sum_exp(terms);
}

template <typename L>
double log_integral_adaptive(L&& l, double lo, double hi, double tol) {
    int n = 64;
    double prev = log_simpson(l, lo, hi, n);
    for (int level = 0; level < 16; ++level) {
        n *= 2;
        const double cur = log_simpson(l, lo, hi, n);
        if (std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("radial quadrature: no convergence at refinement cap");
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double radial_gap(const RadialCase& c) {
    const double tau = c.tau, eps = c.eps;
    const int k = c.k;
    const double sigma = std::sqrt(eps * tau);
    const double a = std::max(0.0, tau - 12.0 * sigma);
    const double b = tau + 12.0 * sigma;
    const double tol = 1e-12;

    auto l = [&](double r) {
        const double q = -(r - tau) * (r - tau) / (2.0 * eps * tau);
        if (k == 1) return q;
        if (r <= 0.0) return -std::numeric_limits<double>::infinity();
        return q + (k - 1) * std::log(r);
    };

    double log_I = log_integral_adaptive(l, a, b, tol);
    if (a > 0.0) {
        // left remnant [0, a): only when it can contribute relative mass
        const double peak = (k - 1) * std::log(std::max(tau, 1e-300));
        const double bound = l(a) + std::log(std::max(a, 1.0));
        if (bound > peak - 80.0)
            log_I = log_add(log_I, log_integral_adaptive(l, 0.0, a, tol));
    }

    const double log_Ck = std::log(c.unit_ball_surface_factor());
    const double G = 0.5 * k * std::log(2.0 * std::numbers::pi * eps * tau) -
                     log_Ck - log_I;
    return eps * G;
}

double radial_viscous_value(const RadialCase& c) {
    return -0.5 * c.tau + radial_gap(c);
}

double expansion_gap(const RadialCase& c) {
    const int k = c.k;
    const double eps = c.eps, tau = c.tau;
    const double half = 0.5 * (k - 1);
    const double log_const = std::log(k * std::sqrt(std::numbers::pi) /
                                      (std::pow(2.0, half) * gamma_fn(k / 2.0 + 1.0)));
    return half * eps * std::log(eps) - half * eps * std::log(tau) - eps * log_const;
}

double expansion_value(const RadialCase& c) {
    return -0.5 * c.tau + expansion_gap(c);
}

double limit_value(int k, const double* x, int d, double tau) {
    if (k < 1 || k > d) throw std::invalid_argument("limit_value: need 1 <= k <= d");
    if (!(tau >= 0.0)) throw std::invalid_argument("limit_value: tau must be >= 0");
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += x[i] * x[i];
    return -std::sqrt(s) - 0.5 * tau;
}

}  // namespace vvlab
