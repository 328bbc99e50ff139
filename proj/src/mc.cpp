#include "vvlab/mc.hpp"

#include "vvlab/envelope.hpp"
#include "vvlab/hopf_lax.hpp"
#include "vvlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace vvlab {

namespace {

constexpr int kBatch = 256;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-mode splitmix stream; bitwise reproducible across platforms.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() {  // (0, 1]
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    double normal() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

    void reset_pair() { have_ = false; }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_ = false;
};

// Per-time-step sup-convolved inviscid fields for the half-sum drift; the
// gradient is read by centered differences and multilinear interpolation.
class RegularizedInviscidDrift {
public:
    RegularizedInviscidDrift(const ProblemSpec& problem, const McConfig& cfg,
                             double horizon)
        : problem_(problem), delta_(cfg.delta > 0.0 ? cfg.delta : cfg.eps) {
        const double L = problem.L();
        const double query = travel_radius(problem, cfg, horizon);
        const double pad = L * problem.T + L * delta_ + 1.0;
        std::vector<Axis> axes;
        const double h = 0.005;
        for (int a = 0; a < problem.d; ++a) {
            const double c = cfg.x[a];
            const double lo = c - query - pad, hi = c + query + pad;
            axes.push_back({lo, hi, static_cast<int>(std::ceil((hi - lo) / h)) + 1});
        }
        grid_ = std::make_unique<Grid>(std::move(axes));
    }

    static double travel_radius(const ProblemSpec& problem, const McConfig& cfg,
                                double horizon) {
        return problem.L() * horizon + 8.0 * std::sqrt(cfg.eps * horizon) + 0.5;
    }

    // gradient of phi^{0,delta}_s at x
    void gradient(double s, std::span<const double> x, std::span<double> out) {
        const ScalarField& f = field_at(s);
        const Grid& g = *grid_;
        for (int a = 0; a < g.dim(); ++a) {
            const double h = g.axis(a).spacing();
            std::vector<double> xp(x.begin(), x.end()), xm(xp);
            xp[a] += h;
            xm[a] -= h;
            out[a] = (interp(f, xp) - interp(f, xm)) / (2.0 * h);
        }
    }

private:
    const ScalarField& field_at(double s) {
        // quantize s to avoid rebuilding for float jitter
        const long long key = std::llround(s * 1e9);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;
        ScalarField phi0 = hopf_lax_solve(problem_, std::min(s, problem_.T), *grid_).field;
        auto f = std::make_unique<ScalarField>(sup_convolution(phi0, delta_));
        const ScalarField& ref = *f;
        cache_.emplace(key, std::move(f));
        return ref;
    }

    static double interp(const ScalarField& f, std::span<const double> x) {
        const Grid& g = f.grid;
        const int d = g.dim();
        double v = 0.0;
        std::vector<int> i0(d);
        std::vector<double> w(d);
        for (int a = 0; a < d; ++a) {
            const Axis& ax = g.axis(a);
            const double s = (x[a] - ax.lo) / ax.spacing();
            if (s < 0.0 || s > ax.n - 1)
                throw std::runtime_error("mc: path left the drift grid");
            int i = std::min(static_cast<int>(s), ax.n - 2);
            i0[a] = i;
            w[a] = s - i;
        }
        for (int corner = 0; corner < (1 << d); ++corner) {
            double wt = 1.0;
            std::size_t flat = 0;
            for (int a = 0; a < d; ++a) {
                const int hi = (corner >> a) & 1;
                wt *= hi ? w[a] : 1.0 - w[a];
                flat += (i0[a] + hi) * g.stride(a);
            }
            v += wt * f.values[flat];
        }
        return v;
    }

    const ProblemSpec& problem_;
    double delta_;
    std::unique_ptr<Grid> grid_;
    std::unordered_map<long long, std::unique_ptr<ScalarField>> cache_;
};

}  // namespace

McResult simulate_feedback_sde(const McConfig& config, const ProblemSpec& problem) {
    const int N = config.paths, M = config.steps, d = problem.d;
    if (N < 1 || M < 1) throw std::invalid_argument("mc: need N >= 1 and M >= 1");
    if (!(config.eps > 0.0)) throw std::invalid_argument("mc: eps must be > 0");
    if (static_cast<int>(config.x.size()) != d)
        throw std::invalid_argument("mc: start point dimension mismatch");
    if (config.t < 0.0 || config.t >= problem.T)
        throw std::invalid_argument("mc: t outside [0, T)");
    const double horizon = config.horizon >= 0.0 ? config.horizon
                                                 : problem.T - config.t;
    if (horizon <= 0.0 || horizon > problem.T - config.t + 1e-12)
        throw std::invalid_argument("mc: horizon outside (0, T - t]");
    if (config.drift == DriftKind::optimal_feedback && !problem.f.is_zero())
        throw std::invalid_argument("mc: optimal_feedback drift requires f == 0");

    const double ds = horizon / M;
    const double noise = std::sqrt(config.eps * ds);
    QuadratureSpec fast_quad;
    fast_quad.max_refine = 0;

    std::unique_ptr<RegularizedInviscidDrift> reg;
    if (config.drift == DriftKind::half_sum)
        reg = std::make_unique<RegularizedInviscidDrift>(problem, config, horizon);

    std::vector<double> terminal(static_cast<std::size_t>(N) * d);
    double sum = 0.0, sum_sq = 0.0, max_drift = 0.0;

    std::vector<double> X(d), alpha(d), reg_grad(d);
    for (int batch_lo = 0; batch_lo < N; batch_lo += kBatch) {
        const int batch_hi = std::min(N, batch_lo + kBatch);
        Stream rng(splitmix64(config.seed ^
                              (0xA5A5A5A5ull + static_cast<std::uint64_t>(batch_lo))));
        for (int p = batch_lo; p < batch_hi; ++p) {
            rng.reset_pair();
            X.assign(config.x.begin(), config.x.end());
            double cost = 0.0;
            for (int m = 0; m < M; ++m) {
                const double s = config.t + m * ds;
                switch (config.drift) {
                    case DriftKind::zero:
                        std::fill(alpha.begin(), alpha.end(), 0.0);
                        break;
                    case DriftKind::optimal_feedback: {
                        const auto grad =
                            viscous_gradient_point(problem, X, s, config.eps, fast_quad);
                        for (int a = 0; a < d; ++a) alpha[a] = -grad[a];
                        break;
                    }
                    case DriftKind::half_sum: {
                        const auto grad =
                            viscous_gradient_point(problem, X, s, config.eps, fast_quad);
                        reg->gradient(s, X, reg_grad);
                        for (int a = 0; a < d; ++a)
                            alpha[a] = -0.5 * (grad[a] + reg_grad[a]);
                        break;
                    }
                }
                double a2 = 0.0;
                for (int a = 0; a < d; ++a) a2 += alpha[a] * alpha[a];
                max_drift = std::max(max_drift, std::sqrt(a2));
                cost += (0.5 * a2 + problem.f(X)) * ds;
                for (int a = 0; a < d; ++a)
                    X[a] += alpha[a] * ds + noise * rng.normal();
                for (double v : X)
                    if (!std::isfinite(v))
                        throw std::runtime_error("mc: non-finite state");
            }
            if (config.horizon < 0.0)  // full horizon: terminal cost applies
                cost += problem.g(X);
            sum += cost;
            sum_sq += cost * cost;
            for (int a = 0; a < d; ++a)
                terminal[static_cast<std::size_t>(p) * d + a] = X[a];
        }
    }

    const double mean = sum / N;
    double stderr_v = 0.0;
    if (N > 1) {
        const double var = std::max(0.0, (sum_sq - N * mean * mean) / (N - 1));
        stderr_v = std::sqrt(var / N);
    }
    return {mean, stderr_v, std::move(terminal), d, max_drift};
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("digamma: x must be > 0");
    double r = 0.0;
    while (x < 10.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    r += std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 -
                 inv2 * (1.0 / 120.0 -
                         inv2 * (1.0 / 252.0 -
                                 inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return r;
}

double knn_entropy(std::span<const double> samples, int dim, int k_nn) {
    if (dim < 1) throw std::invalid_argument("knn_entropy: dim must be >= 1");
    const std::size_t n = samples.size() / dim;
    if (n * static_cast<std::size_t>(dim) != samples.size())
        throw std::invalid_argument("knn_entropy: sample size not a multiple of dim");
    if (n < 100) throw std::invalid_argument("knn_entropy: need at least 100 samples");
    if (k_nn < 1 || static_cast<std::size_t>(k_nn) >= n)
        throw std::invalid_argument("knn_entropy: bad neighbor index");
    if (dim > 1 && n > 30000)
        throw std::invalid_argument("knn_entropy: brute-force path capped at 3e4 samples for d > 1");

    std::vector<double> log_r(n);
    auto jitter = [](std::size_t i) { return 1e-12 * (1.0 + static_cast<double>(i % 97)); };

    if (dim == 1) {
        std::vector<double> s(samples.begin(), samples.end());
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < n; ++i) {
            // k-th nearest among sorted neighbors via two-sided window walk
            std::size_t lo = i, hi = i;
            double r = 0.0;
            for (int c = 0; c < k_nn; ++c) {
                const double dl = lo > 0 ? s[i] - s[lo - 1] : std::numeric_limits<double>::infinity();
                const double dr = hi + 1 < n ? s[hi + 1] - s[i] : std::numeric_limits<double>::infinity();
                if (dl <= dr) {
                    r = dl;
                    --lo;
                } else {
                    r = dr;
                    ++hi;
                }
            }
            if (r <= 0.0) r = jitter(i);
            log_r[i] = std::log(r);
        }
    } else {
        std::vector<double> dist;
        dist.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            dist.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double d2 = 0.0;
                for (int a = 0; a < dim; ++a) {
                    const double dd = samples[i * dim + a] - samples[j * dim + a];
                    d2 += dd * dd;
                }
                dist.push_back(d2);
            }
            std::nth_element(dist.begin(), dist.begin() + (k_nn - 1), dist.end());
            double r = std::sqrt(dist[k_nn - 1]);
            if (r <= 0.0) r = jitter(i);
            log_r[i] = std::log(r);
        }
    }

    const double log_vd =
        0.5 * dim * std::log(std::numbers::pi) - std::log(gamma_fn(dim / 2.0 + 1.0));
    double mean_log_r = 0.0;
    for (double v : log_r) mean_log_r += v;
    mean_log_r /= static_cast<double>(n);

    const double h = digamma(static_cast<double>(n)) - digamma(static_cast<double>(k_nn)) +
                     log_vd + dim * mean_log_r;
    return -h;
}

EntropyReport entropy_bound_check(const ProblemSpec& problem, McConfig config,
                                  double tau) {
    if (!(tau > 0.0) || tau > problem.T - config.t + 1e-12)
        throw std::invalid_argument("entropy_bound_check: tau outside (0, T - t]");
    config.horizon = tau;
    const McResult res = simulate_feedback_sde(config, problem);
    const double est = knn_entropy(res.terminal, problem.d, 4);
    const double L = problem.L();
    const double bound = -0.5 * problem.d *
                             std::log(2.0 * std::numbers::pi * config.eps * tau) +
                         tau * L * L / (2.0 * config.eps);
    const double tol = 0.1;
    return {est, bound, tol, est <= bound + 3.0 * tol};
}

}  // namespace vvlab
