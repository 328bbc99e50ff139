#pragma once

#include "vvlab/cole_hopf.hpp"

#include <cstdint>
#include <vector>

namespace vvlab {

enum class DriftKind { zero, optimal_feedback, half_sum };

struct McConfig {
    std::vector<double> x;
    double t = 0.0;
    double eps = 0.1;
    int paths = 1000;          // N
    int steps = 100;           // M
    std::uint64_t seed = 1;
    DriftKind drift = DriftKind::optimal_feedback;
    double delta = 0.0;        // half-sum regularization; 0 selects delta = eps
    double horizon = -1.0;     // simulate over [t, t + horizon]; < 0 means T - t
};

struct McResult {
    double value;              // mean of int (|alpha|^2/2 + f) ds + g(X_end)
    double std_error;
    std::vector<double> terminal;  // N x d, row-major terminal sample cloud
    int dim;
    double max_drift;          // diagnostics: largest |alpha| seen
};

/// Euler-Maruyama along the controlled dynamics with the configured drift.
/// Paths are drawn in fixed-size batches with per-batch derived streams, so
/// the result is bitwise reproducible for a given config.
McResult simulate_feedback_sde(const McConfig& config, const ProblemSpec& problem);

/// Kozachenko-Leonenko nearest-neighbor estimate of int log mu dmu
/// (the negated differential entropy) from an N x d sample cloud.
double knn_entropy(std::span<const double> samples, int dim, int k_nn);

double digamma(double x);

struct EntropyReport {
    double entropy_estimate;
    double bound;              // -(d/2) log(2 pi eps tau) + tau L^2 / (2 eps)
    double estimator_tol;
    bool pass;
};

/// Simulates to time t + tau and checks the density estimate against the
/// regularizing-flow entropy bound.
EntropyReport entropy_bound_check(const ProblemSpec& problem, McConfig config,
                                  double tau);

}  // namespace vvlab
