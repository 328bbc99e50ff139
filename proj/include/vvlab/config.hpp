#pragma once

#include "vvlab/functions.hpp"
#include "vvlab/mc.hpp"
#include "vvlab/rate.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vvlab {

/// Parse failure carrying the offending line and key.
struct ConfigError : std::runtime_error {
    int line;
    std::string key;
    ConfigError(int line_, std::string key_, const std::string& what_);
};

/// Validated experiment configuration, from the line-oriented
/// `[section]` / `key = value` format (scalars, quoted strings, bracketed
/// numeric lists, `#` comments).
struct RunConfig {
    // [problem]
    std::string g_tag = "neg_proj_norm";
    int k = 1;
    double g_constant = 0.0;
    double g_omega = 1.0;
    std::vector<double> g_linear;
    std::string f_tag = "zero";
    double f_constant = 0.0;
    std::vector<double> f_linear;
    double T = 1.0;
    int d = 1;

    // [grid]
    std::vector<double> grid_lo;
    std::vector<double> grid_hi;
    std::vector<int> grid_n;

    // [sweep]
    std::vector<double> eps;
    std::vector<double> x;
    double t = 0.0;
    std::string backend = "radial";

    // [mc]
    int mc_paths = 10000;
    int mc_steps = 200;
    std::uint64_t mc_seed = 1;
    std::string mc_drift = "optimal_feedback";
    double mc_delta = 0.0;

    // [output]
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};

    ProblemSpec make_problem() const;
    Grid make_grid() const;
    McConfig make_mc() const;
    SweepBackend make_backend() const;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path);

}  // namespace vvlab
