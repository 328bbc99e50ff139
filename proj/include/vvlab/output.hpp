#pragma once

#include "vvlab/config.hpp"
#include "vvlab/mc.hpp"
#include "vvlab/rate.hpp"
#include "vvlab/supconv.hpp"

#include <optional>
#include <string>

namespace vvlab {

std::string table_to_csv(const RateTable& table);
RateTable table_from_csv(const std::string& text);

/// Single JSON object; absent basis members are absent keys.
std::string fit_to_json(const RateFit& fit);

/// Single JSON object with a "bounds" clause map, an optional "supconv"
/// clause map, and "all_pass".
std::string checks_to_json(const BoundsReport& bounds,
                           const std::optional<SupConvReport>& supconv);

/// Terminal sample cloud, header x_1,...,x_d.
std::string cloud_to_csv(const McResult& result);

/// Standalone SVG: log-eps horizontal axis, gap/eps vertical, markers for the
/// rows plus a fitted-curve polyline when the basis is nonempty. Byte output
/// is deterministic for identical inputs.
std::string render_svg_plot(const RateTable& table, const RateFit& fit);
void emit_svg_plot(const RateTable& table, const RateFit& fit,
                   const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

/// Sweep + fit + bound checks, artifacts written to config.out_dir
/// (rates.csv, fit.json, checks.json, optional rates.svg).
/// Returns 0 when every enabled check passes, 1 otherwise; solver failures
/// propagate as exceptions.
int run_experiment(const RunConfig& config, int threads, bool plot);

}  // namespace vvlab
