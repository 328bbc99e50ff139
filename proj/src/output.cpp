#include "vvlab/output.hpp"

#include "vvlab/hopf_lax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vvlab {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_svg(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\', out += c;
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out;
}

void append_clause(std::string& out, const BoundClause& c, bool last) {
    out += "    \"" + json_escape(c.name) + "\": {";
    out += "\"enabled\": " + std::string(c.enabled ? "true" : "false");
    out += ", \"pass\": " + std::string(c.pass ? "true" : "false");
    out += ", \"slack\": " + fmt17(c.slack);
    out += ", \"constant\": " + fmt17(c.constant);
    out += ", \"detail\": \"" + json_escape(c.detail) + "\"}";
    if (!last) out += ',';
    out += '\n';
}

}  // namespace

std::string table_to_csv(const RateTable& table) {
    std::string out = "epsilon,phi_eps,phi_zero,gap\n";
    for (const RateRow& r : table.rows) {
        out += fmt17(r.eps) + "," + fmt17(r.phi_eps) + "," + fmt17(r.phi_zero) +
               "," + fmt17(r.gap) + "\n";
    }
    return out;
}

RateTable table_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "epsilon,phi_eps,phi_zero,gap")
        throw std::runtime_error("csv: unexpected header '" + line + "'");
    RateTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        RateRow row;
        double* fields[4] = {&row.eps, &row.phi_eps, &row.phi_zero, &row.gap};
        std::stringstream ss(line);
        std::string cell;
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("csv: line " + std::to_string(lineno) +
                                         ": expected 4 fields");
            *fields[i] = std::stod(cell);
        }
        table.rows.push_back(row);
    }
    table.validate();
    return table;
}

std::string fit_to_json(const RateFit& fit) {
    std::string out = "{\n";
    if (fit.basis.eps_log_eps)
        out += "  \"coef_eps_log_eps\": " + fmt17(fit.coef_eps_log_eps) + ",\n";
    if (fit.basis.eps)
        out += "  \"coef_eps\": " + fmt17(fit.coef_eps) + ",\n";
    if (fit.basis.sqrt_eps)
        out += "  \"coef_sqrt_eps\": " + fmt17(fit.coef_sqrt_eps) + ",\n";
    out += "  \"residual_linf\": " + fmt17(fit.residual_linf) + "\n";
    out += "}\n";
    return out;
}

std::string checks_to_json(const BoundsReport& bounds,
                           const std::optional<SupConvReport>& supconv) {
    bool all = bounds.all_pass();
    std::string out = "{\n  \"bounds\": {\n";
    for (std::size_t i = 0; i < bounds.clauses.size(); ++i)
        append_clause(out, bounds.clauses[i], i + 1 == bounds.clauses.size());
    out += "  }";
    if (supconv) {
        const SupConvReport& r = *supconv;
        all = all && r.all_ok();
        std::vector<BoundClause> cl;
        cl.push_back({"lipschitz", true, r.lipschitz_ok,
                      r.tol_lipschitz, r.measured_lipschitz, ""});
        cl.push_back({"semiconcave", true, r.semiconcave_ok,
                      r.tol_second_diff, r.max_second_diff, ""});
        cl.push_back({"semiconvex", true, r.semiconvex_ok,
                      r.tol_second_diff, r.min_second_diff, ""});
        cl.push_back({"sandwich", true, r.sandwich_ok, r.tol_sandwich,
                      r.sandwich_max, "min " + fmt17(r.sandwich_min)});
        out += ",\n  \"supconv\": {\n";
        out += "    \"delta\": {\"enabled\": true, \"pass\": true, \"slack\": 0, "
               "\"constant\": " + fmt17(r.delta) + ", \"detail\": \"\"},\n";
        for (std::size_t i = 0; i < cl.size(); ++i)
            append_clause(out, cl[i], i + 1 == cl.size());
        out += "  }";
    }
    out += ",\n  \"all_pass\": " + std::string(all ? "true" : "false") + "\n}\n";
    return out;
}

std::string cloud_to_csv(const McResult& result) {
    std::string out;
    for (int a = 0; a < result.dim; ++a)
        out += (a ? ",x_" : "x_") + std::to_string(a + 1);
    out += '\n';
    const std::size_t n = result.terminal.size() / result.dim;
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < result.dim; ++a)
            out += (a ? "," : "") + fmt17(result.terminal[i * result.dim + a]);
        out += '\n';
    }
    return out;
}

std::string render_svg_plot(const RateTable& table, const RateFit& fit) {
    if (table.rows.empty()) throw std::invalid_argument("svg: empty table");
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;

    std::vector<double> xs, ys;
    for (const RateRow& r : table.rows) {
        xs.push_back(std::log(r.eps));
        ys.push_back(r.gap / r.eps);
    }
    double xlo = *std::min_element(xs.begin(), xs.end());
    double xhi = *std::max_element(xs.begin(), xs.end());
    double ylo = *std::min_element(ys.begin(), ys.end());
    double yhi = *std::max_element(ys.begin(), ys.end());
    if (xhi - xlo < 1e-12) xlo -= 0.5, xhi += 0.5;
    if (yhi - ylo < 1e-12) ylo -= 0.5, yhi += 0.5;
    const double xpad = 0.05 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
    xlo -= xpad, xhi += xpad, ylo -= ypad, yhi += ypad;

    auto px = [&](double lx) { return ml + (lx - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<line x1=\"" + fmt_svg(ml) + "\" y1=\"" + fmt_svg(H - mb) + "\" x2=\"" +
         fmt_svg(W - mr) + "\" y2=\"" + fmt_svg(H - mb) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt_svg(ml) + "\" y1=\"" + fmt_svg(mt) + "\" x2=\"" +
         fmt_svg(ml) + "\" y2=\"" + fmt_svg(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_svg((ml + W - mr) / 2) + "\" y=\"" + fmt_svg(H - 15) +
         "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">"
         "log epsilon</text>\n";
    s += "<text x=\"18\" y=\"" + fmt_svg((mt + H - mb) / 2) +
         "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + fmt_svg((mt + H - mb) / 2) + ")\">"
         "gap / epsilon</text>\n";

    if (fit.basis.size() > 0) {
        s += "<polyline fill=\"none\" stroke=\"#c03020\" stroke-width=\"1.5\" points=\"";
        const int segs = 128;
        for (int i = 0; i <= segs; ++i) {
            const double lx = xlo + (xhi - xlo) * i / segs;
            const double e = std::exp(lx);
            double gap = 0.0;
            if (fit.basis.eps_log_eps) gap += fit.coef_eps_log_eps * e * lx;
            if (fit.basis.eps) gap += fit.coef_eps * e;
            if (fit.basis.sqrt_eps) gap += fit.coef_sqrt_eps * std::sqrt(e);
            const double y = std::clamp(gap / e, ylo, yhi);
            s += fmt_svg(px(lx)) + "," + fmt_svg(py(y)) + " ";
        }
        s += "\"/>\n";
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += "<circle cx=\"" + fmt_svg(px(xs[i])) + "\" cy=\"" + fmt_svg(py(ys[i])) +
             "\" r=\"3.5\" fill=\"#2050a0\"/>\n";
    s += "</svg>\n";
    return s;
}

void emit_svg_plot(const RateTable& table, const RateFit& fit,
                   const std::string& path) {
    write_text_file(path, render_svg_plot(table, fit));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

int run_experiment(const RunConfig& config, int threads, bool plot) {
    const ProblemSpec problem = config.make_problem();
    // An explicit [grid] section pins the grid backend to that resolution;
    // otherwise the sweep picks its own internal discretization per row.
    std::optional<Grid> pinned;
    if (!config.grid_lo.empty() && config.make_backend() == SweepBackend::grid)
        pinned = config.make_grid();
    const RateTable table =
        sweep_epsilon(problem, config.x, config.t, config.eps,
                      config.make_backend(), threads, pinned ? &*pinned : nullptr);
    RateBasis basis;
    basis.eps_log_eps = true;
    basis.eps = true;
    const RateFit fit = fit_rate_model(table, basis);
    const BoundsReport bounds = check_paper_bounds(table, problem, config.t);

    std::optional<SupConvReport> supconv;
    if (problem.f.is_zero() && config.d <= 2) {
        const double delta = config.mc_delta > 0.0 ? config.mc_delta : 0.1;
        supconv = supconv_report(problem, config.t, config.make_grid(), delta);
    }

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    write_text_file((dir / "rates.csv").string(), table_to_csv(table));
    write_text_file((dir / "fit.json").string(), fit_to_json(fit));
    write_text_file((dir / "checks.json").string(), checks_to_json(bounds, supconv));
    const bool want_svg = plot || std::find(config.formats.begin(), config.formats.end(),
                                            "svg") != config.formats.end();
    if (want_svg) emit_svg_plot(table, fit, (dir / "rates.svg").string());

    bool ok = bounds.all_pass();
    if (supconv) ok = ok && supconv->all_ok();
    return ok ? 0 : 1;
}

}  // namespace vvlab
