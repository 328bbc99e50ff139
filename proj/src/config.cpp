#include "vvlab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vvlab {

ConfigError::ConfigError(int line_, std::string key_, const std::string& what_)
    : std::runtime_error("config line " + std::to_string(line_) +
                         (key_.empty() ? "" : " (key '" + key_ + "')") + ": " + what_),
      line(line_),
      key(std::move(key_)) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Value {
    std::string raw;
    int line;
    std::string key;

    double as_real() const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(line, key, "expected a number, got '" + raw + "'");
        }
    }
    long long as_int() const {
        const double v = as_real();
        if (v != std::floor(v))
            throw ConfigError(line, key, "expected an integer, got '" + raw + "'");
        return static_cast<long long>(v);
    }
    std::string as_string() const {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
            return raw.substr(1, raw.size() - 2);
        throw ConfigError(line, key, "expected a quoted string, got '" + raw + "'");
    }
    std::vector<std::string> list_items() const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw ConfigError(line, key, "expected a bracketed list, got '" + raw + "'");
        std::vector<std::string> items;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) items.push_back(item);
        }
        return items;
    }
    std::vector<double> as_real_list() const {
        std::vector<double> out;
        for (const std::string& it : list_items()) {
            Value v{it, line, key};
            out.push_back(v.as_real());
        }
        return out;
    }
    std::vector<int> as_int_list() const {
        std::vector<int> out;
        for (const std::string& it : list_items()) {
            Value v{it, line, key};
            out.push_back(static_cast<int>(v.as_int()));
        }
        return out;
    }
    std::vector<std::string> as_string_list() const {
        std::vector<std::string> out;
        for (const std::string& it : list_items()) {
            Value v{it, line, key};
            out.push_back(v.as_string());
        }
        return out;
    }
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> seen;  // "section.key" -> line

    double eps_start = 0.0, eps_factor = 0.5;
    int eps_count = 0;

    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(lineno, "", "malformed section header '" + line + "'");
            section = line.substr(1, line.size() - 2);
            if (section != "problem" && section != "grid" && section != "sweep" &&
                section != "mc" && section != "output")
                throw ConfigError(lineno, "", "unknown section '" + section + "'");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "", "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const Value val{trim(line.substr(eq + 1)), lineno, key};
        if (section.empty())
            throw ConfigError(lineno, key, "key outside any [section]");
        seen[section + "." + key] = lineno;

        if (section == "problem") {
            if (key == "g") cfg.g_tag = val.as_string();
            else if (key == "k") cfg.k = static_cast<int>(val.as_int());
            else if (key == "g_constant") cfg.g_constant = val.as_real();
            else if (key == "g_omega") cfg.g_omega = val.as_real();
            else if (key == "g_linear") cfg.g_linear = val.as_real_list();
            else if (key == "f") cfg.f_tag = val.as_string();
            else if (key == "f_constant") cfg.f_constant = val.as_real();
            else if (key == "f_linear") cfg.f_linear = val.as_real_list();
            else if (key == "T") {
                cfg.T = val.as_real();
                if (!(cfg.T > 0.0)) throw ConfigError(lineno, key, "T must be > 0");
            } else if (key == "d") {
                cfg.d = static_cast<int>(val.as_int());
                if (cfg.d < 1) throw ConfigError(lineno, key, "d must be >= 1");
            } else
                throw ConfigError(lineno, key, "unknown key in [problem]");
        } else if (section == "grid") {
            if (key == "lo") cfg.grid_lo = val.as_real_list();
            else if (key == "hi") cfg.grid_hi = val.as_real_list();
            else if (key == "n") cfg.grid_n = val.as_int_list();
            else
                throw ConfigError(lineno, key, "unknown key in [grid]");
        } else if (section == "sweep") {
            if (key == "eps") {
                cfg.eps = val.as_real_list();
                for (double e : cfg.eps)
                    if (!(e > 0.0) || e > 1.0)
                        throw ConfigError(lineno, key, "eps entries must lie in (0, 1]");
            } else if (key == "eps_start") eps_start = val.as_real();
            else if (key == "eps_factor") eps_factor = val.as_real();
            else if (key == "eps_count") eps_count = static_cast<int>(val.as_int());
            else if (key == "x") cfg.x = val.as_real_list();
            else if (key == "t") cfg.t = val.as_real();
            else if (key == "backend") cfg.backend = val.as_string();
            else
                throw ConfigError(lineno, key, "unknown key in [sweep]");
        } else if (section == "mc") {
            if (key == "N") {
                cfg.mc_paths = static_cast<int>(val.as_int());
                if (cfg.mc_paths < 1) throw ConfigError(lineno, key, "N must be >= 1");
            } else if (key == "M") {
                cfg.mc_steps = static_cast<int>(val.as_int());
                if (cfg.mc_steps < 1) throw ConfigError(lineno, key, "M must be >= 1");
            } else if (key == "seed")
                cfg.mc_seed = static_cast<std::uint64_t>(val.as_int());
            else if (key == "drift") cfg.mc_drift = val.as_string();
            else if (key == "delta") cfg.mc_delta = val.as_real();
            else
                throw ConfigError(lineno, key, "unknown key in [mc]");
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val.as_string();
            else if (key == "formats") cfg.formats = val.as_string_list();
            else
                throw ConfigError(lineno, key, "unknown key in [output]");
        }
    }

    auto line_of = [&](const std::string& sk) {
        auto it = seen.find(sk);
        return it == seen.end() ? 0 : it->second;
    };

    if (cfg.eps.empty()) {
        if (eps_count > 0) {
            if (!(eps_start > 0.0) || eps_start > 1.0)
                throw ConfigError(line_of("sweep.eps_start"), "eps_start",
                                  "eps_start must lie in (0, 1]");
            if (!(eps_factor > 0.0) || eps_factor >= 1.0)
                throw ConfigError(line_of("sweep.eps_factor"), "eps_factor",
                                  "eps_factor must lie in (0, 1)");
            double e = eps_start;
            for (int i = 0; i < eps_count; ++i, e *= eps_factor) cfg.eps.push_back(e);
        } else {
            for (int m = 7; m <= 13; ++m) cfg.eps.push_back(std::ldexp(1.0, -m));
        }
    }
    if (cfg.x.empty()) cfg.x.assign(cfg.d, 0.0);

    // cross-key invariants, named after the offending key
    if (cfg.g_tag == "neg_proj_norm" && cfg.k > cfg.d)
        throw ConfigError(line_of("problem.k"), "k", "neg_proj_norm needs k <= d");
    if (cfg.k < 1) throw ConfigError(line_of("problem.k"), "k", "k must be >= 1");
    if (static_cast<int>(cfg.x.size()) != cfg.d)
        throw ConfigError(line_of("sweep.x"), "x", "x must have d entries");
    if (cfg.t < 0.0 || cfg.t > cfg.T)
        throw ConfigError(line_of("sweep.t"), "t", "t must lie in [0, T]");
    if (cfg.backend != "radial" && cfg.backend != "grid")
        throw ConfigError(line_of("sweep.backend"), "backend",
                          "backend must be \"radial\" or \"grid\"");
    if (cfg.mc_drift != "zero" && cfg.mc_drift != "optimal_feedback" &&
        cfg.mc_drift != "half_sum")
        throw ConfigError(line_of("mc.drift"), "drift", "unknown drift kind");
    if (cfg.mc_delta < 0.0)
        throw ConfigError(line_of("mc.delta"), "delta", "delta must be >= 0");
    if (!cfg.grid_lo.empty() || !cfg.grid_hi.empty() || !cfg.grid_n.empty()) {
        if (cfg.grid_lo.size() != static_cast<std::size_t>(cfg.d) ||
            cfg.grid_hi.size() != static_cast<std::size_t>(cfg.d) ||
            cfg.grid_n.size() != static_cast<std::size_t>(cfg.d))
            throw ConfigError(line_of("grid.lo"), "lo",
                              "grid lo/hi/n must each have d entries");
        for (int a = 0; a < cfg.d; ++a) {
            if (!(cfg.grid_lo[a] < cfg.grid_hi[a]))
                throw ConfigError(line_of("grid.lo"), "lo", "grid needs lo < hi");
            if (cfg.grid_n[a] < 2)
                throw ConfigError(line_of("grid.n"), "n", "grid needs n >= 2");
        }
    }

    cfg.make_problem();  // surfaces remaining FnSpec invariant violations
    return cfg;
}

ProblemSpec RunConfig::make_problem() const {
    auto build = [&](const std::string& tag, double cst, double omega,
                     const std::vector<double>& lin, int kk) {
        if (tag == "zero") return FnSpec::zero();
        if (tag == "constant") return FnSpec::constant(cst);
        if (tag == "linear") {
            std::vector<double> c = lin;
            if (c.empty()) c.assign(d, 0.0);
            if (static_cast<int>(c.size()) != d)
                throw std::invalid_argument("linear coefficients must have d entries");
            return FnSpec::linear(c);
        }
        if (tag == "neg_proj_norm") return FnSpec::neg_proj_norm(kk);
        if (tag == "abs_norm") return FnSpec::abs_norm();
        if (tag == "cosine") return FnSpec::cosine(omega);
        throw std::invalid_argument("unknown function tag '" + tag + "'");
    };
    return ProblemSpec(build(g_tag, g_constant, g_omega, g_linear, k),
                       build(f_tag, f_constant, 1.0, f_linear, k), T, d);
}

Grid RunConfig::make_grid() const {
    std::vector<Axis> axes;
    if (!grid_lo.empty()) {
        for (int a = 0; a < d; ++a) axes.push_back({grid_lo[a], grid_hi[a], grid_n[a]});
        return Grid(axes);
    }
    // default: centered on x, wide enough for the trusted region at t
    const ProblemSpec p = make_problem();
    const double radius = p.L() * (T - t) + 2.0;
    for (int a = 0; a < d; ++a) {
        const double lo = x[a] - radius, hi = x[a] + radius;
        axes.push_back({lo, hi, static_cast<int>(std::ceil((hi - lo) / 0.005)) + 1});
    }
    return Grid(axes);
}

McConfig RunConfig::make_mc() const {
    McConfig mc;
    mc.x = x;
    mc.t = t;
    mc.eps = eps.empty() ? 0.05 : eps.front();
    mc.paths = mc_paths;
    mc.steps = mc_steps;
    mc.seed = mc_seed;
    mc.delta = mc_delta;
    if (mc_drift == "zero") mc.drift = DriftKind::zero;
    else if (mc_drift == "optimal_feedback") mc.drift = DriftKind::optimal_feedback;
    else mc.drift = DriftKind::half_sum;
    return mc;
}

SweepBackend RunConfig::make_backend() const {
    return backend == "radial" ? SweepBackend::radial : SweepBackend::grid;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    auto reals = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + fmt17(v[i]);
        return s + "]";
    };
    os << "[problem]\n";
    os << "g = \"" << c.g_tag << "\"\n";
    os << "k = " << c.k << "\n";
    if (c.g_tag == "constant") os << "g_constant = " << fmt17(c.g_constant) << "\n";
    if (c.g_tag == "cosine") os << "g_omega = " << fmt17(c.g_omega) << "\n";
    if (!c.g_linear.empty()) os << "g_linear = " << reals(c.g_linear) << "\n";
    os << "f = \"" << c.f_tag << "\"\n";
    if (c.f_tag == "constant") os << "f_constant = " << fmt17(c.f_constant) << "\n";
    if (!c.f_linear.empty()) os << "f_linear = " << reals(c.f_linear) << "\n";
    os << "T = " << fmt17(c.T) << "\n";
    os << "d = " << c.d << "\n";
    if (!c.grid_lo.empty()) {
        os << "\n[grid]\n";
        os << "lo = " << reals(c.grid_lo) << "\n";
        os << "hi = " << reals(c.grid_hi) << "\n";
        os << "n = [";
        for (std::size_t i = 0; i < c.grid_n.size(); ++i)
            os << (i ? ", " : "") << c.grid_n[i];
        os << "]\n";
    }
    os << "\n[sweep]\n";
    os << "eps = " << reals(c.eps) << "\n";
    os << "x = " << reals(c.x) << "\n";
    os << "t = " << fmt17(c.t) << "\n";
    os << "backend = \"" << c.backend << "\"\n";
    os << "\n[mc]\n";
    os << "N = " << c.mc_paths << "\n";
    os << "M = " << c.mc_steps << "\n";
    os << "seed = " << c.mc_seed << "\n";
    os << "drift = \"" << c.mc_drift << "\"\n";
    os << "delta = " << fmt17(c.mc_delta) << "\n";
    os << "\n[output]\n";
    os << "dir = \"" << c.out_dir << "\"\n";
    os << "formats = [";
    for (std::size_t i = 0; i < c.formats.size(); ++i)
        os << (i ? ", " : "") << '"' << c.formats[i] << '"';
    os << "]\n";
    return os.str();
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace vvlab
