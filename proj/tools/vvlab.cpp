#include "vvlab/cole_hopf.hpp"
#include "vvlab/config.hpp"
#include "vvlab/output.hpp"
#include "vvlab/radial.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool plot = false;
};

std::vector<double> parse_eps_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw CLI::ValidationError("--eps-list", "empty list");
    return out;
}

void apply_globals(vvlab::RunConfig& cfg, const GlobalOpts& g) {
    if (g.seed_set) cfg.mc_seed = g.seed;
    if (g.plot && std::find(cfg.formats.begin(), cfg.formats.end(), "svg") ==
                      cfg.formats.end())
        cfg.formats.push_back("svg");
}

void print_clause(const vvlab::BoundClause& c) {
    if (!c.enabled) {
        std::printf("  [skip] %s\n", c.name.c_str());
        return;
    }
    std::printf("  [%s] %-24s slack=%.6g constant=%.6g %s\n",
                c.pass ? "pass" : "FAIL", c.name.c_str(), c.slack, c.constant,
                c.detail.c_str());
}

int run_mc(const vvlab::RunConfig& cfg) {
    const vvlab::ProblemSpec problem = cfg.make_problem();
    const vvlab::McConfig mc = cfg.make_mc();
    const vvlab::McResult res = vvlab::simulate_feedback_sde(mc, problem);

    double ref = std::numeric_limits<double>::quiet_NaN();
    if (problem.f.is_zero()) {
        try {
            ref = vvlab::viscous_value_point(problem, mc.x, mc.t, mc.eps);
        } catch (const std::exception&) {
        }
    }
    std::printf("mc value      = %.10g\n", res.value);
    std::printf("mc std error  = %.10g\n", res.std_error);
    std::printf("mc max |drift|= %.10g\n", res.max_drift);
    if (std::isfinite(ref)) std::printf("pde value     = %.10g\n", ref);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    vvlab::write_text_file((dir / "cloud.csv").string(), vvlab::cloud_to_csv(res));
    {
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "{\n  \"value\": %.17g,\n  \"std_error\": %.17g,\n"
                      "  \"max_drift\": %.17g,\n  \"paths\": %d,\n  \"steps\": %d,\n"
                      "  \"seed\": %llu\n}\n",
                      res.value, res.std_error, res.max_drift, mc.paths, mc.steps,
                      static_cast<unsigned long long>(mc.seed));
        vvlab::write_text_file((dir / "mc.json").string(), buf);
    }
    return 0;
}

bool run_check_bounds(const vvlab::RunConfig& cfg, int threads) {
    const vvlab::ProblemSpec problem = cfg.make_problem();
    const vvlab::RateTable table = vvlab::sweep_epsilon(
        problem, cfg.x, cfg.t, cfg.eps, cfg.make_backend(), threads);
    const vvlab::BoundsReport rep = vvlab::check_paper_bounds(table, problem, cfg.t);
    std::printf("bounds suite:\n");
    for (const auto& c : rep.clauses) print_clause(c);
    return rep.all_pass();
}

bool run_check_supconv(const vvlab::RunConfig& cfg) {
    const vvlab::ProblemSpec problem = cfg.make_problem();
    const double delta = cfg.mc_delta > 0.0 ? cfg.mc_delta : 0.1;
    const vvlab::SupConvReport r =
        vvlab::supconv_report(problem, cfg.t, cfg.make_grid(), delta);
    std::printf("supconv suite (delta = %g):\n", delta);
    std::printf("  [%s] lipschitz     measured=%.6g\n",
                r.lipschitz_ok ? "pass" : "FAIL", r.measured_lipschitz);
    std::printf("  [%s] semiconcave   max cc=%.6g\n",
                r.semiconcave_ok ? "pass" : "FAIL", r.max_second_diff);
    std::printf("  [%s] semiconvex    min cc=%.6g (floor -1/delta = %.6g)\n",
                r.semiconvex_ok ? "pass" : "FAIL", r.min_second_diff, -1.0 / delta);
    std::printf("  [%s] sandwich      range=[%.6g, %.6g] (cap 2 L delta = %.6g)\n",
                r.sandwich_ok ? "pass" : "FAIL", r.sandwich_min, r.sandwich_max,
                2.0 * problem.L() * delta);
    return r.all_ok();
}

bool run_check_semiconcavity(const vvlab::RunConfig& cfg) {
    const vvlab::ProblemSpec problem = cfg.make_problem();
    const double eps = cfg.eps.front();
    const vvlab::Grid grid = cfg.make_grid();
    const double dt = 0.25 * eps;
    bool ok = true;
    std::printf("semiconcavity suite (eps = %g):\n", eps);
    for (double t : {cfg.t, 0.5 * (cfg.t + cfg.T), cfg.t + 0.9 * (cfg.T - cfg.t)}) {
        const vvlab::ViscousSolution sol =
            vvlab::viscous_solve_grid(problem, t, grid, eps, dt);
        const auto bounds = vvlab::estimate_second_difference_bounds_interior(
            sol.field, sol.trusted_margin);
        const double cap = 1.0 / (problem.T - t) + 0.02;
        const bool pass = bounds.max_cc <= cap;
        ok = ok && pass;
        std::printf("  [%s] t=%-6g max second diff=%.6g cap=%.6g\n",
                    pass ? "pass" : "FAIL", t, bounds.max_cc, cap);
    }
    return ok;
}

bool run_check_entropy(const vvlab::RunConfig& cfg) {
    const vvlab::ProblemSpec problem = cfg.make_problem();
    const double tau = std::min(0.5, problem.T - cfg.t);
    const vvlab::EntropyReport rep =
        vvlab::entropy_bound_check(problem, cfg.make_mc(), tau);
    std::printf("entropy suite (tau = %g):\n", tau);
    std::printf("  [%s] int log mu dmu estimate=%.6g bound=%.6g tol=%.6g\n",
                rep.pass ? "pass" : "FAIL", rep.entropy_estimate, rep.bound,
                rep.estimator_tol);
    return rep.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vanishing-viscosity laboratory for quadratic Hamilton-Jacobi flows"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --seed / --threads / --plot appear after the subcommand

    GlobalOpts g;
    app.add_option("--seed", g.seed, "override RNG seed")
        ->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--threads", g.threads, "worker threads for sweeps");
    app.add_flag("--plot", g.plot, "also emit rates.svg");

    // radial
    auto* radial = app.add_subcommand("radial", "closed-form radial gap sweep");
    int k = 1;
    double tau = 1.0;
    std::string eps_csv, radial_out = "out";
    radial->add_option("--k", k, "projection rank (= dimension)")->required();
    radial->add_option("--tau", tau, "horizon T - t")->required();
    radial->add_option("--eps-list", eps_csv, "comma-separated viscosities")->required();
    radial->add_option("--out", radial_out, "output directory");

    // sweep / mc / check
    std::string config_path, suite = "all";
    auto* sweep = app.add_subcommand("sweep", "epsilon sweep from a config file");
    sweep->add_option("--config", config_path, "config file")->required();
    auto* mc = app.add_subcommand("mc", "Monte Carlo control simulation");
    mc->add_option("--config", config_path, "config file")->required();
    auto* check = app.add_subcommand("check", "run verification suites");
    check->add_option("--config", config_path, "config file")->required();
    check->add_option("--suite", suite, "bounds|supconv|semiconcavity|entropy|all")
        ->check(CLI::IsMember({"bounds", "supconv", "semiconcavity", "entropy", "all"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (radial->parsed()) {
            vvlab::RunConfig cfg;
            cfg.g_tag = "neg_proj_norm";
            cfg.k = k;
            cfg.d = k;
            cfg.T = tau;
            cfg.t = 0.0;
            cfg.x.assign(k, 0.0);
            cfg.eps = parse_eps_list(eps_csv);
            cfg.backend = "radial";
            cfg.out_dir = radial_out;
            apply_globals(cfg, g);
            return vvlab::run_experiment(cfg, g.threads, g.plot);
        }

        vvlab::RunConfig cfg = vvlab::load_config_file(config_path);
        apply_globals(cfg, g);

        if (sweep->parsed()) return vvlab::run_experiment(cfg, g.threads, g.plot);
        if (mc->parsed()) return run_mc(cfg);

        bool ok = true;
        if (suite == "bounds" || suite == "all") ok = run_check_bounds(cfg, g.threads) && ok;
        if (suite == "supconv" || suite == "all") {
            if (cfg.make_problem().f.is_zero()) ok = run_check_supconv(cfg) && ok;
            else std::printf("supconv suite: skipped (needs f == 0)\n");
        }
        if (suite == "semiconcavity" || suite == "all")
            ok = run_check_semiconcavity(cfg) && ok;
        if (suite == "entropy" || suite == "all") ok = run_check_entropy(cfg) && ok;
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
