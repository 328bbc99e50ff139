#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vvlab/config.hpp"
#include "vvlab/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vvlab;

namespace {

const char* kMinimal =
    "[problem]\n"
    "g = \"neg_proj_norm\"\n"
    "k = 1\n"
    "T = 1.0\n"
    "d = 1\n"
    "\n"
    "[sweep]\n"
    "eps = [0.1, 0.01]\n";

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.g_tag == "neg_proj_norm");
    CHECK(c.k == 1);
    CHECK(c.T == 1.0);
    CHECK(c.d == 1);
    CHECK(c.f_tag == "zero");
    CHECK(c.eps == std::vector<double>{0.1, 0.01});
    CHECK(c.x == std::vector<double>{0.0});
    CHECK(c.t == 0.0);
    CHECK(c.backend == "radial");
    CHECK(c.mc_paths == 10000);
    CHECK(c.mc_drift == "optimal_feedback");
    CHECK(c.out_dir == "out");

    const ProblemSpec p = c.make_problem();
    CHECK(p.L() == 1.0);
}

TEST_CASE("default eps ladder is the dyadic grid 2^-7 .. 2^-13") {
    const RunConfig c = parse_config("[problem]\ng = \"neg_proj_norm\"\n");
    REQUIRE(c.eps.size() == 7);
    CHECK(c.eps.front() == std::ldexp(1.0, -7));
    CHECK(c.eps.back() == std::ldexp(1.0, -13));
}

TEST_CASE("geometric eps ladder from start/factor/count") {
    const RunConfig c = parse_config(
        "[sweep]\neps_start = 0.5\neps_factor = 0.25\neps_count = 3\n");
    REQUIRE(c.eps.size() == 3);
    CHECK(c.eps[0] == 0.5);
    CHECK(c.eps[1] == 0.125);
    CHECK(c.eps[2] == 0.03125);
}

TEST_CASE("diagnostics carry line and key") {
    SUBCASE("negative horizon names T") {
        try {
            parse_config("[problem]\nd = 1\nT = -1.0\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "T");
            CHECK(e.line == 3);
            CHECK(std::string(e.what()).find("T") != std::string::npos);
        }
    }
    SUBCASE("k > d violation") {
        try {
            parse_config("[problem]\ng = \"neg_proj_norm\"\nk = 3\nd = 2\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "k");
        }
    }
    SUBCASE("unknown section") {
        try {
            parse_config("[nonsense]\na = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line == 1);
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config("[problem]\nwhatever = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "whatever");
            CHECK(e.line == 2);
        }
    }
    SUBCASE("type mismatch") {
        try {
            parse_config("[problem]\nT = \"one\"\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key == "T");
        }
    }
    SUBCASE("eps outside (0, 1]") {
        CHECK_THROWS_AS(parse_config("[sweep]\neps = [2.0]\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("[sweep]\neps = [0.0]\n"), ConfigError);
    }
    SUBCASE("key before any section") {
        CHECK_THROWS_AS(parse_config("T = 1.0\n"), ConfigError);
    }
}

TEST_CASE("serialize / parse round trip") {
    RunConfig c = parse_config(kMinimal);
    c.mc_seed = 987654321;
    c.mc_delta = 0.125;
    c.t = 0.1875;
    c.g_omega = 2.0;
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.eps == c.eps);
    CHECK(back.t == c.t);
    CHECK(back.mc_seed == c.mc_seed);
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig c = parse_config(
        "# leading comment\n\n[problem]\nd = 2  # inline\nk = 2\n"
        "g = \"neg_proj_norm\"\n");
    CHECK(c.d == 2);
    CHECK(c.k == 2);
}

TEST_CASE("rate table csv round trip") {
    RateTable t;
    t.rows.push_back({0.1, -0.53, -0.5, -0.03});
    t.rows.push_back({0.01, -0.503000000000000114, -0.5, -0.003000000000000114});
    const std::string csv = table_to_csv(t);
    CHECK(csv.rfind("epsilon,phi_eps,phi_zero,gap\n", 0) == 0);
    const RateTable back = table_from_csv(csv);
    REQUIRE(back.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.rows[i].eps == t.rows[i].eps);
        CHECK(back.rows[i].phi_eps == t.rows[i].phi_eps);
        CHECK(back.rows[i].gap == t.rows[i].gap);
    }
    CHECK_THROWS(table_from_csv("wrong,header\n1,2\n"));
}

TEST_CASE("fit json key presence follows the basis") {
    RateFit f;
    f.basis = {.eps_log_eps = true, .eps = false, .sqrt_eps = true};
    f.coef_eps_log_eps = 0.5;
    f.coef_sqrt_eps = -2.0;
    f.residual_linf = 1e-9;
    const std::string j = fit_to_json(f);
    CHECK(j.find("coef_eps_log_eps") != std::string::npos);
    CHECK(j.find("coef_sqrt_eps") != std::string::npos);
    CHECK(j.find("\"coef_eps\"") == std::string::npos);
    CHECK(j.find("residual_linf") != std::string::npos);
}

TEST_CASE("svg plot output") {
    RateTable t;
    t.rows.push_back({0.1, -0.53, -0.5, -0.03});
    t.rows.push_back({0.01, -0.503, -0.5, -0.003});

    SUBCASE("two markers and a fitted line") {
        RateFit f;
        f.basis = {.eps_log_eps = true, .eps = true, .sqrt_eps = false};
        f.coef_eps_log_eps = 0.1;
        f.coef_eps = -0.05;
        const std::string svg = render_svg_plot(t, f);
        std::size_t markers = 0, pos = 0;
        while ((pos = svg.find("<circle", pos)) != std::string::npos) ++markers, ++pos;
        CHECK(markers == 2);
        CHECK(svg.find("<polyline") != std::string::npos);
        // deterministic bytes
        CHECK(render_svg_plot(t, f) == svg);
    }
    SUBCASE("empty basis gives markers only") {
        RateFit f;
        f.basis = {.eps_log_eps = false, .eps = false, .sqrt_eps = false};
        const std::string svg = render_svg_plot(t, f);
        CHECK(svg.find("<circle") != std::string::npos);
        CHECK(svg.find("<polyline") == std::string::npos);
    }
}

TEST_CASE("run_experiment artifact sets") {
    namespace fs = std::filesystem;

    SUBCASE("radial k = 2 default ladder") {
        RunConfig c = parse_config(
            "[problem]\ng = \"neg_proj_norm\"\nk = 2\nd = 2\n"
            "[output]\ndir = \"/tmp/vvlab_test_rad2\"\n");
        const int rc = run_experiment(c, 2, false);
        CHECK(rc == 0);
        const std::string fit = slurp("/tmp/vvlab_test_rad2/fit.json");
        double coef = 0.0;
        std::sscanf(fit.c_str() + fit.find("coef_eps_log_eps") + 18, " %lf", &coef);
        CHECK(coef > 0.45);
        CHECK(coef < 0.55);
        CHECK(fs::exists("/tmp/vvlab_test_rad2/rates.csv"));
        CHECK(fs::exists("/tmp/vvlab_test_rad2/checks.json"));
        CHECK(!fs::exists("/tmp/vvlab_test_rad2/rates.svg"));
    }
    SUBCASE("g = zero: all gaps zero, all checks pass, svg on demand") {
        RunConfig c = parse_config(
            "[problem]\ng = \"zero\"\n[sweep]\neps = [0.1, 0.05, 0.025]\n"
            "backend = \"grid\"\n[output]\ndir = \"/tmp/vvlab_test_zero\"\n");
        const int rc = run_experiment(c, 1, true);
        CHECK(rc == 0);
        const RateTable t = table_from_csv(slurp("/tmp/vvlab_test_zero/rates.csv"));
        for (const RateRow& r : t.rows) CHECK(std::fabs(r.gap) <= 1e-9);
        CHECK(fs::exists("/tmp/vvlab_test_zero/rates.svg"));
    }
    SUBCASE("deliberately coarse grid reports the failing clause") {
        RunConfig c = parse_config(
            "[problem]\ng = \"neg_proj_norm\"\nk = 1\nd = 1\n"
            // h = 2: the discrete Hopf-Lax minimizer misses y = +-tau by a
            // full step, so phi_zero carries an O(1) error that a check trips
            "[grid]\nlo = [-4.0]\nhi = [4.0]\nn = [5]\n"
            "[sweep]\neps = [0.1, 0.05, 0.025]\nbackend = \"grid\"\n"
            "[output]\ndir = \"/tmp/vvlab_test_coarse\"\n");
        const int rc = run_experiment(c, 1, false);
        CHECK(rc == 1);
        const std::string checks = slurp("/tmp/vvlab_test_coarse/checks.json");
        CHECK(checks.find("\"pass\": false") != std::string::npos);
        CHECK(checks.find("\"all_pass\": false") != std::string::npos);
        CHECK(checks.find("\"slack\":") != std::string::npos);
    }
}
