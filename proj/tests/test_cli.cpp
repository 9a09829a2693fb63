#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "komparo/runconfig.hpp"

using namespace komparo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("komparo_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config loading error classes") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);

    const fs::path dir = fresh_dir("cfg");
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "this is not json";
    CHECK_THROWS_AS(load_config(bad.string()), ConfigError);

    const fs::path unknown = dir / "unknown.json";
    std::ofstream(unknown) << R"({"f_spec":"x1","g_spec":"x1","dimension":1,
        "bounds":[[-1,1]],"resolution":[11],"symmetric":true,
        "s_grid":{"auto":5},"surprise":1})";
    CHECK_THROWS_AS(load_config(unknown.string()), ConfigError);

    const fs::path both = dir / "both.json";
    std::ofstream(both) << R"({"f_spec":"x1","g_spec":"x1","dimension":1,
        "bounds":[[-1,1]],"resolution":[11],"symmetric":true,
        "s_grid":{"auto":5,"explicit":[0.0]}})";
    CHECK_THROWS_AS(load_config(both.string()), ConfigError);
}

TEST_CASE("presets round-trip through json") {
    for (const auto& name : preset_names()) {
        const RunConfig original = preset(name);
        const RunConfig reread = config_from_json(config_to_json(original));
        CHECK(reread.f_spec == original.f_spec);
        CHECK(reread.g_spec == original.g_spec);
        CHECK(reread.dimension == original.dimension);
        CHECK(reread.tau_zero == original.tau_zero);
        CHECK(reread.checks == original.checks);
        CHECK(reread.certify.probes.size() == original.certify.probes.size());
        CHECK(config_to_json(reread) == config_to_json(original));
    }
    CHECK_THROWS_AS(preset("nope"), ConfigError);
    try {
        preset("nope");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("exmupper") != std::string::npos);
    }
}

TEST_CASE("run error classes") {
    const fs::path dir = fresh_dir("run_err");
    RunConfig config = preset("exmupper");
    config.output.sup_table_csv = (dir / "sup.csv").string();
    config.output.inf_table_csv = (dir / "inf.csv").string();
    config.output.report_json = (dir / "report.json").string();

    SUBCASE("bad expression is a parse error") {
        config.f_spec = "x1 +";
        CHECK_THROWS_AS(run(config), ParseError);
    }
    SUBCASE("builtin dimension mismatch is a config error") {
        config.f_spec = "euclid_norm(2)";
        CHECK_THROWS_AS(run(config), ConfigError);
    }
    SUBCASE("missing output directory is an io error") {
        config.output.report_json = (dir / "missing" / "report.json").string();
        CHECK_THROWS_AS(run(config), IoError);
    }
    SUBCASE("negative thresholds are rejected in norm mode") {
        config.g_spec = "norm";
        config.s_grid.auto_count.reset();
        config.s_grid.explicit_values = {-1.0, 0.0, 1.0};
        config.breakpoints.clear();
        CHECK_THROWS_AS(run(config), ConfigError);
    }
    SUBCASE("unknown check ids are a config error") {
        config.checks = {"bogus"};
        CHECK_THROWS_AS(run(config), ConfigError);
    }
}

TEST_CASE("the exmupper preset run is reproducible byte for byte") {
    const fs::path dir1 = fresh_dir("repro1");
    const fs::path dir2 = fresh_dir("repro2");
    auto place = [](RunConfig config, const fs::path& dir) {
        config.output.sup_table_csv = (dir / "sup.csv").string();
        config.output.inf_table_csv = (dir / "inf.csv").string();
        config.output.report_json = (dir / "report.json").string();
        return config;
    };
    const RunOutcome first = run(place(preset("exmupper"), dir1));
    const RunOutcome second = run(place(preset("exmupper"), dir2));
    CHECK(first.exit_code == kExitCheckFailure);  // supdef fails by design
    CHECK(second.exit_code == first.exit_code);
    CHECK(slurp(dir1 / "sup.csv") == slurp(dir2 / "sup.csv"));
    CHECK(slurp(dir1 / "inf.csv") == slurp(dir2 / "inf.csv"));
    CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
    CHECK(first.summary == second.summary);

    const std::string report = slurp(dir1 / "report.json");
    CHECK(report.find("\"verdict\": \"fails\"") != std::string::npos);
    CHECK(report.find("\"verdict\": \"holds\"") != std::string::npos);
}

TEST_CASE("norm mode with a definite objective holds across the board") {
    const fs::path dir = fresh_dir("norm_mode");
    RunConfig config;
    config.f_spec = "sum_squares(1)";
    config.g_spec = "norm";
    config.dimension = 1;
    config.bounds = {{-5.0, 5.0}};
    config.resolution = {1001};
    config.symmetric = true;
    config.s_grid.auto_count = 51;
    config.certify.divergence_targets = {1.0, 4.0, 9.0};
    config.output.report_json = (dir / "report.json").string();
    const RunOutcome outcome = run(config);
    CHECK(outcome.exit_code == kExitOk);
    for (const auto& check : outcome.report.checks) {
        CHECK(check.verdict != Verdict::Fails);
    }
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"verdict\": \"fails\"") == std::string::npos);
    CHECK(report.find("\"g\": \"euclid_norm(1)\"") != std::string::npos);
}

TEST_CASE("level set export through the run config") {
    const fs::path dir = fresh_dir("levelset");
    RunConfig config = preset("exmupper");
    config.output.sup_table_csv.reset();
    config.output.inf_table_csv.reset();
    config.output.report_json.reset();
    RunConfig::LevelSetOut lso;
    lso.path = (dir / "set.csv").string();
    lso.kind = LevelKind::Sublevel;
    lso.s = -4.98;
    config.output.level_set_csv = lso;
    run(config);
    CHECK(slurp(dir / "set.csv") == "x1,g_value\n-5,-5\n-4.99,-4.99\n-4.98,-4.98\n");
}
