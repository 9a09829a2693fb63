#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "komparo/certify.hpp"

namespace komparo {

// Mirror of the JSON run-config schema. Key names in the file are exactly
// the field names here: f_spec, g_spec, dimension, bounds, resolution,
// symmetric, s_grid, breakpoints, checks, tolerances, certify, output.
struct RunConfig {
    std::string f_spec;
    std::string g_spec;  // "norm" selects the norm-constrained table kinds
    int dimension = 1;
    std::vector<std::array<double, 2>> bounds;
    std::vector<int> resolution;
    bool symmetric = false;

    struct SGrid {
        std::optional<int> auto_count;       // {"auto": count}
        std::vector<double> explicit_values; // {"explicit": [...]}
    } s_grid;
    std::vector<double> breakpoints;

    std::vector<std::string> checks;  // empty: all
    double tau_zero = 1e-9;
    CertifyConfig certify;  // advanced knobs; checks/tau_zero are copied in

    struct LevelSetOut {
        std::string path;
        LevelKind kind = LevelKind::Sublevel;
        double s = 0.0;
    };
    struct Output {
        std::optional<std::string> sup_table_csv;
        std::optional<std::string> inf_table_csv;
        std::optional<std::string> report_json;
        std::optional<LevelSetOut> level_set_csv;
    } output;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& config);

// Reads and validates a config file. Unreadable file: IoError; malformed
// JSON or schema violations: ConfigError.
RunConfig load_config(const std::string& path);

// Canned configurations: exmupper, hahn-doublewell, open-problem-experiment.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 4 when some check fails
    std::vector<std::string> summary;  // one line per check
    CertReport report;
};

// Executes a config: builds the grid and tables, writes the requested CSV /
// JSON artifacts and returns the per-check summary. Identical configs yield
// byte-identical artifacts.
RunOutcome run(const RunConfig& config);

// Exit-code contract shared by the CLI: 1 config, 2 parse/eval, 3 IO,
// 4 check-failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitCheckFailure = 4;

}  // namespace komparo
