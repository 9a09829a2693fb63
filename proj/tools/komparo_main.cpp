#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "komparo/oracle.hpp"
#include "komparo/runconfig.hpp"

namespace {

int dispatch(CLI::App& run_cmd, CLI::App& preset_cmd, CLI::App& suite_cmd,
             const std::string& config_path, const std::string& preset_name,
             const std::string& preset_out, std::uint64_t seed, int trials,
             const std::string& suite_json) {
    if (run_cmd.parsed()) {
        const komparo::RunConfig config = komparo::load_config(config_path);
        const komparo::RunOutcome outcome = komparo::run(config);
        for (const auto& line : outcome.summary) std::cout << line << "\n";
        return outcome.exit_code;
    }
    if (preset_cmd.parsed()) {
        const komparo::RunConfig config = komparo::preset(preset_name);
        std::ofstream out(preset_out, std::ios::binary);
        if (!out) throw komparo::IoError("cannot open output file: " + preset_out);
        out << komparo::config_to_json(config).dump(2) << "\n";
        if (!out) throw komparo::IoError("failed writing output file: " + preset_out);
        std::cout << "wrote preset '" << preset_name << "' to " << preset_out << "\n";
        return komparo::kExitOk;
    }
    if (suite_cmd.parsed()) {
        const auto summary = komparo::oracle::equivalence_suite(seed, trials);
        const std::string json = komparo::oracle::summary_to_json(summary);
        std::cout << json;
        if (!suite_json.empty()) {
            std::ofstream out(suite_json, std::ios::binary);
            if (!out) throw komparo::IoError("cannot open output file: " + suite_json);
            out << json;
        }
        return summary.pass() ? komparo::kExitOk : komparo::kExitCheckFailure;
    }
    return komparo::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"komparo: envelope tables and certification reports over sampled domains"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a JSON run config");
    run_cmd->add_option("--config", config_path, "path to the run config")->required();

    std::string preset_name;
    std::string preset_out;
    CLI::App* preset_cmd = app.add_subcommand("preset", "write a canned run config");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_option("--out", preset_out, "where to write the config")->required();

    std::uint64_t seed = 0;
    int trials = 100;
    std::string suite_json;
    CLI::App* suite_cmd =
        app.add_subcommand("oracle-suite", "randomized envelope-vs-oracle equivalence suite");
    suite_cmd->add_option("--seed", seed, "RNG seed");
    suite_cmd->add_option("--trials", trials, "number of random instances");
    suite_cmd->add_option("--json", suite_json, "also write the summary to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(*run_cmd, *preset_cmd, *suite_cmd, config_path, preset_name, preset_out,
                        seed, trials, suite_json);
    } catch (const komparo::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return komparo::kExitParse;
    } catch (const komparo::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return komparo::kExitParse;
    } catch (const komparo::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return komparo::kExitIo;
    } catch (const komparo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return komparo::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return komparo::kExitConfig;
    }
}
