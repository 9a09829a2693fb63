#include "komparo/runconfig.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace komparo {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_required(const json& j, const char* key, const char* where) {
    if (!j.contains(key)) {
        throw ConfigError(std::string(where) + ": missing key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + ": key '" + key + "' has the wrong type");
    }
}

SemiProbeSpec probe_from_json(const json& j) {
    require_keys(j, {"target", "at", "expect", "tolerance"}, "certify.probes[]");
    SemiProbeSpec spec;
    const std::string target = get_required<std::string>(j, "target", "certify.probes[]");
    if (target == "f") {
        spec.target = SemiProbeSpec::Target::Function;
        spec.at_point = get_required<std::vector<double>>(j, "at", "certify.probes[]");
    } else if (target == "sup-table" || target == "inf-table") {
        spec.target = target == "sup-table" ? SemiProbeSpec::Target::SupTable
                                            : SemiProbeSpec::Target::InfTable;
        spec.at_s = get_required<double>(j, "at", "certify.probes[]");
    } else {
        throw ConfigError("certify.probes[]: target must be 'f', 'sup-table' or 'inf-table'");
    }
    if (j.contains("expect")) {
        const std::string expect = j.at("expect").get<std::string>();
        if (expect == "none") spec.expect = SemiProbeSpec::Expect::None;
        else if (expect == "lsc") spec.expect = SemiProbeSpec::Expect::Lsc;
        else if (expect == "usc") spec.expect = SemiProbeSpec::Expect::Usc;
        else if (expect == "both") spec.expect = SemiProbeSpec::Expect::Both;
        else throw ConfigError("certify.probes[]: expect must be none|lsc|usc|both");
    }
    if (j.contains("tolerance")) spec.tolerance = j.at("tolerance").get<double>();
    return spec;
}

ordered_json probe_to_json(const SemiProbeSpec& spec) {
    ordered_json j;
    switch (spec.target) {
        case SemiProbeSpec::Target::Function:
            j["target"] = "f";
            j["at"] = spec.at_point;
            break;
        case SemiProbeSpec::Target::SupTable:
            j["target"] = "sup-table";
            j["at"] = spec.at_s;
            break;
        default:
            j["target"] = "inf-table";
            j["at"] = spec.at_s;
            break;
    }
    switch (spec.expect) {
        case SemiProbeSpec::Expect::None: j["expect"] = "none"; break;
        case SemiProbeSpec::Expect::Lsc: j["expect"] = "lsc"; break;
        case SemiProbeSpec::Expect::Usc: j["expect"] = "usc"; break;
        default: j["expect"] = "both"; break;
    }
    if (spec.tolerance) j["tolerance"] = *spec.tolerance;
    return j;
}

}  // namespace

RunConfig config_from_json(const json& j) {
    require_keys(j,
                 {"f_spec", "g_spec", "dimension", "bounds", "resolution", "symmetric", "s_grid",
                  "breakpoints", "checks", "tolerances", "certify", "output"},
                 "config");
    RunConfig c;
    c.f_spec = get_required<std::string>(j, "f_spec", "config");
    c.g_spec = get_required<std::string>(j, "g_spec", "config");
    c.dimension = get_required<int>(j, "dimension", "config");
    if (c.dimension < 1) throw ConfigError("config: dimension must be positive");

    const auto bounds = get_required<std::vector<std::vector<double>>>(j, "bounds", "config");
    for (const auto& b : bounds) {
        if (b.size() != 2) throw ConfigError("config: each bounds entry must be [lo, hi]");
        c.bounds.push_back({b[0], b[1]});
    }
    c.resolution = get_required<std::vector<int>>(j, "resolution", "config");
    c.symmetric = get_required<bool>(j, "symmetric", "config");
    if (static_cast<int>(c.bounds.size()) != c.dimension ||
        static_cast<int>(c.resolution.size()) != c.dimension) {
        throw ConfigError("config: bounds and resolution must have one entry per dimension");
    }

    const json& sg = j.contains("s_grid") ? j.at("s_grid") : json::object();
    require_keys(sg, {"auto", "explicit"}, "s_grid");
    if (sg.contains("auto") == sg.contains("explicit")) {
        throw ConfigError("s_grid: exactly one of 'auto' or 'explicit' is required");
    }
    if (sg.contains("auto")) {
        c.s_grid.auto_count = sg.at("auto").get<int>();
        if (*c.s_grid.auto_count < 2) throw ConfigError("s_grid.auto must be >= 2");
    } else {
        c.s_grid.explicit_values = sg.at("explicit").get<std::vector<double>>();
        if (c.s_grid.explicit_values.empty()) throw ConfigError("s_grid.explicit must be nonempty");
    }

    if (j.contains("breakpoints")) c.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();

    if (j.contains("tolerances")) {
        require_keys(j.at("tolerances"), {"tau_zero"}, "tolerances");
        if (j.at("tolerances").contains("tau_zero")) {
            c.tau_zero = j.at("tolerances").at("tau_zero").get<double>();
        }
    }

    if (j.contains("certify")) {
        const json& cj = j.at("certify");
        require_keys(cj,
                     {"s_probe", "probe_radii", "deltas", "radius_ladder", "divergence_targets",
                      "probes"},
                     "certify");
        if (cj.contains("s_probe")) c.certify.s_probe = cj.at("s_probe").get<std::vector<double>>();
        if (cj.contains("probe_radii")) {
            c.certify.probe_radii = cj.at("probe_radii").get<std::vector<double>>();
        }
        if (cj.contains("deltas")) c.certify.deltas = cj.at("deltas").get<std::vector<double>>();
        if (cj.contains("radius_ladder")) {
            c.certify.radius_ladder = cj.at("radius_ladder").get<std::vector<double>>();
        }
        if (cj.contains("divergence_targets")) {
            c.certify.divergence_targets = cj.at("divergence_targets").get<std::vector<double>>();
        }
        if (cj.contains("probes")) {
            for (const auto& pj : cj.at("probes")) c.certify.probes.push_back(probe_from_json(pj));
        }
    }

    const json& out = j.contains("output") ? j.at("output") : json::object();
    require_keys(out, {"sup_table_csv", "inf_table_csv", "report_json", "level_set_csv"}, "output");
    if (out.contains("sup_table_csv")) c.output.sup_table_csv = out.at("sup_table_csv").get<std::string>();
    if (out.contains("inf_table_csv")) c.output.inf_table_csv = out.at("inf_table_csv").get<std::string>();
    if (out.contains("report_json")) c.output.report_json = out.at("report_json").get<std::string>();
    if (out.contains("level_set_csv")) {
        const json& ls = out.at("level_set_csv");
        require_keys(ls, {"path", "kind", "s"}, "output.level_set_csv");
        RunConfig::LevelSetOut lso;
        lso.path = get_required<std::string>(ls, "path", "output.level_set_csv");
        const std::string kind = get_required<std::string>(ls, "kind", "output.level_set_csv");
        if (kind == "sublevel") lso.kind = LevelKind::Sublevel;
        else if (kind == "superlevel") lso.kind = LevelKind::Superlevel;
        else throw ConfigError("output.level_set_csv.kind must be sublevel|superlevel");
        lso.s = get_required<double>(ls, "s", "output.level_set_csv");
        c.output.level_set_csv = lso;
    }
    return c;
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["f_spec"] = c.f_spec;
    j["g_spec"] = c.g_spec;
    j["dimension"] = c.dimension;
    ordered_json bounds = ordered_json::array();
    for (const auto& b : c.bounds) bounds.push_back({b[0], b[1]});
    j["bounds"] = bounds;
    j["resolution"] = c.resolution;
    j["symmetric"] = c.symmetric;
    if (c.s_grid.auto_count) {
        j["s_grid"] = {{"auto", *c.s_grid.auto_count}};
    } else {
        j["s_grid"] = {{"explicit", c.s_grid.explicit_values}};
    }
    j["breakpoints"] = c.breakpoints;
    j["checks"] = c.checks;
    j["tolerances"] = {{"tau_zero", c.tau_zero}};
    ordered_json cj;
    cj["s_probe"] = c.certify.s_probe;
    cj["probe_radii"] = c.certify.probe_radii;
    cj["deltas"] = c.certify.deltas;
    if (!c.certify.radius_ladder.empty()) cj["radius_ladder"] = c.certify.radius_ladder;
    cj["divergence_targets"] = c.certify.divergence_targets;
    if (!c.certify.probes.empty()) {
        ordered_json probes = ordered_json::array();
        for (const auto& p : c.certify.probes) probes.push_back(probe_to_json(p));
        cj["probes"] = probes;
    }
    j["certify"] = cj;
    ordered_json out;
    if (c.output.sup_table_csv) out["sup_table_csv"] = *c.output.sup_table_csv;
    if (c.output.inf_table_csv) out["inf_table_csv"] = *c.output.inf_table_csv;
    if (c.output.report_json) out["report_json"] = *c.output.report_json;
    if (c.output.level_set_csv) {
        out["level_set_csv"] = {
            {"path", c.output.level_set_csv->path},
            {"kind", c.output.level_set_csv->kind == LevelKind::Sublevel ? "sublevel" : "superlevel"},
            {"s", c.output.level_set_csv->s}};
    }
    j["output"] = out;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names() {
    return {"exmupper", "hahn-doublewell", "open-problem-experiment"};
}

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.dimension = 1;
    c.bounds = {{-5.0, 5.0}};
    c.resolution = {1001};
    c.symmetric = true;
    if (name == "exmupper") {
        c.f_spec = "exmupper_f";
        c.g_spec = "identity_1d";
        c.s_grid.auto_count = 1001;
        c.breakpoints = {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0};
        // Zero conditions are tested at lattice precision: the finest value
        // a 0.01-step quadratic can reach near 0 is step^2 = 1e-4.
        c.tau_zero = 2e-4;
        c.certify.s_probe = {0.5, 1.0, 2.0};
        SemiProbeSpec f_probe;
        f_probe.target = SemiProbeSpec::Target::Function;
        f_probe.at_point = {0.0};
        f_probe.expect = SemiProbeSpec::Expect::Usc;
        SemiProbeSpec table_probe;
        table_probe.target = SemiProbeSpec::Target::InfTable;
        table_probe.at_s = 0.0;
        table_probe.expect = SemiProbeSpec::Expect::Both;
        table_probe.tolerance = 1.01e-4;  // step^2 plus slack
        c.certify.probes = {f_probe, table_probe};
        c.output.sup_table_csv = "exmupper_sup.csv";
        c.output.inf_table_csv = "exmupper_inf.csv";
        c.output.report_json = "exmupper_report.json";
        return c;
    }
    if (name == "hahn-doublewell") {
        c.f_spec = "double_well";
        c.g_spec = "norm";
        c.s_grid.auto_count = 501;
        c.breakpoints = {0.0, 1.0, 5.0};
        c.checks = {"monotone-sup", "monotone-inf", "level-bounded",
                    "divergence",   "sandwich",     "duality",       "semicontinuity"};
        c.certify.s_probe = {0.5, 1.0, 2.0};
        c.certify.divergence_targets = {1.0, 10.0, 100.0};
        SemiProbeSpec up;
        up.target = SemiProbeSpec::Target::SupTable;
        up.at_s = 1.0;
        up.expect = SemiProbeSpec::Expect::Both;
        up.tolerance = 0.1;
        SemiProbeSpec low = up;
        low.target = SemiProbeSpec::Target::InfTable;
        SemiProbeSpec well;
        well.target = SemiProbeSpec::Target::Function;
        well.at_point = {0.7071067811865476};
        well.expect = SemiProbeSpec::Expect::Both;
        c.certify.probes = {up, low, well};
        c.output.sup_table_csv = "hahn_doublewell_upper.csv";
        c.output.inf_table_csv = "hahn_doublewell_lower.csv";
        c.output.report_json = "hahn_doublewell_report.json";
        return c;
    }
    if (name == "open-problem-experiment") {
        // Upper semicontinuous objective over a continuous level-bounded
        // constraint; the run emits inf-table continuity probes and draws no
        // conclusion from them.
        c.f_spec = "exmupper_f";
        c.g_spec = "norm";
        c.s_grid.auto_count = 501;
        c.breakpoints = {0.0, 0.5, 1.0, 2.0};
        c.checks = {"semicontinuity"};
        for (const double s : {0.0, 0.5, 1.0, 2.0}) {
            SemiProbeSpec probe;
            probe.target = SemiProbeSpec::Target::InfTable;
            probe.at_s = s;
            probe.expect = SemiProbeSpec::Expect::None;
            c.certify.probes.push_back(probe);
        }
        c.output.inf_table_csv = "open_problem_inf.csv";
        c.output.report_json = "open_problem_report.json";
        return c;
    }
    std::string msg = "unknown preset '" + name + "'; available:";
    for (const auto& p : preset_names()) msg += " " + p;
    throw ConfigError(msg);
}

// ---------------------------------------------------------------------------
// Run

namespace {

bool is_builtin_spec(const std::string& spec) {
    if (spec == "exmupper_f" || spec == "identity_1d" || spec == "double_well") return true;
    return spec.rfind("euclid_norm(", 0) == 0 || spec.rfind("sum_squares(", 0) == 0;
}

FuncExpr resolve_func(const std::string& spec, int dimension) {
    if (is_builtin_spec(spec)) {
        FuncExpr fn = builtin(spec);
        if (fn.dimension() != dimension) {
            throw ConfigError("builtin '" + spec + "' has dimension " +
                              std::to_string(fn.dimension()) + ", config says " +
                              std::to_string(dimension));
        }
        return fn;
    }
    return parse(spec, dimension);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << contents;
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace

RunOutcome run(const RunConfig& config) {
    const FuncExpr f = resolve_func(config.f_spec, config.dimension);
    const bool hahn = config.g_spec == "norm";
    const FuncExpr g = hahn
                           ? builtin("euclid_norm(" + std::to_string(config.dimension) + ")")
                           : resolve_func(config.g_spec, config.dimension);

    const SampleGrid grid = SampleGrid::make(config.bounds, config.resolution, config.symmetric);

    std::vector<double> s_values;
    if (config.s_grid.auto_count) {
        s_values = s_grid_select(g, grid, config.breakpoints, *config.s_grid.auto_count);
    } else {
        s_values = config.s_grid.explicit_values;
        s_values.insert(s_values.end(), config.breakpoints.begin(), config.breakpoints.end());
        std::sort(s_values.begin(), s_values.end());
        s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());
    }
    if (hahn) {
        for (const double s : s_values) {
            if (s < 0.0) {
                throw ConfigError("norm mode restricts thresholds to s >= 0; got " +
                                  format_double(s));
            }
        }
    }

    const EnvelopeTable sup_table =
        envelope_table(f, g, grid, s_values, hahn ? TableKind::HahnUpper : TableKind::SupEnv);
    const EnvelopeTable inf_table =
        envelope_table(f, g, grid, s_values, hahn ? TableKind::HahnLower : TableKind::InfEnv);

    if (config.output.sup_table_csv) {
        std::ostringstream os;
        write_table_csv(os, grid, sup_table);
        write_file(*config.output.sup_table_csv, os.str());
    }
    if (config.output.inf_table_csv) {
        std::ostringstream os;
        write_table_csv(os, grid, inf_table);
        write_file(*config.output.inf_table_csv, os.str());
    }
    if (config.output.level_set_csv) {
        const auto& lso = *config.output.level_set_csv;
        const LevelSet set = lso.kind == LevelKind::Sublevel ? sublevel(g, grid, lso.s)
                                                             : superlevel(g, grid, lso.s);
        std::ostringstream os;
        write_level_set_csv(os, g, set);
        write_file(lso.path, os.str());
    }

    CertifyConfig cert = config.certify;
    cert.tau_zero = config.tau_zero;
    cert.checks = config.checks;
    RunOutcome outcome;
    outcome.report = full_report(f, g, grid, s_values, hahn, cert);

    if (config.output.report_json) {
        write_file(*config.output.report_json, report_to_json(outcome.report));
    }

    for (const auto& check : outcome.report.checks) {
        std::string line = check.check_id + ": " + verdict_name(check.verdict);
        if (check.verdict == Verdict::Inconclusive && !check.reason.empty()) {
            line += " (" + check.reason + ")";
        }
        if (!check.detail.empty()) line += " -- " + check.detail;
        outcome.summary.push_back(line);
    }
    outcome.exit_code = outcome.report.any_failure() ? kExitCheckFailure : kExitOk;
    return outcome;
}

}  // namespace komparo
