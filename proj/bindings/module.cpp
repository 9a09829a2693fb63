#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "komparo/certify.hpp"
#include "komparo/envelope.hpp"
#include "komparo/oracle.hpp"
#include "komparo/runconfig.hpp"

namespace py = pybind11;
using namespace komparo;

namespace {

py::object envelope_value_py(const SampleGrid& grid, const EnvelopeValue& v) {
    py::object witness = py::none();
    if (v.witness) witness = py::cast(grid.point(*v.witness));
    return py::make_tuple(v.value.as_double(), witness);
}

py::dict check_result_py(const CheckResult& c) {
    py::dict d;
    d["check_id"] = c.check_id;
    d["verdict"] = verdict_name(c.verdict);
    py::dict w;
    switch (c.witness.kind) {
        case Witness::Kind::Point: w["point"] = c.witness.point; break;
        case Witness::Kind::SValue: w["s"] = c.witness.s; break;
        default: w["none"] = py::none(); break;
    }
    d["witness"] = w;
    d["detail"] = c.detail;
    if (c.verdict == Verdict::Inconclusive) d["reason"] = c.reason;
    if (c.failing_condition > 0) d["failing_condition"] = c.failing_condition;
    if (!c.bs.empty()) {
        py::list bs;
        for (const auto& e : c.bs) {
            py::dict be;
            be["s"] = e.s;
            be["bound"] = e.bound.as_double();
            be["point"] = e.point;
            bs.append(be);
        }
        d["bs"] = bs;
    }
    if (c.probe) {
        py::dict p;
        p["value_at"] = c.probe->value_at;
        p["lsc_gap"] = c.probe->lsc_gap;
        p["usc_gap"] = c.probe->usc_gap;
        p["lsc_like"] = c.probe->lsc_like;
        p["usc_like"] = c.probe->usc_like;
        d["probe"] = p;
    }
    return d;
}

py::dict probe_result_py(const SemiProbeResult& p) {
    py::dict d;
    d["value_at"] = p.value_at;
    d["lsc_gap"] = p.lsc_gap;
    d["usc_gap"] = p.usc_gap;
    d["lsc_like"] = p.lsc_like;
    d["usc_like"] = p.usc_like;
    py::list radii;
    for (const auto& e : p.per_radius) {
        radii.append(py::make_tuple(e.radius, e.min_value, e.max_value));
    }
    d["per_radius"] = radii;
    return d;
}

TableKind table_kind_from_name(const std::string& name) {
    if (name == "sup-env") return TableKind::SupEnv;
    if (name == "inf-env") return TableKind::InfEnv;
    if (name == "hahn-upper") return TableKind::HahnUpper;
    if (name == "hahn-lower") return TableKind::HahnLower;
    throw InputError("unknown table kind '" + name + "'");
}

std::string csv_of_table(const SampleGrid& grid, const EnvelopeTable& t) {
    std::ostringstream os;
    write_table_csv(os, grid, t);
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_komparo, m) {
    m.doc() = "Envelope tables and certification checks over sampled domains";

    py::register_exception<ParseError>(m, "KomparoParseError");
    py::register_exception<EvalError>(m, "KomparoEvalError");
    py::register_exception<ConfigError>(m, "KomparoConfigError");
    py::register_exception<IoError>(m, "KomparoIoError");

    py::class_<FuncExpr>(m, "FuncExpr")
        .def_property_readonly("dimension", &FuncExpr::dimension)
        .def("eval",
             [](const FuncExpr& f, const std::vector<double>& point) { return f.eval(point); })
        .def("print", &FuncExpr::print)
        .def("id", &FuncExpr::id)
        .def("negate", &FuncExpr::negate)
        .def("__repr__", [](const FuncExpr& f) { return "<FuncExpr " + f.id() + ">"; });

    m.def("parse", &parse, py::arg("text"), py::arg("dimension"));
    m.def("builtin", &builtin, py::arg("name"));
    m.def("builtin_catalog", &builtin_catalog);

    py::class_<SampleGrid>(m, "SampleGrid")
        .def_property_readonly("dimension", &SampleGrid::dimension)
        .def_property_readonly("size", &SampleGrid::size)
        .def_property_readonly("symmetric", &SampleGrid::symmetric)
        .def_property_readonly("origin_included", &SampleGrid::origin_included)
        .def("point", [](const SampleGrid& g, std::size_t i) { return g.point(i); })
        .def("max_step", &SampleGrid::max_step)
        .def("inscribed_radius", &SampleGrid::inscribed_radius)
        .def("id", &SampleGrid::id)
        .def("__repr__", [](const SampleGrid& g) { return "<SampleGrid " + g.id() + ">"; });

    m.def(
        "make_grid",
        [](const std::vector<std::pair<double, double>>& bounds, const std::vector<int>& resolution,
           bool symmetric) {
            std::vector<std::array<double, 2>> b;
            for (const auto& [lo, hi] : bounds) b.push_back({lo, hi});
            return SampleGrid::make(b, resolution, symmetric);
        },
        py::arg("bounds"), py::arg("resolution"), py::arg("symmetric") = false);

    py::class_<LevelSet>(m, "LevelSet")
        .def_property_readonly("threshold", [](const LevelSet& s) { return s.threshold; })
        .def_property_readonly(
            "kind",
            [](const LevelSet& s) { return s.kind == LevelKind::Sublevel ? "sublevel" : "superlevel"; })
        .def_property_readonly("members", [](const LevelSet& s) { return s.members; })
        .def("points",
             [](const LevelSet& s) {
                 std::vector<std::vector<double>> pts;
                 for (const auto m : s.members) pts.push_back(s.grid.point(m));
                 return pts;
             })
        .def("to_csv", [](const LevelSet& s, const FuncExpr& g) {
            std::ostringstream os;
            write_level_set_csv(os, g, s);
            return os.str();
        });

    m.def("sublevel", &sublevel, py::arg("g"), py::arg("grid"), py::arg("s"));
    m.def("superlevel", &superlevel, py::arg("g"), py::arg("grid"), py::arg("s"));

    m.def("sup_env", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, sup_env(f, g, grid, s));
    });
    m.def("inf_env", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, inf_env(f, g, grid, s));
    });
    m.def("hahn_upper", [](const FuncExpr& f, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, hahn_upper(f, grid, s));
    });
    m.def("hahn_lower", [](const FuncExpr& f, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, hahn_lower(f, grid, s));
    });

    m.def("dual_check", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
        const DualCheckResult r = dual_check(f, g, grid, s);
        py::dict d;
        d["pass"] = r.pass;
        d["inf_value"] = r.inf_value.as_double();
        d["neg_sup_value"] = r.neg_sup_value.as_double();
        return d;
    });

    py::class_<EnvelopeTable>(m, "EnvelopeTable")
        .def_property_readonly("kind",
                               [](const EnvelopeTable& t) { return table_kind_name(t.kind); })
        .def_property_readonly("s_values", [](const EnvelopeTable& t) { return t.s_values; })
        .def_property_readonly("values",
                               [](const EnvelopeTable& t) {
                                   std::vector<double> vs;
                                   for (const auto& v : t.values) vs.push_back(v.as_double());
                                   return vs;
                               })
        .def_property_readonly("witness_indices",
                               [](const EnvelopeTable& t) {
                                   py::list out;
                                   for (const auto& w : t.witnesses) {
                                       if (w) out.append(py::cast(*w));
                                       else out.append(py::none());
                                   }
                                   return out;
                               })
        .def("to_csv", [](const EnvelopeTable& t, const SampleGrid& grid) {
            return csv_of_table(grid, t);
        });

    m.def(
        "envelope_table",
        [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
           const std::vector<double>& s_values, const std::string& kind) {
            return envelope_table(f, g, grid, s_values, table_kind_from_name(kind));
        },
        py::arg("f"), py::arg("g"), py::arg("grid"), py::arg("s_values"),
        py::arg("kind") = "sup-env");

    m.def("s_grid_select",
          [](const FuncExpr& g, const SampleGrid& grid, const std::vector<double>& breakpoints,
             int count) { return s_grid_select(g, grid, breakpoints, count); },
          py::arg("g"), py::arg("grid"), py::arg("breakpoints"), py::arg("count"));

    m.def("pk_limits",
          [](const std::vector<LevelSet>& sets, const LevelSet& target) {
              const PKLimitResult r = pk_limits(sets, target);
              py::dict d;
              d["liminf_members"] = r.liminf_members;
              d["limsup_members"] = r.limsup_members;
              d["hausdorff_gap_to_target"] =
                  r.hausdorff_gap_to_target.empty ? py::object(py::none())
                                                  : py::cast(r.hausdorff_gap_to_target.value);
              return d;
          });

    m.def("hemicontinuity_probe",
          [](const FuncExpr& g, const SampleGrid& grid, double s, const std::vector<double>& deltas) {
              const HemiProbeResult r = hemicontinuity_probe(g, grid, s, deltas);
              py::dict d;
              d["s"] = r.s;
              py::list entries;
              for (const auto& e : r.entries) {
                  py::dict ed;
                  ed["delta"] = e.delta;
                  ed["lower_gap"] = e.lower_gap.empty ? py::object(py::none()) : py::cast(e.lower_gap.value);
                  ed["upper_gap"] = e.upper_gap.empty ? py::object(py::none()) : py::cast(e.upper_gap.value);
                  entries.append(ed);
              }
              d["entries"] = entries;
              d["lower_hemicontinuous_like"] = r.lower_hemicontinuous_like
                                                   ? py::object(py::cast(*r.lower_hemicontinuous_like))
                                                   : py::object(py::none());
              d["upper_hemicontinuous_like"] = r.upper_hemicontinuous_like
                                                   ? py::object(py::cast(*r.upper_hemicontinuous_like))
                                                   : py::object(py::none());
              return d;
          });

    // Checks
    m.def("check_monotone", [](const EnvelopeTable& t) { return check_result_py(check_monotone(t)); });
    m.def("check_supdef", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                             const std::vector<double>& s_probe, double tau) {
        return check_result_py(check_supdef(f, g, grid, s_probe, tau));
    });
    m.def("check_supdef_pd_shortcut",
          [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
             const std::vector<double>& s_probe, double tau) {
              return check_result_py(check_supdef_pd_shortcut(f, g, grid, s_probe, tau));
          });
    m.def("check_infdef", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                             const std::vector<double>& s_probe, double tau) {
        return check_result_py(check_infdef(f, g, grid, s_probe, tau));
    });
    m.def("check_infdef_sufficient",
          [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double tau,
             const std::vector<double>& ladder) {
              return check_result_py(check_infdef_sufficient(f, g, grid, tau, ladder));
          });
    m.def("check_level_bounded",
          [](const FuncExpr& f, const SampleGrid& grid, const std::vector<double>& ladder,
             const std::vector<double>& targets) {
              return check_result_py(check_level_bounded(f, grid, ladder, targets));
          });
    m.def("check_divergence", [](const EnvelopeTable& t, const std::vector<double>& targets) {
        return check_result_py(check_divergence(t, targets));
    });
    m.def("check_sandwich", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid) {
        return check_result_py(check_sandwich(f, g, grid));
    });
    m.def("semicontinuity_probe_fn",
          [](const FuncExpr& f, const std::vector<double>& at, const std::vector<double>& radii,
             double tau) { return probe_result_py(semicontinuity_probe(f, at, radii, tau)); });
    m.def("semicontinuity_probe_table",
          [](const EnvelopeTable& t, double at, const std::vector<double>& radii, double tau) {
              return probe_result_py(semicontinuity_probe(t, at, radii, tau));
          });
    m.def("default_radius_ladder", &default_radius_ladder);

    m.def(
        "full_report_json",
        [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
           const std::vector<double>& s_values, bool hahn, double tau_zero,
           const std::vector<double>& s_probe, const std::vector<std::string>& checks) {
            CertifyConfig config;
            config.tau_zero = tau_zero;
            if (!s_probe.empty()) config.s_probe = s_probe;
            config.checks = checks;
            return report_to_json(full_report(f, g, grid, s_values, hahn, config));
        },
        py::arg("f"), py::arg("g"), py::arg("grid"), py::arg("s_values"), py::arg("hahn") = false,
        py::arg("tau_zero") = 1e-9, py::arg("s_probe") = std::vector<double>{},
        py::arg("checks") = std::vector<std::string>{});

    // Oracle
    m.def("brute_sup", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, oracle::brute_sup(f, g, grid, s));
    });
    m.def("brute_inf", [](const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
        return envelope_value_py(grid, oracle::brute_inf(f, g, grid, s));
    });
    m.def(
        "equivalence_suite",
        [](std::uint64_t seed, int trials) {
            return oracle::summary_to_json(oracle::equivalence_suite(seed, trials));
        },
        py::arg("seed") = 0, py::arg("trials") = 100);

    // Config-driven entry points
    m.def("preset_json",
          [](const std::string& name) { return config_to_json(preset(name)).dump(2) + "\n"; });
    m.def("preset_names", &preset_names);
    m.def("run_config_file", [](const std::string& path) {
        const RunOutcome outcome = run(load_config(path));
        py::dict d;
        d["exit_code"] = outcome.exit_code;
        d["summary"] = outcome.summary;
        d["report_json"] = report_to_json(outcome.report);
        return d;
    });
}
