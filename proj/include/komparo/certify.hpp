#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "komparo/envelope.hpp"

namespace komparo {

enum class Verdict { Holds, HoldsOnWindow, Fails, Inconclusive };

// Exactly "holds", "holds-on-window", "fails", "inconclusive".
std::string verdict_name(Verdict v);

struct Witness {
    enum class Kind { None, Point, SValue } kind = Kind::None;
    std::vector<double> point;
    double s = 0.0;

    static Witness none() { return {}; }
    static Witness at_point(std::vector<double> p) {
        Witness w;
        w.kind = Kind::Point;
        w.point = std::move(p);
        return w;
    }
    static Witness at_s(double s) {
        Witness w;
        w.kind = Kind::SValue;
        w.s = s;
        return w;
    }
};

// Per-threshold lower bound witness: min of f over [s <= g], with its argmin.
struct BsEntry {
    double s;
    ExtReal bound;
    std::vector<double> point;
};

struct RadiusEntry {
    double radius;
    double min_value;
    double max_value;
};

// Gap record of a semicontinuity probe. Gaps use the smallest radius as the
// limit surrogate: lsc_gap = value_at - min over the last punctured
// neighborhood, usc_gap = max over it - value_at.
struct SemiProbeResult {
    double value_at = 0.0;
    double lsc_gap = 0.0;
    double usc_gap = 0.0;
    bool lsc_like = false;
    bool usc_like = false;
    std::vector<RadiusEntry> per_radius;
};

struct CheckResult {
    std::string check_id;
    Verdict verdict = Verdict::Inconclusive;
    Witness witness;
    std::string detail;
    std::string reason;           // machine-readable code, inconclusive only
    int failing_condition = 0;    // 1-based index for the numbered conditions
    std::vector<BsEntry> bs;      // infdef
    std::optional<SemiProbeResult> probe;
};

// Semicontinuity probe targets in a report. With no expectation the probe is
// diagnostic only and its verdict stays inconclusive.
struct SemiProbeSpec {
    enum class Target { Function, SupTable, InfTable } target = Target::Function;
    std::vector<double> at_point;  // Function target
    double at_s = 0.0;             // table targets
    enum class Expect { None, Lsc, Usc, Both } expect = Expect::None;
    std::optional<double> tolerance;  // defaults to tau_zero
};

struct CertifyConfig {
    double tau_zero = 1e-9;
    std::vector<double> s_probe = {0.5, 1.0, 2.0};
    std::vector<double> probe_radii = {1e-2, 1e-4, 1e-6, 1e-8, 1e-11};
    std::vector<double> deltas = {0.1, 0.01};
    std::vector<double> radius_ladder;  // empty: evenly spaced from the grid
    std::vector<double> divergence_targets = {1.0, 10.0, 100.0};
    std::vector<SemiProbeSpec> probes;
    std::vector<std::string> checks;  // empty: run everything
};

struct Provenance {
    std::string f_id;
    std::string g_id;
    std::string grid_id;
    std::size_t s_count = 0;
    double s_min = 0.0;
    double s_max = 0.0;
    double tau_zero = 0.0;
};

struct CertReport {
    Provenance provenance;
    std::vector<CheckResult> checks;
    bool any_failure() const;
};

// --- individual checks ------------------------------------------------------

CheckResult check_monotone(const EnvelopeTable& table);

// Positive definiteness of the sup envelope on the nonnegative reals, via the
// three lattice conditions: (1) [f>0] meets [g<=s] for every probed s>0,
// (2) [g<=0] is nonempty and inside [f<=0], (3) min f over [g<=0] vanishes
// within tau.
CheckResult check_supdef(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                         std::span<const double> s_probe, double tau);

// Shortcut when f is positive definite (verified on the lattice first;
// violations raise PdAssertionError): [g<=s] must contain a nonzero point for
// every probed s, and [g<=0] must be exactly the origin.
CheckResult check_supdef_pd_shortcut(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                                     std::span<const double> s_probe, double tau);

// Positive definiteness of the inf envelope: (1) min f over [s<=g] is a
// strictly positive b_s for every probed s, (2) [0<=g] nonempty and inside
// [-tau<=f], (3) min f over [0<=g] at most tau.
CheckResult check_infdef(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                         std::span<const double> s_probe, double tau);

// Lattice-checkable premises of the semicontinuity-based sufficient
// condition: f nonnegative, min g <= 0, zero set of f nonempty and inside the
// zero set of g, and f level-bounded on the window (standing in for the
// compact-set premise).
CheckResult check_infdef_sufficient(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                                    double tau, std::span<const double> ladder);

// Off-lattice stencil probe around a point (functions are defined on all of
// R^d, so radii may shrink below any lattice step).
SemiProbeResult semicontinuity_probe(const FuncExpr& f, std::span<const double> at,
                                     std::span<const double> radii, double tau);

// Neighborhoods are taken in s among the table entries; radii below the
// local spacing raise NeighborhoodEmptyError. `at` must be a table s-value.
SemiProbeResult semicontinuity_probe(const EnvelopeTable& table, double at,
                                     std::span<const double> radii, double tau);

// Window-qualified level-boundedness: annulus minima between consecutive
// ladder rungs (the last annulus extends to the inscribed radius) must be
// nondecreasing beyond some rung and exceed each target at some rung. Never
// plain "holds": the window cannot speak for infinity.
CheckResult check_level_bounded(const FuncExpr& f, const SampleGrid& grid,
                                std::span<const double> ladder, std::span<const double> targets);

// Same window qualification for the table: each target must be reached by
// some table value.
CheckResult check_divergence(const EnvelopeTable& table, std::span<const double> targets);

// inf_env(f,g,g(x)) <= f(x) <= sup_env(f,g,g(x)) at every lattice point.
CheckResult check_sandwich(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid);

// Runs every configured check and aggregates the results; deterministic
// given the config, with a fixed check order. `hahn` selects the
// norm-constrained table kinds.
CertReport full_report(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                       std::span<const double> s_values, bool hahn, const CertifyConfig& config);

std::string report_to_json(const CertReport& report);

// Valid base ids accepted in CertifyConfig::checks.
std::vector<std::string> known_check_ids();

std::vector<double> default_radius_ladder(const SampleGrid& grid);

}  // namespace komparo
