#include "komparo/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace komparo {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::HoldsOnWindow: return "holds-on-window";
        case Verdict::Fails: return "fails";
        default: return "inconclusive";
    }
}

bool CertReport::any_failure() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.verdict == Verdict::Fails; });
}

namespace {

std::vector<double> eval_all(const FuncExpr& fn, const SampleGrid& grid) {
    std::vector<double> out(grid.size());
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        out[i] = fn.eval(pt);
    }
    return out;
}

std::string point_str(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += format_double(p[i]);
    }
    return s + ")";
}

void require_positive_probe(std::span<const double> s_probe) {
    if (s_probe.empty()) throw InputError("s_probe must be nonempty");
    for (const double s : s_probe) {
        if (!(s > 0.0)) throw InputError("s_probe values must be strictly positive");
    }
}

std::string probe_list_str(std::span<const double> s_probe) {
    std::string s = "{";
    for (std::size_t i = 0; i < s_probe.size(); ++i) {
        if (i) s += ",";
        s += format_double(s_probe[i]);
    }
    return s + "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// Monotonicity

CheckResult check_monotone(const EnvelopeTable& table) {
    if (table.s_values.empty()) throw InputError("check_monotone: table must be nonempty");
    CheckResult r;
    r.check_id = "monotone";
    for (std::size_t i = 1; i < table.values.size(); ++i) {
        if (table.values[i - 1] > table.values[i]) {
            r.verdict = Verdict::Fails;
            r.witness = Witness::at_s(table.s_values[i]);
            r.detail = "value " + table.values[i - 1].str() + " at s=" +
                       format_double(table.s_values[i - 1]) + " exceeds " +
                       table.values[i].str() + " at s=" + format_double(table.s_values[i]);
            return r;
        }
    }
    r.verdict = Verdict::Holds;
    r.detail = "values nondecreasing across " + std::to_string(table.values.size()) + " entries";
    return r;
}

// ---------------------------------------------------------------------------
// Positive definiteness of the sup envelope

CheckResult check_supdef(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                         std::span<const double> s_probe, double tau) {
    if (!grid.origin_included()) throw InputError("check_supdef: grid must include the origin");
    require_positive_probe(s_probe);
    const std::vector<double> f_vals = eval_all(f, grid);
    const std::vector<double> g_vals = eval_all(g, grid);
    CheckResult r;
    r.check_id = "supdef";

    for (const double s : s_probe) {
        bool found = false;
        for (std::size_t i = 0; i < g_vals.size(); ++i) {
            if (g_vals[i] <= s && f_vals[i] > 0.0) {
                found = true;
                break;
            }
        }
        if (!found) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 1;
            r.witness = Witness::at_s(s);
            r.detail = "condition (1) fails: [f>0] does not meet [g<=" + format_double(s) +
                       "] on the lattice";
            return r;
        }
    }

    bool sub_nonempty = false;
    for (std::size_t i = 0; i < g_vals.size(); ++i) {
        if (g_vals[i] > 0.0) continue;
        sub_nonempty = true;
        if (f_vals[i] > 0.0) {
            const bool f_nonpos_empty =
                std::none_of(f_vals.begin(), f_vals.end(), [](double v) { return v <= 0.0; });
            r.verdict = Verdict::Fails;
            r.failing_condition = 2;
            r.witness = Witness::at_point(grid.point(i));
            r.detail = "condition (2) fails: f=" + format_double(f_vals[i]) + " > 0 at x=" +
                       point_str(grid.point(i)) + " although g(x) <= 0";
            if (f_nonpos_empty) r.detail += "; [f<=0] is empty on the lattice";
            return r;
        }
    }
    if (!sub_nonempty) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 2;
        r.detail = "condition (2) fails: [g<=0] is empty on the lattice";
        return r;
    }

    double min_f = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < g_vals.size(); ++i) {
        if (g_vals[i] <= 0.0 && f_vals[i] < min_f) {
            min_f = f_vals[i];
            argmin = i;
        }
    }
    if (std::fabs(min_f) > tau) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 3;
        r.witness = Witness::at_point(grid.point(argmin));
        r.detail = "condition (3) fails: min f over [g<=0] = " + format_double(min_f) +
                   " is not 0 within tau=" + format_double(tau);
        return r;
    }

    r.verdict = Verdict::Holds;
    r.detail = "conditions (1)-(3) hold at s_probe=" + probe_list_str(s_probe);
    return r;
}

CheckResult check_supdef_pd_shortcut(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                                     std::span<const double> s_probe, double tau) {
    if (!grid.origin_included()) {
        throw InputError("check_supdef_pd_shortcut: grid must include the origin");
    }
    require_positive_probe(s_probe);
    const std::vector<double> f_vals = eval_all(f, grid);
    const std::vector<double> g_vals = eval_all(g, grid);
    const std::size_t origin = grid.origin_index();

    if (std::fabs(f_vals[origin]) > tau) {
        throw PdAssertionError("pd-assertion-violated: f(0) = " + format_double(f_vals[origin]));
    }
    for (std::size_t i = 0; i < f_vals.size(); ++i) {
        if (i != origin && f_vals[i] <= tau) {
            throw PdAssertionError("pd-assertion-violated: f = " + format_double(f_vals[i]) +
                                   " at nonzero x = " + point_str(grid.point(i)));
        }
    }

    CheckResult r;
    r.check_id = "supdef-pd";
    for (const double s : s_probe) {
        bool nonzero_member = false;
        for (std::size_t i = 0; i < g_vals.size(); ++i) {
            if (i != origin && g_vals[i] <= s) {
                nonzero_member = true;
                break;
            }
        }
        if (!nonzero_member) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 1;
            r.witness = Witness::at_s(s);
            r.detail = "[g<=" + format_double(s) + "] contains no nonzero lattice point";
            return r;
        }
    }
    for (std::size_t i = 0; i < g_vals.size(); ++i) {
        if (g_vals[i] <= 0.0 && i != origin) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 2;
            r.witness = Witness::at_point(grid.point(i));
            r.detail = "[g<=0] is not reduced to the origin: contains x=" + point_str(grid.point(i));
            return r;
        }
    }
    if (g_vals[origin] > 0.0) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 2;
        r.witness = Witness::at_point(grid.point(origin));
        r.detail = "[g<=0] is empty: g(0) = " + format_double(g_vals[origin]) + " > 0";
        return r;
    }
    r.verdict = Verdict::Holds;
    r.detail = "pd shortcut holds at s_probe=" + probe_list_str(s_probe);
    return r;
}

// ---------------------------------------------------------------------------
// Positive definiteness of the inf envelope

CheckResult check_infdef(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                         std::span<const double> s_probe, double tau) {
    if (!grid.origin_included()) throw InputError("check_infdef: grid must include the origin");
    require_positive_probe(s_probe);
    const std::vector<double> f_vals = eval_all(f, grid);
    const std::vector<double> g_vals = eval_all(g, grid);
    CheckResult r;
    r.check_id = "infdef";

    for (const double s : s_probe) {
        bool any = false;
        double b = std::numeric_limits<double>::infinity();
        std::size_t argmin = 0;
        for (std::size_t i = 0; i < g_vals.size(); ++i) {
            if (!(s <= g_vals[i])) continue;
            if (!any || f_vals[i] < b) {
                any = true;
                b = f_vals[i];
                argmin = i;
            }
        }
        if (!any) {
            // Vacuous on the window: the superlevel is empty here.
            r.bs.push_back({s, ExtReal::pos_inf(), {}});
            continue;
        }
        r.bs.push_back({s, ExtReal::finite(b), grid.point(argmin)});
        if (!(b > tau)) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 1;
            r.witness = Witness::at_point(grid.point(argmin));
            r.detail = "condition (1) fails: min f over [" + format_double(s) +
                       "<=g] = " + format_double(b) + " is not > tau=" + format_double(tau);
            return r;
        }
    }

    bool super_nonempty = false;
    for (std::size_t i = 0; i < g_vals.size(); ++i) {
        if (!(0.0 <= g_vals[i])) continue;
        super_nonempty = true;
        if (f_vals[i] < -tau) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 2;
            r.witness = Witness::at_point(grid.point(i));
            r.detail = "condition (2) fails: f=" + format_double(f_vals[i]) + " < -tau at x=" +
                       point_str(grid.point(i)) + " although g(x) >= 0";
            return r;
        }
    }
    if (!super_nonempty) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 2;
        r.detail = "condition (2) fails: [0<=g] is empty on the lattice";
        return r;
    }

    double min_f = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < g_vals.size(); ++i) {
        if (0.0 <= g_vals[i] && f_vals[i] < min_f) {
            min_f = f_vals[i];
            argmin = i;
        }
    }
    if (!(min_f <= tau)) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 3;
        r.witness = Witness::at_point(grid.point(argmin));
        r.detail = "condition (3) fails: min f over [0<=g] = " + format_double(min_f) +
                   " stays above tau=" + format_double(tau);
        return r;
    }

    r.verdict = Verdict::Holds;
    std::string bs_text;
    for (const auto& e : r.bs) {
        if (!bs_text.empty()) bs_text += ", ";
        bs_text += "b(" + format_double(e.s) + ")=" + e.bound.str();
    }
    r.detail = "conditions (1)-(3) hold; " + bs_text;
    return r;
}

CheckResult check_infdef_sufficient(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                                    double tau, std::span<const double> ladder) {
    if (!grid.origin_included()) {
        throw InputError("check_infdef_sufficient: grid must include the origin");
    }
    const std::vector<double> f_vals = eval_all(f, grid);
    const std::vector<double> g_vals = eval_all(g, grid);
    CheckResult r;
    r.check_id = "infdef-sufficient";

    std::size_t argmin_f = static_cast<std::size_t>(
        std::min_element(f_vals.begin(), f_vals.end()) - f_vals.begin());
    if (f_vals[argmin_f] < -tau) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 1;
        r.witness = Witness::at_point(grid.point(argmin_f));
        r.detail = "nonnegativity premise fails: f = " + format_double(f_vals[argmin_f]) +
                   " at x=" + point_str(grid.point(argmin_f));
        return r;
    }

    std::size_t argmin_g = static_cast<std::size_t>(
        std::min_element(g_vals.begin(), g_vals.end()) - g_vals.begin());
    if (g_vals[argmin_g] > tau) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 2;
        r.witness = Witness::at_point(grid.point(argmin_g));
        r.detail = "premise min g <= 0 fails: min g = " + format_double(g_vals[argmin_g]);
        return r;
    }

    bool zero_set_nonempty = false;
    for (std::size_t i = 0; i < f_vals.size(); ++i) {
        if (std::fabs(f_vals[i]) > tau) continue;
        zero_set_nonempty = true;
        if (std::fabs(g_vals[i]) > tau) {
            r.verdict = Verdict::Fails;
            r.failing_condition = 3;
            r.witness = Witness::at_point(grid.point(i));
            r.detail = "zero-set premise fails: f vanishes at x=" + point_str(grid.point(i)) +
                       " but g = " + format_double(g_vals[i]);
            return r;
        }
    }
    if (!zero_set_nonempty) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 3;
        r.detail = "zero-set premise fails: {|f| <= tau} is empty on the lattice";
        return r;
    }

    // Compact-set premise, discharged with sublevels of f as the compact
    // sets; that needs f level-bounded, checked on the window.
    CheckResult lb;
    try {
        lb = check_level_bounded(f, grid, ladder, {});
    } catch (const EmptyAnnulusError&) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "bounded-domain-limit";
        r.detail = "level-boundedness window is unusable on this grid";
        return r;
    }
    if (lb.verdict == Verdict::Fails) {
        r.verdict = Verdict::Fails;
        r.failing_condition = 4;
        r.witness = lb.witness;
        r.detail = "level-boundedness premise fails on the window: " + lb.detail;
        return r;
    }
    if (lb.verdict == Verdict::Inconclusive) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "bounded-domain-limit";
        r.detail = "level-boundedness of f is inconclusive on the window: " + lb.detail;
        return r;
    }

    r.verdict = Verdict::Holds;
    r.detail = "premises hold; compact sets instantiated as sublevels of f";
    return r;
}

// ---------------------------------------------------------------------------
// Semicontinuity probes

namespace {

void require_decreasing_radii(std::span<const double> radii) {
    if (radii.empty()) throw InputError("probe radii must be nonempty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw InputError("probe radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) {
            throw InputError("probe radii must be strictly decreasing");
        }
    }
}

}  // namespace

SemiProbeResult semicontinuity_probe(const FuncExpr& f, std::span<const double> at,
                                     std::span<const double> radii, double tau) {
    require_decreasing_radii(radii);
    const int d = f.dimension();
    if (static_cast<int>(at.size()) != d) {
        throw InputError("semicontinuity_probe: point dimension mismatch");
    }

    // Punctured stencil: +-r along each axis, plus the 2^d diagonal
    // directions normalized to length r when d > 1.
    std::vector<std::vector<double>> dirs;
    for (int a = 0; a < d; ++a) {
        std::vector<double> e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(a)] = 1.0;
        dirs.push_back(e);
        e[static_cast<std::size_t>(a)] = -1.0;
        dirs.push_back(e);
    }
    if (d > 1) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(d));
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            std::vector<double> e(static_cast<std::size_t>(d));
            for (int a = 0; a < d; ++a) {
                e[static_cast<std::size_t>(a)] = (mask >> a & 1u) ? inv : -inv;
            }
            dirs.push_back(std::move(e));
        }
    }

    SemiProbeResult out;
    out.value_at = f.eval(at);
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (const double r : radii) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        for (const auto& dir : dirs) {
            for (int a = 0; a < d; ++a) {
                pt[static_cast<std::size_t>(a)] =
                    at[static_cast<std::size_t>(a)] + r * dir[static_cast<std::size_t>(a)];
            }
            const double v = f.eval(pt);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        out.per_radius.push_back({r, mn, mx});
    }
    out.lsc_gap = out.value_at - out.per_radius.back().min_value;
    out.usc_gap = out.per_radius.back().max_value - out.value_at;
    out.lsc_like = out.lsc_gap <= tau;
    out.usc_like = out.usc_gap <= tau;
    return out;
}

SemiProbeResult semicontinuity_probe(const EnvelopeTable& table, double at,
                                     std::span<const double> radii, double tau) {
    require_decreasing_radii(radii);
    auto it = std::find(table.s_values.begin(), table.s_values.end(), at);
    if (it == table.s_values.end()) {
        throw InputError("semicontinuity_probe: 'at' must be a table s-value");
    }
    SemiProbeResult out;
    out.value_at = table.values[static_cast<std::size_t>(it - table.s_values.begin())].as_double();
    for (const double r : radii) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t i = 0; i < table.s_values.size(); ++i) {
            const double ds = std::fabs(table.s_values[i] - at);
            if (ds == 0.0 || ds > r) continue;
            any = true;
            const double v = table.values[i].as_double();
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (!any) {
            throw NeighborhoodEmptyError("neighborhood-empty: radius " + format_double(r) +
                                         " is below the table spacing around s=" +
                                         format_double(at));
        }
        out.per_radius.push_back({r, mn, mx});
    }
    out.lsc_gap = out.value_at - out.per_radius.back().min_value;
    out.usc_gap = out.per_radius.back().max_value - out.value_at;
    out.lsc_like = out.lsc_gap <= tau;
    out.usc_like = out.usc_gap <= tau;
    return out;
}

// ---------------------------------------------------------------------------
// Level-boundedness and divergence

std::vector<double> default_radius_ladder(const SampleGrid& grid) {
    const double r = grid.inscribed_radius();
    if (!(r > 0.0)) return {};
    return {r / 5.0, 2.0 * r / 5.0, 3.0 * r / 5.0, 4.0 * r / 5.0};
}

CheckResult check_level_bounded(const FuncExpr& f, const SampleGrid& grid,
                                std::span<const double> ladder, std::span<const double> targets) {
    if (ladder.size() < 2) throw InputError("check_level_bounded: ladder needs >= 2 rungs");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) throw InputError("check_level_bounded: rungs must be positive");
        if (i > 0 && !(ladder[i] > ladder[i - 1])) {
            throw InputError("check_level_bounded: ladder must be strictly increasing");
        }
    }
    const double inscribed = grid.inscribed_radius();
    if (ladder.back() > inscribed) {
        throw InputError("check_level_bounded: ladder exceeds the grid's inscribed ball");
    }

    const int d = grid.dimension();
    std::vector<double> pt(static_cast<std::size_t>(d));
    const std::size_t annuli = ladder.size();
    std::vector<double> m(annuli, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> argmin(annuli, 0);
    std::vector<bool> seen(annuli, false);
    auto radius_of = [&](std::span<const double> p) {
        double s = 0.0;
        for (const double c : p) s += c * c;
        return std::sqrt(s);
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        const double rad = radius_of(pt);
        for (std::size_t k = 0; k < annuli; ++k) {
            const double lo = ladder[k];
            const double hi = k + 1 < annuli ? ladder[k + 1] : inscribed;
            if (rad < lo || rad > hi) continue;
            const double fv = f.eval(pt);
            if (!seen[k] || fv < m[k]) {
                seen[k] = true;
                m[k] = fv;
                argmin[k] = i;
            }
        }
    }
    for (std::size_t k = 0; k < annuli; ++k) {
        if (!seen[k]) {
            throw EmptyAnnulusError("empty-annulus: no lattice point with radius in [" +
                                    format_double(ladder[k]) + "," +
                                    format_double(k + 1 < annuli ? ladder[k + 1] : inscribed) +
                                    "]");
        }
    }

    CheckResult r;
    r.check_id = "level-bounded";
    std::string m_text = "annulus minima:";
    for (std::size_t k = 0; k < annuli; ++k) {
        m_text += " m(" + format_double(ladder[k]) + ")=" + format_double(m[k]);
    }

    const std::size_t last = annuli - 1;
    if (m[last] < m[last - 1]) {
        r.verdict = Verdict::Fails;
        r.witness = Witness::at_point(grid.point(argmin[last]));
        r.detail = m_text + "; minima decrease at the window edge";
        return r;
    }
    std::size_t k0 = last;
    while (k0 > 0 && m[k0 - 1] <= m[k0]) --k0;

    std::optional<double> unreached;
    for (const double target : targets) {
        const bool exceeded = std::any_of(m.begin(), m.end(),
                                          [target](double v) { return v > target; });
        if (!exceeded) {
            unreached = target;
            break;
        }
    }
    if (!unreached) {
        r.verdict = Verdict::HoldsOnWindow;
        r.detail = m_text + "; nondecreasing beyond r=" + format_double(ladder[k0]);
        return r;
    }
    if (m[last] > m[k0]) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "bounded-domain-limit";
        r.detail = m_text + "; still rising at the window edge but target " +
                   format_double(*unreached) + " is not exceeded";
        return r;
    }
    r.verdict = Verdict::Fails;
    r.witness = Witness::at_point(grid.point(argmin[last]));
    r.detail = m_text + "; minima stall at " + format_double(m[last]) +
               " and never exceed target " + format_double(*unreached);
    return r;
}

CheckResult check_divergence(const EnvelopeTable& table, std::span<const double> targets) {
    if (table.values.empty()) throw InputError("check_divergence: table must be nonempty");
    CheckResult r;
    r.check_id = "divergence";
    const ExtReal max_value = *std::max_element(table.values.begin(), table.values.end());

    std::optional<double> unreached;
    for (const double target : targets) {
        const bool reached =
            std::any_of(table.values.begin(), table.values.end(),
                        [target](const ExtReal& v) { return v >= ExtReal::finite(target); });
        if (!reached) {
            unreached = target;
            break;
        }
    }
    if (!unreached) {
        r.verdict = Verdict::HoldsOnWindow;
        r.detail = "every target reached; max table value " + max_value.str();
        return r;
    }
    const std::size_t n = table.values.size();
    if (n >= 2 && table.values[n - 1] > table.values[n - 2]) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "bounded-domain-limit";
        r.detail = "table still rising at the window edge; target " + format_double(*unreached) +
                   " not reached (max " + max_value.str() + ")";
        return r;
    }
    r.verdict = Verdict::Fails;
    r.witness = Witness::at_s(table.s_values.back());
    r.detail = "table flat at " + table.values.back().str() + " below target " +
               format_double(*unreached);
    return r;
}

// ---------------------------------------------------------------------------
// Sandwich

CheckResult check_sandwich(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid) {
    const PointwiseEnvelopes env = pointwise_envelopes(f, g, grid);
    CheckResult r;
    r.check_id = "sandwich";
    for (std::size_t i = 0; i < env.f_values.size(); ++i) {
        const bool ok = env.inf_at_gx[i] <= env.f_values[i] && env.f_values[i] <= env.sup_at_gx[i];
        if (!ok) {
            r.verdict = Verdict::Fails;
            r.witness = Witness::at_point(grid.point(i));
            r.detail = "at x=" + point_str(grid.point(i)) + ": inf_env(g(x))=" +
                       format_double(env.inf_at_gx[i]) + ", f(x)=" + format_double(env.f_values[i]) +
                       ", sup_env(g(x))=" + format_double(env.sup_at_gx[i]);
            return r;
        }
    }
    r.verdict = Verdict::Holds;
    r.detail = "holds at every lattice point (" + std::to_string(env.f_values.size()) + " points)";
    return r;
}

// ---------------------------------------------------------------------------
// Full report

std::vector<std::string> known_check_ids() {
    return {"monotone-sup", "monotone-inf",      "supdef",        "supdef-pd",
            "infdef",       "infdef-sufficient", "level-bounded", "divergence",
            "sandwich",     "duality",           "semicontinuity"};
}

namespace {

std::string probe_gaps_detail(const SemiProbeResult& p) {
    std::string s = "value=" + format_double(p.value_at) + ", lsc_gap=" + format_double(p.lsc_gap) +
                    ", usc_gap=" + format_double(p.usc_gap) + ", radii:";
    for (const auto& e : p.per_radius) {
        s += " r=" + format_double(e.radius) + " [" + format_double(e.min_value) + "," +
             format_double(e.max_value) + "]";
    }
    return s;
}

CheckResult probe_check(const std::string& id, const SemiProbeResult& probe,
                        SemiProbeSpec::Expect expect, const Witness& where) {
    CheckResult r;
    r.check_id = id;
    r.probe = probe;
    r.detail = probe_gaps_detail(probe);
    switch (expect) {
        case SemiProbeSpec::Expect::None:
            r.verdict = Verdict::Inconclusive;
            r.reason = "diagnostic-probe";
            return r;
        case SemiProbeSpec::Expect::Lsc:
            r.verdict = probe.lsc_like ? Verdict::Holds : Verdict::Fails;
            break;
        case SemiProbeSpec::Expect::Usc:
            r.verdict = probe.usc_like ? Verdict::Holds : Verdict::Fails;
            break;
        default:
            r.verdict = probe.lsc_like && probe.usc_like ? Verdict::Holds : Verdict::Fails;
            break;
    }
    if (r.verdict == Verdict::Fails) r.witness = where;
    return r;
}

}  // namespace

CertReport full_report(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                       std::span<const double> s_values, bool hahn, const CertifyConfig& config) {
    if (s_values.empty()) throw ConfigError("full_report: s-grid must be nonempty");
    const auto known = known_check_ids();
    for (const auto& requested : config.checks) {
        if (std::find(known.begin(), known.end(), requested) == known.end()) {
            std::string msg = "unknown check id '" + requested + "'; known:";
            for (const auto& k : known) msg += " " + k;
            throw ConfigError(msg);
        }
    }
    for (const auto& probe : config.probes) {
        if (probe.target == SemiProbeSpec::Target::Function &&
            static_cast<int>(probe.at_point.size()) != grid.dimension()) {
            throw ConfigError("probe point dimension does not match the grid");
        }
    }

    const auto enabled = [&](const std::string& base) {
        return config.checks.empty() ||
               std::find(config.checks.begin(), config.checks.end(), base) != config.checks.end();
    };

    const EnvelopeTable sup_table = envelope_table(
        f, g, grid, s_values, hahn ? TableKind::HahnUpper : TableKind::SupEnv);
    const EnvelopeTable inf_table = envelope_table(
        f, g, grid, s_values, hahn ? TableKind::HahnLower : TableKind::InfEnv);

    CertReport report;
    report.provenance = {f.id(),          g.id(),           grid.id(),       s_values.size(),
                         s_values.front(), s_values.back(), config.tau_zero};

    const std::vector<double> ladder =
        config.radius_ladder.empty() ? default_radius_ladder(grid) : config.radius_ladder;

    auto guarded = [&](const std::string& id, auto&& fn) {
        CheckResult r;
        try {
            r = fn();
        } catch (const PdAssertionError& e) {
            r = CheckResult{};
            r.verdict = Verdict::Inconclusive;
            r.reason = "pd-assertion-violated";
            r.detail = e.what();
        } catch (const EmptyAnnulusError& e) {
            r = CheckResult{};
            r.verdict = Verdict::Inconclusive;
            r.reason = "empty-annulus";
            r.detail = e.what();
        } catch (const NeighborhoodEmptyError& e) {
            r = CheckResult{};
            r.verdict = Verdict::Inconclusive;
            r.reason = "neighborhood-empty";
            r.detail = e.what();
        } catch (const InputError& e) {
            r = CheckResult{};
            r.verdict = Verdict::Inconclusive;
            r.reason = "precondition-violated";
            r.detail = e.what();
        } catch (const EvalError& e) {
            r = CheckResult{};
            r.verdict = Verdict::Inconclusive;
            r.reason = "evaluation-error";
            r.detail = e.what();
        }
        r.check_id = id;
        report.checks.push_back(std::move(r));
    };

    if (enabled("monotone-sup")) {
        guarded("monotone-sup", [&] { return check_monotone(sup_table); });
    }
    if (enabled("monotone-inf")) {
        guarded("monotone-inf", [&] { return check_monotone(inf_table); });
    }
    if (enabled("supdef")) {
        guarded("supdef", [&] { return check_supdef(f, g, grid, config.s_probe, config.tau_zero); });
    }
    if (enabled("supdef-pd")) {
        guarded("supdef-pd", [&] {
            return check_supdef_pd_shortcut(f, g, grid, config.s_probe, config.tau_zero);
        });
    }
    if (enabled("infdef")) {
        guarded("infdef", [&] { return check_infdef(f, g, grid, config.s_probe, config.tau_zero); });
    }
    if (enabled("infdef-sufficient")) {
        guarded("infdef-sufficient",
                [&] { return check_infdef_sufficient(f, g, grid, config.tau_zero, ladder); });
    }
    if (enabled("level-bounded")) {
        guarded("level-bounded",
                [&] { return check_level_bounded(f, grid, ladder, config.divergence_targets); });
    }
    if (enabled("divergence")) {
        guarded("divergence", [&] { return check_divergence(sup_table, config.divergence_targets); });
    }
    if (enabled("sandwich")) {
        guarded("sandwich", [&] { return check_sandwich(f, g, grid); });
    }
    if (enabled("duality")) {
        guarded("duality", [&]() -> CheckResult {
            CheckResult r;
            r.check_id = "duality";
            if (!grid.symmetric()) {
                r.verdict = Verdict::Inconclusive;
                r.reason = "non-symmetric-grid";
                r.detail = "the duality identity is checked on symmetric grids only";
                return r;
            }
            std::vector<double> ss(config.s_probe.begin(), config.s_probe.end());
            ss.push_back(s_values.front());
            ss.push_back(s_values.back());
            std::sort(ss.begin(), ss.end());
            ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
            for (const double s : ss) {
                const DualCheckResult dual = dual_check(f, g, grid, s);
                if (!dual.pass) {
                    r.verdict = Verdict::Fails;
                    r.witness = Witness::at_s(s);
                    r.detail = "inf_env=" + dual.inf_value.str() + " but -sup_env(-f,-g,-s)=" +
                               dual.neg_sup_value.str() + " at s=" + format_double(s);
                    return r;
                }
            }
            r.verdict = Verdict::Holds;
            r.detail = "identity exact at " + std::to_string(ss.size()) + " thresholds";
            return r;
        });
    }

    if (enabled("semicontinuity")) {
        std::vector<SemiProbeSpec> probes = config.probes;
        if (probes.empty() && grid.origin_included()) {
            SemiProbeSpec origin_probe;
            origin_probe.target = SemiProbeSpec::Target::Function;
            origin_probe.at_point.assign(static_cast<std::size_t>(grid.dimension()), 0.0);
            probes.push_back(origin_probe);
        }
        for (const auto& spec : probes) {
            const double tol = spec.tolerance.value_or(config.tau_zero);
            if (spec.target == SemiProbeSpec::Target::Function) {
                const std::string id = "semicontinuity-f@" + point_str(spec.at_point);
                guarded(id, [&] {
                    const SemiProbeResult p =
                        semicontinuity_probe(f, spec.at_point, config.probe_radii, tol);
                    return probe_check(id, p, spec.expect, Witness::at_point(spec.at_point));
                });
            } else {
                const bool sup = spec.target == SemiProbeSpec::Target::SupTable;
                const EnvelopeTable& table = sup ? sup_table : inf_table;
                const std::string id = std::string("semicontinuity-") +
                                       (sup ? "sup-table@s=" : "inf-table@s=") +
                                       format_double(spec.at_s);
                guarded(id, [&] {
                    // Radii from the local table spacing around the probe point.
                    auto it = std::find(table.s_values.begin(), table.s_values.end(), spec.at_s);
                    if (it == table.s_values.end()) {
                        throw InputError("probe s-value is not a table point");
                    }
                    const std::size_t idx =
                        static_cast<std::size_t>(it - table.s_values.begin());
                    double spacing = 0.0;
                    if (idx > 0) spacing = std::max(spacing, spec.at_s - table.s_values[idx - 1]);
                    if (idx + 1 < table.s_values.size()) {
                        spacing = std::max(spacing, table.s_values[idx + 1] - spec.at_s);
                    }
                    if (!(spacing > 0.0)) throw InputError("table has a single entry");
                    const std::vector<double> radii = {2.0 * spacing, spacing};
                    const SemiProbeResult p = semicontinuity_probe(table, spec.at_s, radii, tol);
                    return probe_check(id, p, spec.expect, Witness::at_s(spec.at_s));
                });
            }
        }
    }

    return report;
}

std::string report_to_json(const CertReport& report) {
    nlohmann::ordered_json j;
    j["provenance"] = {{"f", report.provenance.f_id},
                       {"g", report.provenance.g_id},
                       {"grid", report.provenance.grid_id},
                       {"s_grid", {{"count", report.provenance.s_count},
                                   {"min", report.provenance.s_min},
                                   {"max", report.provenance.s_max}}},
                       {"tau_zero", report.provenance.tau_zero}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json jc;
        jc["check_id"] = c.check_id;
        jc["verdict"] = verdict_name(c.verdict);
        nlohmann::ordered_json w;
        switch (c.witness.kind) {
            case Witness::Kind::Point:
                w["point"] = c.witness.point;
                break;
            case Witness::Kind::SValue:
                w["s"] = c.witness.s;
                break;
            default:
                w["none"] = nullptr;
                break;
        }
        jc["witness"] = w;
        jc["detail"] = c.detail;
        if (c.verdict == Verdict::Inconclusive) jc["reason"] = c.reason;
        j["checks"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

}  // namespace komparo
