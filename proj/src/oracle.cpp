#include "komparo/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "komparo/certify.hpp"

namespace komparo {
namespace oracle {

EnvelopeValue brute_sup(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
    if (grid.size() > kLatticeBudget) throw BudgetError("oracle: lattice budget exceeded");
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    bool any = false;
    double best = 0.0;
    std::uint32_t best_idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        if (!(g.eval(pt) <= s)) continue;
        const double fv = f.eval(pt);
        if (!any || fv > best) {
            any = true;
            best = fv;
            best_idx = static_cast<std::uint32_t>(i);
        }
    }
    if (!any) return {ExtReal::neg_inf(), std::nullopt};
    return {ExtReal::finite(best), best_idx};
}

EnvelopeValue brute_inf(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
    if (grid.size() > kLatticeBudget) throw BudgetError("oracle: lattice budget exceeded");
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    bool any = false;
    double best = 0.0;
    std::uint32_t best_idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        if (!(s <= g.eval(pt))) continue;
        const double fv = f.eval(pt);
        if (!any || fv < best) {
            any = true;
            best = fv;
            best_idx = static_cast<std::uint32_t>(i);
        }
    }
    if (!any) return {ExtReal::pos_inf(), std::nullopt};
    return {ExtReal::finite(best), best_idx};
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

// Deterministic helpers on top of the raw engine; the standard distributions
// are implementation-defined, these are not.
int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double rand_real(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

// Random polynomial of total degree <= 4 with coefficients in [-2, 2]; about
// half the monomials are dropped.
ExprPtr random_poly(std::mt19937_64& rng, int dim) {
    ExprPtr acc;
    auto add_term = [&](ExprPtr term) {
        acc = acc ? Expr::binary(Expr::Kind::Add, std::move(acc), std::move(term)) : std::move(term);
    };
    auto monomial = [&](int e1, int e2) -> ExprPtr {
        ExprPtr m = Expr::constant(rand_real(rng, -2.0, 2.0));
        if (e1 > 0) m = Expr::binary(Expr::Kind::Mul, std::move(m), Expr::pow(Expr::variable(1), e1));
        if (e2 > 0) m = Expr::binary(Expr::Kind::Mul, std::move(m), Expr::pow(Expr::variable(2), e2));
        return m;
    };
    if (dim == 1) {
        for (int e = 0; e <= 4; ++e) {
            if (rng() % 2 == 0) add_term(monomial(e, 0));
        }
    } else {
        for (int e1 = 0; e1 <= 4; ++e1) {
            for (int e2 = 0; e1 + e2 <= 4; ++e2) {
                if (rng() % 2 == 0) add_term(monomial(e1, e2));
            }
        }
    }
    if (!acc) acc = Expr::constant(rand_real(rng, -2.0, 2.0));
    return acc;
}

// Polynomial, optionally split along a random hyperplane so the
// discontinuous case is always in play.
FuncExpr random_func(std::mt19937_64& rng, int dim) {
    ExprPtr body = random_poly(rng, dim);
    if (rng() % 10 < 3) {
        ExprPtr normal = Expr::binary(Expr::Kind::Mul, Expr::constant(rand_real(rng, -1.0, 1.0)),
                                      Expr::variable(1));
        if (dim == 2) {
            ExprPtr n2 = Expr::binary(Expr::Kind::Mul, Expr::constant(rand_real(rng, -1.0, 1.0)),
                                      Expr::variable(2));
            normal = Expr::binary(Expr::Kind::Add, std::move(normal), std::move(n2));
        }
        Comparison guard{std::move(normal), CmpOp::Le, Expr::constant(rand_real(rng, -1.0, 1.0))};
        std::vector<Branch> branches;
        branches.push_back({{guard}, std::move(body)});
        branches.push_back({{}, random_poly(rng, dim)});
        body = Expr::piecewise(std::move(branches));
    }
    return FuncExpr(dim, std::move(body));
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng, bool allow_large) {
    const int dim = rand_int(rng, 1, 2);
    const double half = static_cast<double>(rand_int(rng, 1, 4));
    std::vector<std::array<double, 2>> bounds;
    std::vector<int> resolution;
    for (int a = 0; a < dim; ++a) {
        bounds.push_back({-half, half});
        int half_points = dim == 1 ? rand_int(rng, 10, 400) : rand_int(rng, 5, 24);
        if (allow_large && dim == 1) half_points = rand_int(rng, 20'000, 49'999);
        resolution.push_back(2 * half_points + 1);
    }
    SampleGrid grid = SampleGrid::make(std::move(bounds), std::move(resolution), true);

    FuncExpr f = random_func(rng, dim);
    FuncExpr g = random_func(rng, dim);

    // Threshold list: g-quantiles plus jittered midpoints plus one value on
    // each side of the g-range so empty level sets are exercised.
    std::vector<double> s = s_grid_select(g, grid, {}, 7);
    const double lo = s.front();
    const double hi = s.back();
    std::vector<double> extra = {lo - 1.0, hi + 1.0, rand_real(rng, lo, hi),
                                 rand_real(rng, lo, hi)};
    s.insert(s.end(), extra.begin(), extra.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());

    RandomInstance inst{std::move(f), std::move(g), std::move(grid), std::move(s), true, true};
    return inst;
}

// ---------------------------------------------------------------------------
// Equivalence suite

namespace {

std::string env_str(const EnvelopeValue& v) {
    std::string s = v.value.str();
    if (v.witness) s += "@" + std::to_string(*v.witness);
    return s;
}

bool same(const EnvelopeValue& a, const EnvelopeValue& b) {
    return a.value == b.value && a.witness == b.witness;
}

EnvelopeValue mutate_value(const EnvelopeValue& v) {
    if (!v.value.is_finite()) return v;
    return {ExtReal::finite(v.value.value() + 1.0), v.witness};
}

}  // namespace

SuiteSummary equivalence_suite(std::uint64_t seed, int trials, bool mutate) {
    if (trials < 1) throw InputError("equivalence_suite: trials must be >= 1");
    std::mt19937_64 rng(seed);
    SuiteSummary summary;
    summary.trials = trials;

    for (int t = 0; t < trials; ++t) {
        const RandomInstance inst = random_instance(rng, t % 20 == 19);
        bool ok = true;
        Divergence div;
        div.trial = t;
        div.f_id = inst.f.id();
        div.g_id = inst.g.id();
        div.grid_id = inst.grid.id();
        auto fail = [&](const std::string& stage, double s, const std::string& lhs,
                        const std::string& rhs) {
            if (!ok) return;
            ok = false;
            div.stage = stage;
            div.s = s;
            div.lhs = lhs;
            div.rhs = rhs;
        };

        const EnvelopeTable sup_table =
            envelope_table(inst.f, inst.g, inst.grid, inst.s_values, TableKind::SupEnv);
        const EnvelopeTable inf_table =
            envelope_table(inst.f, inst.g, inst.grid, inst.s_values, TableKind::InfEnv);

        bool saw_empty = false;
        for (std::size_t i = 0; i < inst.s_values.size() && ok; ++i) {
            const double s = inst.s_values[i];
            EnvelopeValue sup_direct = sup_env(inst.f, inst.g, inst.grid, s);
            EnvelopeValue inf_direct = inf_env(inst.f, inst.g, inst.grid, s);
            if (mutate) {
                sup_direct = mutate_value(sup_direct);
                inf_direct = mutate_value(inf_direct);
            }
            const EnvelopeValue sup_ref = brute_sup(inst.f, inst.g, inst.grid, s);
            const EnvelopeValue inf_ref = brute_inf(inst.f, inst.g, inst.grid, s);
            if (!same(sup_direct, sup_ref)) fail("sup", s, env_str(sup_direct), env_str(sup_ref));
            if (!same(inf_direct, inf_ref)) fail("inf", s, env_str(inf_direct), env_str(inf_ref));
            const EnvelopeValue sup_swept{sup_table.values[i], sup_table.witnesses[i]};
            const EnvelopeValue inf_swept{inf_table.values[i], inf_table.witnesses[i]};
            if (!same(sup_swept, sup_ref)) {
                fail("table-sup", s, env_str(sup_swept), env_str(sup_ref));
            }
            if (!same(inf_swept, inf_ref)) {
                fail("table-inf", s, env_str(inf_swept), env_str(inf_ref));
            }
            const DualCheckResult dual = dual_check(inst.f, inst.g, inst.grid, s);
            if (!dual.pass) {
                fail("dual", s, dual.inf_value.str(), dual.neg_sup_value.str());
            }
            if (sup_ref.value.is_neg_inf() || inf_ref.value.is_pos_inf()) saw_empty = true;
        }
        if (saw_empty) summary.empty_set_trials += 1;

        if (ok) {
            for (std::size_t i = 1; i < sup_table.values.size(); ++i) {
                if (sup_table.values[i - 1] > sup_table.values[i]) {
                    fail("monotone-sup", sup_table.s_values[i], sup_table.values[i - 1].str(),
                         sup_table.values[i].str());
                }
                if (inf_table.values[i - 1] > inf_table.values[i]) {
                    fail("monotone-inf", inf_table.s_values[i], inf_table.values[i - 1].str(),
                         inf_table.values[i].str());
                }
            }
        }

        if (ok) {
            const CheckResult sandwich = check_sandwich(inst.f, inst.g, inst.grid);
            if (sandwich.verdict != Verdict::Holds) {
                fail("sandwich", 0.0, verdict_name(sandwich.verdict), "holds");
            }
        }

        if (ok) {
            summary.passes += 1;
        } else if (!summary.first_failure) {
            summary.first_failure = div;
        }
    }
    return summary;
}

std::string summary_to_json(const SuiteSummary& summary) {
    nlohmann::ordered_json j;
    j["trials"] = summary.trials;
    j["passes"] = summary.passes;
    j["empty_set_trials"] = summary.empty_set_trials;
    if (summary.first_failure) {
        const Divergence& d = *summary.first_failure;
        j["first_failure"] = {{"trial", d.trial}, {"stage", d.stage},  {"s", d.s},
                              {"lhs", d.lhs},     {"rhs", d.rhs},      {"f", d.f_id},
                              {"g", d.g_id},      {"grid", d.grid_id}};
    }
    return j.dump(2) + "\n";
}

}  // namespace oracle
}  // namespace komparo
