#include "komparo/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace komparo {

namespace {

void check_dims(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid) {
    if (f.dimension() != grid.dimension() || g.dimension() != grid.dimension()) {
        throw InputError("envelope: f, g and grid dimensions must agree");
    }
}

// Scan extremum with the lowest-index tie-break. `want_max` selects sup/inf.
template <typename FeasiblePred>
EnvelopeValue scan(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, bool want_max,
                   FeasiblePred feasible) {
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    bool any = false;
    double best = 0.0;
    std::uint32_t best_idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        if (!feasible(g.eval(pt))) continue;
        const double fv = f.eval(pt);
        if (!any || (want_max ? fv > best : fv < best)) {
            any = true;
            best = fv;
            best_idx = static_cast<std::uint32_t>(i);
        }
    }
    if (!any) return {want_max ? ExtReal::neg_inf() : ExtReal::pos_inf(), std::nullopt};
    return {ExtReal::finite(best), best_idx};
}

}  // namespace

EnvelopeValue sup_env(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
    check_dims(f, g, grid);
    return scan(f, g, grid, true, [s](double gv) { return gv <= s; });
}

EnvelopeValue inf_env(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s) {
    check_dims(f, g, grid);
    return scan(f, g, grid, false, [s](double gv) { return s <= gv; });
}

EnvelopeValue hahn_upper(const FuncExpr& f, const SampleGrid& grid, double s) {
    if (s < 0.0) throw InputError("hahn_upper: s must be >= 0");
    return sup_env(f, builtin("euclid_norm(" + std::to_string(grid.dimension()) + ")"), grid, s);
}

EnvelopeValue hahn_lower(const FuncExpr& f, const SampleGrid& grid, double s) {
    if (s < 0.0) throw InputError("hahn_lower: s must be >= 0");
    return inf_env(f, builtin("euclid_norm(" + std::to_string(grid.dimension()) + ")"), grid, s);
}

DualCheckResult dual_check(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                           double s) {
    if (!grid.symmetric()) throw InputError("dual_check: grid must be symmetric");
    const EnvelopeValue lhs = inf_env(f, g, grid, s);
    const EnvelopeValue rhs = sup_env(f.negate(), g.negate(), grid, -s);
    const ExtReal neg = -rhs.value;
    return {lhs.value == neg, lhs.value, neg};
}

std::string table_kind_name(TableKind kind) {
    switch (kind) {
        case TableKind::SupEnv: return "sup-env";
        case TableKind::InfEnv: return "inf-env";
        case TableKind::HahnUpper: return "hahn-upper";
        default: return "hahn-lower";
    }
}

namespace {

struct LatticeValues {
    std::vector<double> f_values;
    std::vector<double> g_values;
};

// f is evaluated lazily, only at feasible points, matching the one-shot
// envelope contract (f may be undefined off the feasible region).
std::vector<double> eval_all(const FuncExpr& fn, const SampleGrid& grid) {
    std::vector<double> out(grid.size());
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        out[i] = fn.eval(pt);
    }
    return out;
}

void require_strictly_increasing(std::span<const double> s_values) {
    if (s_values.empty()) throw InputError("envelope_table: s_values must be nonempty");
    for (std::size_t i = 1; i < s_values.size(); ++i) {
        if (!(s_values[i] > s_values[i - 1])) {
            throw InputError("envelope_table: s_values must be strictly increasing");
        }
    }
}

}  // namespace

EnvelopeTable envelope_table(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                             std::span<const double> s_values, TableKind kind) {
    if (kind == TableKind::HahnUpper || kind == TableKind::HahnLower) {
        return envelope_table(f, grid, s_values, kind);
    }
    check_dims(f, g, grid);
    require_strictly_increasing(s_values);

    const bool is_sup = kind == TableKind::SupEnv;
    const std::vector<double> g_vals = eval_all(g, grid);

    // Order lattice indices by g (then index) so level sets grow by suffix /
    // prefix as s sweeps.
    std::vector<std::uint32_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (g_vals[a] != g_vals[b]) return g_vals[a] < g_vals[b];
        return a < b;
    });

    EnvelopeTable table;
    table.kind = kind;
    table.s_values.assign(s_values.begin(), s_values.end());
    table.values.reserve(s_values.size());
    table.witnesses.reserve(s_values.size());
    table.f_id = f.id();
    table.g_id = g.id();
    table.grid_id = grid.id();
    table.dimension = grid.dimension();

    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    bool any = false;
    double best = 0.0;
    std::uint32_t best_idx = 0;
    auto absorb = [&](std::uint32_t lattice_idx) {
        grid.fill_point(lattice_idx, pt);
        const double fv = f.eval(pt);
        // Ties keep the lowest lattice index, independent of insertion order.
        if (!any || (is_sup ? fv > best : fv < best) || (fv == best && lattice_idx < best_idx)) {
            any = true;
            best = fv;
            best_idx = lattice_idx;
        }
    };

    if (is_sup) {
        std::size_t next = 0;
        for (const double s : s_values) {
            while (next < order.size() && g_vals[order[next]] <= s) absorb(order[next++]);
            table.values.push_back(any ? ExtReal::finite(best) : ExtReal::neg_inf());
            table.witnesses.push_back(any ? std::optional<std::uint32_t>(best_idx) : std::nullopt);
        }
    } else {
        std::size_t next = order.size();
        std::vector<ExtReal> rev_values;
        std::vector<std::optional<std::uint32_t>> rev_witnesses;
        for (auto it = s_values.rbegin(); it != s_values.rend(); ++it) {
            const double s = *it;
            while (next > 0 && g_vals[order[next - 1]] >= s) absorb(order[--next]);
            rev_values.push_back(any ? ExtReal::finite(best) : ExtReal::pos_inf());
            rev_witnesses.push_back(any ? std::optional<std::uint32_t>(best_idx) : std::nullopt);
        }
        table.values.assign(rev_values.rbegin(), rev_values.rend());
        table.witnesses.assign(rev_witnesses.rbegin(), rev_witnesses.rend());
    }
    return table;
}

EnvelopeTable envelope_table(const FuncExpr& f, const SampleGrid& grid,
                             std::span<const double> s_values, TableKind hahn_kind) {
    if (hahn_kind != TableKind::HahnUpper && hahn_kind != TableKind::HahnLower) {
        throw InputError("envelope_table: this overload is for the Hahn kinds");
    }
    require_strictly_increasing(s_values);
    for (const double s : s_values) {
        if (s < 0.0) throw InputError("envelope_table: Hahn tables need s >= 0");
    }
    const FuncExpr norm = builtin("euclid_norm(" + std::to_string(grid.dimension()) + ")");
    EnvelopeTable table = envelope_table(
        f, norm, grid, s_values,
        hahn_kind == TableKind::HahnUpper ? TableKind::SupEnv : TableKind::InfEnv);
    table.kind = hahn_kind;
    return table;
}

std::vector<double> s_grid_select(const FuncExpr& g, const SampleGrid& grid,
                                  std::span<const double> breakpoints, int count) {
    if (count < 2) throw InputError("s_grid_select: count must be >= 2");
    std::vector<double> values = eval_all(g, grid);
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    const std::size_t n = values.size();
    for (int i = 0; i < count; ++i) {
        const std::size_t idx = (static_cast<std::size_t>(i) * (n - 1)) /
                                static_cast<std::size_t>(count - 1);
        out.push_back(values[idx]);
    }
    out.insert(out.end(), breakpoints.begin(), breakpoints.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void write_table_csv(std::ostream& os, const SampleGrid& grid, const EnvelopeTable& table) {
    const int d = grid.dimension();
    os << "s,value";
    for (int a = 1; a <= d; ++a) os << ",witness_x" << a;
    os << '\n';
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < table.s_values.size(); ++i) {
        os << format_double(table.s_values[i]) << ',' << table.values[i].str();
        if (table.witnesses[i]) {
            grid.fill_point(*table.witnesses[i], pt);
            for (int a = 0; a < d; ++a) os << ',' << format_double(pt[static_cast<std::size_t>(a)]);
        } else {
            for (int a = 0; a < d; ++a) os << ',';
        }
        os << '\n';
    }
}

PointwiseEnvelopes pointwise_envelopes(const FuncExpr& f, const FuncExpr& g,
                                       const SampleGrid& grid) {
    check_dims(f, g, grid);
    PointwiseEnvelopes out;
    out.f_values = eval_all(f, grid);
    out.g_values = eval_all(g, grid);

    std::vector<std::uint32_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return out.g_values[a] < out.g_values[b];
    });

    out.sup_at_gx.assign(grid.size(), 0.0);
    out.inf_at_gx.assign(grid.size(), 0.0);

    // Prefix max over groups of equal g gives sup over [g <= g(x)]; a suffix
    // min gives inf over [g(x) <= g]. Groups are closed so ties land in both.
    std::size_t i = 0;
    double running = 0.0;
    bool any = false;
    while (i < order.size()) {
        std::size_t j = i;
        const double gv = out.g_values[order[i]];
        double group_max = out.f_values[order[i]];
        while (j < order.size() && out.g_values[order[j]] == gv) {
            group_max = std::max(group_max, out.f_values[order[j]]);
            ++j;
        }
        running = any ? std::max(running, group_max) : group_max;
        any = true;
        for (std::size_t k = i; k < j; ++k) out.sup_at_gx[order[k]] = running;
        i = j;
    }

    std::size_t end = order.size();
    any = false;
    running = 0.0;
    while (end > 0) {
        std::size_t j = end;
        const double gv = out.g_values[order[end - 1]];
        double group_min = out.f_values[order[end - 1]];
        while (j > 0 && out.g_values[order[j - 1]] == gv) {
            group_min = std::min(group_min, out.f_values[order[j - 1]]);
            --j;
        }
        running = any ? std::min(running, group_min) : group_min;
        any = true;
        for (std::size_t k = j; k < end; ++k) out.inf_at_gx[order[k]] = running;
        end = j;
    }
    return out;
}

}  // namespace komparo
