#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "komparo/extreal.hpp"
#include "komparo/grid.hpp"

namespace komparo {

// An optimal value over a lattice level set. Finite values are always
// attained; the witness is the lowest flat index achieving them. Infinite
// values (empty feasible set) carry no witness.
struct EnvelopeValue {
    ExtReal value = ExtReal::neg_inf();
    std::optional<std::uint32_t> witness;
};

// sup of f over [g <= s]; -inf when the sublevel is empty on the grid.
EnvelopeValue sup_env(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s);

// inf of f over [s <= g]; +inf when the superlevel is empty on the grid.
EnvelopeValue inf_env(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s);

// The classical norm-constrained envelopes: hahn_upper(s) = sup of f over
// [||x|| <= s], hahn_lower(s) = inf of f over [s <= ||x||]; s must be >= 0.
EnvelopeValue hahn_upper(const FuncExpr& f, const SampleGrid& grid, double s);
EnvelopeValue hahn_lower(const FuncExpr& f, const SampleGrid& grid, double s);

struct DualCheckResult {
    bool pass = false;
    ExtReal inf_value = ExtReal::pos_inf();
    ExtReal neg_sup_value = ExtReal::pos_inf();
};

// Exact identity inf_env(f,g,s) == -sup_env(-f,-g,-s), checked on a
// symmetric grid (both sides range over the same lattice points).
DualCheckResult dual_check(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s);

enum class TableKind { SupEnv, InfEnv, HahnUpper, HahnLower };

std::string table_kind_name(TableKind kind);

// Envelope values over a strictly increasing list of thresholds. Values are
// nondecreasing in s by construction of the envelopes; tables are built raw,
// with no monotonicity repair, so that property stays testable.
struct EnvelopeTable {
    TableKind kind = TableKind::SupEnv;
    std::vector<double> s_values;
    std::vector<ExtReal> values;
    std::vector<std::optional<std::uint32_t>> witnesses;
    std::string f_id;
    std::string g_id;
    std::string grid_id;
    int dimension = 1;
};

// Builds a table with an incremental sweep over sorted s (the level sets are
// nested); results are identical to independent per-s evaluation. For the
// hahn-upper/hahn-lower kinds g is ignored and the euclidean norm is used;
// s must be >= 0.
EnvelopeTable envelope_table(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid,
                             std::span<const double> s_values, TableKind kind);
EnvelopeTable envelope_table(const FuncExpr& f, const SampleGrid& grid,
                             std::span<const double> s_values, TableKind hahn_kind);

// Union of `count` quantiles of g over the lattice with the user breakpoints,
// deduplicated and sorted; always contains min g and max g on the lattice.
std::vector<double> s_grid_select(const FuncExpr& g, const SampleGrid& grid,
                                  std::span<const double> breakpoints, int count);

// CSV columns: s,value,witness_x1..xd. Witness fields are empty when the
// value is infinite; infinities are serialized exactly as "-inf"/"+inf".
void write_table_csv(std::ostream& os, const SampleGrid& grid, const EnvelopeTable& table);

// Per-lattice-point envelope values at s = g(x), computed in one pass over
// the g-sorted lattice. Row i corresponds to flat index i.
struct PointwiseEnvelopes {
    std::vector<double> f_values;
    std::vector<double> g_values;
    std::vector<double> sup_at_gx;
    std::vector<double> inf_at_gx;
};
PointwiseEnvelopes pointwise_envelopes(const FuncExpr& f, const FuncExpr& g,
                                       const SampleGrid& grid);

}  // namespace komparo
