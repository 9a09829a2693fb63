#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "komparo/envelope.hpp"

namespace komparo {
namespace oracle {

// Exhaustive single-pass references for the envelope values. These share no
// code with the envelope module beyond FuncExpr evaluation and the lattice
// itself, so they can referee it. Single-threaded by design.
EnvelopeValue brute_sup(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s);
EnvelopeValue brute_inf(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid, double s);

// Lattice budget for a brute scan; beyond it a BudgetError is thrown.
inline constexpr std::size_t kLatticeBudget = 10'000'000;

// One random test instance: piecewise-polynomial f and g on a symmetric grid
// with a strictly increasing threshold list. The list always contains one
// value below min g and one above max g, exercising the empty level sets.
struct RandomInstance {
    FuncExpr f;
    FuncExpr g;
    SampleGrid grid;
    std::vector<double> s_values;
    bool has_empty_sublevel = false;
    bool has_empty_superlevel = false;
};

RandomInstance random_instance(std::mt19937_64& rng, bool allow_large = false);

struct Divergence {
    int trial = 0;
    std::string stage;   // "sup", "inf", "dual", "table-sup", ...
    double s = 0.0;
    std::string lhs;     // envelope-side value
    std::string rhs;     // oracle-side value
    std::string f_id;
    std::string g_id;
    std::string grid_id;
};

struct SuiteSummary {
    int trials = 0;
    int passes = 0;
    int empty_set_trials = 0;
    std::optional<Divergence> first_failure;
    bool pass() const { return passes == trials; }
};

// Compares envelope against the brute-force reference bit-exactly (values
// and witnesses), and checks the duality identity, the sandwich property and
// raw-table monotonicity on every instance. `mutate` offsets the envelope
// value by +1 before comparing; it exists to prove the harness can fail.
SuiteSummary equivalence_suite(std::uint64_t seed, int trials, bool mutate = false);

std::string summary_to_json(const SuiteSummary& summary);

}  // namespace oracle
}  // namespace komparo
