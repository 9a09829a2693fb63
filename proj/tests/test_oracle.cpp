#include <doctest.h>

#include <cmath>

#include "komparo/oracle.hpp"

using namespace komparo;

TEST_CASE("brute force matches the worked example") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr f = builtin("exmupper_f");
    const FuncExpr g = builtin("identity_1d");
    const EnvelopeValue sup2 = oracle::brute_sup(f, g, grid, 2.0);
    CHECK(sup2.value == ExtReal::finite(4.0));
    REQUIRE(sup2.witness.has_value());
    CHECK(grid.point(*sup2.witness)[0] == 2.0);
}

TEST_CASE("brute force and envelope agree bit-exactly on the double well") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr f = builtin("double_well");
    const FuncExpr norm = builtin("euclid_norm(1)");
    const EnvelopeValue ref = oracle::brute_inf(f, norm, grid, 0.5);
    const EnvelopeValue env = hahn_lower(f, grid, 0.5);
    CHECK(ref.value == env.value);
    CHECK(ref.witness == env.witness);
    REQUIRE(ref.value.is_finite());
    CHECK(std::fabs(ref.value.value() - (-0.25)) <= 5e-5);
}

TEST_CASE("brute force reports empty feasible sets as infinities") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {101}, true);
    const FuncExpr f = builtin("sum_squares(1)");
    const FuncExpr g = builtin("identity_1d");
    CHECK(oracle::brute_sup(f, g, grid, -6.0).value == ExtReal::neg_inf());
    CHECK(oracle::brute_inf(f, g, grid, 6.0).value == ExtReal::pos_inf());
}

TEST_CASE("brute force enforces the lattice budget") {
    const SampleGrid big = SampleGrid::make({{-1.0, 1.0}, {-1.0, 1.0}}, {3163, 3163}, true);
    REQUIRE(big.size() > oracle::kLatticeBudget);
    const FuncExpr f = builtin("sum_squares(2)");
    CHECK_THROWS_AS(oracle::brute_sup(f, f, big, 1.0), BudgetError);
}

TEST_CASE("equivalence suite passes and exercises empty level sets") {
    const auto summary = oracle::equivalence_suite(0, 25);
    CHECK(summary.trials == 25);
    CHECK(summary.passes == 25);
    CHECK(summary.pass());
    CHECK(summary.empty_set_trials >= 10);
    CHECK(!summary.first_failure.has_value());
    const std::string json = oracle::summary_to_json(summary);
    CHECK(json.find("\"trials\": 25") != std::string::npos);
    CHECK(json.find("\"passes\": 25") != std::string::npos);
}

TEST_CASE("the suite is deterministic under a fixed seed") {
    const auto a = oracle::equivalence_suite(42, 8);
    const auto b = oracle::equivalence_suite(42, 8);
    CHECK(oracle::summary_to_json(a) == oracle::summary_to_json(b));
    const auto c = oracle::equivalence_suite(43, 8);
    CHECK(c.trials == 8);  // different seed still runs; values may differ
}

TEST_CASE("equivalence suite rejects a zero-trial request") {
    CHECK_THROWS_AS(oracle::equivalence_suite(0, 0), InputError);
}

TEST_CASE("an injected mutant is caught with a divergence record") {
    const auto summary = oracle::equivalence_suite(0, 5, /*mutate=*/true);
    CHECK(!summary.pass());
    REQUIRE(summary.first_failure.has_value());
    CHECK((summary.first_failure->stage == "sup" || summary.first_failure->stage == "inf"));
    CHECK(!summary.first_failure->lhs.empty());
    CHECK(!summary.first_failure->rhs.empty());
    const std::string json = oracle::summary_to_json(summary);
    CHECK(json.find("first_failure") != std::string::npos);
}
