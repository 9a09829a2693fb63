#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "komparo/grid.hpp"

using namespace komparo;

namespace {

SampleGrid unit_grid() { return SampleGrid::make({{-5.0, 5.0}}, {1001}, true); }

bool subset(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("directed and symmetric gaps on small sets") {
    const SampleGrid grid = SampleGrid::make({{-1.0, 1.0}}, {21}, true);  // step 0.1
    const FuncExpr g = builtin("identity_1d");
    const LevelSet a = sublevel(g, grid, 0.0);   // [-1, 0]
    const LevelSet b = sublevel(g, grid, 0.5);   // [-1, 0.5]
    const GapValue ab = directed_gap(grid, a.members, b.members);
    REQUIRE(!ab.empty);
    CHECK(ab.value == 0.0);  // a is inside b
    const GapValue ba = directed_gap(grid, b.members, a.members);
    REQUIRE(!ba.empty);
    CHECK(std::fabs(ba.value - 0.5) <= 1e-12);
    const GapValue h = hausdorff_gap(grid, a.members, b.members);
    CHECK(std::fabs(h.value - 0.5) <= 1e-12);

    const LevelSet empty = sublevel(builtin("euclid_norm(1)"), grid, -1.0);
    CHECK(directed_gap(grid, a.members, empty.members).empty);
    CHECK(hausdorff_gap(grid, empty.members, empty.members).empty);
}

TEST_CASE("one-step dilation adds axis neighbors only") {
    const SampleGrid grid = SampleGrid::make({{-1.0, 1.0}, {-1.0, 1.0}}, {5, 5}, true);
    const std::size_t center = grid.origin_index();
    const auto dil = dilate_one_step(grid, std::vector<std::uint32_t>{
                                               static_cast<std::uint32_t>(center)});
    CHECK(dil.size() == 5);  // center plus 4 axis neighbors
    for (const auto m : dil) {
        const auto p = grid.point(m);
        CHECK(std::fabs(p[0]) + std::fabs(p[1]) <= 0.5 + 1e-12);
    }
}

TEST_CASE("pk limits of an increasing threshold sequence") {
    const SampleGrid grid = unit_grid();
    const FuncExpr g = builtin("identity_1d");
    std::vector<LevelSet> sets;
    for (int n = 1; n <= 200; ++n) {
        sets.push_back(sublevel(g, grid, 1.0 - 1.0 / n));
    }
    const LevelSet target = sublevel(g, grid, 1.0);
    const PKLimitResult r = pk_limits(sets, target);

    CHECK(subset(r.liminf_members, r.limsup_members));
    REQUIRE(!r.hausdorff_gap_to_target.empty);
    CHECK(r.hausdorff_gap_to_target.value <= grid.max_step() + 1e-12);

    // Discrete analog of the closure of the union: within one lattice step.
    std::vector<std::uint32_t> all;
    for (const auto& s : sets) {
        all.insert(all.end(), s.members.begin(), s.members.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const auto closure = dilate_one_step(grid, all);
    const GapValue gap = hausdorff_gap(grid, r.limsup_members, closure);
    REQUIRE(!gap.empty);
    CHECK(gap.value <= grid.max_step() + 1e-12);
}

TEST_CASE("pk limits of a constant sequence recover the set exactly") {
    const SampleGrid grid = unit_grid();
    const FuncExpr g = builtin("identity_1d");
    const LevelSet set = sublevel(g, grid, 2.0);
    const std::vector<LevelSet> sets(6, set);
    const PKLimitResult r = pk_limits(sets, set);
    CHECK(r.liminf_members == set.members);
    CHECK(r.limsup_members == set.members);
    REQUIRE(!r.hausdorff_gap_to_target.empty);
    CHECK(r.hausdorff_gap_to_target.value == 0.0);
}

TEST_CASE("pk limits of an alternating empty/full sequence") {
    const SampleGrid grid = unit_grid();
    const FuncExpr norm = builtin("euclid_norm(1)");
    const LevelSet empty = sublevel(norm, grid, -1.0);
    const LevelSet full = sublevel(norm, grid, 100.0);
    std::vector<LevelSet> sets;
    for (int i = 0; i < 8; ++i) sets.push_back(i % 2 == 0 ? empty : full);
    const PKLimitResult r = pk_limits(sets, full);
    CHECK(r.liminf_members.empty());
    CHECK(r.limsup_members == full.members);
}

TEST_CASE("pk limits precondition failures") {
    const SampleGrid a = unit_grid();
    const SampleGrid b = SampleGrid::make({{-5.0, 5.0}}, {101}, true);
    const FuncExpr g = builtin("identity_1d");
    const std::vector<LevelSet> mixed = {sublevel(g, a, 0.0), sublevel(g, b, 0.0)};
    CHECK_THROWS_AS(pk_limits(mixed, sublevel(g, a, 0.0)), InputError);
    CHECK_THROWS_AS(pk_limits(std::vector<LevelSet>{}, sublevel(g, a, 0.0)), InputError);
}

TEST_CASE("liminf stays inside limsup on random threshold sequences") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {201}, true);
    const FuncExpr g = builtin("double_well");
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<LevelSet> sets;
        for (int n = 0; n < 12; ++n) {
            const double s = -0.3 + 600.5 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
            sets.push_back(sublevel(g, grid, s));
        }
        const PKLimitResult r = pk_limits(sets, sets.back());
        CHECK(subset(r.liminf_members, r.limsup_members));
    }
}

TEST_CASE("hemicontinuity probe on the norm") {
    const SampleGrid grid = unit_grid();
    const FuncExpr norm = builtin("euclid_norm(1)");
    const std::vector<double> deltas = {0.1, 0.01};
    const HemiProbeResult r = hemicontinuity_probe(norm, grid, 1.0, deltas);
    REQUIRE(r.entries.size() == 2);
    for (const auto& e : r.entries) {
        REQUIRE(!e.lower_gap.empty);
        REQUIRE(!e.upper_gap.empty);
        // M(s) = [-s, s]: each gap equals delta up to one lattice step.
        CHECK(std::fabs(e.lower_gap.value - e.delta) <= grid.max_step() + 1e-12);
        CHECK(std::fabs(e.upper_gap.value - e.delta) <= grid.max_step() + 1e-12);
    }
    REQUIRE(r.lower_hemicontinuous_like.has_value());
    REQUIRE(r.upper_hemicontinuous_like.has_value());
    CHECK(*r.lower_hemicontinuous_like);
    CHECK(*r.upper_hemicontinuous_like);
}

TEST_CASE("hemicontinuity probe on a step constraint sees equal sets") {
    const SampleGrid grid = unit_grid();
    const FuncExpr g = parse("piecewise { x1 < 0 : 0 ; else : 1 }", 1);
    const std::vector<double> deltas = {0.1, 0.01};
    const HemiProbeResult r = hemicontinuity_probe(g, grid, 0.5, deltas);
    for (const auto& e : r.entries) {
        REQUIRE(!e.lower_gap.empty);
        CHECK(e.lower_gap.value == 0.0);
        REQUIRE(!e.upper_gap.empty);
        CHECK(e.upper_gap.value == 0.0);
    }
    CHECK(*r.lower_hemicontinuous_like);
    CHECK(*r.upper_hemicontinuous_like);
}

TEST_CASE("gaps involving an empty set are reported as empty") {
    const SampleGrid grid = unit_grid();
    const FuncExpr norm = builtin("euclid_norm(1)");
    const HemiProbeResult r = hemicontinuity_probe(norm, grid, 0.05, std::vector<double>{0.1, 0.01});
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].lower_gap.empty);   // M(-0.05) is empty
    CHECK(!r.entries[1].lower_gap.empty);  // M(0.04) is not
    REQUIRE(r.lower_hemicontinuous_like.has_value());
    CHECK(*r.lower_hemicontinuous_like);
}

TEST_CASE("hemicontinuity probe validates deltas") {
    const SampleGrid grid = unit_grid();
    const FuncExpr norm = builtin("euclid_norm(1)");
    CHECK_THROWS_AS(hemicontinuity_probe(norm, grid, 1.0, std::vector<double>{0.01, 0.1}), InputError);
    CHECK_THROWS_AS(hemicontinuity_probe(norm, grid, 1.0, std::vector<double>{-0.1}), InputError);
    CHECK_THROWS_AS(hemicontinuity_probe(norm, grid, 1.0, std::vector<double>{}), InputError);
}
