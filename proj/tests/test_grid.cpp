#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "komparo/grid.hpp"

using namespace komparo;

TEST_CASE("1d symmetric lattice") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    CHECK(grid.size() == 1001);
    CHECK(grid.dimension() == 1);
    CHECK(grid.symmetric());
    CHECK(grid.origin_included());
    CHECK(grid.step(0) == 0.01);
    CHECK(grid.coord(0, 500) == 0.0);
    CHECK(grid.coord(0, 0) == -5.0);
    CHECK(grid.coord(0, 1000) == 5.0);
    CHECK(grid.coord(0, 700) == 2.0);
    CHECK(grid.coord(0, 550) == 0.5);
}

TEST_CASE("2d symmetric lattice contains the origin") {
    const SampleGrid grid = SampleGrid::make({{-1.0, 1.0}, {-1.0, 1.0}}, {101, 101}, true);
    CHECK(grid.size() == 101u * 101u);
    CHECK(grid.origin_included());
    const auto origin = grid.point(grid.origin_index());
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
}

TEST_CASE("symmetry preconditions") {
    CHECK_THROWS_AS(SampleGrid::make({{0.0, 1.0}}, {2}, true), GridError);
    CHECK_THROWS_AS(SampleGrid::make({{-1.0, 1.0}}, {2}, true), GridError);
    CHECK_THROWS_AS(SampleGrid::make({{1.0, -1.0}}, {11}, false), GridError);
    CHECK_THROWS_AS(SampleGrid::make({{-1.0, 1.0}}, {1}, false), GridError);
}

TEST_CASE("symmetric lattices are exactly closed under negation") {
    const SampleGrid grid = SampleGrid::make({{-3.0, 3.0}, {-2.0, 2.0}}, {31, 21}, true);
    for (std::size_t i = 0; i < grid.size(); i += 7) {
        const auto p = grid.point(i);
        const auto q = grid.point(grid.negate_index(i));
        for (int a = 0; a < grid.dimension(); ++a) {
            CHECK(q[static_cast<std::size_t>(a)] == -p[static_cast<std::size_t>(a)]);
        }
    }
}

TEST_CASE("sublevel of the identity") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr g = builtin("identity_1d");
    const LevelSet set = sublevel(g, grid, 2.0);
    CHECK(set.members.size() == 701);  // -5.00 .. 2.00 inclusive
    CHECK(grid.point(set.members.back())[0] == 2.0);
    CHECK(set.kind == LevelKind::Sublevel);
}

TEST_CASE("empty sublevel is a result, not an error") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr g = builtin("euclid_norm(1)");
    const LevelSet set = sublevel(g, grid, -1.0);
    CHECK(set.members.empty());
}

TEST_CASE("double_well sublevel at the exact lattice minimum") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr g = builtin("double_well");

    // Reference scan over the lattice itself.
    std::vector<double> pt(1);
    double lattice_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        lattice_min = std::min(lattice_min, g.eval(pt));
    }
    // The continuum minimum -1/4 falls strictly between lattice points, so
    // the sublevel at -1/4 is empty while the one at the lattice minimum
    // consists of the points nearest +-1/sqrt(2).
    CHECK(lattice_min > -0.25);
    CHECK(lattice_min < -0.2499);
    CHECK(sublevel(g, grid, -0.25).members.empty());

    const LevelSet at_min = sublevel(g, grid, lattice_min);
    REQUIRE(at_min.members.size() == 2);
    CHECK(grid.point(at_min.members[0])[0] == -0.71);
    CHECK(grid.point(at_min.members[1])[0] == 0.71);
}

TEST_CASE("superlevel examples") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    const FuncExpr identity = builtin("identity_1d");
    CHECK(superlevel(identity, grid, 0.0).members.size() == 501);  // 0.00 .. 5.00

    const FuncExpr norm = builtin("euclid_norm(1)");
    CHECK(superlevel(norm, grid, 0.0).members.size() == grid.size());

    const FuncExpr well = builtin("double_well");
    const LevelSet s12 = superlevel(well, grid, 12.0);
    // Reference enumeration.
    std::vector<std::uint32_t> expected;
    std::vector<double> pt(1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        if (well.eval(pt) >= 12.0) expected.push_back(static_cast<std::uint32_t>(i));
    }
    CHECK(s12.members == expected);
    CHECK(std::fabs(grid.point(s12.members.front())[0] - (-5.0)) == 0.0);
    // x^4 - x^2 = 12 at x = 2, so membership starts at |x| = 2.
    for (const auto m : s12.members) CHECK(std::fabs(grid.point(m)[0]) >= 2.0);
}

TEST_CASE("nesting of level sets") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {201}, true);
    const FuncExpr g = builtin("double_well");
    const std::vector<double> thresholds = {-0.3, -0.1, 0.0, 1.0, 10.0, 700.0};
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        const LevelSet small = sublevel(g, grid, thresholds[i - 1]);
        const LevelSet big = sublevel(g, grid, thresholds[i]);
        CHECK(std::includes(big.members.begin(), big.members.end(), small.members.begin(),
                            small.members.end()));
        const LevelSet sup_small = superlevel(g, grid, thresholds[i]);
        const LevelSet sup_big = superlevel(g, grid, thresholds[i - 1]);
        CHECK(std::includes(sup_big.members.begin(), sup_big.members.end(),
                            sup_small.members.begin(), sup_small.members.end()));
    }
}

TEST_CASE("membership duality under negation") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {501}, true);
    const FuncExpr g = builtin("double_well");
    const FuncExpr ng = g.negate();
    for (const double s : {-0.25, -0.2, 0.0, 0.5, 3.0, 600.0}) {
        CHECK(sublevel(g, grid, s).members == superlevel(ng, grid, -s).members);
    }
}

TEST_CASE("level set csv format") {
    const SampleGrid grid = SampleGrid::make({{-1.0, 1.0}}, {5}, true);
    const FuncExpr g = builtin("identity_1d");
    const LevelSet set = sublevel(g, grid, 0.0);
    std::ostringstream os;
    write_level_set_csv(os, g, set);
    CHECK(os.str() == "x1,g_value\n-1,-1\n-0.5,-0.5\n0,0\n");
}
