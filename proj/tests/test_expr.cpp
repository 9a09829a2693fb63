#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "komparo/expr.hpp"
#include "komparo/grid.hpp"

using namespace komparo;

namespace {

double eval1(const FuncExpr& f, double x) { return f.eval(std::vector<double>{x}); }

}  // namespace

TEST_CASE("grammar basics") {
    const FuncExpr f = parse("x1^2 + x2^2", 2);
    CHECK(f.eval(std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(f.eval(std::vector<double>{1.0, 2.0}) == 5.0);
    CHECK(f.dimension() == 2);
}

TEST_CASE("piecewise reproduces the step-quadratic fixture") {
    const FuncExpr f = parse("piecewise { x1 <= 0 : 1 ; else : x1^2 }", 1);
    CHECK(eval1(f, -1.0) == 1.0);
    CHECK(eval1(f, 0.0) == 1.0);
    CHECK(eval1(f, 2.0) == 4.0);
    const FuncExpr b = builtin("exmupper_f");
    CHECK(eval1(b, -1.0) == 1.0);
    CHECK(eval1(b, 2.0) == 4.0);
}

TEST_CASE("unbound variables are rejected") {
    CHECK_THROWS_AS(parse("x3 + 1", 2), ParseError);
    CHECK_THROWS_AS(parse("x1 + x2", 1), ParseError);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse("x1 + * 2", 1);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("piecewise requires the default branch") {
    CHECK_THROWS_AS(parse("piecewise { x1 <= 0 : 1 ; }", 1), ParseError);
    CHECK_THROWS_AS(parse("piecewise { else : 1 }", 1), ParseError);
}

TEST_CASE("guards support conjunction and every comparison operator") {
    const FuncExpr f = parse("piecewise { x1 >= 0 && x1 < 1 : x1 ; x1 == 2 : 7 ; else : 0 }", 1);
    CHECK(eval1(f, 0.5) == 0.5);
    CHECK(eval1(f, 2.0) == 7.0);
    CHECK(eval1(f, 1.5) == 0.0);
    CHECK(eval1(f, -3.0) == 0.0);
}

TEST_CASE("builtin catalog") {
    const FuncExpr identity = builtin("identity_1d");
    CHECK(eval1(identity, 3.25) == 3.25);

    const FuncExpr norm2 = builtin("euclid_norm(2)");
    CHECK(norm2.eval(std::vector<double>{3.0, 4.0}) == 5.0);

    CHECK_THROWS_AS(builtin("nope"), ConfigError);
    try {
        builtin("nope");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("double_well") != std::string::npos);
        CHECK(std::string(e.what()).find("sum_squares(d)") != std::string::npos);
    }
}

TEST_CASE("double_well minimum agrees with a dense 1d scan") {
    const FuncExpr f = builtin("double_well");
    // Independent oracle: dense scan of x^4 - x^2 over [-5, 5].
    double best = std::numeric_limits<double>::infinity();
    for (int k = -50000; k <= 50000; ++k) {
        const double x = k * 1e-4;
        best = std::min(best, eval1(f, x));
    }
    CHECK(std::fabs(best - (-0.25)) <= 1e-6);
    CHECK(std::fabs(eval1(f, 1.0 / std::sqrt(2.0)) - (-0.25)) <= 1e-12);
}

TEST_CASE("evaluation errors name the offending subexpression") {
    const FuncExpr div = parse("1 / x1", 1);
    try {
        eval1(div, 0.0);
        FAIL("expected an evaluation error");
    } catch (const EvalError& e) {
        CHECK(e.subexpression == "1 / x1");
    }
    const FuncExpr recip = parse("x1^-1", 1);
    CHECK(eval1(recip, 2.0) == 0.5);
    CHECK_THROWS_AS(eval1(recip, 0.0), EvalError);
}

TEST_CASE("evaluation is deterministic") {
    const FuncExpr f = parse("piecewise { x1 < 0.3 : x1^3 - 2 * x1 ; else : abs(x1) / 7 }", 1);
    for (int k = 0; k < 50; ++k) {
        const double x = -2.0 + 0.13 * k;
        const double a = eval1(f, x);
        const double b = eval1(f, x);
        CHECK(a == b);
    }
}

TEST_CASE("print/parse round trip evaluates identically") {
    const std::vector<std::string> sources = {
        "x1^2 + x2^2",
        "piecewise { x1 <= 0 : 1 ; else : x1^2 }",
        "min(x1, x2, 0.5) * max(x1 - x2, -1.5)",
        "norm(x1, 2 * x2) + abs(x1) / (x2^2 + 1)",
        "1 - 2 - 3 * x1 - (x2 - 4)",
        "piecewise { x1 + x2 <= -0.25 && x2 > 0 : x1 / (x2 + 10) ; else : -2.5 * x1^3 }",
        "(x1 + 1)^4 - x1^-2",
    };
    std::mt19937_64 rng(7);
    for (const auto& src : sources) {
        const FuncExpr e = parse(src, 2);
        const FuncExpr round = parse(e.print(), 2);
        CHECK(round.print() == e.print());
        for (int k = 0; k < 1000; ++k) {
            const double x1 = -4.0 + 8.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const double x2 = -4.0 + 8.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const std::vector<double> pt{x1, x2};
            double a, b;
            bool a_err = false, b_err = false;
            try {
                a = e.eval(pt);
            } catch (const EvalError&) {
                a_err = true;
            }
            try {
                b = round.eval(pt);
            } catch (const EvalError&) {
                b_err = true;
            }
            REQUIRE(a_err == b_err);
            if (!a_err) REQUIRE(a == b);
        }
    }
}

TEST_CASE("fixtures evaluate on every lattice point") {
    const SampleGrid grid = SampleGrid::make({{-5.0, 5.0}}, {1001}, true);
    for (const char* name : {"exmupper_f", "identity_1d", "double_well"}) {
        const FuncExpr f = builtin(name);
        std::vector<double> pt(1);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.fill_point(i, pt);
            CHECK_NOTHROW(f.eval(pt));
        }
    }
}

TEST_CASE("negation is an expression-level wrapper") {
    const FuncExpr g = builtin("identity_1d");
    const FuncExpr ng = g.negate();
    CHECK(eval1(ng, 3.0) == -3.0);
    CHECK(eval1(ng, -0.25) == 0.25);
    const FuncExpr round = parse(ng.print(), 1);
    CHECK(eval1(round, 3.0) == -3.0);
}
