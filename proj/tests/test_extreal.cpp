#include <doctest.h>

#include <cmath>
#include <limits>

#include "komparo/extreal.hpp"

using komparo::ExtReal;

TEST_CASE("extended reals are totally ordered with infinities at the ends") {
    const ExtReal lo = ExtReal::neg_inf();
    const ExtReal hi = ExtReal::pos_inf();
    CHECK(lo < ExtReal::finite(-1e300));
    CHECK(ExtReal::finite(-1e300) < ExtReal::finite(0.0));
    CHECK(ExtReal::finite(0.0) < ExtReal::finite(1e300));
    CHECK(ExtReal::finite(1e300) < hi);
    CHECK(lo < hi);
    CHECK(lo == ExtReal::neg_inf());
    CHECK(ExtReal::finite(2.0) == ExtReal::finite(2.0));
    CHECK(ExtReal::finite(2.0) != ExtReal::finite(2.0000001));
}

TEST_CASE("negation swaps the infinities") {
    CHECK(-ExtReal::neg_inf() == ExtReal::pos_inf());
    CHECK(-ExtReal::pos_inf() == ExtReal::neg_inf());
    CHECK(-ExtReal::finite(3.5) == ExtReal::finite(-3.5));
    CHECK(-(-ExtReal::neg_inf()) == ExtReal::neg_inf());
}

TEST_CASE("finite payloads reject non-numbers") {
    CHECK_THROWS_AS(ExtReal::finite(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExtReal::finite(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExtReal::neg_inf().value(), std::logic_error);
}

TEST_CASE("serialized tokens") {
    CHECK(ExtReal::neg_inf().str() == "-inf");
    CHECK(ExtReal::pos_inf().str() == "+inf");
    CHECK(ExtReal::finite(0.25).str() == "0.25");
    CHECK(ExtReal::finite(-2.0).str() == "-2");
    CHECK(std::isinf(ExtReal::pos_inf().as_double()));
}
