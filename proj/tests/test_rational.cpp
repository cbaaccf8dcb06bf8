#include <catch2/catch_amalgamated.hpp>

#include "subsetlab/rational.hpp"

using namespace subsetlab;

TEST_CASE("rationals are stored reduced with positive denominators") {
    REQUIRE(Rational(2, 4) == Rational(1, 2));
    REQUIRE(Rational(-2, 4).str() == "-1/2");
    REQUIRE(Rational(2, -4).str() == "-1/2");
    REQUIRE(Rational(0, 5).str() == "0/1");
    REQUIRE_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("parsing accepts a/b and bare integers") {
    REQUIRE(Rational::parse("3/4") == Rational(3, 4));
    REQUIRE(Rational::parse("2/4") == Rational(1, 2));
    REQUIRE(Rational::parse("1") == Rational(1, 1));
    REQUIRE(Rational::parse("-5/10").str() == "-1/2");
    REQUIRE_THROWS_AS(Rational::parse("a/b"), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
}

TEST_CASE("arithmetic is exact") {
    REQUIRE(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    REQUIRE(Rational(1, 2) - Rational(2, 3) == Rational(-1, 6));
    REQUIRE(Rational(3, 4) * Rational(2, 9) == Rational(1, 6));
    REQUIRE(Rational(1, 2) / Rational(1, 4) == Rational(2, 1));
    REQUIRE(Rational(-1, 6).abs() == Rational(1, 6));
    REQUIRE_THROWS_AS(Rational(1, 2) / Rational(0, 1), std::invalid_argument);
}

TEST_CASE("comparison is by value") {
    REQUIRE(Rational(1, 3) < Rational(1, 2));
    REQUIRE(Rational(2, 3) > Rational(1, 2));
    REQUIRE(Rational(1, 2) <= Rational(2, 4));
    REQUIRE(Rational(1, 1).in_unit_interval());
    REQUIRE_FALSE(Rational(3, 2).in_unit_interval());
    REQUIRE_FALSE(Rational(-1, 2).in_unit_interval());
}

TEST_CASE("overflow raises instead of wrapping") {
    const Rational big(std::int64_t{1} << 40, 1);
    REQUIRE_THROWS_AS(big * big, std::overflow_error);
}

namespace {

// independent cardinality oracle: |F_n| = 1 + sum of totients
std::uint64_t totient(std::uint64_t v) {
    std::uint64_t result = v;
    for (std::uint64_t p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            while (v % p == 0) v /= p;
            result -= result / p;
        }
    }
    if (v > 1) result -= result / v;
    return result;
}

std::uint64_t farey_size(int order) {
    std::uint64_t size = 1;
    for (int k = 1; k <= order; ++k) size += totient(static_cast<std::uint64_t>(k));
    return size;
}

}  // namespace

TEST_CASE("farey sequences") {
    REQUIRE(farey_sequence(1) == std::vector<Rational>{Rational(0, 1), Rational(1, 1)});
    REQUIRE(farey_sequence(2) == std::vector<Rational>{Rational(0, 1), Rational(1, 2), Rational(1, 1)});
    REQUIRE(farey_sequence(3) == std::vector<Rational>{Rational(0, 1), Rational(1, 3), Rational(1, 2),
                                                       Rational(2, 3), Rational(1, 1)});
    REQUIRE_THROWS_AS(farey_sequence(0), std::invalid_argument);

    for (int order : {4, 7, 16, 32}) {
        const auto grid = farey_sequence(order);
        REQUIRE(grid.size() == farey_size(order));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            REQUIRE(grid[i].denominator() <= order);
            REQUIRE(grid[i].in_unit_interval());
            if (i) REQUIRE(grid[i - 1] < grid[i]);
        }
    }
}
