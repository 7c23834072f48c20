#include <catch_amalgamated.hpp>

#include "roby/surface_numerics.hpp"

using namespace roby;

TEST_CASE("Kunneth cohomology on P1 x P1", "[surfnum]")
{
    CHECK(p1xp1_cohomology(0, 0) == Cohomology{1, 0, 0});
    CHECK(p1xp1_cohomology(0, -3) == Cohomology{0, 2, 0});
    CHECK(p1xp1_cohomology(-2, -2) == Cohomology{0, 0, 1});
    CHECK(p1xp1_cohomology(-1, 5) == Cohomology{0, 0, 0});
}

TEST_CASE("Serre duality and Riemann-Roch on the quadric", "[surfnum]")
{
    for (long a = -6; a <= 6; ++a) {
        for (long b = -6; b <= 6; ++b) {
            const Cohomology c = p1xp1_cohomology(a, b);
            CHECK(c.h2 == p1xp1_cohomology(-2 - a, -2 - b).h0);
            CHECK(c.h1 == p1xp1_cohomology(-2 - a, -2 - b).h1);
            CHECK(c.euler() == (a + 1) * (b + 1));
        }
    }
}

TEST_CASE("h1 table of E_s", "[surfnum]")
{
    const auto t2 = quadric_h1_table(2);
    CHECK(t2.at(-1) == 0);
    CHECK(t2.at(0) == 2);
    CHECK(t2.at(1) == 2);
    CHECK(t2.at(2) == 0);
    const auto t3 = quadric_h1_table(3);
    CHECK(t3.at(0) == 4);
    CHECK(t3.at(1) == 6);
    CHECK(t3.at(2) == 6);
    CHECK(t3.at(3) == 4);
    CHECK(t3.at(4) == 0);
    for (long s = 2; s <= 6; ++s) {
        for (const auto &[k, v] : quadric_h1_table(s)) {
            CHECK(v == quadric_h1_closed_form(s, k));
        }
    }
    CHECK_THROWS_AS(quadric_h1_table(1), input_error);
}

TEST_CASE("delta-Ulrich classification", "[surfnum]")
{
    CHECK(quadric_delta_ulrich_test(1, 0) == UlrichClass::ulrich);
    CHECK(quadric_delta_ulrich_test(0, 1) == UlrichClass::ulrich);
    CHECK(quadric_delta_ulrich_test(2, -1) == UlrichClass::delta_ulrich);
    CHECK(p1xp1_cohomology(2, -1).h0 == 0);
    CHECK(quadric_delta_ulrich_test(1, 1) == UlrichClass::not_delta_ulrich);
    // Down-twists of every delta-Ulrich bundle have no sections.
    for (long a = -6; a <= 6; ++a) {
        for (long k = 1; k <= 8; ++k) {
            CHECK(p1xp1_cohomology(a - k, 1 - a - k).h0 == 0);
        }
    }
}

TEST_CASE("WLP inequalities", "[surfnum]")
{
    CHECK(wlp_check({{-3, 0}, {-2, 2}, {-1, 2}, {0, 0}}).passed());
    CHECK(wlp_check({}).passed());
    const WlpReport up = wlp_check({{-3, 1}, {-2, 2}, {-1, 3}, {0, 4}});
    CHECK(up.increasing_below);
    CHECK_FALSE(up.decreasing_above);
    CHECK_FALSE(up.passed());
    for (long a = -6; a <= 6; ++a) {
        CHECK(wlp_check(quadric_h1_twists(a, 1 - a, -10, 10)).passed());
    }
}

TEST_CASE("monad shapes", "[surfnum]")
{
    CHECK(monad_shape({1, 2, 0}) == MonadShape{0, 2, 0, 2});
    CHECK(monad_shape({1, 2, 2}) == MonadShape{2, 6, 2, 0});
    CHECK(monad_shape({2, 1, 1}) == MonadShape{1, 4, 1, 1});
    CHECK_THROWS_AS(monad_shape({0, 1, 0}), input_error);
}

TEST_CASE("Euler characteristic of tensor products", "[surfnum]")
{
    CHECK(ec_tensor(1, 1, 2) == 8);
    CHECK(ec_tensor(-3, 1, 1) == 0);
    CHECK(ec_tensor(-6, 2, 1) == 0);
    CHECK_THROWS_AS(ec_tensor(0, 0, 1), input_error);
}

TEST_CASE("beta recursion", "[surfnum]")
{
    const auto b1 = beta_sequence(rational(1), 5);
    for (const auto &b : b1) {
        CHECK(b == rational(1));
    }
    const auto b0 = beta_sequence(rational(0), 3);
    CHECK(b0 == std::vector<rational>{rational(0), rational(3, 4), rational(15, 16), rational(63, 64)});
    CHECK(beta_sequence(rational(-3), 2)[2] == rational(3, 4));
    for (long m = 0; m <= 10; ++m) {
        const rational b = beta_sequence(rational(-7, 3), m)[m];
        CHECK(b == beta_closed_form(rational(-7, 3), m));
        if (m > 0) {
            CHECK(b > beta_sequence(rational(-7, 3), m)[m - 1]);
        }
    }
    CHECK_THROWS_AS(beta_sequence(rational(0), -1), input_error);
}
