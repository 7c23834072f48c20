#include <catch_amalgamated.hpp>

#include <random>

#include "roby/cyclotomic.hpp"

using namespace roby;

namespace
{

// Random element of Q(zeta_e) with small rational coordinates.
CycScalar random_scalar(std::mt19937 &rng, unsigned e)
{
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::vector<rational> c(e);
    for (auto &q : c) {
        q = rational(num(rng), den(rng));
    }
    return CycScalar(e, c);
}

} // namespace

TEST_CASE("rational arithmetic is exact", "[cyclotomic]")
{
    const CycScalar a(rational(1, 3)), b(rational(1, 6));
    CHECK((a + b) == CycScalar(rational(1, 2)));
    CHECK((a * b).to_string() == "1/18");
    CHECK((a / b) == CycScalar(2));
    CHECK(CycScalar(rational(-4, 6)).to_string() == "-2/3");
    CHECK_THROWS_AS(a / CycScalar(0), zero_division_error);
}

TEST_CASE("roots of unity satisfy their cyclotomic relations", "[cyclotomic]")
{
    const CycScalar z3 = make_root(3);
    CHECK(z3.pow(3).is_one());
    CHECK((CycScalar(1) + z3 + z3 * z3).is_zero());
    CHECK(z3.pow(3).is_rational());

    const CycScalar i = make_root(4);
    CHECK((i * i) == CycScalar(-1));
    CHECK((i * i).order() == 1);

    CHECK(make_root(2) == CycScalar(-1));
    CHECK(is_primitive_root(make_root(5), 5));
    CHECK_FALSE(is_primitive_root(CycScalar(1), 2));
    CHECK_FALSE(is_primitive_root(make_root(3), 6));
    CHECK(is_primitive_root(-make_root(3), 6));
}

TEST_CASE("mixed orders embed into the lcm field", "[cyclotomic]")
{
    const CycScalar z3 = make_root(3), z4 = make_root(4);
    const CycScalar p = z3 * z4; // a primitive 12th root
    CHECK(p.order() == 12);
    CHECK(is_primitive_root(p, 12));
    // zeta_12^4 = zeta_3
    CHECK(p.pow(4) == z3);
    CHECK(make_root(12).pow(3) == z4);
}

TEST_CASE("order cap bounds the common field", "[cyclotomic]")
{
    const unsigned saved = field_order_cap().load();
    field_order_cap().store(10);
    CHECK_THROWS_AS(make_root(3) * make_root(4), incompatible_fields_error);
    // Rationals mix with any order.
    CHECK_NOTHROW(make_root(7) * CycScalar(rational(2, 3)));
    field_order_cap().store(saved);
}

TEST_CASE("inverse via extended Euclid", "[cyclotomic]")
{
    const CycScalar z5 = make_root(5);
    const CycScalar x = CycScalar(1) + z5 * z5;
    CHECK((x * x.inverse()).is_one());
    CHECK_THROWS_AS(CycScalar(5, {rational(0)}).inverse(), zero_division_error);
}

TEST_CASE("printing and parsing round-trip", "[cyclotomic]")
{
    const CycScalar z3 = make_root(3);
    const CycScalar x = CycScalar(rational(1, 2)) - z3 * CycScalar(rational(3, 4));
    const std::string s = x.to_string();
    CHECK(s == "poly(3; 1/2, -3/4)");
    CHECK(CycScalar::parse(s) == x);
    CHECK(CycScalar::parse("-7/21") == CycScalar(rational(-1, 3)));
    CHECK_THROWS_AS(CycScalar::parse("1/0"), zero_division_error);
    CHECK_THROWS_AS(CycScalar::parse("poly(3; 1)"), input_error);
}

TEST_CASE("field axioms on random elements", "[cyclotomic]")
{
    std::mt19937 rng(20240611);
    for (unsigned e : {1u, 3u, 4u, 5u, 8u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const CycScalar a = random_scalar(rng, e), b = random_scalar(rng, e), c = random_scalar(rng, e);
            CHECK((a + b) == (b + a));
            CHECK((a * b) == (b * a));
            CHECK(((a * b) * c) == (a * (b * c)));
            CHECK((a * (b + c)) == (a * b + a * c));
            CHECK((a - a).is_zero());
            if (!a.is_zero()) {
                CHECK((a / a).is_one());
            }
        }
    }
}
