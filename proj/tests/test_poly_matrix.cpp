#include <catch_amalgamated.hpp>

#include <random>

#include "roby/parse.hpp"
#include "roby/poly_matrix.hpp"

using namespace roby;

namespace
{

PolyMatrix random_matrix(std::mt19937 &rng, std::size_t r, std::size_t c)
{
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, 3);
    const Poly vars[] = {parse_poly("x"), parse_poly("y"), Poly(1), Poly()};
    PolyMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = Poly(coef(rng)) * vars[pick(rng)];
        }
    }
    return m;
}

} // namespace

TEST_CASE("products and powers", "[matrix]")
{
    const PolyMatrix a{{Poly(), parse_poly("x")}, {parse_poly("y"), Poly()}};
    CHECK(a * a == PolyMatrix::scalar(2, parse_poly("x*y")));
    CHECK(a.pow(0) == PolyMatrix::identity(2));
    CHECK(a.pow(1) == a);
    CHECK(a.pow(4) == PolyMatrix::scalar(2, parse_poly("x^2*y^2")));
    CHECK(is_scalar_multiple_of_identity(a * a).value() == parse_poly("x*y"));
    CHECK_FALSE(is_scalar_multiple_of_identity(a).has_value());
    CHECK_THROWS_AS(PolyMatrix(2, 3).pow(2), input_error);
    CHECK_THROWS_AS(PolyMatrix(2, 3) * PolyMatrix(2, 3), input_error);
}

TEST_CASE("power by squaring agrees with repeated multiplication", "[matrix]")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const PolyMatrix m = random_matrix(rng, 3, 3);
        PolyMatrix slow = PolyMatrix::identity(3);
        for (unsigned k = 1; k <= 5; ++k) {
            slow = slow * m;
            CHECK(m.pow(k) == slow);
        }
    }
}

TEST_CASE("Kronecker product is left-index major and multiplicative", "[matrix]")
{
    const PolyMatrix a{{Poly(1), Poly(2)}, {Poly(3), Poly(4)}};
    const PolyMatrix b{{Poly(), Poly(1)}, {Poly(1), Poly()}};
    const PolyMatrix k = kron(a, b);
    CHECK(k.rows() == 4);
    CHECK(k(0, 1) == Poly(1));
    CHECK(k(0, 3) == Poly(2));
    CHECK(k(3, 0) == Poly(3));
    CHECK(k(2, 3) == Poly(4));

    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const PolyMatrix a1 = random_matrix(rng, 2, 2), a2 = random_matrix(rng, 2, 2);
        const PolyMatrix b1 = random_matrix(rng, 3, 3), b2 = random_matrix(rng, 3, 3);
        CHECK(kron(a1, b1) * kron(a2, b2) == kron(a1 * a2, b1 * b2));
    }
}

TEST_CASE("blocks, substitution and printing", "[matrix]")
{
    const PolyMatrix m{{parse_poly("x"), Poly(1)}, {Poly(), parse_poly("z2 + y")}};
    CHECK(m.block({1}, {1}) == PolyMatrix{{parse_poly("y + z2")}});
    CHECK(m.substitute({{var("z2"), Poly()}})(1, 1) == parse_poly("y"));
    CHECK(m.to_string() == "[[x, 1], [0, y + z2]]");
    const auto d = first_difference(m, m.substitute({{var("z2"), Poly()}}));
    REQUIRE(d.has_value());
    CHECK(*d == std::make_pair<std::size_t, std::size_t>(1, 1));
    CHECK(m.nonzeros() == 3);
}
