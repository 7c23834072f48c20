#include <catch_amalgamated.hpp>

#include <random>

#include "roby/free_algebra.hpp"

using namespace roby;

namespace
{

// Determinant by cofactor expansion along the first row.
Poly laplace_det(const PolyMatrix &m)
{
    const std::size_t n = m.rows();
    if (n == 0) {
        return Poly(1);
    }
    if (n == 1) {
        return m(0, 0);
    }
    Poly det;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) {
            continue;
        }
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 1; i < n; ++i) {
            rows.push_back(i);
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) {
                cols.push_back(k);
            }
        }
        const Poly minor = laplace_det(m.block(rows, cols));
        det += (j % 2 ? Poly(-1) : Poly(1)) * m(0, j) * minor;
    }
    return det;
}

Poly charpoly_oracle(const PolyMatrix &m, const Poly &t)
{
    return laplace_det(PolyMatrix::scalar(m.rows(), t) - m);
}

Poly from_coeffs(const std::vector<Poly> &c, const Poly &t)
{
    // c_0 is the leading coefficient.
    Poly p;
    for (std::size_t k = 0; k < c.size(); ++k) {
        p += c[k] * t.pow(static_cast<unsigned>(c.size() - 1 - k));
    }
    return p;
}

} // namespace

TEST_CASE("Berkowitz matches cofactor expansion", "[algebra]")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, 3);
    const Poly t = Poly::variable("t");
    const Poly atoms[] = {parse_poly("x"), parse_poly("y"), Poly(1), Poly()};
    for (std::size_t n = 1; n <= 5; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            PolyMatrix m(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) = Poly(coef(rng)) * atoms[pick(rng)];
                }
            }
            CHECK(from_coeffs(berkowitz(m), t) == charpoly_oracle(m, t));
        }
    }
}

TEST_CASE("split algebra has the product characteristic polynomial", "[algebra]")
{
    for (std::size_t d = 2; d <= 4; ++d) {
        const FreeAlgebra a = split_algebra(d);
        Poly expected(1);
        for (std::size_t i = 1; i <= d; ++i) {
            expected *= parse_poly("t - x" + std::to_string(i));
        }
        CHECK(char_poly(a).poly == expected);
        CHECK_FALSE(a.unit_is_first());
        CHECK(cayley_hamilton_check(a).passed);
    }
}

TEST_CASE("monogenic quadric algebra", "[algebra]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y");
    REQUIRE(a.rank() == 2);
    CHECK(a.graded());
    CHECK(a.degrees() == std::vector<int>{0, 1});
    CHECK(a.c(1, 1, 0) == parse_poly("x*y"));
    // Hand value: det [[t - G0, -x*y*G1], [-G1, t - G0]].
    CHECK(char_poly(a).poly == parse_poly("(t - G0)^2 - x*y*G1^2"));
    const PolyMatrix rho = regular_representation(a);
    CHECK(rho == PolyMatrix{{parse_poly("G0"), parse_poly("x*y*G1")}, {parse_poly("G1"), parse_poly("G0")}});
}

TEST_CASE("monogenic characteristic polynomial at z is the defining polynomial", "[algebra]")
{
    for (const char *p : {"z^2 - x*y", "z^3 - x*z - y", "z^4 + x*z^2 - y^3*z + 2", "z^3 - 5"}) {
        const FreeAlgebra a = monogenic_algebra(p);
        std::map<var_id, Poly> at_z;
        for (std::size_t i = 0; i < a.rank(); ++i) {
            at_z[a.dual()[i]] = Poly(i == 1 ? 1 : 0);
        }
        const Poly chi_z = char_poly(a).poly.substitute(at_z).substitute({{var("t"), parse_poly("z")}});
        CHECK(chi_z == parse_poly(p));
        CHECK(char_poly(a).poly == charpoly_oracle(regular_representation(a), Poly::variable("t")));
        CHECK(cayley_hamilton_check(a).passed);
    }
}

TEST_CASE("regular representation columns are products with the basis", "[algebra]")
{
    const FreeAlgebra a = monogenic_algebra("z^3 - x*z - y");
    const PolyMatrix rho = regular_representation(a);
    std::vector<Poly> generic;
    for (var_id v : a.dual()) {
        generic.push_back(Poly::variable(v));
    }
    for (std::size_t j = 0; j < a.rank(); ++j) {
        const auto col = a.multiply(generic, a.basis_vector(j));
        for (std::size_t i = 0; i < a.rank(); ++i) {
            CHECK(rho(i, j) == col[i]);
        }
    }
}

TEST_CASE("invalid algebras are rejected", "[algebra]")
{
    CHECK_THROWS_AS(monogenic_algebra("2*z^2 - x"), input_error);
    CHECK_THROWS_AS(monogenic_algebra("x*y"), input_error);

    FreeAlgebra::spec s;
    s.basis = {"1", "u"};
    s.dual = {"H0", "H1"};
    s.constants[{0, 0, 0}] = Poly(1);
    s.constants[{0, 1, 1}] = Poly(1);
    s.constants[{1, 1, 1}] = Poly(1);
    CHECK_NOTHROW(FreeAlgebra(s));

    auto bad_unit = s;
    bad_unit.constants[{0, 1, 1}] = Poly(2);
    CHECK_THROWS_AS(FreeAlgebra(bad_unit), input_error);

    auto noncommutative = s;
    noncommutative.constants[{1, 0, 1}] = Poly(3);
    CHECK_THROWS_AS(FreeAlgebra(noncommutative), input_error);

    auto reserved = s;
    reserved.constants[{1, 1, 0}] = parse_poly("H0");
    CHECK_THROWS_AS(FreeAlgebra(reserved), input_error);

    auto graded = s;
    graded.degrees = {0, 1};
    CHECK_THROWS_AS(FreeAlgebra(graded), input_error); // u*u = u breaks degree 1 + 1 = 1

    // Non-associative: u^2 = 1 + u with a nonzero extra constant.
    FreeAlgebra::spec na;
    na.basis = {"1", "u", "v"};
    na.dual = {"K0", "K1", "K2"};
    for (std::size_t i = 0; i < 3; ++i) {
        na.constants[{0, i, i}] = Poly(1);
    }
    na.constants[{1, 1, 2}] = Poly(1);
    na.constants[{1, 2, 1}] = Poly(1);
    CHECK_THROWS_AS(FreeAlgebra(na), input_error);
}

TEST_CASE("restriction of the characteristic polynomial", "[algebra]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y - z2^2");
    const CharPoly chi = char_poly(a);
    const CharPoly line = restrict_char_poly(chi, {{var("z2"), Poly()}});
    CHECK(line.poly == parse_poly("(t - G0)^2 - x*y*G1^2"));
    CHECK(line.is_monic());
    CHECK_THROWS_AS(restrict_char_poly(chi, {{var("G0"), Poly()}}), input_error);
    CHECK_THROWS_AS(restrict_char_poly(chi, {{var("t"), Poly()}}), input_error);
}
