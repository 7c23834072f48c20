#include <catch_amalgamated.hpp>

#include <random>

#include "roby/parse.hpp"
#include "roby/pipeline.hpp"
#include "roby/roby_module.hpp"

using namespace roby;

namespace
{

std::vector<var_id> vars(std::initializer_list<const char *> names)
{
    std::vector<var_id> v;
    for (const char *n : names) {
        v.push_back(var(n));
    }
    return v;
}

// Triple product written out entrywise, independent of PolyMatrix::pow.
PolyMatrix naive_cube(const PolyMatrix &m)
{
    const std::size_t n = m.rows();
    PolyMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Poly s;
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    s += m(i, k) * m(k, l) * m(l, j);
                }
            }
            r(i, j) = s;
        }
    }
    return r;
}

HomForm form(const char *p, std::vector<var_id> args)
{
    const Poly f = parse_poly(p);
    return HomForm{f, args, static_cast<unsigned>(f.degree_in(args))};
}

} // namespace

TEST_CASE("monomial module of y1*y2", "[roby]")
{
    const auto y = vars({"y1", "y2"});
    const GradedRobyModule m = monomial_roby(form("y1*y2", y));
    CHECK(m.dim() == 2);
    CHECK(m.actions[0] == PolyMatrix{{Poly(), Poly()}, {Poly(1), Poly()}});
    CHECK(m.actions[1] == PolyMatrix{{Poly(), Poly(1)}, {Poly(), Poly()}});
    CHECK(m.grading == std::vector<unsigned>{1, 0});
    const RobyReport r = verify_roby(m);
    CHECK(r.passed());
    CHECK(m.generic_action().pow(2) == PolyMatrix::scalar(2, parse_poly("y1*y2")));
}

TEST_CASE("monomial modules of y1^2 and y1*y2*y3", "[roby]")
{
    const GradedRobyModule sq = monomial_roby(form("y1^2", vars({"y1"})));
    CHECK(sq.actions[0] == PolyMatrix{{Poly(), Poly(1)}, {Poly(1), Poly()}});
    CHECK(verify_roby(sq).passed());

    const auto y = vars({"y1", "y2", "y3"});
    const GradedRobyModule cube = monomial_roby(form("5*y1*y2*y3", y));
    CHECK(cube.dim() == 3);
    CHECK(naive_cube(cube.generic_action()) == PolyMatrix::scalar(3, parse_poly("5*y1*y2*y3")));
    CHECK(verify_roby(cube).passed());

    CHECK_THROWS_AS(monomial_roby(form("y1*y2 + y3^2", y)), input_error);
}

TEST_CASE("monomial characteristic-polynomial module", "[roby]")
{
    const auto g = vars({"G0", "G1"});
    MonomialSpec m{0, {parse_poly("-z2"), parse_poly("z2")}, {1, 1}};
    const GradedRobyModule mod = monomial_charpoly_roby(m, 2, g);
    REQUIRE(mod.t_action.has_value());
    CHECK(mod.t_action->is_zero());
    // Hand expansion: psi(a + b z, rT) = [[0, b z2], [-b z2, 0]], square -z2^2 b^2 I.
    CHECK(mod.generic_action() == PolyMatrix{{Poly(), parse_poly("G1*z2")}, {parse_poly("-G1*z2"), Poly()}});
    CHECK(mod.target_poly() == parse_poly("-z2^2*G1^2"));
    CHECK(verify_roby(mod).passed());

    MonomialSpec with_t{1, {parse_poly("x")}, {0}};
    const GradedRobyModule mt = monomial_charpoly_roby(with_t, 2, g);
    CHECK(mt.target_poly() == parse_poly("t*x*G0"));
    CHECK(verify_roby(mt).passed());

    MonomialSpec zero{0, {Poly(), Poly(3)}, {0, 1}};
    const GradedRobyModule mz = monomial_charpoly_roby(zero, 2, g);
    CHECK(mz.target_poly().is_zero());
    CHECK(verify_roby(mz).passed());

    CHECK_THROWS_AS(monomial_charpoly_roby(MonomialSpec{2, {}, {}}, 2, g), input_error);
    CHECK_THROWS_AS(monomial_charpoly_roby(MonomialSpec{0, {Poly(1)}, {0}}, 2, g), input_error);
    CHECK_THROWS_AS(monomial_charpoly_roby(MonomialSpec{0, {Poly(1), Poly(1)}, {0, 5}}, 2, g), input_error);
}

TEST_CASE("split module", "[roby]")
{
    const GradedRobyModule s2 = split_roby(2);
    CHECK(*s2.t_action == PolyMatrix{{Poly(), Poly(1)}, {Poly(1), Poly()}});
    CHECK(s2.generic_action().pow(2) == PolyMatrix::scalar(2, parse_poly("(t - x1)*(t - x2)")));
    const GradedRobyModule s3 = split_roby(3);
    CHECK(naive_cube(s3.generic_action()) == PolyMatrix::scalar(3, parse_poly("(t - x1)*(t - x2)*(t - x3)")));
    for (std::size_t d = 2; d <= 4; ++d) {
        const GradedRobyModule s = split_roby(d);
        CHECK(verify_roby(s).passed());
        const CharMorphism c = char_morphism(s, split_algebra(d));
        for (std::size_t i = 0; i < d; ++i) {
            PolyMatrix unit(d, d);
            unit(i, i) = Poly(1);
            CHECK(c.matrices[i] == unit);
        }
        CHECK(verify_filtered_pseudo(c, Filtration::trivial(d)).passed());
    }
    CHECK_THROWS_AS(split_roby(1), input_error);
}

TEST_CASE("twisted tensor of two squares is the rank-2 Clifford module", "[roby]")
{
    const auto y = vars({"y1", "y2"});
    const GradedRobyModule a = monomial_roby(HomForm{parse_poly("y1^2"), y, 2});
    const GradedRobyModule b = monomial_roby(HomForm{parse_poly("y2^2"), y, 2});
    const GradedRobyModule c = twisted_tensor(a, b, CycScalar(-1));
    CHECK(c.dim() == 4);
    CHECK(c.grading == std::vector<unsigned>{0, 1, 1, 0});
    // Hand check: the two actions anticommute and square to y_i^2.
    CHECK(c.actions[0] * c.actions[0] == PolyMatrix::identity(4));
    CHECK(c.actions[1] * c.actions[1] == PolyMatrix::identity(4));
    CHECK((c.actions[0] * c.actions[1] + c.actions[1] * c.actions[0]).is_zero());
    CHECK(verify_roby(c).passed());
    CHECK(c.target_poly() == parse_poly("y1^2 + y2^2"));

    const GradedRobyModule bad = twisted_tensor(a, b, CycScalar(1), allow_nonprimitive_twist);
    const RobyReport r = verify_roby(bad);
    CHECK_FALSE(r.passed());
    CHECK(r.graded);
    CHECK_FALSE(r.identity);
    REQUIRE(r.failure.has_value());
    CHECK(r.failure->check == "roby-identity");

    CHECK_THROWS_AS(twisted_tensor(a, b, CycScalar(1)), input_error);
    CHECK_THROWS_AS(twisted_tensor(a, monomial_roby(HomForm{parse_poly("y1^3"), y, 3}), CycScalar(-1)), input_error);
}

TEST_CASE("twisted tensor of cubes over Q(zeta_3)", "[roby]")
{
    const auto y = vars({"y1", "y2"});
    const GradedRobyModule a = monomial_roby(HomForm{parse_poly("y1^3"), y, 3});
    const GradedRobyModule b = monomial_roby(HomForm{parse_poly("y2^3"), y, 3});
    const GradedRobyModule c = twisted_tensor(a, b, make_root(3));
    CHECK(c.dim() == 9);
    CHECK(naive_cube(c.generic_action()) == PolyMatrix::scalar(9, parse_poly("y1^3 + y2^3")));
    CHECK(verify_roby(c).passed());
    CHECK_FALSE(verify_roby(twisted_tensor(a, b, CycScalar(1), allow_nonprimitive_twist)).passed());
}

TEST_CASE("tensoring with the rank-one zero module", "[roby]")
{
    const auto y = vars({"y1", "y2"});
    const GradedRobyModule a = monomial_roby(HomForm{parse_poly("y1*y2^2"), y, 3});
    const GradedRobyModule z = zero_roby_module(3, y, false);
    CHECK(verify_roby(z).passed());
    const GradedRobyModule r = twisted_tensor(a, z, make_root(3));
    const GradedRobyModule l = twisted_tensor(z, a, make_root(3));
    CHECK(r.actions == a.actions);
    CHECK(l.actions == a.actions);
    CHECK(r.grading == a.grading);
    CHECK(r.target_poly() == a.target_poly());
}

TEST_CASE("twisted tensor soundness on random monomial pairs", "[roby]")
{
    std::mt19937 rng(1234);
    const auto y = vars({"y1", "y2", "y3"});
    int checked = 0;
    bool some_untwisted_failure = false;
    for (unsigned e = 2; e <= 4; ++e) {
        for (int trial = 0; trial < 6; ++trial) {
            std::uniform_int_distribution<std::size_t> idx(0, y.size() - 1);
            std::uniform_int_distribution<int> coef(1, 3);
            auto random_module = [&] {
                Poly f(coef(rng));
                for (unsigned k = 0; k < e; ++k) {
                    f *= Poly::variable(y[idx(rng)]);
                }
                return monomial_roby(HomForm{f, y, e});
            };
            GradedRobyModule m = random_module();
            GradedRobyModule n = random_module();
            if (m.dim() * n.dim() > 64) {
                continue;
            }
            const GradedRobyModule t = twisted_tensor(m, n, make_root(e));
            const RobyReport r = verify_roby(t);
            CHECK(r.passed());
            CHECK(t.target_poly() == m.target_poly() + n.target_poly());
            // Sum grading, entrywise.
            for (std::size_t i = 0; i < m.dim(); ++i) {
                for (std::size_t j = 0; j < n.dim(); ++j) {
                    CHECK(t.grading[i * n.dim() + j] == (m.grading[i] + n.grading[j]) % e);
                }
            }
            ++checked;
            if (e == 2 && !verify_roby(twisted_tensor(m, n, CycScalar(1), allow_nonprimitive_twist)).passed()) {
                some_untwisted_failure = true;
            }
        }
    }
    CHECK(checked >= 12);
    CHECK(some_untwisted_failure);
}

TEST_CASE("verify_roby reports gradedness and freshness failures", "[roby]")
{
    const auto y = vars({"y1"});
    GradedRobyModule m = monomial_roby(HomForm{parse_poly("y1^2"), y, 2});
    m.grading = {0, 0};
    RobyReport r = verify_roby(m);
    CHECK_FALSE(r.graded);
    CHECK(r.identity);

    GradedRobyModule f = monomial_roby(HomForm{parse_poly("y1^2"), y, 2});
    f.actions[0](1, 0) = parse_poly("y1");
    CHECK_FALSE(verify_roby(f).fresh_arguments);

    GradedRobyModule zero = zero_roby_module(2, y, false);
    CHECK(verify_roby(zero).passed());
}

TEST_CASE("characteristic morphism of a non-algebra example", "[roby]")
{
    const FreeAlgebra a = split_algebra(2);
    CharMorphism c;
    c.chi = char_poly(a);
    c.source = a;
    c.matrices = {PolyMatrix{{Poly(1), parse_poly("a")}, {Poly(), Poly()}},
                  PolyMatrix{{Poly(), parse_poly("b")}, {Poly(), Poly(1)}}};
    const CharMorphismReport r = verify_char_morphism(c, c.chi);
    CHECK(r.passed());
    REQUIRE(r.algebra_morphism.has_value());
    CHECK_FALSE(r.algebra_morphism->multiplicative);
    CHECK_FALSE(verify_filtered_pseudo(c, Filtration::trivial(2)).graded_morphism);

    // Both idempotents sent to the identity: C(a) = (x1 + x2) I and
    // chi(C(a), a) = x2 * x1 * I != 0.
    CharMorphism bad = c;
    bad.matrices = {PolyMatrix::identity(2), PolyMatrix::identity(2)};
    const CharMorphismReport rb = verify_char_morphism(bad, bad.chi);
    CHECK_FALSE(rb.passed());
    REQUIRE(rb.failure.has_value());
    CHECK(parse_poly(rb.failure->actual) == parse_poly("x1*x2"));

    // The regular representation is an algebra morphism.
    const FreeAlgebra q = monogenic_algebra("z^3 - x*z - y");
    CharMorphism reg;
    reg.chi = char_poly(q);
    reg.source = q;
    for (std::size_t j = 0; j < q.rank(); ++j) {
        PolyMatrix m(q.rank(), q.rank());
        for (std::size_t k = 0; k < q.rank(); ++k) {
            for (std::size_t i = 0; i < q.rank(); ++i) {
                m(i, k) = q.c(j, k, i);
            }
        }
        reg.matrices.push_back(m);
    }
    const CharMorphismReport rr = verify_char_morphism(reg);
    CHECK(rr.passed());
    CHECK(rr.algebra_morphism->passed());
}

TEST_CASE("char_morphism needs a characteristic-polynomial target", "[roby]")
{
    const GradedRobyModule m = monomial_roby(HomForm{parse_poly("y1^2"), vars({"y1"}), 2});
    CHECK_THROWS_AS(char_morphism(m), input_error);
}

TEST_CASE("C preserves subspaces preserved by the actions", "[roby]")
{
    // split (x) monomial module whose wrap-around coefficient vanishes: every
    // span{eps_k, .., eps_d} is invariant on the monomial factor.
    for (std::size_t d = 2; d <= 3; ++d) {
        const FreeAlgebra a = split_algebra(d);
        std::vector<Poly> coeffs(d, parse_poly("u + 2"));
        coeffs.back() = Poly();
        std::vector<std::size_t> idx(d);
        for (std::size_t k = 0; k < d; ++k) {
            idx[k] = k % d;
        }
        const GradedRobyModule mono = monomial_charpoly_roby(MonomialSpec{0, coeffs, idx}, d, a.dual());
        const GradedRobyModule t = twisted_tensor(split_roby(d), mono, make_root(static_cast<unsigned>(d)));
        REQUIRE(verify_roby(t).passed());
        const CharMorphism c = char_morphism(t, a);
        CHECK(verify_char_morphism(c).passed());
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<std::size_t> sub;
            for (std::size_t s = 0; s < d; ++s) {
                for (std::size_t r = k; r < d; ++r) {
                    sub.push_back(s * d + r);
                }
            }
            std::vector<PolyMatrix> acts = t.actions;
            acts.push_back(*t.t_action);
            REQUIRE(preserves_subspace(acts, sub));
            CHECK(preserves_subspace(c.matrices, sub));
        }
    }
}

TEST_CASE("induction from the split module", "[roby]")
{
    // B = O and the identity embedding reproduce the split module itself.
    for (std::size_t d = 2; d <= 3; ++d) {
        const FreeAlgebra a = split_algebra(d);
        SplitEmbedding emb(d, std::vector<std::vector<Poly>>(d, std::vector<Poly>(1)));
        for (std::size_t j = 0; j < d; ++j) {
            emb[j][j][0] = Poly(1);
        }
        const GradedRobyModule m =
            induce_roby(a, split_roby(d), ModuleAction{base_ring_algebra(), {PolyMatrix::identity(1)}}, emb);
        const GradedRobyModule s = split_roby(d);
        CHECK(m.actions == s.actions);
        CHECK(*m.t_action == *s.t_action);
        CHECK(m.target_poly() == s.target_poly());
    }

    // Double cover z^2 = xy with the matrix factorization [[0, x], [y, 0]].
    const FreeAlgebra q = monogenic_algebra("z^2 - x*y");
    const GradedRobyModule seed = matrix_factorization_seed(q, parse_poly("x"), parse_poly("y"));
    CHECK(seed.dim() == 4);
    CHECK(verify_roby(seed).passed());
    // Hand value of the 4x4 Roby identity: (r - a)^2 - b^2 xy.
    CHECK(seed.target_poly() == parse_poly("(t - G0)^2 - G1^2*x*y"));
    const PolyMatrix bp{{Poly(), parse_poly("x")}, {parse_poly("y"), Poly()}};
    PolyMatrix tz(4, 4);
    const PolyMatrix zero(2, 2);
    const CharMorphism c = char_morphism(seed, q);
    CHECK(c.matrices[0] == PolyMatrix::identity(4));
    CHECK(c.matrices[1].block({0, 1}, {0, 1}) == -bp);
    CHECK(c.matrices[1].block({2, 3}, {2, 3}) == bp);
    CHECK(c.matrices[1].block({0, 1}, {2, 3}) == zero);
    CHECK(verify_char_morphism(c).algebra_morphism->passed());

    // A zero module action is not a B-module.
    CHECK_THROWS_AS(induce_roby(q, split_roby(2), ModuleAction{q, {PolyMatrix(2, 2), PolyMatrix(2, 2)}},
                                SplitEmbedding{{{Poly(1), Poly()}, {Poly(1), Poly()}},
                                               {{Poly(), Poly(-1)}, {Poly(), Poly(1)}}}),
                    input_error);
}

TEST_CASE("filtrations", "[roby]")
{
    const Filtration f = tensor(Filtration::trivial(2), Filtration::monomial(3));
    CHECK(f.level == std::vector<int>{2, 1, 0, 2, 1, 0});
    const auto flags = f.flags();
    REQUIRE(flags.size() == 3);
    CHECK(flags[0] == std::vector<std::size_t>{2, 5});
    CHECK(flags[2].size() == 6);
    CHECK(f.quotient_blocks()[1] == std::vector<std::size_t>{1, 4});
}
