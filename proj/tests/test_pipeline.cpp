#include <catch_amalgamated.hpp>

#include "roby/parse.hpp"
#include "roby/pipeline.hpp"

using namespace roby;

namespace
{

const std::map<var_id, Poly> &coordinate_line()
{
    static const std::map<var_id, Poly> line{{var("z2"), Poly()}};
    return line;
}

// Seed for z^3 = x^3 + y^3 over Q(zeta_3): B = the cover itself with the
// 3x3 factorization x^3 + y^3 = (x + y)(x + w y)(x + w^2 y), split along the
// three conjugates z -> w^i z.
GradedRobyModule cubic_seed(const FreeAlgebra &a_line)
{
    const CycScalar w = make_root(3);
    const Poly x = parse_poly("x"), y = parse_poly("y");
    const PolyMatrix bz{{Poly(), Poly(), x + Poly(w * w) * y}, {x + y, Poly(), Poly()}, {Poly(), x + Poly(w) * y, Poly()}};
    SplitEmbedding emb(3, std::vector<std::vector<Poly>>(3, std::vector<Poly>(3)));
    for (unsigned i = 0; i < 3; ++i) {
        emb[0][i][0] = Poly(1);
        emb[1][i][1] = Poly(w.pow(i));
        emb[2][i][2] = Poly(w.pow(2 * i));
    }
    return induce_roby(a_line, split_roby(3), ModuleAction{a_line, {PolyMatrix::identity(3), bz, bz * bz}}, emb);
}

} // namespace

TEST_CASE("decomposition of chi - chi_0 for the quadric", "[pipeline]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y - z2^2");
    const CharPoly chi = char_poly(a);
    const CharPoly chi0 = restrict_char_poly(chi, coordinate_line());
    const auto ms = decompose_difference(chi, chi0, a, coordinate_line());
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].t_exponent == 0);
    CHECK(ms[0].dual_indices == std::vector<std::size_t>{1, 1});
    CHECK(ms[0].coefficients == std::vector<Poly>{parse_poly("-z2"), parse_poly("z2")});
    CHECK(ms[0].value(chi.dual, chi.t) == chi.poly - chi0.poly);
}

TEST_CASE("ungraded decomposition puts the coefficient on the last factor", "[pipeline]")
{
    FreeAlgebra::spec s;
    s.basis = {"1", "u"};
    s.dual = {"U0", "U1"};
    s.constants[{0, 0, 0}] = Poly(1);
    s.constants[{0, 1, 1}] = Poly(1);
    s.constants[{1, 1, 0}] = parse_poly("x*y + z2^2");
    const FreeAlgebra a(std::move(s));
    REQUIRE_FALSE(a.graded());
    const CharPoly chi = char_poly(a);
    const auto ms = decompose_difference(chi, restrict_char_poly(chi, coordinate_line()), a, coordinate_line());
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].coefficients == std::vector<Poly>{Poly(1), parse_poly("-z2^2")});
}

TEST_CASE("reindexing moves the line-ideal factor last", "[pipeline]")
{
    MonomialSpec m{0, {parse_poly("z2"), parse_poly("x")}, {0, 1}};
    reindex_line_factor(m, coordinate_line());
    CHECK(m.coefficients.back() == parse_poly("z2"));
    CHECK(m.dual_indices == std::vector<std::size_t>{1, 0});
    MonomialSpec none{0, {parse_poly("y"), parse_poly("x")}, {0, 1}};
    CHECK_THROWS_AS(reindex_line_factor(none, coordinate_line()), verification_error);
}

TEST_CASE("quadric cover pipeline", "[pipeline]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y - z2^2");
    const FreeAlgebra a_line = a.substituted(coordinate_line());
    const GradedRobyModule seed = matrix_factorization_seed(a_line, parse_poly("x"), parse_poly("y"));
    const PipelineResult r = run_pipeline({a, coordinate_line(), seed});
    CHECK(r.passed());
    CHECK(r.assembly.dim() == 8);
    CHECK(r.assembly.factors == std::vector<std::size_t>{4, 2});
    CHECK(r.xi == CycScalar(-1));
    CHECK_FALSE(r.ungraded);
    for (const auto &e : r.degree_bookkeeping) {
        CHECK(e.matches());
    }
    REQUIRE(r.morphism_line.has_value());
    CHECK(r.splitting->twists == std::vector<int>(8, 0));
    // Unrestricted, the wrap-around entries -z2 survive and the filtration breaks.
    CHECK_FALSE(verify_filtered_pseudo(*r.morphism, r.filtration).passed());
    // C(1) = I.
    CHECK(r.morphism->matrices[0] == PolyMatrix::identity(8));
}

TEST_CASE("pulled-back cover needs no monomials", "[pipeline]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y");
    const std::map<var_id, Poly> line{{var("z2"), Poly()}, {var("z3"), Poly()}};
    const GradedRobyModule seed = matrix_factorization_seed(a, parse_poly("x*y"), Poly(1));
    const PipelineResult r = run_pipeline({a, line, seed});
    CHECK(r.passed());
    CHECK(r.monomials.empty());
    CHECK(r.assembly.dim() == 4);
    CHECK(r.assembly.actions == seed.actions);
}

TEST_CASE("split seed over a totally split double cover", "[pipeline]")
{
    // z^2 = x^2 + z2*y: on the line z = +-x.
    const FreeAlgebra a = monogenic_algebra("z^2 - x^2 - z2*y");
    const FreeAlgebra a_line = a.substituted(coordinate_line());
    const GradedRobyModule seed = split_seed(a_line, {{Poly(1), Poly(1)}, {parse_poly("x"), parse_poly("-x")}});
    CHECK(seed.dim() == 2);
    const PipelineResult r = run_pipeline({a, coordinate_line(), seed});
    CHECK(r.passed());
    CHECK(r.assembly.dim() == 4);
}

TEST_CASE("cubic cover", "[pipeline]")
{
    const FreeAlgebra pulled = monogenic_algebra("z^3 - x^3 - y^3");
    const GradedRobyModule seed = cubic_seed(pulled);
    CHECK(seed.dim() == 9);
    const PipelineResult r0 = run_pipeline({pulled, coordinate_line(), seed});
    CHECK(r0.passed());
    CHECK(r0.assembly.dim() == 9);

    // A seed whose target is x^3 + y^3 instead of chi_line is rejected.
    const auto y = std::vector<var_id>{var("yy1"), var("yy2")};
    const GradedRobyModule wrong = twisted_tensor(monomial_roby(HomForm{parse_poly("yy1^3"), y, 3}),
                                                  monomial_roby(HomForm{parse_poly("yy2^3"), y, 3}), make_root(3));
    CHECK(wrong.dim() == 9);
    CHECK_THROWS_AS(run_pipeline({pulled, coordinate_line(), wrong}), input_error);
}

TEST_CASE("corrupted seeds are input errors", "[pipeline]")
{
    const FreeAlgebra a = monogenic_algebra("z^2 - x*y - z2^2");
    const FreeAlgebra a_line = a.substituted(coordinate_line());
    GradedRobyModule seed = matrix_factorization_seed(a_line, parse_poly("x"), parse_poly("y"));
    seed.actions[1](0, 2) += Poly(1);
    CHECK_THROWS_AS(run_pipeline({a, coordinate_line(), seed}), input_error);
    CHECK_THROWS_AS(matrix_factorization_seed(a_line, parse_poly("x"), parse_poly("x")), input_error);
}
