#ifndef ROBY_PIPELINE_HPP
#define ROBY_PIPELINE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "free_algebra.hpp"
#include "line_geometry.hpp"
#include "poly_matrix.hpp"
#include "polynomial.hpp"
#include "roby_module.hpp"

namespace roby
{

// ---------------------------------------------------------------------------
// Built-in seeds over the line.

/// Seed for an algebra over k[x,y] that the user certifies as split: the
/// embedding sends gamma_j to sum_i image[j][i] e_i in k[x,y]^{x d}.
inline GradedRobyModule split_seed(const FreeAlgebra &a_line, const std::vector<std::vector<Poly>> &image)
{
    SplitEmbedding emb;
    for (const auto &row : image) {
        std::vector<std::vector<Poly>> comps;
        for (const auto &c : row) {
            comps.push_back({c});
        }
        emb.push_back(std::move(comps));
    }
    const FreeAlgebra b = base_ring_algebra();
    return induce_roby(a_line, split_roby(a_line.rank()), ModuleAction{b, {PolyMatrix::identity(1)}}, emb);
}

/// Seed for a double cover z^2 = f*g over the line: the module B' = [[0, f], [g, 0]]
/// over B = k[x,y][z]/(z^2 - fg), induced along 1 -> (1, 1), z -> (-z, z).
/// The result is 4-dimensional with C(z) = diag(-B', B').
inline GradedRobyModule matrix_factorization_seed(const FreeAlgebra &a_line, const Poly &f, const Poly &g)
{
    if (a_line.rank() != 2 || !a_line.unit_is_first()) {
        throw input_error("matrix-factorization seed needs a rank-2 algebra with basis 1, z");
    }
    if (!a_line.c(1, 1, 1).is_zero() || !(a_line.c(1, 1, 0) == f * g)) {
        throw input_error("matrix-factorization seed needs z^2 = f*g exactly, got z^2 = "
                          + a_line.c(1, 1, 0).to_string() + " + " + a_line.c(1, 1, 1).to_string() + "*z");
    }
    ModuleAction w{a_line, {PolyMatrix::identity(2), PolyMatrix{{Poly(), f}, {g, Poly()}}}};
    SplitEmbedding emb{{{Poly(1), Poly()}, {Poly(1), Poly()}}, {{Poly(), Poly(-1)}, {Poly(), Poly(1)}}};
    return induce_roby(a_line, split_roby(2), w, emb);
}

// ---------------------------------------------------------------------------
// Decomposition of chi - chi_0 into monomials.

inline bool vanishes_on_line(const Poly &p, const std::map<var_id, Poly> &line)
{
    return p.substitute(line).is_zero();
}

/// Moves a factor whose coefficient lies in the line ideal to the last
/// position; throws verification_error when there is none.
inline void reindex_line_factor(MonomialSpec &m, const std::map<var_id, Poly> &line)
{
    const std::size_t n = m.coefficients.size();
    for (std::size_t s = n; s-- > 0;) {
        if (vanishes_on_line(m.coefficients[s], line)) {
            std::swap(m.coefficients[s], m.coefficients[n - 1]);
            std::swap(m.dual_indices[s], m.dual_indices[n - 1]);
            return;
        }
    }
    throw verification_error("decomposition produced a monomial with no factor in the line ideal");
}

namespace detail
{

// Splits a single-term coefficient into factors of degrees deg(gamma_{k_s}),
// one line-ideal variable in the last factor and the scalar on the first.
// Base variables count with degree 1. Empty when no such split exists.
inline std::optional<std::vector<Poly>> balanced_factors(const Poly &c, const std::vector<int> &want,
                                                         const std::map<var_id, Poly> &line)
{
    if (c.size() != 1 || want.empty() || want.back() < 1) {
        return std::nullopt;
    }
    const auto &[mono, scalar] = c.terms().front();
    std::vector<var_id> atoms;
    for (const auto &[v, k] : mono.powers()) {
        atoms.insert(atoms.end(), k, v);
    }
    int total = 0;
    for (int w : want) {
        if (w < 0) {
            return std::nullopt;
        }
        total += w;
    }
    if (total != static_cast<int>(atoms.size())) {
        return std::nullopt;
    }
    auto pick = std::find_if(atoms.begin(), atoms.end(),
                             [&](var_id v) { return vanishes_on_line(Poly::variable(v), line); });
    if (pick == atoms.end()) {
        return std::nullopt;
    }
    const var_id key = *pick;
    atoms.erase(pick);
    std::vector<Poly> f(want.size(), Poly(1));
    f.back() = Poly::variable(key);
    std::size_t next = 0;
    for (int k = 1; k < want.back(); ++k) {
        f.back() *= Poly::variable(atoms[next++]);
    }
    for (std::size_t s = 0; s + 1 < want.size(); ++s) {
        for (int k = 0; k < want[s]; ++k) {
            f[s] *= Poly::variable(atoms[next++]);
        }
    }
    f.front() = f.front().scaled(scalar);
    return f;
}

} // namespace detail

/// Terms of chi - chi_0 grouped by their t^i Gamma^alpha part; each group
/// becomes one MonomialSpec with d - i single-Gamma factors. The coefficient
/// is split by degree when possible and otherwise attached to the last
/// factor; the last factor always lies in the line ideal.
inline std::vector<MonomialSpec> decompose_difference(const CharPoly &chi, const CharPoly &chi0, const FreeAlgebra &a,
                                                      const std::map<var_id, Poly> &line)
{
    std::vector<var_id> form_vars = chi.dual;
    form_vars.push_back(chi.t);
    std::map<Monomial, Poly> groups;
    const Poly diff = chi.poly - chi0.poly;
    for (const auto &[mono, coef] : diff.terms()) {
        std::vector<Monomial::entry> key, rest;
        for (const auto &e : mono.powers()) {
            (std::find(form_vars.begin(), form_vars.end(), e.first) != form_vars.end() ? key : rest).push_back(e);
        }
        groups[Monomial(key)] += Poly(Monomial(rest), coef);
    }
    std::vector<MonomialSpec> out;
    for (const auto &[key, c] : groups) {
        if (c.is_zero()) {
            continue;
        }
        if (!vanishes_on_line(c, line)) {
            throw verification_error("term " + Poly(key, CycScalar(1)).to_string()
                                     + " of chi - chi_0 has a coefficient outside the line ideal");
        }
        MonomialSpec m;
        m.t_exponent = key.exponent(chi.t);
        for (std::size_t k = 0; k < chi.dual.size(); ++k) {
            m.dual_indices.insert(m.dual_indices.end(), key.exponent(chi.dual[k]), k);
        }
        if (m.dual_indices.size() + m.t_exponent != chi.rank || m.dual_indices.empty()) {
            throw verification_error("chi - chi_0 is not homogeneous of degree " + std::to_string(chi.rank)
                                     + " in the form variables");
        }
        std::optional<std::vector<Poly>> f;
        if (a.graded()) {
            std::vector<int> want;
            for (std::size_t k : m.dual_indices) {
                want.push_back(a.degrees()[k]);
            }
            f = detail::balanced_factors(c, want, line);
        }
        if (!f) {
            f = std::vector<Poly>(m.dual_indices.size(), Poly(1));
            f->back() = c;
        }
        m.coefficients = std::move(*f);
        reindex_line_factor(m, line);
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The pipeline.

struct PipelineInput {
    FreeAlgebra algebra;          // over R = k[x, y, z_2, ..]
    std::map<var_id, Poly> line;  // z_i -> linear forms in x, y
    GradedRobyModule seed;        // chi_line-Roby module over k[x, y]
    var_id x = var("x");
    var_id y = var("y");
};

struct DegreeEntry {
    std::size_t monomial = 0, factor = 0;
    std::string coefficient;
    std::optional<int> coefficient_degree; // empty: not homogeneous
    int gamma_degree = 0;

    bool matches() const
    {
        return coefficient_degree && *coefficient_degree == gamma_degree;
    }
};

struct PipelineResult {
    CharPoly chi, chi_line;
    std::vector<MonomialSpec> monomials;
    bool ungraded = false;
    std::vector<DegreeEntry> degree_bookkeeping;
    CycScalar xi;
    std::size_t seed_dim = 0;
    GradedRobyModule assembly;
    std::optional<RobyReport> roby;
    bool target_is_chi = false;
    std::optional<CharMorphism> morphism, morphism_line;
    std::optional<CharMorphismReport> charmor;
    Filtration filtration;
    std::optional<FilteredReport> filtered;
    std::optional<bool> quotients_match_seed;
    std::optional<std::string> quotient_mismatch;
    std::optional<SplittingType> splitting;
    std::optional<std::string> aborted; // the failing step

    bool passed() const
    {
        return !aborted && roby && roby->passed() && target_is_chi && charmor && charmor->passed() && filtered
               && filtered->passed() && quotients_match_seed.value_or(false) && splitting
               && is_ulrich_over_line(*splitting);
    }
};

/// Seed validation: the seed's target must be chi restricted to the line and
/// it must pass its own Roby identity. Throws input_error otherwise.
inline void validate_seed(const GradedRobyModule &seed, const CharPoly &chi_line)
{
    const CharPoly *target = seed.charpoly();
    if (!target) {
        throw input_error("seed must have a characteristic-polynomial target");
    }
    if (target->dual != chi_line.dual || target->t != chi_line.t || !(target->poly == chi_line.poly)) {
        throw input_error("seed target " + target->poly.to_string() + " differs from the restricted chi "
                          + chi_line.poly.to_string());
    }
    if (RobyReport r = verify_roby(seed); !r.passed()) {
        throw input_error("seed fails " + (r.failure ? r.failure->check : std::string("verification"))
                          + (r.failure ? " at (" + std::to_string(r.failure->row) + ", "
                                             + std::to_string(r.failure->col) + ")"
                                       : std::string()));
    }
}

namespace detail
{

// Compares each graded quotient of the line morphism with copies of the seed
// C-matrices; returns a description of the first mismatch.
inline std::optional<std::string> compare_quotients(const CharMorphism &line_c, const CharMorphism &seed_c,
                                                    const std::vector<MonomialSpec> &monomials, std::size_t d)
{
    const std::size_t w = seed_c.dim();
    std::size_t copies = 1;
    for (std::size_t k = 0; k < monomials.size(); ++k) {
        copies *= d;
    }
    // Level of each tuple index (eps_r at position r contributes d - r).
    std::vector<int> level(copies, 0);
    for (std::size_t tau = 0; tau < copies; ++tau) {
        std::size_t rest = tau;
        for (std::size_t k = 0; k < monomials.size(); ++k) {
            level[tau] += static_cast<int>(d - 1 - rest % d);
            rest /= d;
        }
    }
    auto indices = [&](std::size_t tau) {
        std::vector<std::size_t> idx;
        for (std::size_t s = 0; s < w; ++s) {
            idx.push_back(s * copies + tau);
        }
        return idx;
    };
    const PolyMatrix zero(w, w);
    for (std::size_t g = 0; g < line_c.matrices.size(); ++g) {
        for (std::size_t a = 0; a < copies; ++a) {
            for (std::size_t b = 0; b < copies; ++b) {
                if (level[a] != level[b]) {
                    continue;
                }
                const PolyMatrix blk = line_c.matrices[g].block(indices(a), indices(b));
                const PolyMatrix &want = a == b ? seed_c.matrices[g] : zero;
                if (auto df = first_difference(blk, want)) {
                    return "gamma_" + std::to_string(g + 1) + " copy (" + std::to_string(a) + ", "
                           + std::to_string(b) + ") entry (" + std::to_string(df->first) + ", "
                           + std::to_string(df->second) + "): expected " + want(df->first, df->second).to_string()
                           + ", got " + blk(df->first, df->second).to_string();
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Builds the characteristic morphism over R from a seed over the line:
/// seed (x)_xi monomial modules of chi - chi_0, left to right, with the tensor
/// filtration, then checks every identity exactly.
inline PipelineResult run_pipeline(const PipelineInput &in)
{
    PipelineResult res;
    const FreeAlgebra &a = in.algebra;
    const std::size_t d = a.rank();
    if (d < 2) {
        throw input_error("pipeline needs an algebra of rank >= 2");
    }
    res.chi = char_poly(a);
    res.chi_line = restrict_char_poly(res.chi, in.line);
    validate_seed(in.seed, res.chi_line);
    const FreeAlgebra a_line = a.substituted(in.line);
    res.seed_dim = in.seed.dim();

    res.monomials = decompose_difference(res.chi, res.chi_line, a, in.line);
    res.ungraded = !a.graded();
    if (!res.ungraded) {
        for (std::size_t j = 0; j < res.monomials.size(); ++j) {
            const auto &m = res.monomials[j];
            for (std::size_t s = 0; s < m.coefficients.size(); ++s) {
                DegreeEntry e;
                e.monomial = j;
                e.factor = s;
                e.coefficient = m.coefficients[s].to_string();
                if (m.coefficients[s].is_homogeneous()) {
                    e.coefficient_degree = m.coefficients[s].degree();
                }
                e.gamma_degree = a.degrees()[m.dual_indices[s]];
                res.degree_bookkeeping.push_back(std::move(e));
            }
        }
    }

    res.xi = make_root(static_cast<unsigned>(d));
    res.assembly = in.seed;
    res.filtration = Filtration::trivial(in.seed.dim());
    for (const auto &m : res.monomials) {
        res.assembly = twisted_tensor(res.assembly, monomial_charpoly_roby(m, d, res.chi.dual, res.chi.t), res.xi);
        res.filtration = tensor(res.filtration, Filtration::monomial(d));
    }

    res.roby = verify_roby(res.assembly);
    res.target_is_chi = res.assembly.charpoly() && *res.assembly.charpoly() == res.chi;
    if (!res.roby->passed() || !res.target_is_chi) {
        res.aborted = "roby-identity";
        return res;
    }
    res.morphism = char_morphism(res.assembly, a);
    res.charmor = verify_char_morphism(*res.morphism);
    if (!res.charmor->passed()) {
        res.aborted = "characteristic-morphism";
        return res;
    }
    res.morphism_line = restrict_to_line(*res.morphism, in.line, in.x, in.y);
    res.filtered = verify_filtered_pseudo(*res.morphism_line, res.filtration);
    if (!res.filtered->passed()) {
        res.aborted = "filtered-pseudomorphism";
        return res;
    }
    const CharMorphism seed_c = char_morphism(in.seed, a_line);
    res.quotient_mismatch = detail::compare_quotients(*res.morphism_line, seed_c, res.monomials, d);
    res.quotients_match_seed = !res.quotient_mismatch.has_value();
    if (!*res.quotients_match_seed) {
        res.aborted = "graded-quotients";
        return res;
    }
    res.splitting = splitting_type(underlying_module(*res.morphism_line));
    return res;
}

} // namespace roby

#endif // ROBY_PIPELINE_HPP
