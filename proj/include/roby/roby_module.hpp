#ifndef ROBY_ROBY_MODULE_HPP
#define ROBY_ROBY_MODULE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "free_algebra.hpp"
#include "poly_matrix.hpp"
#include "polynomial.hpp"

namespace roby
{

/// A homogeneous form of a given degree in named argument variables (the
/// coordinates y_1..y_n dual to a basis of M).
struct HomForm {
    Poly poly;
    std::vector<var_id> args;
    unsigned degree = 2;

    // Every term has total degree `degree` in the arguments.
    bool is_valid() const
    {
        for (const auto &t : poly.terms()) {
            if (t.first.degree_in(args) != degree) {
                return false;
            }
        }
        return true;
    }
};

/// A Z/eZ-graded Roby module: one action matrix per argument slot, an optional
/// T-slot, a grading of the basis of W and the target form (or characteristic
/// polynomial when the module is a chi_A-Roby module).
///
/// The argument variables of the slots double as the symbolic coefficients of
/// the generic element, so action entries must not involve them.
struct GradedRobyModule {
    unsigned degree = 2;
    std::vector<unsigned> grading;
    std::vector<var_id> slots;
    std::vector<PolyMatrix> actions;
    std::optional<PolyMatrix> t_action;
    var_id t = var(default_t_name);
    std::variant<HomForm, CharPoly> target;
    // Dimensions of the tensor factors this module was assembled from, left
    // to right; a module not built by tensoring has one factor.
    std::vector<std::size_t> factors;

    std::size_t dim() const noexcept
    {
        return grading.size();
    }
    bool has_t_slot() const noexcept
    {
        return t_action.has_value();
    }
    const Poly &target_poly() const
    {
        return std::holds_alternative<CharPoly>(target) ? std::get<CharPoly>(target).poly
                                                         : std::get<HomForm>(target).poly;
    }
    const CharPoly *charpoly() const
    {
        return std::get_if<CharPoly>(&target);
    }

    // The generic element sum_i slot_i * action_i (+ t * action_T).
    PolyMatrix generic_action() const
    {
        PolyMatrix g(dim(), dim());
        for (std::size_t i = 0; i < actions.size(); ++i) {
            g += Poly::variable(slots[i]) * actions[i];
        }
        if (t_action) {
            g += Poly::variable(t) * *t_action;
        }
        return g;
    }

    // Structural consistency (shapes, slot counts, grading range); throws.
    void check_shape() const
    {
        if (degree < 1) {
            throw input_error("Roby degree must be positive");
        }
        if (actions.size() != slots.size()) {
            throw input_error("need exactly one action matrix per slot");
        }
        auto check = [&](const PolyMatrix &m, const std::string &what) {
            if (m.rows() != dim() || m.cols() != dim()) {
                throw input_error(what + " is not " + std::to_string(dim()) + "x" + std::to_string(dim()));
            }
        };
        for (std::size_t i = 0; i < actions.size(); ++i) {
            check(actions[i], "action of " + var_name(slots[i]));
        }
        if (t_action) {
            check(*t_action, "T action");
        }
        for (unsigned g : grading) {
            if (g >= degree) {
                throw input_error("grading values must lie in 0.." + std::to_string(degree - 1));
            }
        }
    }
};

/// Rank-one module with all actions zero; the unit for the twisted tensor.
inline GradedRobyModule zero_roby_module(unsigned degree, std::vector<var_id> slots, bool with_t_slot,
                                         var_id t = var(default_t_name))
{
    GradedRobyModule m;
    m.degree = degree;
    m.grading = {0};
    m.actions.assign(slots.size(), PolyMatrix(1, 1));
    HomForm f;
    f.args = slots;
    if (with_t_slot) {
        m.t_action = PolyMatrix(1, 1);
        f.args.push_back(t);
    }
    f.degree = degree;
    m.slots = std::move(slots);
    m.t = t;
    m.target = std::move(f);
    m.factors = {1};
    return m;
}

namespace detail
{

// Weighted cyclic shift on basis w_1..w_e (0-based here): each slot s gets
// weights[j] at (j+1 mod e, j) when slot_of[j] == s.
inline std::vector<PolyMatrix> cyclic_actions(std::size_t nslots, const std::vector<std::size_t> &slot_of,
                                              const std::vector<Poly> &weights)
{
    const std::size_t e = slot_of.size();
    std::vector<PolyMatrix> acts(nslots, PolyMatrix(e, e));
    for (std::size_t j = 0; j < e; ++j) {
        if (slot_of[j] < nslots) {
            acts[slot_of[j]]((j + 1) % e, j) = weights[j];
        }
    }
    return acts;
}

inline std::vector<unsigned> cyclic_grading(std::size_t e)
{
    std::vector<unsigned> g(e);
    for (std::size_t j = 0; j < e; ++j) {
        g[j] = static_cast<unsigned>((j + 1) % e); // deg(w_j) = j with 1-based j
    }
    return g;
}

} // namespace detail

/// The natural Z/eZ-graded Roby module of a monomial c * y_{i_1} ... y_{i_e}:
/// W has basis w_1..w_e and x_i sends w_j to (factor_j) w_{j+1} when i = i_j.
/// The factors are given explicitly, one per position.
inline GradedRobyModule monomial_roby(const std::vector<var_id> &args, const std::vector<std::size_t> &indices,
                                      const std::vector<Poly> &factors)
{
    const std::size_t e = indices.size();
    if (e < 2 || factors.size() != e) {
        throw input_error("monomial Roby module needs degree >= 2 and one factor per position");
    }
    for (std::size_t i : indices) {
        if (i >= args.size()) {
            throw input_error("monomial index out of range");
        }
    }
    GradedRobyModule m;
    m.degree = static_cast<unsigned>(e);
    m.grading = detail::cyclic_grading(e);
    m.slots = args;
    m.actions = detail::cyclic_actions(args.size(), indices, factors);
    Poly value(1);
    for (std::size_t j = 0; j < e; ++j) {
        value *= factors[j] * Poly::variable(args[indices[j]]);
    }
    m.target = HomForm{value, args, static_cast<unsigned>(e)};
    m.factors = {e};
    return m;
}

/// Same, from a single-term form; the coefficient is attached to the last
/// factor and the positions follow the order of the argument list.
inline GradedRobyModule monomial_roby(const HomForm &f)
{
    if (f.poly.size() != 1) {
        throw input_error("monomial Roby module needs a single-term form, got " + f.poly.to_string());
    }
    if (!f.is_valid()) {
        throw input_error("form is not homogeneous of degree " + std::to_string(f.degree) + " in its arguments");
    }
    const auto &[mono, coeff] = f.poly.terms().front();
    std::vector<std::size_t> indices;
    Poly rest(Monomial{}, coeff); // non-argument part of the term
    for (const auto &[v, k] : mono.powers()) {
        auto it = std::find(f.args.begin(), f.args.end(), v);
        if (it == f.args.end()) {
            rest *= Poly::variable(v).pow(k);
        }
    }
    for (std::size_t a = 0; a < f.args.size(); ++a) {
        for (unsigned k = 0; k < mono.exponent(f.args[a]); ++k) {
            indices.push_back(a);
        }
    }
    std::vector<Poly> factors(indices.size(), Poly(1));
    if (!factors.empty()) {
        factors.back() = rest;
    }
    return monomial_roby(f.args, indices, factors);
}

/// One monomial t^i (c_1 Gamma_{k_1}) ... (c_{d-i} Gamma_{k_{d-i}}) of the
/// decomposition of chi - chi_0.
struct MonomialSpec {
    unsigned t_exponent = 0;
    std::vector<Poly> coefficients;
    std::vector<std::size_t> dual_indices;

    Poly value(const std::vector<var_id> &dual, var_id t) const
    {
        Poly v = Poly::variable(t).pow(t_exponent);
        for (std::size_t s = 0; s < coefficients.size(); ++s) {
            v *= coefficients[s] * Poly::variable(dual.at(dual_indices[s]));
        }
        return v;
    }
};

/// Roby module of a characteristic-polynomial monomial on epsilon_1..epsilon_d:
///   gamma_p(eps_r) = c_{r-i} delta^p_{k(r-i)} eps_{r+1}   (i < r <= d)
///   T(eps_r)       = eps_{r+1}                              (1 <= r <= i)
/// with eps_{d+1} = eps_1. Its target is the monomial as a form on A + R*T.
inline GradedRobyModule monomial_charpoly_roby(const MonomialSpec &m, std::size_t d, const std::vector<var_id> &dual,
                                               var_id t = var(default_t_name))
{
    if (d < 2 || dual.size() != d) {
        throw input_error("monomial module needs rank >= 2 and one dual variable per basis element");
    }
    if (m.t_exponent >= d) {
        throw input_error("monomial t-exponent must be below the rank");
    }
    if (m.coefficients.size() != d - m.t_exponent || m.dual_indices.size() != d - m.t_exponent) {
        throw input_error("monomial needs exactly rank - i coefficient factors");
    }
    for (std::size_t k : m.dual_indices) {
        if (k >= d) {
            throw input_error("monomial dual index out of range");
        }
    }
    const std::size_t i = m.t_exponent;
    GradedRobyModule mod;
    mod.degree = static_cast<unsigned>(d);
    mod.grading = detail::cyclic_grading(d);
    mod.slots = dual;
    mod.t = t;
    mod.actions.assign(d, PolyMatrix(d, d));
    PolyMatrix tm(d, d);
    for (std::size_t r = 1; r <= d; ++r) {
        const std::size_t from = r - 1, to = r % d;
        if (r <= i) {
            tm(to, from) = Poly(1);
        } else {
            const std::size_t s = r - i - 1;
            mod.actions[m.dual_indices[s]](to, from) = m.coefficients[s];
        }
    }
    mod.t_action = std::move(tm);
    HomForm f{m.value(dual, t), dual, static_cast<unsigned>(d)};
    f.args.push_back(t);
    mod.target = std::move(f);
    mod.factors = {d};
    return mod;
}

/// The graded chi-Roby module of the split algebra R^{x d}:
///   T(w_i) = w_{i+1},  e_i(w_j) = -w_{j+1} if i = j+1 (indices mod d).
inline GradedRobyModule split_roby(std::size_t d, std::string_view dual_prefix = "x")
{
    if (d < 2) {
        throw input_error("split Roby module needs d >= 2");
    }
    const FreeAlgebra a = split_algebra(d, dual_prefix);
    GradedRobyModule m;
    m.degree = static_cast<unsigned>(d);
    m.grading = detail::cyclic_grading(d);
    m.slots = a.dual();
    m.actions.assign(d, PolyMatrix(d, d));
    PolyMatrix tm(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t next = (j + 1) % d;
        tm(next, j) = Poly(1);
        m.actions[next](next, j) = Poly(-1); // e_{j+1} acts on w_j
    }
    m.t_action = std::move(tm);
    m.target = char_poly(a);
    m.factors = {d};
    return m;
}

// ---------------------------------------------------------------------------
// Twisted tensor product.

struct allow_nonprimitive_twist_t {
};
inline constexpr allow_nonprimitive_twist_t allow_nonprimitive_twist{};

namespace detail
{

inline GradedRobyModule twisted_tensor_impl(const GradedRobyModule &m1, const GradedRobyModule &m2,
                                            const CycScalar &xi)
{
    m1.check_shape();
    m2.check_shape();
    if (m1.degree != m2.degree) {
        throw input_error("twisted tensor needs equal Roby degrees, got " + std::to_string(m1.degree) + " and "
                          + std::to_string(m2.degree));
    }
    if (m1.slots != m2.slots) {
        throw input_error("twisted tensor needs the same argument slots on both factors");
    }
    if (m1.has_t_slot() != m2.has_t_slot() || (m1.has_t_slot() && m1.t != m2.t)) {
        throw input_error("twisted tensor needs matching T-slots");
    }
    const unsigned e = m1.degree;
    std::vector<Poly> twist;
    std::vector<CycScalar> xi_pow(e);
    xi_pow[0] = CycScalar(1);
    for (unsigned k = 1; k < e; ++k) {
        xi_pow[k] = xi_pow[k - 1] * xi;
    }
    for (unsigned g : m1.grading) {
        twist.emplace_back(xi_pow[g]);
    }
    const PolyMatrix twist_m = PolyMatrix::diagonal(twist);
    const PolyMatrix id2 = PolyMatrix::identity(m2.dim());
    auto combine = [&](const PolyMatrix &a, const PolyMatrix &b) { return kron(a, id2) + kron(twist_m, b); };

    GradedRobyModule r;
    r.degree = e;
    r.slots = m1.slots;
    r.t = m1.t;
    for (unsigned g1 : m1.grading) {
        for (unsigned g2 : m2.grading) {
            r.grading.push_back((g1 + g2) % e);
        }
    }
    for (std::size_t i = 0; i < m1.actions.size(); ++i) {
        r.actions.push_back(combine(m1.actions[i], m2.actions[i]));
    }
    if (m1.has_t_slot()) {
        r.t_action = combine(*m1.t_action, *m2.t_action);
    }
    r.factors = m1.factors;
    r.factors.insert(r.factors.end(), m2.factors.begin(), m2.factors.end());

    // Target is the sum; it stays a characteristic polynomial when one side
    // is one and the sum is still monic of the same rank.
    const Poly sum = m1.target_poly() + m2.target_poly();
    const CharPoly *cp = m1.charpoly() ? m1.charpoly() : m2.charpoly();
    if (cp) {
        CharPoly c = *cp;
        c.poly = sum;
        if (c.is_monic()) {
            r.target = std::move(c);
            return r;
        }
    }
    HomForm f{sum, r.slots, e};
    if (r.has_t_slot()) {
        f.args.push_back(r.t);
    }
    r.target = std::move(f);
    return r;
}

} // namespace detail

/// phi(m)(w1 (x) w2) = phi1(m)(w1) (x) w2 + xi^{deg w1} w1 (x) phi2(m)(w2),
/// graded by deg(w1) + deg(w2), with target F1 + F2. xi must be a primitive
/// e-th root of unity.
inline GradedRobyModule twisted_tensor(const GradedRobyModule &m1, const GradedRobyModule &m2, const CycScalar &xi)
{
    if (!is_primitive_root(xi, m1.degree)) {
        throw input_error("twist " + xi.to_string() + " is not a primitive " + std::to_string(m1.degree)
                          + "-th root of unity");
    }
    return detail::twisted_tensor_impl(m1, m2, xi);
}

// Same construction without the primitivity check (negative controls).
inline GradedRobyModule twisted_tensor(const GradedRobyModule &m1, const GradedRobyModule &m2, const CycScalar &xi,
                                       allow_nonprimitive_twist_t)
{
    return detail::twisted_tensor_impl(m1, m2, xi);
}

// ---------------------------------------------------------------------------
// Verification.

struct EntryFailure {
    std::string check;
    std::size_t row = 0, col = 0;
    std::string expected, actual;
};

struct RobyReport {
    bool graded = true;
    bool identity = false;
    bool t_power_identity = true; // only checked for characteristic-polynomial targets
    bool fresh_arguments = true;
    std::optional<EntryFailure> failure;

    bool passed() const noexcept
    {
        return graded && identity && t_power_identity && fresh_arguments;
    }
};

/// Forms the generic action, raises it to the Roby degree and compares with
/// target * I; also checks that every action has degree +1 for the grading.
inline RobyReport verify_roby(const GradedRobyModule &m)
{
    m.check_shape();
    RobyReport rep;
    std::vector<var_id> argvars = m.slots;
    if (m.has_t_slot()) {
        argvars.push_back(m.t);
    }
    auto record = [&](EntryFailure f) {
        if (!rep.failure) {
            rep.failure = std::move(f);
        }
    };

    auto graded_check = [&](const PolyMatrix &a, const std::string &name) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
            for (std::size_t c = 0; c < a.cols(); ++c) {
                if (!a(r, c).is_zero() && m.grading[r] != (m.grading[c] + 1) % m.degree) {
                    rep.graded = false;
                    record({"graded:" + name, r, c, "0", a(r, c).to_string()});
                }
                for (var_id v : argvars) {
                    if (a(r, c).involves(v)) {
                        rep.fresh_arguments = false;
                        record({"fresh:" + name, r, c, "no " + var_name(v), a(r, c).to_string()});
                    }
                }
            }
        }
    };
    for (std::size_t i = 0; i < m.actions.size(); ++i) {
        graded_check(m.actions[i], var_name(m.slots[i]));
    }
    if (m.t_action) {
        graded_check(*m.t_action, "T");
    }

    const PolyMatrix power = m.generic_action().pow(m.degree);
    const PolyMatrix expected = PolyMatrix::scalar(m.dim(), m.target_poly());
    auto diff = first_difference(power, expected);
    rep.identity = !diff.has_value();
    if (diff) {
        record({"roby-identity", diff->first, diff->second, expected(diff->first, diff->second).to_string(),
                power(diff->first, diff->second).to_string()});
    }

    if (m.charpoly()) {
        if (!m.t_action) {
            throw input_error("characteristic-polynomial target requires a T-slot");
        }
        const PolyMatrix tp = m.t_action->pow(m.degree);
        auto d2 = first_difference(tp, PolyMatrix::identity(m.dim()));
        rep.t_power_identity = !d2.has_value();
        if (d2) {
            record({"T^d = I", d2->first, d2->second, d2->first == d2->second ? "1" : "0",
                    tp(d2->first, d2->second).to_string()});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Characteristic morphisms.

/// A module map A -> End(W (x) R) given by one matrix per basis element of A.
struct CharMorphism {
    CharPoly chi;
    std::optional<FreeAlgebra> source;
    std::vector<PolyMatrix> matrices;

    std::size_t dim() const
    {
        return matrices.empty() ? 0 : matrices.front().rows();
    }
    PolyMatrix generic() const
    {
        PolyMatrix g(dim(), dim());
        for (std::size_t i = 0; i < matrices.size(); ++i) {
            g += Poly::variable(chi.dual[i]) * matrices[i];
        }
        return g;
    }
};

/// C(gamma_i) = -action(gamma_i) * action(T)^{d-1}; action(T)^{d-1} is the
/// inverse of action(T) since action(T)^d = I.
inline CharMorphism char_morphism(const GradedRobyModule &m, std::optional<FreeAlgebra> source = std::nullopt)
{
    const CharPoly *chi = m.charpoly();
    if (!chi || !m.t_action) {
        throw input_error("characteristic morphism needs a module with a characteristic-polynomial target and a T-slot");
    }
    if (source) {
        if (source->rank() != chi->rank || source->dual() != chi->dual) {
            throw input_error("source algebra does not match the module's characteristic polynomial");
        }
    }
    const PolyMatrix t_inverse = m.t_action->pow(m.degree - 1);
    CharMorphism c;
    c.chi = *chi;
    c.source = std::move(source);
    for (const auto &a : m.actions) {
        c.matrices.push_back(-(a * t_inverse));
    }
    return c;
}

struct MorphismReport {
    bool unit = false;
    bool multiplicative = false;
    std::optional<EntryFailure> failure;

    bool passed() const noexcept
    {
        return unit && multiplicative;
    }
};

/// Unit and multiplicativity of a family of matrices indexed by the basis of
/// an algebra: C(1) = I and C(g_i) C(g_j) = sum_k c_{ijk} C(g_k).
inline MorphismReport check_algebra_morphism(const std::vector<PolyMatrix> &mats, const FreeAlgebra &a)
{
    MorphismReport rep;
    const std::size_t d = a.rank();
    if (mats.size() != d) {
        throw input_error("need one matrix per basis element of the algebra");
    }
    const std::size_t n = mats.front().rows();
    const PolyMatrix unit_image = linear_combination(a.unit(), mats);
    auto du = first_difference(unit_image, PolyMatrix::identity(n));
    rep.unit = !du.has_value();
    if (du) {
        rep.failure = EntryFailure{"unit", du->first, du->second, du->first == du->second ? "1" : "0",
                                   unit_image(du->first, du->second).to_string()};
    }
    rep.multiplicative = true;
    for (std::size_t i = 0; i < d && rep.multiplicative; ++i) {
        for (std::size_t j = i; j < d && rep.multiplicative; ++j) {
            const PolyMatrix lhs = mats[i] * mats[j];
            PolyMatrix rhs(n, n);
            for (std::size_t k = 0; k < d; ++k) {
                rhs += a.c(i, j, k) * mats[k];
            }
            if (auto df = first_difference(lhs, rhs)) {
                rep.multiplicative = false;
                if (!rep.failure) {
                    rep.failure = EntryFailure{"multiplicative:" + a.basis()[i] + "*" + a.basis()[j], df->first,
                                               df->second, rhs(df->first, df->second).to_string(),
                                               lhs(df->first, df->second).to_string()};
                }
            }
        }
    }
    return rep;
}

struct CharMorphismReport {
    bool characteristic = false;
    std::optional<EntryFailure> failure;
    // Present when the source algebra is known.
    std::optional<MorphismReport> algebra_morphism;

    bool passed() const noexcept
    {
        return characteristic;
    }
};

/// chi(C(a), a) = 0 with a = sum_i Gamma_i gamma_i, t -> C(a), as an exact
/// identity of polynomial matrices.
inline CharMorphismReport verify_char_morphism(const CharMorphism &c, const CharPoly &chi)
{
    if (c.matrices.size() != chi.rank) {
        throw input_error("characteristic morphism has " + std::to_string(c.matrices.size())
                          + " matrices for a rank-" + std::to_string(chi.rank) + " algebra");
    }
    CharMorphism named = c;
    named.chi = chi;
    const PolyMatrix value = evaluate_at_matrix(chi.t_coefficients(), named.generic());
    CharMorphismReport rep;
    auto d = first_difference(value, PolyMatrix(value.rows(), value.cols()));
    rep.characteristic = !d.has_value();
    if (d) {
        rep.failure = EntryFailure{"chi(C(a), a) = 0", d->first, d->second, "0", value(d->first, d->second).to_string()};
    }
    if (c.source) {
        rep.algebra_morphism = check_algebra_morphism(c.matrices, *c.source);
    }
    return rep;
}

inline CharMorphismReport verify_char_morphism(const CharMorphism &c)
{
    return verify_char_morphism(c, c.chi);
}

// ---------------------------------------------------------------------------
// Filtrations.

/// An increasing filtration of W by coordinate subspaces, recorded as a level
/// per basis vector: the k-th flag is spanned by the basis vectors of level at
/// most the k-th smallest level.
struct Filtration {
    std::vector<int> level;

    static Filtration trivial(std::size_t n)
    {
        return Filtration{std::vector<int>(n, 0)};
    }

    // Filtration of a d-dimensional monomial factor: eps_r has level d - r,
    // so the actions (eps_r -> eps_{r+1}) lower the level.
    static Filtration monomial(std::size_t d)
    {
        Filtration f;
        for (std::size_t r = 1; r <= d; ++r) {
            f.level.push_back(static_cast<int>(d - r));
        }
        return f;
    }

    std::vector<int> distinct_levels() const
    {
        std::vector<int> ls(level.begin(), level.end());
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        return ls;
    }

    // Index sets of the flags, strictly increasing, the last being all of W.
    std::vector<std::vector<std::size_t>> flags() const
    {
        std::vector<std::vector<std::size_t>> out;
        for (int l : distinct_levels()) {
            std::vector<std::size_t> f;
            for (std::size_t i = 0; i < level.size(); ++i) {
                if (level[i] <= l) {
                    f.push_back(i);
                }
            }
            out.push_back(std::move(f));
        }
        return out;
    }

    // Basis indices of each graded quotient F^{k}/F^{k-1}.
    std::vector<std::vector<std::size_t>> quotient_blocks() const
    {
        std::vector<std::vector<std::size_t>> out;
        for (int l : distinct_levels()) {
            std::vector<std::size_t> b;
            for (std::size_t i = 0; i < level.size(); ++i) {
                if (level[i] == l) {
                    b.push_back(i);
                }
            }
            out.push_back(std::move(b));
        }
        return out;
    }
};

// Tensor product filtration in Kronecker order (levels add).
inline Filtration tensor(const Filtration &a, const Filtration &b)
{
    Filtration r;
    for (int x : a.level) {
        for (int y : b.level) {
            r.level.push_back(x + y);
        }
    }
    return r;
}

struct FilteredReport {
    bool preserves_flags = false;                // condition (i)
    bool graded_morphism = false;                // condition (ii)
    std::vector<MorphismReport> quotient_reports; // one per graded quotient
    std::optional<EntryFailure> failure;

    bool passed() const noexcept
    {
        return preserves_flags && graded_morphism;
    }
};

/// (i) every C(gamma_i) maps each flag into itself; (ii) the maps induced on
/// each graded quotient form an algebra morphism.
inline FilteredReport verify_filtered_pseudo(const CharMorphism &c, const Filtration &f)
{
    if (!c.source) {
        throw input_error("filtered pseudomorphism check needs the source algebra");
    }
    if (f.level.size() != c.dim()) {
        throw input_error("filtration dimension does not match the morphism");
    }
    FilteredReport rep;
    rep.preserves_flags = true;
    for (std::size_t i = 0; i < c.matrices.size() && rep.preserves_flags; ++i) {
        const PolyMatrix &m = c.matrices[i];
        for (std::size_t r = 0; r < m.rows() && rep.preserves_flags; ++r) {
            for (std::size_t col = 0; col < m.cols(); ++col) {
                if (f.level[r] > f.level[col] && !m(r, col).is_zero()) {
                    rep.preserves_flags = false;
                    rep.failure = EntryFailure{"flag-preserving:" + c.source->basis()[i], r, col, "0",
                                               m(r, col).to_string()};
                    break;
                }
            }
        }
    }
    rep.graded_morphism = true;
    for (const auto &block : f.quotient_blocks()) {
        std::vector<PolyMatrix> q;
        for (const auto &m : c.matrices) {
            q.push_back(m.block(block, block));
        }
        MorphismReport mr = check_algebra_morphism(q, *c.source);
        if (!mr.passed()) {
            rep.graded_morphism = false;
            if (!rep.failure && mr.failure) {
                EntryFailure ef = *mr.failure;
                ef.check = "quotient:" + ef.check;
                ef.row = block[ef.row];
                ef.col = block[ef.col];
                rep.failure = ef;
            }
        }
        rep.quotient_reports.push_back(std::move(mr));
    }
    return rep;
}

/// True when every action (and T) maps span{basis[i] : i in sub} into itself.
inline bool preserves_subspace(const std::vector<PolyMatrix> &mats, const std::vector<std::size_t> &sub)
{
    std::vector<bool> in(mats.empty() ? 0 : mats.front().rows(), false);
    for (std::size_t i : sub) {
        in.at(i) = true;
    }
    for (const auto &m : mats) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (in[c] && !in[r] && !m(r, c).is_zero()) {
                    return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Induction from the split module along A -> B (x) k^{x d}.

/// A B-module structure on a trivial bundle W (x) O: one dim W x dim W matrix
/// per basis element of B.
struct ModuleAction {
    FreeAlgebra algebra;
    std::vector<PolyMatrix> matrices;
};

/// Coordinates of the algebra map A -> B (x) k^{x d}:
/// image[j][i][l] is the coefficient of b_l (x) e_i in the image of gamma_j.
using SplitEmbedding = std::vector<std::vector<std::vector<Poly>>>;

/// Restricts the split chi-Roby module, tensored over B with the module W, to
/// A + O*T:
///   psi(gamma_j) = sum_{i,l} s_{jil} phi(e_i) (x) beta(b_l),  psi(T) = phi(T) (x) I_W.
/// The Roby identity for chi_A and the algebra-morphism property of C_psi are
/// verified; failures throw input_error since they trace back to the data.
inline GradedRobyModule induce_roby(const FreeAlgebra &a, const GradedRobyModule &split, const ModuleAction &module,
                                    const SplitEmbedding &embedding)
{
    const std::size_t d = split.slots.size();
    if (!split.t_action || split.dim() != d) {
        throw input_error("induction expects the split Roby module");
    }
    const FreeAlgebra &b = module.algebra;
    if (module.matrices.size() != b.rank() || module.matrices.empty()) {
        throw input_error("module action needs one matrix per basis element of B");
    }
    const std::size_t w = module.matrices.front().rows();
    for (const auto &m : module.matrices) {
        if (m.rows() != w || m.cols() != w) {
            throw input_error("module action matrices must be square of equal size");
        }
    }
    if (MorphismReport mr = check_algebra_morphism(module.matrices, b); !mr.passed()) {
        throw input_error("supplied data fails the B-module axioms (" + (mr.failure ? mr.failure->check : "") + ")");
    }
    if (embedding.size() != a.rank()) {
        throw input_error("embedding needs one image per basis element of A");
    }

    GradedRobyModule m;
    m.degree = static_cast<unsigned>(d);
    for (unsigned g : split.grading) {
        for (std::size_t k = 0; k < w; ++k) {
            m.grading.push_back(g);
        }
    }
    m.slots = a.dual();
    m.t = split.t;
    const PolyMatrix idw = PolyMatrix::identity(w);
    for (std::size_t j = 0; j < a.rank(); ++j) {
        if (embedding[j].size() != d) {
            throw input_error("embedding image needs one component per idempotent");
        }
        PolyMatrix acc(d * w, d * w);
        for (std::size_t i = 0; i < d; ++i) {
            if (embedding[j][i].size() != b.rank()) {
                throw input_error("embedding component needs one coefficient per basis element of B");
            }
            for (std::size_t l = 0; l < b.rank(); ++l) {
                if (!embedding[j][i][l].is_zero()) {
                    acc += embedding[j][i][l] * kron(split.actions[i], module.matrices[l]);
                }
            }
        }
        m.actions.push_back(std::move(acc));
    }
    m.t_action = kron(*split.t_action, idw);
    m.target = char_poly(a);
    m.factors = {d * w};

    if (RobyReport rr = verify_roby(m); !rr.passed()) {
        throw input_error("induced module fails the Roby identity for chi_A; the embedding is not compatible"
                          + (rr.failure ? " (" + rr.failure->check + ")" : std::string()));
    }
    if (MorphismReport mr = check_algebra_morphism(char_morphism(m, a).matrices, a); !mr.passed()) {
        throw input_error("induced characteristic morphism is not an A-module structure"
                          + (mr.failure ? " (" + mr.failure->check + ")" : std::string()));
    }
    return m;
}

/// The rank-one algebra R itself.
inline FreeAlgebra base_ring_algebra(std::string_view dual_name = "B0")
{
    FreeAlgebra::spec s;
    s.basis = {"1"};
    s.dual = {std::string(dual_name)};
    s.degrees = {0};
    s.constants[{0, 0, 0}] = Poly(1);
    return FreeAlgebra(std::move(s));
}

} // namespace roby

#endif // ROBY_ROBY_MODULE_HPP
