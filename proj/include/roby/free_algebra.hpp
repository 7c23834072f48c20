#ifndef ROBY_FREE_ALGEBRA_HPP
#define ROBY_FREE_ALGEBRA_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "parse.hpp"
#include "poly_matrix.hpp"
#include "polynomial.hpp"

namespace roby
{

inline constexpr const char *default_t_name = "t";

/// A commutative algebra over a polynomial ring R that is free of rank d,
/// given by structure constants gamma_i * gamma_j = sum_k c_{ijk} gamma_k.
///
/// Dual coordinates Gamma_1..Gamma_d are named indeterminates; the generic
/// element of the algebra is sum_i Gamma_i gamma_i. The unit is stored as a
/// coordinate vector because the split presentation uses idempotents as its
/// basis, where gamma_1 is not the unit.
class FreeAlgebra
{
public:
    struct spec {
        std::vector<std::string> basis;
        std::vector<std::string> dual;
        std::vector<int> degrees; // empty: ungraded
        std::vector<Poly> unit;   // empty: gamma_1 is the unit
        // (i, j, k) -> c_{ijk}; symmetric entries are filled in from (j, i, k)
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Poly> constants;
    };

    FreeAlgebra() = default;

    // Validates commutativity, the unit law, associativity and degree
    // consistency; throws input_error describing the first violation.
    explicit FreeAlgebra(spec s) : FreeAlgebra(std::move(s), unchecked_tag{})
    {
        if (auto problem = first_violation()) {
            throw input_error("invalid algebra: " + *problem);
        }
    }

    // Skips validation; used to build deliberately corrupted controls.
    static FreeAlgebra unchecked(spec s)
    {
        return FreeAlgebra(std::move(s), unchecked_tag{});
    }

    std::size_t rank() const noexcept
    {
        return basis_.size();
    }
    const std::vector<std::string> &basis() const noexcept
    {
        return basis_;
    }
    const std::vector<var_id> &dual() const noexcept
    {
        return dual_;
    }
    const std::vector<int> &degrees() const noexcept
    {
        return degrees_;
    }
    bool graded() const noexcept
    {
        return !degrees_.empty();
    }
    const std::vector<Poly> &unit() const noexcept
    {
        return unit_;
    }
    bool unit_is_first() const
    {
        for (std::size_t i = 0; i < unit_.size(); ++i) {
            if (!(unit_[i] == Poly(i == 0 ? 1 : 0))) {
                return false;
            }
        }
        return true;
    }
    const Poly &c(std::size_t i, std::size_t j, std::size_t k) const
    {
        return constants_[(i * rank() + j) * rank() + k];
    }

    // Product of two elements in coordinates.
    std::vector<Poly> multiply(const std::vector<Poly> &a, const std::vector<Poly> &b) const
    {
        const std::size_t d = rank();
        std::vector<Poly> r(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (a[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                if (b[j].is_zero()) {
                    continue;
                }
                Poly ab = a[i] * b[j];
                for (std::size_t k = 0; k < d; ++k) {
                    if (!c(i, j, k).is_zero()) {
                        r[k] += ab * c(i, j, k);
                    }
                }
            }
        }
        return r;
    }

    std::vector<Poly> basis_vector(std::size_t i) const
    {
        std::vector<Poly> v(rank());
        v.at(i) = Poly(1);
        return v;
    }

    // Same algebra with every structure constant substituted (base change
    // along a map of coefficient rings).
    FreeAlgebra substituted(const std::map<var_id, Poly> &bindings) const
    {
        FreeAlgebra r(*this);
        for (auto &p : r.constants_) {
            p = p.substitute(bindings);
        }
        for (auto &p : r.unit_) {
            p = p.substitute(bindings);
        }
        return r;
    }

    // Variables appearing in structure constants (the coefficient ring).
    std::set<var_id> coefficient_variables() const
    {
        std::set<var_id> vs;
        for (const auto &p : constants_) {
            auto v = p.variables();
            vs.insert(v.begin(), v.end());
        }
        return vs;
    }

    std::optional<std::string> first_violation() const
    {
        const std::size_t d = rank();
        auto name = [&](std::size_t i) { return basis_[i]; };
        for (var_id v : coefficient_variables()) {
            if (std::find(dual_.begin(), dual_.end(), v) != dual_.end() || v == var(default_t_name)) {
                return "structure constants involve the reserved variable " + var_name(v);
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t k = 0; k < d; ++k) {
                    if (!(c(i, j, k) == c(j, i, k))) {
                        return "not commutative: " + name(i) + "*" + name(j) + " != " + name(j) + "*" + name(i);
                    }
                }
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (multiply(unit_, basis_vector(j)) != basis_vector(j)) {
                return "unit law fails on " + name(j);
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                auto ij = multiply(basis_vector(i), basis_vector(j));
                for (std::size_t k = 0; k < d; ++k) {
                    if (multiply(ij, basis_vector(k)) != multiply(basis_vector(i), multiply(basis_vector(j), basis_vector(k)))) {
                        return "not associative on (" + name(i) + ", " + name(j) + ", " + name(k) + ")";
                    }
                }
            }
        }
        if (graded()) {
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    for (std::size_t k = 0; k < d; ++k) {
                        const Poly &p = c(i, j, k);
                        if (p.is_zero()) {
                            continue;
                        }
                        const int want = degrees_[i] + degrees_[j] - degrees_[k];
                        if (!p.is_homogeneous() || p.degree() != want) {
                            return "structure constant c(" + name(i) + ", " + name(j) + "; " + name(k)
                                   + ") is not homogeneous of degree " + std::to_string(want);
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }

private:
    struct unchecked_tag {
    };

    FreeAlgebra(spec s, unchecked_tag)
    {
        const std::size_t d = s.basis.size();
        if (d == 0) {
            throw input_error("algebra rank must be at least 1");
        }
        if (s.dual.size() != d) {
            throw input_error("need one dual variable per basis element");
        }
        if (!s.degrees.empty() && s.degrees.size() != d) {
            throw input_error("need one degree per basis element");
        }
        basis_ = std::move(s.basis);
        for (const auto &n : s.dual) {
            if (!is_valid_var_name(n)) {
                throw input_error("invalid dual variable name '" + n + "'");
            }
            dual_.push_back(var(n));
        }
        degrees_ = std::move(s.degrees);
        unit_ = s.unit.empty() ? basis_vector(0) : std::move(s.unit);
        if (unit_.size() != d) {
            throw input_error("unit needs one coordinate per basis element");
        }
        constants_.assign(d * d * d, Poly());
        for (const auto &[key, value] : s.constants) {
            auto [i, j, k] = key;
            if (i >= d || j >= d || k >= d) {
                throw input_error("structure constant index out of range");
            }
            constants_[(i * d + j) * d + k] = value;
            if (!s.constants.count({j, i, k})) {
                constants_[(j * d + i) * d + k] = value;
            }
        }
    }

    std::vector<std::string> basis_;
    std::vector<var_id> dual_;
    std::vector<int> degrees_;
    std::vector<Poly> unit_;
    std::vector<Poly> constants_;
};

/// The generic characteristic polynomial chi_A(t, Gamma) of a free algebra:
/// monic of degree d in t, coefficients polynomial in Gamma and R.
struct CharPoly {
    std::size_t rank = 0;
    std::vector<var_id> dual;
    var_id t = var(default_t_name);
    Poly poly;

    // Coefficient of t^j, j = 0..rank.
    std::vector<Poly> t_coefficients() const
    {
        std::vector<Poly> out(rank + 1);
        for (auto &[k, p] : poly.coefficients_in(t)) {
            if (k > rank) {
                throw input_error("characteristic polynomial has t-degree above its rank");
            }
            out[k] = p;
        }
        return out;
    }

    bool is_monic() const
    {
        return poly.degree_in(t) == static_cast<int>(rank) && t_coefficients()[rank].is_one();
    }

    // Argument variables of chi viewed as a degree-d form on A + R*T.
    std::vector<var_id> form_variables() const
    {
        std::vector<var_id> v = dual;
        v.push_back(t);
        return v;
    }

    friend bool operator==(const CharPoly &a, const CharPoly &b)
    {
        return a.rank == b.rank && a.dual == b.dual && a.t == b.t && a.poly == b.poly;
    }
};

// ---------------------------------------------------------------------------
// Constructors.

/// R[z]/(p(z)) on the basis 1, z, ..., z^{d-1}, with dual coordinates named
/// <dual_prefix>0 .. <dual_prefix>{d-1}. When p is homogeneous for some
/// integer weight of z the algebra is graded with deg z^k = k * weight.
inline FreeAlgebra monogenic_algebra(const Poly &p, std::string_view z_name = "z", std::string_view dual_prefix = "G")
{
    const var_id z = var(z_name);
    const int d = p.degree_in(z);
    if (d < 1) {
        throw input_error("monogenic polynomial must have positive degree in " + std::string(z_name));
    }
    auto coeffs = p.coefficients_in(z);
    if (!coeffs.at(static_cast<unsigned>(d)).is_one()) {
        throw input_error("monogenic polynomial is not monic in " + std::string(z_name) + ": " + p.to_string());
    }
    std::vector<Poly> lower(d); // p = z^d + sum_k lower[k] z^k
    for (auto &[k, c] : coeffs) {
        if (static_cast<int>(k) < d) {
            lower[k] = c;
        }
    }

    // Coordinates of z^m for m = 0 .. 2d-2.
    std::vector<std::vector<Poly>> powers;
    for (int m = 0; m <= 2 * d - 2; ++m) {
        std::vector<Poly> v(d);
        if (m < d) {
            v[m] = Poly(1);
        } else {
            const auto &prev = powers.back();
            const Poly top = prev[d - 1];
            for (int k = d - 1; k >= 1; --k) {
                v[k] = prev[k - 1];
            }
            for (int k = 0; k < d; ++k) {
                v[k] -= top * lower[k];
            }
        }
        powers.push_back(std::move(v));
    }

    FreeAlgebra::spec s;
    for (int k = 0; k < d; ++k) {
        s.basis.push_back(k == 0 ? std::string("1") : k == 1 ? std::string(z_name) : std::string(z_name) + "^" + std::to_string(k));
        s.dual.push_back(std::string(dual_prefix) + std::to_string(k));
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                if (!powers[i + j][k].is_zero()) {
                    s.constants[{i, j, k}] = powers[i + j][k];
                }
            }
        }
    }

    // Weight of z making p homogeneous, when one exists.
    std::optional<int> weight;
    bool consistent = true;
    for (int k = 0; k < d && consistent; ++k) {
        const Poly &c = lower[k];
        if (c.is_zero()) {
            continue;
        }
        if (!c.is_homogeneous() || c.degree() % (d - k) != 0) {
            consistent = false;
            break;
        }
        int w = c.degree() / (d - k);
        if (weight && *weight != w) {
            consistent = false;
        }
        weight = w;
    }
    if (consistent) {
        const int w = weight.value_or(1);
        for (int k = 0; k < d; ++k) {
            s.degrees.push_back(k * w);
        }
    }
    return FreeAlgebra(std::move(s));
}

inline FreeAlgebra monogenic_algebra(std::string_view p, std::string_view z_name = "z", std::string_view dual_prefix = "G")
{
    return monogenic_algebra(parse_poly(p), z_name, dual_prefix);
}

/// R^{x d} on its basis of orthogonal idempotents e_1..e_d; the dual
/// coordinates are <dual_prefix>1 .. <dual_prefix>d and the unit is the sum of
/// the idempotents.
inline FreeAlgebra split_algebra(std::size_t d, std::string_view dual_prefix = "x")
{
    if (d == 0) {
        throw input_error("split algebra rank must be positive");
    }
    FreeAlgebra::spec s;
    for (std::size_t i = 0; i < d; ++i) {
        s.basis.push_back("e" + std::to_string(i + 1));
        s.dual.push_back(std::string(dual_prefix) + std::to_string(i + 1));
        s.degrees.push_back(0);
        s.unit.push_back(Poly(1));
        s.constants[{i, i, i}] = Poly(1);
    }
    return FreeAlgebra(std::move(s));
}

// ---------------------------------------------------------------------------
// Characteristic polynomial.

/// Matrix of multiplication by the generic element sum_i Gamma_i gamma_i;
/// column j holds the coordinates of a * gamma_j.
inline PolyMatrix regular_representation(const FreeAlgebra &a)
{
    const std::size_t d = a.rank();
    PolyMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const Poly gi = Poly::variable(a.dual()[i]);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                if (!a.c(i, j, k).is_zero()) {
                    m(k, j) += gi * a.c(i, j, k);
                }
            }
        }
    }
    return m;
}

/// Berkowitz's division-free algorithm. Returns c_0..c_n with
/// det(tI - m) = sum_j c_j t^{n-j}, c_0 = 1.
inline std::vector<Poly> berkowitz(const PolyMatrix &m)
{
    if (!m.is_square()) {
        throw input_error("characteristic polynomial of a non-square matrix");
    }
    const std::size_t n = m.rows();
    std::vector<Poly> c{Poly(1)};
    for (std::size_t r = 0; r < n; ++r) {
        // Leading principal block of size r, the new row/column and corner.
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) {
            idx[i] = i;
        }
        const PolyMatrix lead = m.block(idx, idx);
        const PolyMatrix row = m.block({r}, idx);
        PolyMatrix col = m.block(idx, {r});

        // First column of the (r+2) x (r+1) Toeplitz matrix:
        // 1, -a, -R S, -R M S, ..., -R M^{r-1} S.
        std::vector<Poly> toeplitz{Poly(1), -m(r, r)};
        for (std::size_t k = 0; k < r; ++k) {
            toeplitz.push_back(-(row * col)(0, 0));
            if (k + 1 < r) {
                col = lead * col;
            }
        }
        std::vector<Poly> next(r + 2);
        for (std::size_t i = 0; i < r + 2; ++i) {
            for (std::size_t j = 0; j <= std::min(i, r); ++j) {
                if (!c[j].is_zero() && !toeplitz[i - j].is_zero()) {
                    next[i] += toeplitz[i - j] * c[j];
                }
            }
        }
        c = std::move(next);
    }
    return c;
}

inline CharPoly char_poly(const FreeAlgebra &a)
{
    const std::size_t d = a.rank();
    const std::vector<Poly> c = berkowitz(regular_representation(a));
    CharPoly chi;
    chi.rank = d;
    chi.dual = a.dual();
    const Poly t = Poly::variable(chi.t);
    for (std::size_t j = 0; j <= d; ++j) {
        chi.poly += c[j] * t.pow(static_cast<unsigned>(d - j));
    }
    return chi;
}

/// Base change of chi along a substitution of coefficient-ring variables.
inline CharPoly restrict_char_poly(const CharPoly &chi, const std::map<var_id, Poly> &bindings)
{
    for (const auto &[v, p] : bindings) {
        if (v == chi.t || std::find(chi.dual.begin(), chi.dual.end(), v) != chi.dual.end()) {
            throw input_error("restriction may not bind the dual or t variable " + var_name(v));
        }
    }
    CharPoly r = chi;
    r.poly = chi.poly.substitute(bindings);
    return r;
}

// Evaluate the polynomial sum_j coeffs[j] X^j at a square matrix (Horner).
inline PolyMatrix evaluate_at_matrix(const std::vector<Poly> &coeffs, const PolyMatrix &x)
{
    const std::size_t n = x.rows();
    PolyMatrix acc(n, n);
    for (std::size_t j = coeffs.size(); j-- > 0;) {
        acc = acc * x + PolyMatrix::scalar(n, coeffs[j]);
    }
    return acc;
}

struct CayleyHamiltonReport {
    bool passed = false;
    std::optional<std::pair<std::size_t, std::size_t>> offending_entry;
    Poly offending_value;
};

/// chi_A(rho(a), a) = 0 as an identity of polynomial matrices.
inline CayleyHamiltonReport cayley_hamilton_check(const FreeAlgebra &a)
{
    const CharPoly chi = char_poly(a);
    const PolyMatrix rho = regular_representation(a);
    const PolyMatrix value = evaluate_at_matrix(chi.t_coefficients(), rho);
    CayleyHamiltonReport rep;
    rep.offending_entry = first_difference(value, PolyMatrix(value.rows(), value.cols()));
    rep.passed = !rep.offending_entry.has_value();
    if (rep.offending_entry) {
        rep.offending_value = value(rep.offending_entry->first, rep.offending_entry->second);
    }
    return rep;
}

} // namespace roby

#endif // ROBY_FREE_ALGEBRA_HPP
