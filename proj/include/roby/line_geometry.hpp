#ifndef ROBY_LINE_GEOMETRY_HPP
#define ROBY_LINE_GEOMETRY_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "free_algebra.hpp"
#include "poly_matrix.hpp"
#include "polynomial.hpp"
#include "roby_module.hpp"

namespace roby
{

// Extra degrees added on both ends of the splitting-type window.
inline std::atomic<int> &degree_window_padding()
{
    static std::atomic<int> pad{0};
    return pad;
}

/// A graded module over k[x,y] given by generators and a relation matrix whose
/// columns are the relations: coker(relations) with relations in
/// sum_c S(-relation_degrees[c]) -> sum_r S(-generator_degrees[r]).
struct GradedModuleP1 {
    std::vector<int> generator_degrees;
    std::vector<int> relation_degrees;
    PolyMatrix relations; // generators x relations, may have zero columns
    var_id x = var("x");
    var_id y = var("y");

    static GradedModuleP1 free(std::vector<int> degrees)
    {
        GradedModuleP1 m;
        m.relations = PolyMatrix(degrees.size(), 0);
        m.generator_degrees = std::move(degrees);
        return m;
    }

    // Entry (r, c) must be zero or homogeneous of degree relDeg[c] - genDeg[r]
    // in x, y with no other variables; throws input_error otherwise.
    void validate() const
    {
        if (relations.rows() != generator_degrees.size() || relations.cols() != relation_degrees.size()) {
            throw input_error("relation matrix shape does not match the degree lists");
        }
        for (std::size_t r = 0; r < relations.rows(); ++r) {
            for (std::size_t c = 0; c < relations.cols(); ++c) {
                const Poly &p = relations(r, c);
                if (p.is_zero()) {
                    continue;
                }
                for (var_id v : p.variables()) {
                    if (v != x && v != y) {
                        throw input_error("relation entry involves " + var_name(v) + " besides " + var_name(x)
                                          + ", " + var_name(y));
                    }
                }
                const int want = relation_degrees[c] - generator_degrees[r];
                if (!p.is_homogeneous() || p.degree() != want) {
                    throw input_error("relation entry (" + std::to_string(r) + ", " + std::to_string(c) + ") = "
                                      + p.to_string() + " is not homogeneous of degree " + std::to_string(want));
                }
            }
        }
    }
};

namespace detail
{

// Rank of a dense matrix over the cyclotomic scalars by Gaussian elimination.
inline std::size_t exact_rank(std::vector<std::vector<CycScalar>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c].is_zero()) {
            ++piv;
        }
        if (piv == rows) {
            continue;
        }
        std::swap(m[piv], m[rank]);
        const CycScalar inv = m[rank][c].inverse();
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c].is_zero()) {
                continue;
            }
            const CycScalar f = m[r][c] * inv;
            for (std::size_t k = c; k < cols; ++k) {
                if (!m[rank][k].is_zero()) {
                    m[r][k] -= f * m[rank][k];
                }
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

/// dim_k of the degree-k piece of the module for k = lo..hi.
inline std::vector<long> hilbert_function(const GradedModuleP1 &m, int lo, int hi)
{
    if (lo > hi) {
        throw input_error("hilbert_function needs lo <= hi");
    }
    m.validate();
    std::vector<long> out;
    for (int k = lo; k <= hi; ++k) {
        // Coordinates: generator r contributes monomials x^{n-i} y^i, n = k - g_r.
        std::vector<std::size_t> offset;
        std::size_t total = 0;
        for (int g : m.generator_degrees) {
            offset.push_back(total);
            total += static_cast<std::size_t>(std::max(0, k - g + 1));
        }
        std::vector<std::vector<CycScalar>> images; // one row per image vector
        for (std::size_t c = 0; c < m.relation_degrees.size(); ++c) {
            const int n = k - m.relation_degrees[c];
            for (int v = 0; v <= n; ++v) {
                std::vector<CycScalar> row(total);
                bool nonzero = false;
                for (std::size_t r = 0; r < m.generator_degrees.size(); ++r) {
                    for (const auto &[mono, coef] : m.relations(r, c).terms()) {
                        const std::size_t yexp = mono.exponent(m.y) + static_cast<unsigned>(v);
                        row[offset[r] + yexp] += coef;
                        nonzero = true;
                    }
                }
                if (nonzero) {
                    images.push_back(std::move(row));
                }
            }
        }
        out.push_back(static_cast<long>(total - detail::exact_rank(std::move(images))));
    }
    return out;
}

/// The twists (a_1 >= ... >= a_r) of a bundle on the line, sum O(a_i).
struct SplittingType {
    std::vector<int> twists;

    std::size_t rank() const noexcept
    {
        return twists.size();
    }
    bool is_trivial() const
    {
        return std::all_of(twists.begin(), twists.end(), [](int a) { return a == 0; });
    }
    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < twists.size(); ++i) {
            s += (i ? ", " : "") + std::to_string(twists[i]);
        }
        return s + ")";
    }
    friend bool operator==(const SplittingType &, const SplittingType &) = default;
};

/// Recovers the twists from Delta h(k) = #{i : a_i + k >= 0} on a finite
/// degree window; throws input_error when the Hilbert function is not that of
/// a bundle (torsion, unsaturated, or not stable on the window).
inline SplittingType splitting_type(const GradedModuleP1 &m)
{
    m.validate();
    if (m.generator_degrees.empty()) {
        return {};
    }
    const int pad = degree_window_padding().load();
    const int gmin = *std::min_element(m.generator_degrees.begin(), m.generator_degrees.end());
    const int gmax = *std::max_element(m.generator_degrees.begin(), m.generator_degrees.end());
    int rmax = gmax;
    for (int d : m.relation_degrees) {
        rmax = std::max(rmax, d);
    }
    const int lo = gmin - 1 - pad;
    const int hi = rmax + static_cast<int>(m.generator_degrees.size()) + 1 + pad;
    const std::vector<long> h = hilbert_function(m, lo - 1, hi);
    std::vector<long> delta; // delta[j] = Delta h(lo + j)
    for (std::size_t j = 1; j < h.size(); ++j) {
        delta.push_back(h[j] - h[j - 1]);
    }
    if (delta.front() != 0) {
        throw input_error("module has sections below its generators; not a bundle module");
    }
    for (std::size_t j = 1; j < delta.size(); ++j) {
        if (delta[j] < delta[j - 1]) {
            throw input_error("Hilbert function exceeds the bundle bound at degree " + std::to_string(lo + int(j))
                              + " (torsion or unsaturated input)");
        }
    }
    if (delta.back() != delta[delta.size() - 2]) {
        throw input_error("Hilbert function does not stabilize on the degree window");
    }
    SplittingType st;
    for (std::size_t j = 1; j < delta.size(); ++j) {
        const int k = lo + static_cast<int>(j);
        for (long c = 0; c < delta[j] - delta[j - 1]; ++c) {
            st.twists.push_back(-k);
        }
    }
    std::sort(st.twists.rbegin(), st.twists.rend());
    return st;
}

inline bool is_ulrich_over_line(const SplittingType &s)
{
    return s.is_trivial();
}

/// E on a rational curve with O_C(1) = O_{P^1}(e) is Ulrich iff every twist
/// equals e - 1, i.e. h^0(E(-1)) = h^1(E(-1)) = 0.
inline bool is_ulrich_on_embedded_curve(const SplittingType &s, int e)
{
    if (e < 1) {
        throw input_error("curve degree must be at least 1");
    }
    return std::all_of(s.twists.begin(), s.twists.end(), [e](int a) { return a - e == -1; });
}

/// Substitutes the line bindings z_i -> linear forms in x, y into every matrix
/// entry, the characteristic polynomial and the source algebra. Throws when a
/// binding touches x or y or when other base variables survive.
inline CharMorphism restrict_to_line(const CharMorphism &c, const std::map<var_id, Poly> &line,
                                     var_id x = var("x"), var_id y = var("y"))
{
    for (const auto &[v, p] : line) {
        if (v == x || v == y) {
            throw input_error("line bindings must not touch " + var_name(x) + " or " + var_name(y));
        }
        for (var_id w : p.variables()) {
            if (w != x && w != y) {
                throw input_error("binding of " + var_name(v) + " must be a form in " + var_name(x) + ", "
                                  + var_name(y));
            }
        }
    }
    CharMorphism r;
    r.chi = restrict_char_poly(c.chi, line);
    if (c.source) {
        r.source = c.source->substituted(line);
    }
    for (const auto &m : c.matrices) {
        r.matrices.push_back(m.substitute(line));
    }
    std::set<var_id> allowed{x, y, r.chi.t};
    allowed.insert(r.chi.dual.begin(), r.chi.dual.end());
    auto check = [&](const std::set<var_id> &vs, const std::string &where) {
        for (var_id v : vs) {
            if (!allowed.count(v)) {
                throw input_error("after restriction " + where + " still involves " + var_name(v)
                                  + "; bindings must cover every base variable other than " + var_name(x) + ", "
                                  + var_name(y));
            }
        }
    };
    for (const auto &m : r.matrices) {
        check(m.variables(), "the morphism");
    }
    check(r.chi.poly.variables(), "the characteristic polynomial");
    if (r.source) {
        check(r.source->coefficient_variables(), "the algebra");
    }
    return r;
}

/// The module of sections W (x) k[x,y] underlying a morphism on the line:
/// free with all generators in degree 0.
inline GradedModuleP1 underlying_module(const CharMorphism &c)
{
    return GradedModuleP1::free(std::vector<int>(c.dim(), 0));
}

} // namespace roby

#endif // ROBY_LINE_GEOMETRY_HPP
