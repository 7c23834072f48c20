#ifndef ROBY_POLYNOMIAL_HPP
#define ROBY_POLYNOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"

namespace roby
{

using var_id = std::uint32_t;

namespace detail
{

// Process-wide interning of indeterminate names. Ids give the fixed global
// variable order used for canonical storage; printing sorts by name instead,
// so output does not depend on interning order.
class var_registry
{
public:
    static var_registry &instance()
    {
        static var_registry r;
        return r;
    }
    var_id intern(std::string_view name)
    {
        std::lock_guard lock(mtx_);
        auto it = ids_.find(std::string(name));
        if (it != ids_.end()) {
            return it->second;
        }
        var_id id = static_cast<var_id>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(std::string(name), id);
        return id;
    }
    std::string name(var_id id) const
    {
        std::lock_guard lock(mtx_);
        return names_.at(id);
    }

private:
    mutable std::mutex mtx_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, var_id> ids_;
};

} // namespace detail

inline var_id var(std::string_view name)
{
    return detail::var_registry::instance().intern(name);
}

inline std::string var_name(var_id id)
{
    return detail::var_registry::instance().name(id);
}

/// A monomial as a sorted list of (variable, exponent) pairs with positive
/// exponents.
class Monomial
{
public:
    using entry = std::pair<var_id, unsigned>;

    Monomial() = default;
    explicit Monomial(std::vector<entry> e) : powers_(std::move(e))
    {
        std::sort(powers_.begin(), powers_.end());
        std::vector<entry> merged;
        for (const auto &[v, k] : powers_) {
            if (!merged.empty() && merged.back().first == v) {
                merged.back().second += k;
            } else if (k > 0) {
                merged.emplace_back(v, k);
            }
        }
        powers_ = std::move(merged);
    }

    const std::vector<entry> &powers() const noexcept
    {
        return powers_;
    }
    bool is_one() const noexcept
    {
        return powers_.empty();
    }
    unsigned degree() const noexcept
    {
        unsigned d = 0;
        for (const auto &p : powers_) {
            d += p.second;
        }
        return d;
    }
    unsigned exponent(var_id v) const noexcept
    {
        for (const auto &p : powers_) {
            if (p.first == v) {
                return p.second;
            }
        }
        return 0;
    }
    // Degree counted only over the given variables.
    unsigned degree_in(const std::vector<var_id> &vars) const
    {
        unsigned d = 0;
        for (const auto &p : powers_) {
            if (std::find(vars.begin(), vars.end(), p.first) != vars.end()) {
                d += p.second;
            }
        }
        return d;
    }
    Monomial without(var_id v) const
    {
        Monomial m;
        for (const auto &p : powers_) {
            if (p.first != v) {
                m.powers_.push_back(p);
            }
        }
        return m;
    }

    friend Monomial operator*(const Monomial &a, const Monomial &b)
    {
        Monomial r;
        r.powers_.reserve(a.powers_.size() + b.powers_.size());
        auto i = a.powers_.begin(), j = b.powers_.begin();
        while (i != a.powers_.end() && j != b.powers_.end()) {
            if (i->first < j->first) {
                r.powers_.push_back(*i++);
            } else if (j->first < i->first) {
                r.powers_.push_back(*j++);
            } else {
                r.powers_.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        r.powers_.insert(r.powers_.end(), i, a.powers_.end());
        r.powers_.insert(r.powers_.end(), j, b.powers_.end());
        return r;
    }

    friend bool operator==(const Monomial &, const Monomial &) = default;
    friend auto operator<=>(const Monomial &, const Monomial &) = default;

private:
    std::vector<entry> powers_;
};

/// Sparse multivariate polynomial over CycScalar in canonical form: terms
/// sorted by monomial, no zero coefficients. Variable contexts merge by name.
class Poly
{
public:
    using term = std::pair<Monomial, CycScalar>;

    Poly() = default;
    Poly(int c) : Poly(CycScalar(c)) {}
    Poly(long c) : Poly(CycScalar(c)) {}
    Poly(const rational &c) : Poly(CycScalar(c)) {}
    Poly(const CycScalar &c)
    {
        if (!c.is_zero()) {
            terms_.emplace_back(Monomial{}, c);
        }
    }
    Poly(const Monomial &m, const CycScalar &c)
    {
        if (!c.is_zero()) {
            terms_.emplace_back(m, c);
        }
    }

    static Poly variable(std::string_view name)
    {
        return Poly(Monomial({{var(name), 1u}}), CycScalar(1));
    }
    static Poly variable(var_id v)
    {
        return Poly(Monomial({{v, 1u}}), CycScalar(1));
    }

    // Builds from arbitrary (possibly repeated, possibly zero) terms.
    static Poly from_terms(std::vector<term> ts)
    {
        Poly p;
        p.terms_ = std::move(ts);
        p.canonicalize();
        return p;
    }

    const std::vector<term> &terms() const noexcept
    {
        return terms_;
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    bool is_constant() const noexcept
    {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
    }
    CycScalar constant_term() const
    {
        if (!terms_.empty() && terms_[0].first.is_one()) {
            return terms_[0].second;
        }
        return CycScalar(0);
    }
    bool is_one() const noexcept
    {
        return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second.is_one();
    }

    // Total degree; -1 for the zero polynomial.
    int degree() const noexcept
    {
        int d = -1;
        for (const auto &t : terms_) {
            d = std::max(d, static_cast<int>(t.first.degree()));
        }
        return d;
    }
    int degree_in(var_id v) const noexcept
    {
        int d = -1;
        for (const auto &t : terms_) {
            d = std::max(d, static_cast<int>(t.first.exponent(v)));
        }
        return d;
    }
    int degree_in(const std::vector<var_id> &vars) const
    {
        int d = -1;
        for (const auto &t : terms_) {
            d = std::max(d, static_cast<int>(t.first.degree_in(vars)));
        }
        return d;
    }
    // Homogeneous of some degree in the given variables (zero counts).
    bool is_homogeneous_in(const std::vector<var_id> &vars) const
    {
        for (const auto &t : terms_) {
            if (t.first.degree_in(vars) != terms_.front().first.degree_in(vars)) {
                return false;
            }
        }
        return true;
    }
    bool is_homogeneous() const
    {
        for (const auto &t : terms_) {
            if (t.first.degree() != terms_.front().first.degree()) {
                return false;
            }
        }
        return true;
    }
    std::set<var_id> variables() const
    {
        std::set<var_id> vs;
        for (const auto &t : terms_) {
            for (const auto &p : t.first.powers()) {
                vs.insert(p.first);
            }
        }
        return vs;
    }
    bool involves(var_id v) const
    {
        for (const auto &t : terms_) {
            if (t.first.exponent(v) > 0) {
                return true;
            }
        }
        return false;
    }

    // Coefficients with respect to one variable: k -> coefficient of v^k.
    std::map<unsigned, Poly> coefficients_in(var_id v) const
    {
        std::map<unsigned, std::vector<term>> buckets;
        for (const auto &t : terms_) {
            buckets[t.first.exponent(v)].emplace_back(t.first.without(v), t.second);
        }
        std::map<unsigned, Poly> out;
        for (auto &[k, ts] : buckets) {
            out.emplace(k, from_terms(std::move(ts)));
        }
        return out;
    }

    Poly operator-() const
    {
        Poly r(*this);
        for (auto &t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    Poly &operator+=(const Poly &o)
    {
        *this = merge(*this, o, false);
        return *this;
    }
    Poly &operator-=(const Poly &o)
    {
        *this = merge(*this, o, true);
        return *this;
    }
    Poly &operator*=(const Poly &o)
    {
        *this = *this * o;
        return *this;
    }

    friend Poly operator+(const Poly &a, const Poly &b)
    {
        return merge(a, b, false);
    }
    friend Poly operator-(const Poly &a, const Poly &b)
    {
        return merge(a, b, true);
    }
    friend Poly operator*(const Poly &a, const Poly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        if (a.terms_.size() == 1 && a.terms_[0].first.is_one()) {
            return b.scaled(a.terms_[0].second);
        }
        if (b.terms_.size() == 1 && b.terms_[0].first.is_one()) {
            return a.scaled(b.terms_[0].second);
        }
        std::vector<term> ts;
        ts.reserve(a.terms_.size() * b.terms_.size());
        for (const auto &x : a.terms_) {
            for (const auto &y : b.terms_) {
                ts.emplace_back(x.first * y.first, x.second * y.second);
            }
        }
        return from_terms(std::move(ts));
    }

    Poly scaled(const CycScalar &c) const
    {
        if (c.is_zero()) {
            return {};
        }
        Poly r(*this);
        for (auto &t : r.terms_) {
            t.second *= c;
        }
        return r;
    }

    Poly pow(unsigned k) const
    {
        Poly result(1), base(*this);
        while (k > 0) {
            if (k & 1u) {
                result *= base;
            }
            k >>= 1u;
            if (k > 0) {
                base = base * base;
            }
        }
        return result;
    }

    // Simultaneous substitution; unbound variables are kept.
    Poly substitute(const std::map<var_id, Poly> &bindings) const
    {
        if (bindings.empty()) {
            return *this;
        }
        std::map<std::pair<var_id, unsigned>, Poly> power_cache;
        auto power_of = [&](var_id v, unsigned k) -> const Poly & {
            auto key = std::make_pair(v, k);
            auto it = power_cache.find(key);
            if (it == power_cache.end()) {
                it = power_cache.emplace(key, bindings.at(v).pow(k)).first;
            }
            return it->second;
        };
        Poly result;
        std::vector<term> untouched;
        for (const auto &t : terms_) {
            std::vector<Monomial::entry> kept;
            Poly factor;
            bool bound = false;
            for (const auto &[v, k] : t.first.powers()) {
                if (bindings.count(v)) {
                    factor = bound ? factor * power_of(v, k) : power_of(v, k);
                    bound = true;
                } else {
                    kept.emplace_back(v, k);
                }
            }
            if (!bound) {
                untouched.push_back(t);
                continue;
            }
            result += factor * Poly(Monomial(std::move(kept)), t.second);
        }
        return result + from_terms(std::move(untouched));
    }

    friend bool operator==(const Poly &a, const Poly &b)
    {
        return a.terms_ == b.terms_;
    }

    std::string to_string() const;

    friend std::ostream &operator<<(std::ostream &os, const Poly &p)
    {
        return os << p.to_string();
    }

private:
    void canonicalize()
    {
        std::sort(terms_.begin(), terms_.end(),
                  [](const term &x, const term &y) { return x.first < y.first; });
        std::vector<term> out;
        out.reserve(terms_.size());
        for (auto &t : terms_) {
            if (!out.empty() && out.back().first == t.first) {
                out.back().second += t.second;
            } else {
                if (!out.empty() && out.back().second.is_zero()) {
                    out.pop_back();
                }
                out.push_back(std::move(t));
            }
        }
        if (!out.empty() && out.back().second.is_zero()) {
            out.pop_back();
        }
        terms_ = std::move(out);
    }

    static Poly merge(const Poly &a, const Poly &b, bool subtract)
    {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.emplace_back(j->first, subtract ? -j->second : j->second);
                ++j;
            } else {
                CycScalar c = subtract ? i->second - j->second : i->second + j->second;
                if (!c.is_zero()) {
                    r.terms_.emplace_back(i->first, std::move(c));
                }
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<term> terms_;
};

namespace detail
{

// Print order: descending total degree, then descending exponents with the
// variables taken in alphabetical order.
inline std::vector<std::pair<std::string, unsigned>> named_powers(const Monomial &m)
{
    std::vector<std::pair<std::string, unsigned>> out;
    for (const auto &[v, k] : m.powers()) {
        out.emplace_back(var_name(v), k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool print_before(const Monomial &a, const Monomial &b)
{
    if (a.degree() != b.degree()) {
        return a.degree() > b.degree();
    }
    auto na = named_powers(a), nb = named_powers(b);
    std::size_t i = 0, j = 0;
    while (i < na.size() || j < nb.size()) {
        if (i == na.size()) {
            return false;
        }
        if (j == nb.size()) {
            return true;
        }
        if (na[i].first != nb[j].first) {
            return na[i].first < nb[j].first;
        }
        if (na[i].second != nb[j].second) {
            return na[i].second > nb[j].second;
        }
        ++i;
        ++j;
    }
    return false;
}

} // namespace detail

inline std::string Poly::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::vector<const term *> order;
    for (const auto &t : terms_) {
        order.push_back(&t);
    }
    std::sort(order.begin(), order.end(),
              [](const term *a, const term *b) { return detail::print_before(a->first, b->first); });
    std::string s;
    bool first = true;
    for (const term *t : order) {
        const CycScalar &c = t->second;
        std::string mono;
        for (const auto &[name, k] : detail::named_powers(t->first)) {
            mono += (mono.empty() ? "" : "*") + name + (k > 1 ? "^" + std::to_string(k) : "");
        }
        std::string coef;
        bool negative = false;
        if (c.is_rational()) {
            rational q = c.as_rational();
            negative = sgn(q) < 0;
            if (negative) {
                q = -q;
            }
            if (!(q == 1) || mono.empty()) {
                coef = q.get_str();
            }
        } else {
            coef = c.to_string();
        }
        if (first) {
            s += negative ? "-" : "";
        } else {
            s += negative ? " - " : " + ";
        }
        s += coef;
        if (!coef.empty() && !mono.empty()) {
            s += "*";
        }
        s += mono;
        first = false;
    }
    return s;
}

} // namespace roby

#endif // ROBY_POLYNOMIAL_HPP
