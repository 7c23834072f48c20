#ifndef ROBY_CYCLOTOMIC_HPP
#define ROBY_CYCLOTOMIC_HPP

#include <atomic>
#include <cctype>
#include <cstddef>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace roby
{

using rational = mpq_class;

namespace detail
{

// Dense univariate polynomials over Q, lowest degree first. Used only for the
// arithmetic of Q[x]/(Phi_e).
using qpoly = std::vector<rational>;

inline void trim(qpoly &p)
{
    while (!p.empty() && sgn(p.back()) == 0) {
        p.pop_back();
    }
}

inline qpoly qpoly_mul(const qpoly &a, const qpoly &b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    qpoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

inline qpoly qpoly_sub(qpoly a, const qpoly &b)
{
    if (a.size() < b.size()) {
        a.resize(b.size());
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] -= b[i];
    }
    trim(a);
    return a;
}

// Euclidean division a = q*b + r, b nonzero.
inline std::pair<qpoly, qpoly> qpoly_divmod(qpoly a, const qpoly &b)
{
    trim(a);
    if (a.size() < b.size()) {
        return {{}, a};
    }
    qpoly q(a.size() - b.size() + 1);
    const rational &lead = b.back();
    for (std::size_t k = a.size(); k-- >= b.size();) {
        if (sgn(a[k]) == 0) {
            continue;
        }
        rational f = a[k] / lead;
        q[k - b.size() + 1] = f;
        for (std::size_t j = 0; j < b.size(); ++j) {
            a[k - b.size() + 1 + j] -= f * b[j];
        }
    }
    trim(q);
    trim(a);
    return {q, a};
}

inline unsigned euler_phi(unsigned n)
{
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

// Phi_e as a monic polynomial with integer coefficients, computed as
// (x^e - 1) / prod_{d | e, d < e} Phi_d and cached.
inline const qpoly &cyclotomic_poly(unsigned e)
{
    static std::mutex mtx;
    static std::map<unsigned, qpoly> cache;
    {
        std::lock_guard lock(mtx);
        if (auto it = cache.find(e); it != cache.end()) {
            return it->second;
        }
    }
    qpoly num(e + 1);
    num[0] = -1;
    num[e] = 1;
    for (unsigned d = 1; d < e; ++d) {
        if (e % d == 0) {
            num = qpoly_divmod(num, cyclotomic_poly(d)).first;
        }
    }
    std::lock_guard lock(mtx);
    return cache.emplace(e, std::move(num)).first->second;
}

// Reduce p modulo Phi_e in place, leaving exactly phi(e) coefficients.
inline void reduce_mod_cyclotomic(qpoly &p, unsigned e)
{
    const qpoly &phi = cyclotomic_poly(e);
    const std::size_t n = phi.size() - 1;
    for (std::size_t k = p.size(); k-- > n;) {
        if (sgn(p[k]) == 0) {
            continue;
        }
        rational f = p[k];
        for (std::size_t j = 0; j <= n; ++j) {
            p[k - n + j] -= f * phi[j];
        }
    }
    p.resize(n);
}

} // namespace detail

// Largest cyclotomic order into which two scalars of different orders may be
// embedded. Settable from the CLI config file.
inline std::atomic<unsigned> &field_order_cap()
{
    static std::atomic<unsigned> cap{360};
    return cap;
}

/// An element of the cyclotomic field Q(zeta_e), stored as its residue
/// modulo Phi_e in the power basis 1, zeta, ..., zeta^{phi(e)-1}.
///
/// Values that happen to be rational are always stored with order 1, so the
/// rational subfield has a single representation. Mixed-order operations
/// embed both operands into Q(zeta_lcm).
class CycScalar
{
public:
    CycScalar() : coeffs_{rational(0)} {}
    CycScalar(long n) : coeffs_{rational(n)} {}
    CycScalar(int n) : coeffs_{rational(n)} {}
    CycScalar(const rational &q) : coeffs_{q}
    {
        coeffs_[0].canonicalize();
    }
    CycScalar(unsigned order, std::vector<rational> coeffs) : order_(order), coeffs_(std::move(coeffs))
    {
        if (order_ == 0) {
            throw input_error("cyclotomic order must be positive");
        }
        for (auto &c : coeffs_) {
            c.canonicalize();
        }
        detail::reduce_mod_cyclotomic(coeffs_, order_);
        normalize();
    }

    // A primitive e-th root of unity.
    static CycScalar root(unsigned e)
    {
        if (e == 0) {
            throw input_error("root of unity order must be positive");
        }
        std::vector<rational> c(2);
        c[1] = 1;
        return CycScalar(e, std::move(c));
    }

    unsigned order() const noexcept
    {
        return order_;
    }
    const std::vector<rational> &coeffs() const noexcept
    {
        return coeffs_;
    }
    bool is_rational() const noexcept
    {
        return order_ == 1;
    }
    bool is_zero() const noexcept
    {
        return order_ == 1 && sgn(coeffs_[0]) == 0;
    }
    bool is_one() const noexcept
    {
        return order_ == 1 && coeffs_[0] == 1;
    }
    const rational &as_rational() const
    {
        if (!is_rational()) {
            throw input_error("scalar is not rational: " + to_string());
        }
        return coeffs_[0];
    }

    // Representation of the same element in Q(zeta_target); target must be a
    // multiple of the current order.
    CycScalar embedded(unsigned target) const
    {
        if (target % order_ != 0) {
            throw incompatible_fields_error("cannot embed Q(zeta_" + std::to_string(order_) + ") into Q(zeta_"
                                            + std::to_string(target) + ")");
        }
        if (target == order_) {
            return *this;
        }
        const unsigned step = target / order_;
        detail::qpoly p((coeffs_.size() - 1) * step + 1);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            p[k * step] = coeffs_[k];
        }
        CycScalar r;
        r.order_ = target;
        detail::reduce_mod_cyclotomic(p, target);
        r.coeffs_ = std::move(p);
        return r;
    }

    CycScalar operator-() const
    {
        CycScalar r(*this);
        for (auto &c : r.coeffs_) {
            c = -c;
        }
        return r;
    }

    CycScalar &operator+=(const CycScalar &o)
    {
        if (order_ == o.order_) {
            for (std::size_t k = 0; k < coeffs_.size(); ++k) {
                coeffs_[k] += o.coeffs_[k];
            }
            normalize();
            return *this;
        }
        if (o.order_ == 1) {
            coeffs_[0] += o.coeffs_[0];
            return *this;
        }
        auto [a, b] = common(*this, o);
        *this = a;
        return *this += b;
    }
    CycScalar &operator-=(const CycScalar &o)
    {
        return *this += -o;
    }
    CycScalar &operator*=(const CycScalar &o)
    {
        if (o.order_ == 1) {
            for (auto &c : coeffs_) {
                c *= o.coeffs_[0];
            }
            normalize();
            return *this;
        }
        if (order_ == 1) {
            rational q = coeffs_[0];
            *this = o;
            for (auto &c : coeffs_) {
                c *= q;
            }
            normalize();
            return *this;
        }
        if (order_ != o.order_) {
            auto [a, b] = common(*this, o);
            *this = a;
            return *this *= b;
        }
        detail::qpoly p = detail::qpoly_mul(coeffs_, o.coeffs_);
        detail::reduce_mod_cyclotomic(p, order_);
        coeffs_ = std::move(p);
        normalize();
        return *this;
    }
    CycScalar &operator/=(const CycScalar &o)
    {
        return *this *= o.inverse();
    }

    CycScalar inverse() const
    {
        if (is_zero()) {
            throw zero_division_error("division by zero in Q(zeta_" + std::to_string(order_) + ")");
        }
        if (order_ == 1) {
            return CycScalar(rational(1) / coeffs_[0]);
        }
        // Extended Euclid: find u with u*a = 1 mod Phi_e.
        detail::qpoly r0 = detail::cyclotomic_poly(order_), r1 = coeffs_;
        detail::trim(r1);
        detail::qpoly s0, s1{rational(1)};
        while (!(r1.size() == 1)) {
            auto [q, r] = detail::qpoly_divmod(r0, r1);
            detail::qpoly s2 = detail::qpoly_sub(s0, detail::qpoly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        for (auto &c : s1) {
            c /= r1[0];
        }
        return CycScalar(order_, std::move(s1));
    }

    CycScalar pow(long k) const
    {
        if (k < 0) {
            return inverse().pow(-k);
        }
        CycScalar result(1), base(*this);
        while (k > 0) {
            if (k & 1) {
                result *= base;
            }
            k >>= 1;
            if (k > 0) {
                base *= base;
            }
        }
        return result;
    }

    friend CycScalar operator+(CycScalar a, const CycScalar &b)
    {
        return a += b;
    }
    friend CycScalar operator-(CycScalar a, const CycScalar &b)
    {
        return a -= b;
    }
    friend CycScalar operator*(CycScalar a, const CycScalar &b)
    {
        return a *= b;
    }
    friend CycScalar operator/(CycScalar a, const CycScalar &b)
    {
        return a /= b;
    }

    friend bool operator==(const CycScalar &a, const CycScalar &b)
    {
        if (a.order_ == b.order_) {
            return a.coeffs_ == b.coeffs_;
        }
        // Both non-rational in different orders: compare in the compositum.
        if (a.order_ == 1 || b.order_ == 1) {
            return false;
        }
        const unsigned l = std::lcm(a.order_, b.order_);
        return a.embedded(l).coeffs_ == b.embedded(l).coeffs_;
    }

    // Exact text form: "p/q" for rationals, "poly(e; c0, c1, ...)" otherwise.
    std::string to_string() const
    {
        if (order_ == 1) {
            return coeffs_[0].get_str();
        }
        std::string s = "poly(" + std::to_string(order_) + ";";
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            s += (k ? ", " : " ") + coeffs_[k].get_str();
        }
        return s + ")";
    }

    friend std::ostream &operator<<(std::ostream &os, const CycScalar &x)
    {
        return os << x.to_string();
    }

    // Parses either form produced by to_string().
    static CycScalar parse(std::string_view text)
    {
        auto strip = [](std::string_view v) {
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) {
                v.remove_prefix(1);
            }
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) {
                v.remove_suffix(1);
            }
            return v;
        };
        text = strip(text);
        if (text.substr(0, 5) == "poly(") {
            if (text.back() != ')') {
                throw input_error("malformed cyclotomic literal: " + std::string(text));
            }
            std::string_view body = text.substr(5, text.size() - 6);
            auto semi = body.find(';');
            if (semi == std::string_view::npos) {
                throw input_error("malformed cyclotomic literal: " + std::string(text));
            }
            unsigned e = static_cast<unsigned>(parse_rational(strip(body.substr(0, semi))).get_num().get_ui());
            std::vector<rational> cs;
            std::string_view rest = body.substr(semi + 1);
            while (!rest.empty()) {
                auto comma = rest.find(',');
                cs.push_back(parse_rational(strip(rest.substr(0, comma))));
                if (comma == std::string_view::npos) {
                    break;
                }
                rest = rest.substr(comma + 1);
            }
            if (e == 0 || cs.size() != detail::euler_phi(e)) {
                throw input_error("cyclotomic literal needs phi(e) coefficients: " + std::string(text));
            }
            return CycScalar(e, std::move(cs));
        }
        return CycScalar(parse_rational(text));
    }

    static rational parse_rational(std::string_view text)
    {
        rational q;
        std::string s(text);
        if (s.empty() || q.set_str(s, 10) != 0) {
            throw input_error("malformed rational: '" + s + "'");
        }
        if (q.get_den() == 0) {
            throw zero_division_error("zero denominator in '" + s + "'");
        }
        q.canonicalize();
        return q;
    }

private:
    void normalize()
    {
        if (order_ == 1) {
            return;
        }
        for (std::size_t k = 1; k < coeffs_.size(); ++k) {
            if (sgn(coeffs_[k]) != 0) {
                return;
            }
        }
        rational c0 = coeffs_[0];
        order_ = 1;
        coeffs_.assign(1, c0);
    }

    static std::pair<CycScalar, CycScalar> common(const CycScalar &a, const CycScalar &b)
    {
        const unsigned l = std::lcm(a.order_, b.order_);
        if (a.order_ != 1 && b.order_ != 1 && l > field_order_cap().load()) {
            throw incompatible_fields_error("no common cyclotomic field for orders " + std::to_string(a.order_)
                                            + " and " + std::to_string(b.order_) + " below the order cap");
        }
        return {a.embedded(l), b.embedded(l)};
    }

    unsigned order_ = 1;
    std::vector<rational> coeffs_;
};

inline CycScalar make_root(unsigned e)
{
    return CycScalar::root(e);
}

// True iff x^e = 1 and x^k != 1 for 0 < k < e.
inline bool is_primitive_root(const CycScalar &x, unsigned e)
{
    if (e == 0 || !x.pow(e).is_one()) {
        return false;
    }
    CycScalar p(1);
    for (unsigned k = 1; k < e; ++k) {
        p *= x;
        if (p.is_one()) {
            return false;
        }
    }
    return true;
}

} // namespace roby

#endif // ROBY_CYCLOTOMIC_HPP
