#ifndef ROBY_SURFACE_NUMERICS_HPP
#define ROBY_SURFACE_NUMERICS_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"

namespace roby
{

/// Cohomology dimensions of a line bundle.
struct Cohomology {
    long h0 = 0, h1 = 0, h2 = 0;

    long euler() const noexcept
    {
        return h0 - h1 + h2;
    }
    friend bool operator==(const Cohomology &, const Cohomology &) = default;
};

namespace detail
{

inline long p1_h0(long n)
{
    return std::max(0L, n + 1);
}
inline long p1_h1(long n)
{
    return std::max(0L, -n - 1);
}

} // namespace detail

/// h^i(O(a, b)) on P^1 x P^1 by the Kunneth formula.
inline Cohomology p1xp1_cohomology(long a, long b)
{
    using detail::p1_h0;
    using detail::p1_h1;
    return {p1_h0(a) * p1_h0(b), p1_h0(a) * p1_h1(b) + p1_h1(a) * p1_h0(b), p1_h1(a) * p1_h1(b)};
}

/// E_s = O(s, 1 - s); returns k -> h^1(E_s(-s + k)) = h^1(O(k, 1 - 2s + k)) on
/// the window where it can be nonzero, padded by one zero on each side.
inline std::map<long, long> quadric_h1_table(long s)
{
    if (s < 2) {
        throw input_error("quadric_h1_table needs s >= 2");
    }
    std::map<long, long> t;
    for (long k = -1; k <= 2 * s - 2; ++k) {
        t[k] = p1xp1_cohomology(k, 1 - 2 * s + k).h1;
    }
    return t;
}

// Closed form (k+1)(2s-k-2) on 0 <= k <= 2s-3, 0 otherwise.
inline long quadric_h1_closed_form(long s, long k)
{
    return (k >= 0 && k <= 2 * s - 3) ? (k + 1) * (2 * s - k - 2) : 0;
}

enum class UlrichClass { not_delta_ulrich, delta_ulrich, ulrich };

inline std::string to_string(UlrichClass c)
{
    switch (c) {
    case UlrichClass::not_delta_ulrich:
        return "not delta-Ulrich";
    case UlrichClass::delta_ulrich:
        return "delta-Ulrich";
    case UlrichClass::ulrich:
        return "Ulrich";
    }
    return "?";
}

/// O(a, b) on the quadric surface (degree 2, rank 1): delta-Ulrich iff its
/// restriction to a conic section, O_{P^1}(a + b), is Ulrich, i.e. a + b = 1;
/// Ulrich iff moreover h^0 = 2.
inline UlrichClass quadric_delta_ulrich_test(long a, long b)
{
    if (a + b != 1) {
        return UlrichClass::not_delta_ulrich;
    }
    return p1xp1_cohomology(a, b).h0 == 2 ? UlrichClass::ulrich : UlrichClass::delta_ulrich;
}

/// i -> h^1(O(a + i, b + i)) on [lo, hi].
inline std::map<long, long> quadric_h1_twists(long a, long b, long lo, long hi)
{
    std::map<long, long> seq;
    for (long i = lo; i <= hi; ++i) {
        seq[i] = p1xp1_cohomology(a + i, b + i).h1;
    }
    return seq;
}

struct WlpReport {
    bool increasing_below = true; // h1(i) <= h1(i+1) for i <= -2
    bool decreasing_above = true; // h1(i) >= h1(i+1) for i >= -2
    bool peak_at_minus_one_or_two = true;
    std::optional<long> first_failure;

    bool passed() const noexcept
    {
        return increasing_below && decreasing_above && peak_at_minus_one_or_two;
    }
};

/// Checks the two inequality chains on a finitely supported sequence (values
/// missing from the map count as 0) and that the maximum is attained at -1 or -2.
inline WlpReport wlp_check(const std::map<long, long> &h1)
{
    WlpReport rep;
    auto at = [&](long i) {
        auto it = h1.find(i);
        return it == h1.end() ? 0L : it->second;
    };
    long lo = -2, hi = -1, peak = 0;
    for (const auto &[i, v] : h1) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
        peak = std::max(peak, v);
    }
    for (long i = lo - 1; i <= -3; ++i) {
        if (at(i) > at(i + 1)) {
            rep.increasing_below = false;
            rep.first_failure = rep.first_failure.value_or(i);
        }
    }
    for (long i = -2; i <= hi; ++i) {
        if (at(i) < at(i + 1)) {
            rep.decreasing_above = false;
            rep.first_failure = rep.first_failure.value_or(i);
        }
    }
    rep.peak_at_minus_one_or_two = at(-1) == peak || at(-2) == peak;
    return rep;
}

/// Rank r, variety degree d, m = h^1(E(-1)).
struct BundleNumerics {
    long rank = 1;
    long degree = 1;
    long m = 0;
};

struct MonadShape {
    long left = 0, middle = 0, right = 0;
    long euler = 0; // chi of the rank r*d pushforward, r*d - m

    friend bool operator==(const MonadShape &, const MonadShape &) = default;
};

/// 0 -> O(-1)^m -> O^{rd + 2m} -> O(1)^m -> 0 on P^2.
inline MonadShape monad_shape(const BundleNumerics &n)
{
    if (n.rank < 1 || n.degree < 1 || n.m < 0) {
        throw input_error("monad_shape needs r, d >= 1 and m >= 0");
    }
    const long rd = n.rank * n.degree;
    return {n.m, rd + 2 * n.m, n.m, rd - n.m};
}

/// chi(E (x) F) = rk(F) (chi(E) + 3 rk(E)).
inline long ec_tensor(long chi_e, long r_e, long r_f)
{
    if (r_e < 1 || r_f < 1) {
        throw input_error("ec_tensor needs ranks >= 1");
    }
    return r_f * (chi_e + 3 * r_e);
}

/// beta_0 .. beta_M with beta_m = beta_{m-1} / 4 + 3/4.
inline std::vector<rational> beta_sequence(const rational &beta0, long steps)
{
    if (steps < 0) {
        throw input_error("beta_sequence needs M >= 0");
    }
    std::vector<rational> out{beta0};
    const rational quarter(1, 4), three_quarters(3, 4);
    for (long m = 1; m <= steps; ++m) {
        rational next = out.back() * quarter + three_quarters;
        next.canonicalize();
        out.push_back(next);
    }
    return out;
}

// 1 - (1 - beta_0) / 4^m.
inline rational beta_closed_form(const rational &beta0, long m)
{
    mpz_class four_m;
    mpz_ui_pow_ui(four_m.get_mpz_t(), 4, static_cast<unsigned long>(m));
    rational r = rational(1) - (rational(1) - beta0) / rational(four_m);
    r.canonicalize();
    return r;
}

} // namespace roby

#endif // ROBY_SURFACE_NUMERICS_HPP
