#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <complex>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gpe/errors.hpp"

namespace gpe {

using BigInt   = boost::multiprecision::cpp_int;
/// Arbitrary-precision rational, always reduced, denominator > 0.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q)   { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// num/den with the sign normalized into the numerator; den must be nonzero.
inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return {num, den};
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

/// Number of monomials of total degree M in m variables:
/// (M+m-1)! / (M! (m-1)!).  Degree-zero blocks are rejected: the
/// classification assumes every component is nonconstant.
inline BigInt count_T(unsigned M, unsigned m) {
    if (M < 1) throw std::invalid_argument("count_T: M must be >= 1");
    if (m < 1) throw std::invalid_argument("count_T: m must be >= 1");
    BigInt r = 1;
    for (unsigned k = 1; k <= m - 1; ++k) {
        r *= M + k;
        r /= k; // exact at every step: r is binom(M+k, k)
    }
    return r;
}

// ============================================================================
// Multi-indices
// ============================================================================

/// Exponent vector p = (p_1, ..., p_m) with p_i >= 0.
struct MultiIndex {
    std::vector<unsigned> entries;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> e) : entries(std::move(e)) {}
    MultiIndex(std::initializer_list<unsigned> e) : entries(e) {}

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    unsigned operator[](std::size_t i) const { return entries[i]; }

    [[nodiscard]] unsigned degree() const {
        unsigned d = 0;
        for (unsigned e : entries) d += e;
        return d;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.entries == b.entries;
    }

    /// Graded order, ties broken by descending lexicographic comparison, so
    /// (2,0) < (1,1) < (0,2).  Strict and total for indices of equal arity.
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        const unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        if (a.entries != b.entries)
            return std::lexicographical_compare(b.entries.begin(), b.entries.end(),
                                                a.entries.begin(), a.entries.end());
        return false;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries[i]);
        }
        return s + ")";
    }
};

/// All p with |p| = M in m variables, first entry descending; the canonical
/// monomial order used everywhere a map's components are listed.
inline std::vector<MultiIndex> enumerate_degree(unsigned m, unsigned M) {
    if (m < 1) throw std::invalid_argument("enumerate_degree: m must be >= 1");
    std::vector<MultiIndex> out;
    std::vector<unsigned> cur(m, 0);
    auto rec = [&](auto&& self, unsigned slot, unsigned remaining) -> void {
        if (slot + 1 == m) {
            cur[slot] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (unsigned k = remaining + 1; k-- > 0;) {
            cur[slot] = k;
            self(self, slot + 1, remaining - k);
        }
    };
    rec(rec, 0, M);
    return out;
}

/// C^2_{M,p} = M! / (p_1! ... p_m!), exactly.  Requires |p| = M.
inline Rational coeff_C_squared(unsigned M, const MultiIndex& p) {
    if (M < 1) throw std::invalid_argument("coeff_C_squared: M must be >= 1");
    if (p.degree() != M)
        throw std::invalid_argument("coeff_C_squared: |p| != M");
    BigInt den = 1;
    for (unsigned e : p.entries) den *= factorial(e);
    return Rational(factorial(M), den);
}

// ============================================================================
// Gaussian rationals
// ============================================================================

/// q = re + im*i with exact rational parts; closed under +, *, conjugation.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}          // NOLINT(google-explicit-constructor)
    GaussianRational(long long r) : re(r) {}                    // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
    [[nodiscard]] GaussianRational conj() const { return {re, -im}; }

    /// |q|^2 = re^2 + im^2, an exact Rational.
    [[nodiscard]] Rational norm_sq() const { return re * re + im * im; }

    [[nodiscard]] std::complex<double> to_complex() const {
        return {to_double(re), to_double(im)};
    }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    [[nodiscard]] std::string to_string() const {
        return "(" + gpe::to_string(re) + (im < 0 ? "" : "+") + gpe::to_string(im) + "i)";
    }
};

// ============================================================================
// Surd scalars
// ============================================================================

namespace detail {

/// n = s^2 * r with r squarefree; returns (s, r).  Trial division; uses native
/// arithmetic when n fits in 64 bits.
inline std::pair<BigInt, BigInt> extract_square(BigInt n) {
    BigInt s = 1;
    if (n <= 1) return {s, n};
    if (n <= BigInt(std::numeric_limits<std::int64_t>::max())) {
        auto v = n.convert_to<std::int64_t>();
        std::int64_t sq = 1;
        for (std::int64_t d = 2; d * d <= v; ++d) {
            while (v % (d * d) == 0) {
                v /= d * d;
                sq *= d;
            }
        }
        return {BigInt(sq), BigInt(v)};
    }
    for (BigInt d = 2; d * d <= n; ++d) {
        const BigInt dd = d * d;
        while (n % dd == 0) {
            n /= dd;
            s *= d;
        }
    }
    return {s, n};
}

} // namespace detail

/// Exact scalar q * sqrt(radicand) with Gaussian-rational q and a canonical
/// radicand: a squarefree nonnegative integer (zero values normalize to
/// q = 0, radicand = 1).  Squared modulus |q|^2 * radicand stays rational.
struct SurdScalar {
    GaussianRational q;
    Rational radicand{1};

    SurdScalar() = default;
    SurdScalar(GaussianRational g) : q(std::move(g)) {}  // NOLINT(google-explicit-constructor)
    SurdScalar(long long g) : q(g) {}                    // NOLINT(google-explicit-constructor)

    SurdScalar(GaussianRational g, Rational rad) : q(std::move(g)), radicand(std::move(rad)) {
        canonicalize();
    }

    /// sqrt(r) for rational r >= 0, as a canonical surd.
    static SurdScalar sqrt_of(const Rational& r) {
        if (r < 0) throw std::domain_error("SurdScalar::sqrt_of: negative radicand");
        return SurdScalar(GaussianRational(1), r);
    }

    [[nodiscard]] bool is_zero() const { return q.is_zero(); }
    [[nodiscard]] SurdScalar conj() const {
        SurdScalar s;
        s.q = q.conj();
        s.radicand = radicand;
        return s;
    }

    /// |value|^2 as an exact Rational.
    [[nodiscard]] Rational squared_modulus() const { return q.norm_sq() * radicand; }

    [[nodiscard]] std::complex<double> to_complex() const {
        return q.to_complex() * std::sqrt(to_double(radicand));
    }

    friend bool operator==(const SurdScalar& a, const SurdScalar& b) {
        return a.q == b.q && a.radicand == b.radicand;
    }

    [[nodiscard]] std::string to_string() const {
        if (radicand == 1) return q.to_string();
        return q.to_string() + "*sqrt(" + gpe::to_string(radicand) + ")";
    }

private:
    void canonicalize() {
        if (q.is_zero() || radicand == 0) {
            q = GaussianRational(0);
            radicand = 1;
            return;
        }
        // q*sqrt(a/b) = (q/b)*sqrt(a*b); then pull the square part out of a*b.
        const BigInt a = numerator(radicand), b = denominator(radicand);
        if (b != 1) q = q * GaussianRational(Rational(1, b));
        auto [s, r] = detail::extract_square(a * b);
        if (s != 1) q = q * GaussianRational(Rational(s));
        radicand = Rational(r);
    }

    friend SurdScalar surd_mul(const SurdScalar&, const SurdScalar&);
};

/// Exact product; canonical inputs stay canonical without refactoring
/// (gcd trick: sqrt(ra)*sqrt(rb) = g*sqrt((ra/g)(rb/g)) with g = gcd).
inline SurdScalar surd_mul(const SurdScalar& a, const SurdScalar& b) {
    SurdScalar out;
    out.q = a.q * b.q;
    if (out.q.is_zero()) return out;
    const BigInt ra = numerator(a.radicand), rb = numerator(b.radicand);
    const BigInt g = boost::multiprecision::gcd(ra, rb);
    out.q = out.q * GaussianRational(Rational(g));
    out.radicand = Rational((ra / g) * (rb / g));
    return out;
}

/// Exact sum within one radicand class; mixing classes is an error by design
/// (no multi-surd field extension is maintained).
inline SurdScalar surd_add(const SurdScalar& a, const SurdScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.radicand != b.radicand)
        throw IncompatibleSurd("surd_add: distinct radicand classes " +
                               to_string(a.radicand) + " vs " + to_string(b.radicand));
    SurdScalar out;
    out.q = a.q + b.q;
    out.radicand = out.q.is_zero() ? Rational(1) : a.radicand;
    return out;
}

inline SurdScalar operator*(const SurdScalar& a, const SurdScalar& b) { return surd_mul(a, b); }
inline SurdScalar operator+(const SurdScalar& a, const SurdScalar& b) { return surd_add(a, b); }

/// Exact rational power r^e (e >= 0).
inline Rational rational_pow(const Rational& r, unsigned e) {
    Rational acc = 1;
    for (unsigned k = 0; k < e; ++k) acc *= r;
    return acc;
}

} // namespace gpe
