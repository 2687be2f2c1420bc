#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace charvar {

using Integer = mpz_class;
using Rational = mpq_class;

// Scalar-ring customization point. The primary template covers plain
// field-like scalars (Rational, double, std::complex<double>); richer rings
// (FieldElement, Poly, Dual) specialize it next to their definitions.
template <class R>
struct ring_ops {
    static R zero() { return R(0); }
    static R one() { return R(1); }
    static bool is_zero(const R& a) { return a == R(0); }
    // Division by a small integer that is known to be exact in R.
    static R div_int(const R& a, long k) {
        if (k == 0) throw std::invalid_argument("div_int: zero divisor");
        return a / R(k);
    }
    static std::optional<R> try_invert(const R& a) {
        if (is_zero(a)) return std::nullopt;
        return R(1) / a;
    }
    // Only instantiated when used; scalar types without a conversion from
    // Rational must not reach this.
    static R from_rational(const Rational& q) { return R(q); }
};

template <class R>
bool is_zero(const R& a) {
    return ring_ops<R>::is_zero(a);
}

// GMP does not canonicalize fractions built from raw num/den pairs.
inline Rational rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p" and "p/q" with optional sign, as emitted by to_string.
inline Rational parse_rational(const std::string& text) {
    Rational q;
    try {
        q = Rational(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

template <>
struct ring_ops<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& a) { return sgn(a) == 0; }
    static Rational div_int(const Rational& a, long k) {
        if (k == 0) throw std::invalid_argument("div_int: zero divisor");
        Rational r = a / rational(k);
        r.canonicalize();
        return r;
    }
    static std::optional<Rational> try_invert(const Rational& a) {
        if (is_zero(a)) return std::nullopt;
        Rational r = Rational(1) / a;
        r.canonicalize();
        return r;
    }
    static std::string str(const Rational& a) { return a.get_str(); }
    static Rational from_rational(const Rational& q) { return q; }
};

}  // namespace charvar
