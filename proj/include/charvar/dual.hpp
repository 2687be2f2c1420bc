#pragma once

#include <string>

#include "charvar/rational.hpp"

namespace charvar {

// R[eps]/(eps^2): carrier for first-order derivative bookkeeping.
template <class R>
struct Dual {
    R a{};  // value part
    R b{};  // eps part

    Dual() : a(ring_ops<R>::zero()), b(ring_ops<R>::zero()) {}
    Dual(long value) : a(R(value)), b(ring_ops<R>::zero()) {}
    Dual(R value) : a(std::move(value)), b(ring_ops<R>::zero()) {}
    Dual(R value, R slope) : a(std::move(value)), b(std::move(slope)) {}

    static Dual eps() { return Dual(ring_ops<R>::zero(), ring_ops<R>::one()); }

    Dual operator-() const { return Dual(-a, -b); }
    friend Dual operator+(const Dual& x, const Dual& y) { return Dual(x.a + y.a, x.b + y.b); }
    friend Dual operator-(const Dual& x, const Dual& y) { return Dual(x.a - y.a, x.b - y.b); }
    friend Dual operator*(const Dual& x, const Dual& y) { return Dual(x.a * y.a, x.a * y.b + x.b * y.a); }
    friend bool operator==(const Dual& x, const Dual& y) {
        return ring_ops<R>::is_zero(x.a - y.a) && ring_ops<R>::is_zero(x.b - y.b);
    }
    friend bool operator!=(const Dual& x, const Dual& y) { return !(x == y); }
};

template <class R>
struct ring_ops<Dual<R>> {
    static Dual<R> zero() { return Dual<R>(); }
    static Dual<R> one() { return Dual<R>(ring_ops<R>::one()); }
    static bool is_zero(const Dual<R>& d) { return ring_ops<R>::is_zero(d.a) && ring_ops<R>::is_zero(d.b); }
    static Dual<R> div_int(const Dual<R>& d, long k) {
        return Dual<R>(ring_ops<R>::div_int(d.a, k), ring_ops<R>::div_int(d.b, k));
    }
    static std::optional<Dual<R>> try_invert(const Dual<R>& d) {
        auto ia = ring_ops<R>::try_invert(d.a);
        if (!ia) return std::nullopt;
        // (a + eps b)^{-1} = a^{-1} - eps a^{-2} b
        return Dual<R>(*ia, -(*ia * *ia * d.b));
    }
    static std::string str(const Dual<R>& d) {
        return ring_ops<R>::str(d.a) + " + eps*(" + ring_ops<R>::str(d.b) + ")";
    }
    static Dual<R> from_rational(const Rational& q) { return Dual<R>(ring_ops<R>::from_rational(q)); }
};

}  // namespace charvar
