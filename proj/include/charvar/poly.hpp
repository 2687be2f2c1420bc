#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charvar/rational.hpp"

namespace charvar {

// Formal variable tags. A Poly remembers which variable it is in; mixing
// variables in one binary operation is an error unless one side is constant.
enum class Var : std::uint8_t { x, lambda, tau, epsilon, beta, z, t };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::lambda: return "lambda";
        case Var::tau: return "tau";
        case Var::epsilon: return "eps";
        case Var::beta: return "beta";
        case Var::z: return "z";
        case Var::t: return "t";
    }
    return "?";
}

// Dense univariate polynomial, coefficients lowest-first, trailing zeros
// trimmed so that degree() is honest. The zero polynomial has empty storage.
template <class R>
class Poly {
public:
    Poly() : var_(Var::x) {}
    Poly(long value) : var_(Var::x) {
        R c = R(value);
        if (!ring_ops<R>::is_zero(c)) c_.push_back(std::move(c));
    }
    explicit Poly(const R& constant, Var v = Var::x) : var_(v) {
        if (!ring_ops<R>::is_zero(constant)) c_.push_back(constant);
    }
    Poly(Var v, std::vector<R> coeffs) : var_(v), c_(std::move(coeffs)) { trim(); }

    static Poly variable(Var v) { return monomial(v, ring_ops<R>::one(), 1); }
    static Poly monomial(Var v, const R& coeff, std::size_t deg) {
        std::vector<R> c(deg + 1, ring_ops<R>::zero());
        c[deg] = coeff;
        return Poly(v, std::move(c));
    }

    Var var() const { return var_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const R& leading() const {
        if (c_.empty()) throw std::domain_error("leading: zero polynomial");
        return c_.back();
    }
    R coeff(std::size_t k) const { return k < c_.size() ? c_[k] : ring_ops<R>::zero(); }
    const std::vector<R>& coeffs() const { return c_; }
    R constant_term() const { return coeff(0); }

    Poly operator-() const {
        Poly r = *this;
        for (R& c : r.c_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        Var v = joint_var(o);
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ring_ops<R>::zero());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
        var_ = v;
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        Var v = a.joint_var(b);
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, ring_ops<R>::zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Poly(v, std::move(c));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const R& s, const Poly& p) {
        Poly r = p;
        for (R& c : r.c_) c = s * c;
        r.trim();
        return r;
    }
    friend Poly operator*(const Poly& p, const R& s) { return s * p; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        if (!a.is_constant() && !b.is_constant() && a.var_ != b.var_) return false;
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            if (!(a.c_[k] == b.c_[k])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(std::size_t e) const {
        Poly r(ring_ops<R>::one(), var_);
        for (std::size_t k = 0; k < e; ++k) r *= *this;
        return r;
    }

    template <class S>
    S eval(const S& point) const {
        S acc = S(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * point + S(c_[k]);
        return acc;
    }
    R operator()(const R& point) const { return eval<R>(point); }

    // Entrywise coefficient transform; useful for numeric embeddings.
    template <class F>
    auto map(F&& f) const -> Poly<decltype(f(std::declval<const R&>()))> {
        using T = decltype(f(std::declval<const R&>()));
        std::vector<T> c;
        c.reserve(c_.size());
        for (const R& a : c_) c.push_back(f(a));
        return Poly<T>(var_, std::move(c));
    }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (ring_ops<R>::is_zero(c_[k])) continue;
            if (!out.empty()) out += " + ";
            std::string cs = ring_ops<R>::str(c_[k]);
            bool bare = cs.find_first_of("+- ,;") == std::string::npos || (cs[0] == '-' && cs.find_first_of("+- ,;", 1) == std::string::npos);
            if (!bare) cs = "(" + cs + ")";
            if (k == 0) {
                out += cs;
            } else {
                out += cs + "*" + var_name(var_);
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    Var joint_var(const Poly& o) const {
        if (is_constant()) return o.is_constant() ? var_ : o.var_;
        if (o.is_constant() || o.var_ == var_) return var_;
        throw std::invalid_argument(std::string("poly: mixed variables ") + var_name(var_) + " and " + var_name(o.var_));
    }
    void trim() {
        while (!c_.empty() && ring_ops<R>::is_zero(c_.back())) c_.pop_back();
    }

    Var var_;
    std::vector<R> c_;
};

template <class R>
struct ring_ops<Poly<R>> {
    static Poly<R> zero() { return Poly<R>(); }
    static Poly<R> one() { return Poly<R>(ring_ops<R>::one()); }
    static bool is_zero(const Poly<R>& p) { return p.is_zero(); }
    static Poly<R> div_int(const Poly<R>& p, long k) {
        return p.map([&](const R& c) { return ring_ops<R>::div_int(c, k); });
    }
    static std::optional<Poly<R>> try_invert(const Poly<R>& p) {
        if (!p.is_constant()) return std::nullopt;
        auto c = ring_ops<R>::try_invert(p.constant_term());
        if (!c) return std::nullopt;
        return Poly<R>(*c, p.var());
    }
    static std::string str(const Poly<R>& p) { return p.to_string(); }
    static Poly<R> from_rational(const Rational& q) { return Poly<R>(ring_ops<R>::from_rational(q)); }
};

// Euclidean division p = q * quot + rem with deg rem < deg q.
// Requires an invertible leading coefficient in the divisor.
template <class R>
std::pair<Poly<R>, Poly<R>> poly_divide(const Poly<R>& p, const Poly<R>& q) {
    if (q.is_zero()) throw std::invalid_argument("poly_divide: division by zero polynomial");
    auto lead_inv = ring_ops<R>::try_invert(q.leading());
    if (!lead_inv) throw std::invalid_argument("poly_divide: leading coefficient not invertible");
    Var v = q.is_constant() ? p.var() : q.var();
    if (!p.is_constant() && !q.is_constant() && p.var() != q.var())
        throw std::invalid_argument("poly_divide: mixed variables");
    Poly<R> rem = p;
    if (p.degree() < q.degree()) return {Poly<R>(), rem};
    std::vector<R> quot(static_cast<std::size_t>(p.degree() - q.degree()) + 1, ring_ops<R>::zero());
    while (!rem.is_zero() && rem.degree() >= q.degree()) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - q.degree());
        R c = rem.leading() * (*lead_inv);
        quot[shift] = quot[shift] + c;
        rem -= Poly<R>::monomial(v, c, shift) * q;
    }
    return {Poly<R>(v, std::move(quot)), rem};
}

// Order of vanishing of p at the given point; p(point) != 0 gives 0.
template <class R>
std::size_t valuation_at(const Poly<R>& p, const R& point) {
    if (p.is_zero()) throw std::domain_error("valuation_at: zero polynomial");
    Poly<R> linear(p.var(), {-point, ring_ops<R>::one()});
    std::size_t v = 0;
    Poly<R> cur = p;
    while (true) {
        auto [quot, rem] = poly_divide(cur, linear);
        if (!rem.is_zero()) return v;
        ++v;
        cur = quot;
        if (cur.is_zero()) return v;
    }
}

}  // namespace charvar
