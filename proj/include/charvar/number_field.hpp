#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charvar/poly.hpp"
#include "charvar/rational.hpp"

namespace charvar {

// Q[x]/(m(x)) for a monic m with rational coefficients. Irreducibility is
// not checked up front; a reducible modulus surfaces as a failed inversion.
class NumberField {
public:
    NumberField(std::string label, std::vector<Rational> monic_min_poly)
        : label_(std::move(label)), min_poly_(std::move(monic_min_poly)) {
        if (min_poly_.size() < 2) throw std::invalid_argument("number field: minimal polynomial must have degree >= 1");
        if (!(min_poly_.back() == Rational(1))) throw std::invalid_argument("number field: minimal polynomial must be monic");
    }

    std::size_t degree() const { return min_poly_.size() - 1; }
    const std::string& label() const { return label_; }
    // Lowest-first coefficients of the modulus, including the leading 1.
    const std::vector<Rational>& min_poly() const { return min_poly_; }
    bool same_as(const NumberField& o) const { return min_poly_ == o.min_poly_; }

    static const std::shared_ptr<const NumberField>& rationals() {
        static const std::shared_ptr<const NumberField> q =
            std::make_shared<const NumberField>("q", std::vector<Rational>{Rational(0), Rational(1)});
        return q;
    }
    static std::shared_ptr<const NumberField> gaussian() {
        return std::make_shared<const NumberField>("i", std::vector<Rational>{Rational(1), Rational(0), Rational(1)});
    }
    // Q(omega) with omega^2 = omega - 1, a primitive sixth root of unity.
    static std::shared_ptr<const NumberField> sixth_root() {
        return std::make_shared<const NumberField>("omega", std::vector<Rational>{Rational(1), Rational(-1), Rational(1)});
    }

private:
    std::string label_;
    std::vector<Rational> min_poly_;
};

// Element of a NumberField, stored as rational coordinates in the power
// basis 1, x, ..., x^{d-1}. Elements of degree-1 fields coerce freely with
// any other field; genuinely different extensions never combine.
class FieldElement {
public:
    FieldElement() : field_(NumberField::rationals()), coeffs_(1, Rational(0)) {}
    FieldElement(long value) : field_(NumberField::rationals()), coeffs_(1, Rational(value)) {}
    FieldElement(const Rational& value) : field_(NumberField::rationals()), coeffs_(1, value) {}
    FieldElement(std::shared_ptr<const NumberField> field, std::vector<Rational> coeffs)
        : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (!field_) throw std::invalid_argument("field element: null field");
        if (coeffs_.size() > field_->degree()) throw std::invalid_argument("field element: too many coordinates");
        coeffs_.resize(field_->degree(), Rational(0));
    }

    static FieldElement generator(const std::shared_ptr<const NumberField>& field) {
        if (field->degree() < 2) throw std::invalid_argument("field element: generator needs degree >= 2");
        std::vector<Rational> c(field->degree(), Rational(0));
        c[1] = Rational(1);
        return FieldElement(field, std::move(c));
    }

    const std::shared_ptr<const NumberField>& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

    bool is_zero() const {
        for (const Rational& c : coeffs_)
            if (sgn(c) != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            if (sgn(coeffs_[k]) != 0) return false;
        return true;
    }
    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("field element: not rational");
        return coeffs_[0];
    }

    FieldElement operator-() const {
        FieldElement r = *this;
        for (Rational& c : r.coeffs_) c = -c;
        return r;
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = promote(a, b);
        for (std::size_t k = 0; k < x.coeffs_.size(); ++k) x.coeffs_[k] += y.coeffs_[k];
        return x;
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = promote(a, b);
        std::size_t d = x.field_->degree();
        std::vector<Rational> prod(2 * d - 1, Rational(0));
        for (std::size_t i = 0; i < d; ++i) {
            if (sgn(x.coeffs_[i]) == 0) continue;
            for (std::size_t j = 0; j < d; ++j) prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
        }
        reduce(prod, x.field_->min_poly());
        prod.resize(d);
        return FieldElement(x.field_, std::move(prod));
    }

    FieldElement inverse() const {
        if (is_zero()) throw std::domain_error("field element: inverse of zero");
        // Extended Euclid in Q[x] against the modulus.
        Poly<Rational> a(Var::x, coeffs_);
        Poly<Rational> m(Var::x, field_->min_poly());
        Poly<Rational> r0 = m, r1 = a;
        Poly<Rational> s0, s1(Rational(1), Var::x);
        while (!r1.is_zero()) {
            auto [q, r2] = poly_divide(r0, r1);
            Poly<Rational> s2 = s0 - q * s1;
            r0 = r1; r1 = r2;
            s0 = s1; s1 = s2;
        }
        if (r0.degree() != 0)
            throw std::domain_error("field element: not invertible (modulus is reducible)");
        Rational scale = ring_ops<Rational>::try_invert(r0.constant_term()).value();
        Poly<Rational> inv = s0 * scale;
        std::vector<Rational> c(field_->degree(), Rational(0));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = inv.coeff(k);
        return FieldElement(field_, std::move(c));
    }

    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

    FieldElement pow(std::size_t e) const {
        FieldElement r(1);
        for (std::size_t k = 0; k < e; ++k) r = r * *this;
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return (a - b).is_zero(); }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    // Comma-separated power-basis coordinates, e.g. "-2,4" for -2 + 4x.
    std::string to_string() const {
        std::string out;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k) out += ",";
            out += coeffs_[k].get_str();
        }
        return out;
    }

private:
    static std::pair<FieldElement, FieldElement> promote(const FieldElement& a, const FieldElement& b) {
        if (a.field_->same_as(*b.field_)) return {a, b};
        if (a.field_->degree() == 1) return {lift(a.coeffs_[0], b.field_), b};
        if (b.field_->degree() == 1) return {a, lift(b.coeffs_[0], a.field_)};
        throw std::invalid_argument("field element: cannot mix fields " + a.field_->label() + " and " + b.field_->label());
    }
    static FieldElement lift(const Rational& v, const std::shared_ptr<const NumberField>& field) {
        std::vector<Rational> c(field->degree(), Rational(0));
        c[0] = v;
        return FieldElement(field, std::move(c));
    }
    static void reduce(std::vector<Rational>& p, const std::vector<Rational>& m) {
        std::size_t d = m.size() - 1;
        for (std::size_t k = p.size(); k-- > d;) {
            if (sgn(p[k]) == 0) continue;
            Rational lead = p[k];
            p[k] = 0;
            for (std::size_t j = 0; j < d; ++j) p[k - d + j] -= lead * m[j];
        }
    }

    std::shared_ptr<const NumberField> field_;
    std::vector<Rational> coeffs_;
};

template <>
struct ring_ops<FieldElement> {
    static FieldElement zero() { return FieldElement(0); }
    static FieldElement one() { return FieldElement(1); }
    static bool is_zero(const FieldElement& a) { return a.is_zero(); }
    static FieldElement div_int(const FieldElement& a, long k) {
        if (k == 0) throw std::invalid_argument("div_int: zero divisor");
        return a * FieldElement(rational(1, k));
    }
    static std::optional<FieldElement> try_invert(const FieldElement& a) {
        if (a.is_zero()) return std::nullopt;
        return a.inverse();
    }
    static std::string str(const FieldElement& a) { return a.to_string(); }
    static FieldElement from_rational(const Rational& q) { return FieldElement(q); }
};

}  // namespace charvar
