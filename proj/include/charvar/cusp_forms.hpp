#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "charvar/lie_pairing.hpp"
#include "charvar/linalg.hpp"
#include "charvar/number_field.hpp"
#include "charvar/poly.hpp"
#include "charvar/sym_power.hpp"

namespace charvar {

// Determinant dispatch: Gaussian elimination over a field, evaluation and
// interpolation when the scalars are themselves polynomials.
template <class F>
F det_scalar(const Matrix<F>& M) {
    return det_gaussian(M);
}
template <class F>
Poly<F> det_scalar(const Matrix<Poly<F>>& M) {
    return det_interpolated(M);
}

// Shape data of a cusp torus: modulus tau plus the signs of the chosen
// lifts of the meridian and longitude holonomies.
template <class S>
struct CuspShape {
    S tau;
    int sign_meridian = +1;
    int sign_longitude = +1;

    SL2<S> meridian() const { return SL2<S>::parabolic(ring_ops<S>::one(), sign_meridian); }
    SL2<S> longitude() const { return SL2<S>::parabolic(tau, sign_longitude); }
};

// Formal cusp shape: tau is the polynomial variable itself.
inline CuspShape<Poly<FieldElement>> formal_cusp(int sign_meridian = +1, int sign_longitude = +1) {
    return CuspShape<Poly<FieldElement>>{Poly<FieldElement>::variable(Var::tau), sign_meridian, sign_longitude};
}

// Translation-invariant 1-form on the cusp torus with matrix coefficients:
// either omega_i = d(x + tau y) (x) conj_{u(z)} h_minus^i, or a constant
// form (a dx + b dy) (x) h_plus^j.
template <class S>
struct TorusForm {
    enum class Kind { omega, constant };
    Kind kind;
    std::size_t index;  // i for omega forms, j for constant forms
    S a{}, b{};         // only meaningful for constant forms

    static TorusForm omega(std::size_t i) {
        if (i < 1) throw std::invalid_argument("torus form: index must be >= 1");
        return TorusForm{Kind::omega, i, ring_ops<S>::zero(), ring_ops<S>::zero()};
    }
    static TorusForm constant(const S& a, const S& b, std::size_t j) {
        if (j < 1) throw std::invalid_argument("torus form: index must be >= 1");
        return TorusForm{Kind::constant, j, a, b};
    }

    std::string describe() const {
        if (kind == Kind::omega) return "omega_" + std::to_string(index);
        return "const_" + std::to_string(index);
    }
};

namespace detail {

// Coefficient matrix u(z) h_minus^i u(-z) as polynomials in z, where
// u(z) = exp(z h_plus) in dimension n.
template <class S>
Matrix<Poly<S>> omega_coefficient(std::size_t n, std::size_t i) {
    if (i < 1 || i >= n) throw std::invalid_argument("omega_coefficient: index must satisfy 1 <= i <= n-1");
    auto hp = matrix_from_rational<Poly<S>>(h_plus(n));
    Poly<S> z = Poly<S>::variable(Var::z);
    Matrix<Poly<S>> u = nilpotent_exp(hp, z);
    Matrix<Poly<S>> uneg = nilpotent_exp(hp, -z);
    return u * matrix_from_rational<Poly<S>>(h_minus_power(n, i)) * uneg;
}

// z^k coefficient matrices of a polynomial matrix.
template <class S>
std::vector<Matrix<S>> coefficient_matrices(const Matrix<Poly<S>>& M) {
    int deg = 0;
    for (const auto& p : M.entries()) deg = std::max(deg, p.degree());
    std::vector<Matrix<S>> out(static_cast<std::size_t>(deg) + 1, Matrix<S>(M.size()));
    for (std::size_t a = 0; a < M.size(); ++a)
        for (std::size_t b = 0; b < M.size(); ++b)
            for (int k = 0; k <= M.at(a, b).degree(); ++k)
                out[static_cast<std::size_t>(k)].at(a, b) = M.at(a, b).coeff(static_cast<std::size_t>(k));
    return out;
}

}  // namespace detail

// Integral of the form along the straight segment from (0,0) to (p,q) in
// torus coordinates. For omega forms this is sum_k C_k s^{k+1}/(k+1) with
// s = p + q tau and C_k the z^k coefficient of the conjugated coefficient
// matrix; for constant forms it is (a p + b q) h_plus^j.
template <class S>
Matrix<S> integrate_form(const CuspShape<S>& shape, const TorusForm<S>& form, long p, long q, std::size_t n) {
    if (form.index >= n) throw std::invalid_argument("integrate_form: form index out of range for dimension");
    S sp = ring_ops<S>::from_rational(Rational(p));
    S sq = ring_ops<S>::from_rational(Rational(q));
    if (form.kind == TorusForm<S>::Kind::constant) {
        S scale = form.a * sp + form.b * sq;
        return matrix_from_rational<S>(h_plus_power(n, form.index)) * scale;
    }
    S s = sp + sq * shape.tau;
    auto coeffs = detail::coefficient_matrices(detail::omega_coefficient<S>(n, form.index));
    Matrix<S> total(n);
    S spow = s;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        total = total + coeffs[k] * ring_ops<S>::div_int(spow, static_cast<long>(k) + 1);
        spow = spow * s;
    }
    return total;
}

// Cocycle on the peripheral subgroup determined by its values on the
// meridian and longitude, extended by d(gh) = d(g) + Ad_{rho(g)} d(h).
template <class S>
struct TorusCocycle {
    std::size_t n = 0;
    CuspShape<S> shape;
    Matrix<S> on_meridian, on_longitude;

    // Value on the class p * meridian + q * longitude.
    Matrix<S> value(long p, long q) const {
        Matrix<S> dm = power_value(shape.meridian(), on_meridian, p);
        Matrix<S> dl = power_value(shape.longitude(), on_longitude, q);
        SL2<S> rho_mp = sl2_power(shape.meridian(), p);
        return dm + adjoint_action(rho_mp, dl);
    }

    static SL2<S> sl2_power(const SL2<S>& g, long k) {
        SL2<S> base = k < 0 ? g.inverse() : g;
        SL2<S> acc = SL2<S>::identity();
        for (long j = 0; j < (k < 0 ? -k : k); ++j) acc = acc * base;
        return acc;
    }

    // d(g^k) from d(g) by the cocycle rule; handles negative powers.
    Matrix<S> power_value(const SL2<S>& g, const Matrix<S>& dg, long k) const {
        if (k == 0) return Matrix<S>(n);
        Matrix<S> use_dg = dg;
        SL2<S> use_g = g;
        if (k < 0) {
            // d(g^{-1}) = -Ad_{rho(g)^{-1}} d(g)
            use_g = g.inverse();
            use_dg = -adjoint_action(use_g, dg);
            k = -k;
        }
        Matrix<S> acc(n);
        SL2<S> pow = SL2<S>::identity();
        for (long j = 0; j < k; ++j) {
            acc = acc + adjoint_action(pow, use_dg);
            pow = pow * use_g;
        }
        return acc;
    }
};

// Builds the cocycle of a torus form and verifies the commutation
// constraint d(m) + Ad_m d(l) = d(l) + Ad_l d(m) exactly.
template <class S>
TorusCocycle<S> cocycle_from_form(const CuspShape<S>& shape, const TorusForm<S>& form, std::size_t n) {
    TorusCocycle<S> c{n, shape, integrate_form(shape, form, 1, 0, n), integrate_form(shape, form, 0, 1, n)};
    Matrix<S> lhs = c.on_meridian + adjoint_action(shape.meridian(), c.on_longitude);
    Matrix<S> rhs = c.on_longitude + adjoint_action(shape.longitude(), c.on_meridian);
    if (!(lhs == rhs)) throw std::logic_error("cocycle_from_form: commutation constraint failed");
    return c;
}

// Cup product pairing of two torus forms against the fundamental class,
// computed symbolically: (a1 b2 - a2 b1) * integral over the unit square of
// trace(M1(z) M2(z)) with z = x + tau y.
template <class S>
S cup_pairing(const CuspShape<S>& shape, const TorusForm<S>& f1, const TorusForm<S>& f2, std::size_t n) {
    auto part = [&](const TorusForm<S>& f) {
        struct Part { S alpha, beta; Matrix<Poly<S>> coeff; };
        if (f.kind == TorusForm<S>::Kind::omega)
            return Part{ring_ops<S>::one(), shape.tau, detail::omega_coefficient<S>(n, f.index)};
        return Part{f.a, f.b, matrix_from_rational<Poly<S>>(h_plus_power(n, f.index))};
    };
    auto p1 = part(f1);
    auto p2 = part(f2);
    S area = p1.alpha * p2.beta - p2.alpha * p1.beta;
    Poly<S> tr = ring_ops<Poly<S>>::zero();
    Matrix<Poly<S>> prod = p1.coeff * p2.coeff;
    for (std::size_t k = 0; k < n; ++k) tr += prod.at(k, k);
    // integral of z^k over the unit square: sum_m C(k,m) tau^m / ((k-m+1)(m+1))
    S integral = ring_ops<S>::zero();
    S tau_pow = ring_ops<S>::one();
    std::vector<S> tau_powers;
    for (int m = 0; m <= tr.degree(); ++m) { tau_powers.push_back(tau_pow); tau_pow = tau_pow * shape.tau; }
    for (int k = 0; k <= tr.degree(); ++k) {
        const S& ck = tr.coeffs()[static_cast<std::size_t>(k)];
        if (ring_ops<S>::is_zero(ck)) continue;
        S inner = ring_ops<S>::zero();
        for (int m = 0; m <= k; ++m) {
            Rational w(binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(m)));
            w /= Rational(static_cast<long>((k - m + 1) * (m + 1)));
            inner = inner + tau_powers[static_cast<std::size_t>(m)] * ring_ops<S>::from_rational(w);
        }
        integral = integral + ck * inner;
    }
    return area * integral;
}

// Exponential growth rate of the pointwise norm of the form toward the
// cusp: 2 * max(row - column) over nonzero coefficient entries. Negative
// means square-integrable.
template <class S>
long growth_exponent(const TorusForm<S>& form, std::size_t n) {
    Matrix<Poly<S>> coeff = form.kind == TorusForm<S>::Kind::omega
                                ? detail::omega_coefficient<S>(n, form.index)
                                : matrix_from_rational<Poly<S>>(h_plus_power(n, form.index));
    bool seen = false;
    long g = 0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (coeff.at(r, c).is_zero()) continue;
            long w = static_cast<long>(r) - static_cast<long>(c);
            if (!seen || w > g) { g = w; seen = true; }
        }
    if (!seen) throw std::invalid_argument("growth_exponent: zero form");
    return 2 * g;
}

template <class S>
bool square_integrable(const TorusForm<S>& form, std::size_t n) {
    return growth_exponent(form, n) < 0;
}

// The 2(n-1) forms omega_1..omega_{n-1}, const(a,b,1..n-1) together with a
// verification that their cup-pairing matrix is nondegenerate. Requires
// b != a tau, the condition for the constant line to be transverse.
template <class S>
std::vector<TorusForm<S>> cohomology_basis(const CuspShape<S>& shape, const S& a, const S& b, std::size_t n) {
    if (ring_ops<S>::is_zero(b - a * shape.tau))
        throw std::invalid_argument("cohomology_basis: need b != a*tau");
    std::vector<TorusForm<S>> forms;
    for (std::size_t i = 1; i < n; ++i) forms.push_back(TorusForm<S>::omega(i));
    for (std::size_t j = 1; j < n; ++j) forms.push_back(TorusForm<S>::constant(a, b, j));
    Matrix<S> gram(forms.size());
    for (std::size_t r = 0; r < forms.size(); ++r)
        for (std::size_t c = 0; c < forms.size(); ++c)
            gram.at(r, c) = cup_pairing(shape, forms[r], forms[c], n);
    if (ring_ops<S>::is_zero(det_scalar(gram)))
        throw std::logic_error("cohomology_basis: cup pairing is degenerate");
    return forms;
}

// Cup-pairing Gram matrix of a form list; exposed for rank inspection.
template <class S>
Matrix<S> cup_matrix(const CuspShape<S>& shape, const std::vector<TorusForm<S>>& forms, std::size_t n) {
    Matrix<S> gram(forms.size());
    for (std::size_t r = 0; r < forms.size(); ++r)
        for (std::size_t c = 0; c < forms.size(); ++c)
            gram.at(r, c) = cup_pairing(shape, forms[r], forms[c], n);
    return gram;
}

// rho_n image of the peripheral class p * meridian + q * longitude:
// zeta * exp(s h_plus) with s = p + q tau and zeta the lifted sign.
template <class S>
struct PeripheralImage {
    std::size_t n;
    long p, q;
    S s;
    int zeta;               // (sign_m^p sign_l^q)^(n-1)
    Matrix<S> unipotent;    // exp(s h_plus)
    Matrix<S> rho;          // zeta * unipotent
};

template <class S>
PeripheralImage<S> peripheral_image(const CuspShape<S>& shape, std::size_t n, long p, long q) {
    S s = ring_ops<S>::from_rational(Rational(p)) + ring_ops<S>::from_rational(Rational(q)) * shape.tau;
    int lift_sign = 1;
    if (shape.sign_meridian < 0 && (p % 2 != 0)) lift_sign = -lift_sign;
    if (shape.sign_longitude < 0 && (q % 2 != 0)) lift_sign = -lift_sign;
    int zeta = (lift_sign < 0 && n % 2 == 0) ? -1 : 1;
    Matrix<S> u = nilpotent_exp(matrix_from_rational<S>(h_plus(n)), s);
    Matrix<S> rho = zeta < 0 ? -u : u;
    return PeripheralImage<S>{n, p, q, s, zeta, u, rho};
}

}  // namespace charvar
