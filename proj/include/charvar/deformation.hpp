#pragma once

#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "charvar/cusp_forms.hpp"
#include "charvar/dual.hpp"
#include "charvar/linalg.hpp"
#include "charvar/number_field.hpp"

namespace charvar {

// First-order deformation (Id + eps d(gamma)) rho(gamma) of a representation
// along a cocycle value, packed into dual-number entries.
template <class S>
Matrix<Dual<S>> weil_deform(const Matrix<S>& rho, const Matrix<S>& d) {
    if (rho.size() != d.size()) throw std::invalid_argument("weil_deform: dimension mismatch");
    Matrix<S> slope = d * rho;
    Matrix<Dual<S>> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        for (std::size_t j = 0; j < rho.size(); ++j)
            out.at(i, j) = Dual<S>(rho.at(i, j), slope.at(i, j));
    return out;
}

// Derivative polynomial of the characteristic polynomial along a deformation
// direction X at a +-unipotent image: trace(adj(lambda Id - rho) X) written
// through the nilpotent part N = unipotent - Id as
//   zeta^{n-1} sum_k (zeta lambda - 1)^{n-1-k} trace(N^k X).
template <class S>
struct DirectionDerivative {
    Poly<S> Q;
    std::vector<S> traces;  // trace(N^k X) for k = 0..n-1
};

template <class S>
DirectionDerivative<S> direction_derivative(const PeripheralImage<S>& img, const Matrix<S>& X) {
    std::size_t n = img.n;
    Matrix<S> N = img.unipotent - Matrix<S>::identity(n);
    if (!N.pow(n).is_zero())
        throw std::domain_error("direction_derivative: peripheral image is not +-unipotent");
    DirectionDerivative<S> out;
    Matrix<S> Nk = Matrix<S>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.traces.push_back(trace_form(Nk, X));
        if (k + 1 < n) Nk = Nk * N;
    }
    Poly<S> shifted(Var::lambda, {ring_ops<S>::from_rational(Rational(-1)),
                                  ring_ops<S>::from_rational(Rational(img.zeta))});
    Poly<S> Q;
    for (std::size_t k = 0; k < n; ++k) {
        if (ring_ops<S>::is_zero(out.traces[k])) continue;
        Q += shifted.pow(n - 1 - k) * Poly<S>(out.traces[k], Var::lambda);
    }
    if (img.zeta < 0 && n % 2 == 0) Q = -Q;  // zeta^{n-1}
    out.Q = Q;
    return out;
}

template <class S>
struct QPolynomial {
    std::size_t n = 0;
    std::size_t i = 0;  // which omega direction
    long p = 0, q = 0;
    int zeta = +1;
    Poly<S> Q;
    std::vector<S> traces;
    // Orders of vanishing at 0 and at the unit eigenvalue zeta.
    std::size_t val_zero = 0, val_unit = 0;
    bool nonzero = false;
};

// Q polynomial of the omega_i direction on the peripheral class (p, q).
template <class S>
QPolynomial<S> q_polynomial(const CuspShape<S>& shape, std::size_t n, std::size_t i, long p, long q) {
    if (p == 0 && q == 0) throw std::invalid_argument("q_polynomial: trivial peripheral class");
    if (i < 1 || i >= n) throw std::invalid_argument("q_polynomial: index must satisfy 1 <= i <= n-1");
    PeripheralImage<S> img = peripheral_image(shape, n, p, q);
    Matrix<S> d = integrate_form(shape, TorusForm<S>::omega(i), p, q, n);
    Matrix<S> X = d * img.rho;
    DirectionDerivative<S> dd = direction_derivative(img, X);
    QPolynomial<S> out;
    out.n = n;
    out.i = i;
    out.p = p;
    out.q = q;
    out.zeta = img.zeta;
    out.Q = dd.Q;
    out.traces = dd.traces;
    out.nonzero = !dd.Q.is_zero();
    if (out.nonzero) {
        out.val_zero = valuation_at(dd.Q, ring_ops<S>::zero());
        out.val_unit = valuation_at(dd.Q, ring_ops<S>::from_rational(Rational(img.zeta)));
    }
    return out;
}

// Independent route to the same polynomial: the eps coefficient of
// det(lambda Id - rho + eps X) expanded directly in the ring with eps^2 = 0.
// The value part must come out as (lambda - zeta)^n; both facts are checked.
template <class S>
Poly<S> q_polynomial_oracle(const CuspShape<S>& shape, std::size_t n, std::size_t i, long p, long q) {
    if (p == 0 && q == 0) throw std::invalid_argument("q_polynomial_oracle: trivial peripheral class");
    PeripheralImage<S> img = peripheral_image(shape, n, p, q);
    Matrix<S> N = img.unipotent - Matrix<S>::identity(n);
    if (!N.pow(n).is_zero())
        throw std::domain_error("q_polynomial_oracle: peripheral image is not +-unipotent");
    Matrix<S> d = integrate_form(shape, TorusForm<S>::omega(i), p, q, n);
    Matrix<S> X = d * img.rho;
    using DP = Dual<Poly<S>>;
    Matrix<DP> A(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Poly<S> value = -Poly<S>(img.rho.at(a, b), Var::lambda);
            if (a == b) value += Poly<S>::variable(Var::lambda);
            A.at(a, b) = DP(value, Poly<S>(X.at(a, b), Var::lambda));
        }
    DP det = det_expansion(A);
    Poly<S> expected(Var::lambda, {ring_ops<S>::from_rational(Rational(-img.zeta)), ring_ops<S>::one()});
    if (!(det.a == expected.pow(n)))
        throw std::logic_error("q_polynomial_oracle: determinant value part is not (lambda - zeta)^n");
    return det.b;
}

// Exceptional specializations of a formal-tau certificate: values of tau
// where the determinant certificate degenerates. Located by stripping
// (p + q tau) factors; a leftover nonconstant factor is reported as such.
inline std::vector<std::string> exceptional_specializations(const Rational&, long, long) { return {}; }
inline std::vector<std::string> exceptional_specializations(const FieldElement&, long, long) { return {}; }

template <class F>
std::vector<std::string> exceptional_specializations(const Poly<F>& det, long p, long q) {
    std::vector<std::string> out;
    if (det.is_zero() || det.is_constant()) return out;
    Poly<F> cur = det;
    if (q != 0) {
        Poly<F> lin(cur.var(), {ring_ops<F>::from_rational(Rational(p)), ring_ops<F>::from_rational(Rational(q))});
        std::size_t mult = 0;
        while (!cur.is_constant()) {
            auto [quot, rem] = poly_divide(cur, lin);
            if (!rem.is_zero()) break;
            cur = quot;
            ++mult;
        }
        if (mult > 0)
            out.push_back("tau = " + rational(-p, q).get_str() + " (multiplicity " + std::to_string(mult) + ")");
    }
    if (!cur.is_constant())
        out.push_back("roots of residual factor of degree " + std::to_string(cur.degree()));
    return out;
}

template <class S>
struct JacobianCertificate {
    std::size_t n = 0;
    long p = 0, q = 0;
    int zeta = +1;
    int sign_meridian = +1, sign_longitude = +1;
    std::string tau_description;
    std::vector<QPolynomial<S>> qs;
    Matrix<S> jac;  // jac[i-1][j-1] = coefficient of lambda^{n-j} in Q_i
    S det_jac{};
    bool const_directions_zero = false;
    bool shape_law = false;       // trace(N^k X_i) = 0 for k > i, nonzero at k = i
    bool valuations_ok = false;   // val_zero >= 1, val_unit == n-1-i
    bool basis_ok = false;
    std::vector<std::string> exceptional_tau;
    bool certified = false;
};

// Checks that the Q polynomials span: indices 1..n-1 each once, every Q a
// nonzero multiple of lambda of degree <= n-1, and the orders of vanishing
// at the unit eigenvalue strictly decreasing (n-2, n-3, ..., 0). Distinct
// valuations force linear independence inside lambda * C[lambda]_{<= n-2}.
template <class S>
bool basis_certificate(const std::vector<QPolynomial<S>>& qs, std::size_t n) {
    if (qs.size() != n - 1) throw std::invalid_argument("basis_certificate: expected n-1 polynomials");
    std::vector<bool> seen(n, false);
    for (const auto& qp : qs) {
        if (qp.i < 1 || qp.i >= n || seen[qp.i])
            throw std::invalid_argument("basis_certificate: indices must be 1..n-1 without repeats");
        seen[qp.i] = true;
    }
    for (const auto& qp : qs) {
        if (!qp.nonzero) return false;
        if (qp.Q.degree() > static_cast<int>(n) - 1) return false;
        if (qp.val_zero < 1) return false;
        if (qp.val_unit != n - 1 - qp.i) return false;
    }
    return true;
}

// Full certificate for the peripheral class (p, q): the Q polynomials of
// all omega directions, the (n-1)x(n-1) coefficient matrix whose rows are
// the top coefficients of Q_i, its determinant, and the vanishing of all
// constant-direction derivatives.
template <class S>
JacobianCertificate<S> sigma_derivative_matrix(const CuspShape<S>& shape, std::size_t n, long p, long q) {
    if (n < 2) throw std::invalid_argument("sigma_derivative_matrix: need n >= 2");
    if (p == 0 && q == 0) throw std::invalid_argument("sigma_derivative_matrix: trivial peripheral class");
    JacobianCertificate<S> cert;
    cert.n = n;
    cert.p = p;
    cert.q = q;
    cert.sign_meridian = shape.sign_meridian;
    cert.sign_longitude = shape.sign_longitude;
    PeripheralImage<S> img = peripheral_image(shape, n, p, q);
    cert.zeta = img.zeta;
    cert.tau_description = ring_ops<S>::str(shape.tau);

    cert.shape_law = true;
    cert.valuations_ok = true;
    for (std::size_t i = 1; i < n; ++i) {
        QPolynomial<S> qp = q_polynomial(shape, n, i, p, q);
        for (std::size_t k = 0; k < n; ++k) {
            bool zero = ring_ops<S>::is_zero(qp.traces[k]);
            if (k > i && !zero) cert.shape_law = false;
            if (k == i && zero) cert.shape_law = false;
        }
        if (!qp.nonzero || qp.val_zero < 1 || qp.val_unit != n - 1 - i) cert.valuations_ok = false;
        cert.qs.push_back(std::move(qp));
    }

    cert.jac = Matrix<S>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j)
            cert.jac.at(i - 1, j - 1) = cert.qs[i - 1].Q.coeff(n - j);
    cert.det_jac = det_scalar(cert.jac);

    cert.const_directions_zero = true;
    for (std::size_t j = 1; j < n; ++j)
        for (int dir = 0; dir < 2; ++dir) {
            S a = dir == 0 ? ring_ops<S>::one() : ring_ops<S>::zero();
            S b = dir == 0 ? ring_ops<S>::zero() : ring_ops<S>::one();
            Matrix<S> d = integrate_form(shape, TorusForm<S>::constant(a, b, j), p, q, n);
            DirectionDerivative<S> dd = direction_derivative(img, d * img.rho);
            if (!dd.Q.is_zero()) cert.const_directions_zero = false;
        }

    cert.basis_ok = basis_certificate(cert.qs, n);
    cert.exceptional_tau = exceptional_specializations(cert.det_jac, p, q);
    cert.certified = cert.const_directions_zero && cert.shape_law && cert.valuations_ok && cert.basis_ok &&
                     !ring_ops<S>::is_zero(cert.det_jac);
    return cert;
}

// Flat text rendering of a certificate; stable field order, one datum per
// line, scalars via their exact string forms.
template <class S>
void serialize_certificate(const JacobianCertificate<S>& cert, std::ostream& os) {
    std::size_t n = cert.n;
    os << "certificate: peripheral-coordinate-jacobian v1\n";
    os << "n: " << n << "\n";
    os << "gamma: m^" << cert.p << " l^" << cert.q << "\n";
    os << "lift_sign_meridian: " << cert.sign_meridian << "\n";
    os << "lift_sign_longitude: " << cert.sign_longitude << "\n";
    os << "unit_eigenvalue: " << cert.zeta << "\n";
    os << "tau: " << cert.tau_description << "\n";
    os << "orientation: J[i][j] = coefficient of lambda^(n-j) in Q_i; "
          "first-order change of (-1)^j sigma_j along omega_i equals -J[i][j]\n";
    for (const auto& qp : cert.qs) {
        os << "Q[" << qp.i << "]:";
        for (std::size_t k = 0; k < n; ++k) os << " " << ring_ops<S>::str(qp.Q.coeff(k)) << (k + 1 < n ? ";" : "");
        os << "\n";
        os << "Q[" << qp.i << "] valuation at 0: " << qp.val_zero << "\n";
        os << "Q[" << qp.i << "] valuation at unit: " << qp.val_unit << "\n";
        os << "Q[" << qp.i << "] leading trace: " << ring_ops<S>::str(qp.traces[qp.i]) << "\n";
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j)
            os << "J[" << i << "][" << j << "]: " << ring_ops<S>::str(cert.jac.at(i - 1, j - 1)) << "\n";
    os << "det J: " << ring_ops<S>::str(cert.det_jac) << "\n";
    os << "constant directions annihilated: " << (cert.const_directions_zero ? "yes" : "no") << "\n";
    os << "trace shape law: " << (cert.shape_law ? "yes" : "no") << "\n";
    os << "valuation table: " << (cert.valuations_ok ? "ok" : "violated") << "\n";
    os << "spanning: " << (cert.basis_ok ? "ok" : "violated") << "\n";
    if (cert.exceptional_tau.empty()) {
        os << "exceptional tau: none\n";
    } else {
        for (const auto& e : cert.exceptional_tau) os << "exceptional tau: " << e << "\n";
    }
    os << "verdict: " << (cert.certified ? "certified" : "NOT CERTIFIED") << "\n";
}

template <class S>
std::string certificate_to_string(const JacobianCertificate<S>& cert) {
    std::ostringstream os;
    serialize_certificate(cert, os);
    return os.str();
}

}  // namespace charvar
