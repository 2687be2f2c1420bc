#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "charvar/matrix.hpp"
#include "charvar/rational.hpp"

namespace charvar {

// Element of SL(2) together with a global sign, so that +/- lifts of the
// same parabolic are distinct values. The matrix meant is sign * [[a,b],[c,d]]
// with a*d - b*c = 1 enforced on construction.
template <class S>
struct SL2 {
    S a, b, c, d;
    int sign = +1;

    SL2(S a_, S b_, S c_, S d_, int sign_ = +1)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), sign(sign_) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("sl2: sign must be +1 or -1");
        if (!ring_ops<S>::is_zero(a * d - b * c - ring_ops<S>::one()))
            throw std::invalid_argument("sl2: determinant is not 1");
    }

    static SL2 identity() {
        return SL2(ring_ops<S>::one(), ring_ops<S>::zero(), ring_ops<S>::zero(), ring_ops<S>::one());
    }
    // Up-triangular parabolic [[1, t],[0, 1]] with a sign lift.
    static SL2 parabolic(const S& t, int sign = +1) {
        return SL2(ring_ops<S>::one(), t, ring_ops<S>::zero(), ring_ops<S>::one(), sign);
    }

    SL2 inverse() const { return SL2(d, -b, -c, a, sign); }

    friend SL2 operator*(const SL2& x, const SL2& y) {
        return SL2(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                   x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d, x.sign * y.sign);
    }

    friend bool operator==(const SL2& x, const SL2& y) {
        if (x.sign == y.sign)
            return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
        return x.a == -y.a && x.b == -y.b && x.c == -y.c && x.d == -y.d;
    }
    friend bool operator!=(const SL2& x, const SL2& y) { return !(x == y); }

    S trace_with_sign() const {
        S t = a + d;
        return sign < 0 ? -t : t;
    }

    Matrix<S> as_matrix() const {
        Matrix<S> m(2);
        m.at(0, 0) = a; m.at(0, 1) = b; m.at(1, 0) = c; m.at(1, 1) = d;
        if (sign < 0) m = -m;
        return m;
    }
};

// Image of an SL(2) element in dimension n under the symmetric-power map:
// the action on forms of degree n-1 in x, y with x -> a x + c y, y -> b x + d y,
// written in the basis b_i = x^{n-1-i} y^i.
template <class S>
Matrix<S> sym_power(const SL2<S>& A, std::size_t n) {
    if (n < 1) throw std::invalid_argument("sym_power: dimension must be >= 1");
    S sa = A.a, sb = A.b, sc = A.c, sd = A.d;
    if (A.sign < 0) { sa = -sa; sb = -sb; sc = -sc; sd = -sd; }
    Matrix<S> M(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t alpha = n - 1 - j;  // exponent on (a x + c y)
        // Coefficients of (sa x + sc y)^alpha by y-degree.
        std::vector<S> first(alpha + 1, ring_ops<S>::zero());
        {
            std::vector<S> apow(alpha + 1), cpow(alpha + 1);
            apow[0] = ring_ops<S>::one();
            cpow[0] = ring_ops<S>::one();
            for (std::size_t k = 1; k <= alpha; ++k) { apow[k] = apow[k - 1] * sa; cpow[k] = cpow[k - 1] * sc; }
            for (std::size_t k = 0; k <= alpha; ++k)
                first[k] = ring_ops<S>::from_rational(Rational(binomial(alpha, k))) * apow[alpha - k] * cpow[k];
        }
        // Coefficients of (sb x + sd y)^j by y-degree.
        std::vector<S> second(j + 1, ring_ops<S>::zero());
        {
            std::vector<S> bpow(j + 1), dpow(j + 1);
            bpow[0] = ring_ops<S>::one();
            dpow[0] = ring_ops<S>::one();
            for (std::size_t k = 1; k <= j; ++k) { bpow[k] = bpow[k - 1] * sb; dpow[k] = dpow[k - 1] * sd; }
            for (std::size_t k = 0; k <= j; ++k)
                second[k] = ring_ops<S>::from_rational(Rational(binomial(j, k))) * bpow[j - k] * dpow[k];
        }
        for (std::size_t u = 0; u <= alpha; ++u)
            for (std::size_t v = 0; v <= j; ++v)
                M.at(u + v, j) = M.at(u + v, j) + first[u] * second[v];
    }
    return M;
}

// Derivative of sym_power at the identity: the induced map on traceless
// 2x2 matrices X = [[p, q],[r, -p]], acting on b_i = x^{n-1-i} y^i.
template <class S>
Matrix<S> sym_power_lie(const Matrix<S>& X, std::size_t n) {
    if (X.size() != 2) throw std::invalid_argument("sym_power_lie: input must be 2x2");
    if (!ring_ops<S>::is_zero(X.trace())) throw std::invalid_argument("sym_power_lie: input must be traceless");
    const S& p = X.at(0, 0);
    const S& q = X.at(0, 1);
    const S& r = X.at(1, 0);
    Matrix<S> M(n);
    for (std::size_t j = 0; j < n; ++j) {
        long diag = static_cast<long>(n) - 1 - 2 * static_cast<long>(j);
        M.at(j, j) = ring_ops<S>::from_rational(Rational(diag)) * p;
        if (j + 1 < n) M.at(j + 1, j) = ring_ops<S>::from_rational(Rational(static_cast<long>(n - 1 - j))) * r;
        if (j > 0) M.at(j - 1, j) = ring_ops<S>::from_rational(Rational(static_cast<long>(j))) * q;
    }
    return M;
}

// Image of the raising element [[0,1],[0,0]]: superdiagonal 1, 2, ..., n-1.
inline Matrix<Rational> h_plus(std::size_t n) {
    Matrix<Rational> M(n);
    for (std::size_t i = 0; i + 1 < n; ++i) M.at(i, i + 1) = Rational(static_cast<long>(i + 1));
    return M;
}

// Image of the lowering element [[0,0],[1,0]]: subdiagonal n-1, n-2, ..., 1.
inline Matrix<Rational> h_minus(std::size_t n) {
    Matrix<Rational> M(n);
    for (std::size_t i = 0; i + 1 < n; ++i) M.at(i + 1, i) = Rational(static_cast<long>(n - 1 - i));
    return M;
}

inline Matrix<Rational> h_plus_power(std::size_t n, std::size_t i) { return h_plus(n).pow(i); }
inline Matrix<Rational> h_minus_power(std::size_t n, std::size_t i) { return h_minus(n).pow(i); }

template <class S>
Matrix<S> matrix_from_rational(const Matrix<Rational>& M) {
    return M.map([](const Rational& q) { return ring_ops<S>::from_rational(q); });
}

// exp(beta * M) for nilpotent M; the series terminates exactly.
template <class S>
Matrix<S> nilpotent_exp(const Matrix<S>& M, const S& beta) {
    std::size_t n = M.size();
    Matrix<S> term = Matrix<S>::identity(n);
    Matrix<S> sum = term;
    S beta_pow = ring_ops<S>::one();
    Rational inv_fact(1);
    for (std::size_t k = 1; k <= n; ++k) {
        term = term * M;
        if (term.is_zero()) return sum;
        beta_pow = beta_pow * beta;
        inv_fact /= Rational(static_cast<long>(k));
        Matrix<S> scaled = term * (beta_pow * ring_ops<S>::from_rational(inv_fact));
        sum = sum + scaled;
    }
    throw std::invalid_argument("nilpotent_exp: matrix is not nilpotent");
}

}  // namespace charvar
