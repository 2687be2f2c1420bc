#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "charvar/linalg.hpp"
#include "charvar/sym_power.hpp"

namespace charvar {

// Trace form trace(v * w) on n x n matrices.
template <class S>
S trace_form(const Matrix<S>& v, const Matrix<S>& w) {
    if (v.size() != w.size()) throw std::invalid_argument("trace_form: dimension mismatch");
    S t = ring_ops<S>::zero();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) t = t + v.at(i, j) * w.at(j, i);
    return t;
}

// c_i = trace(h_minus^i * h_plus^i) for i = 1..n-1. These are the pairing
// normalizations between raising and lowering power lines; all positive.
struct PairingConstants {
    std::size_t n = 0;
    std::vector<Rational> c;

    const Rational& at(std::size_t i) const {
        if (i < 1 || i > c.size()) throw std::out_of_range("pairing constants: index out of range");
        return c[i - 1];
    }
};

inline PairingConstants pairing_constants(std::size_t n) {
    if (n < 2) throw std::invalid_argument("pairing_constants: need n >= 2");
    PairingConstants pc;
    pc.n = n;
    Matrix<Rational> hp = h_plus(n), hm = h_minus(n);
    Matrix<Rational> hpk = hp, hmk = hm;
    for (std::size_t i = 1; i < n; ++i) {
        Rational ci = trace_form(hmk, hpk);
        if (sgn(ci) <= 0) throw std::logic_error("pairing_constants: expected a positive trace");
        pc.c.push_back(ci);
        if (i + 1 < n) { hpk = hpk * hp; hmk = hmk * hm; }
    }
    return pc;
}

// Conjugation action v -> rho(A) v rho(A)^{-1} in dimension v.size().
template <class S>
Matrix<S> adjoint_action(const SL2<S>& A, const Matrix<S>& v) {
    std::size_t n = v.size();
    return sym_power(A, n) * v * sym_power(A.inverse(), n);
}

namespace detail {

inline std::vector<Matrix<Rational>> traceless_basis(std::size_t n) {
    std::vector<Matrix<Rational>> basis;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            Matrix<Rational> E(n);
            E.at(a, b) = Rational(1);
            basis.push_back(std::move(E));
        }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Matrix<Rational> D(n);
        D.at(k, k) = Rational(1);
        D.at(k + 1, k + 1) = Rational(-1);
        basis.push_back(std::move(D));
    }
    return basis;
}

inline std::vector<Rational> flatten(const Matrix<Rational>& M) {
    return M.entries();
}

// True when v lies in the rational span of the given matrices.
inline bool in_span(const std::vector<Matrix<Rational>>& span, const Matrix<Rational>& v) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& m : span) rows.push_back(flatten(m));
    std::size_t base_rank = rank_of_rows(rows);
    rows.push_back(flatten(v));
    return rank_of_rows(rows) == base_rank;
}

}  // namespace detail

// Basis of the centralizer of h_plus inside traceless n x n matrices,
// verified to coincide with the span of h_plus^1, ..., h_plus^{n-1}.
inline std::vector<Matrix<Rational>> parabolic_invariants(std::size_t n) {
    if (n < 2) throw std::invalid_argument("parabolic_invariants: need n >= 2");
    auto basis = detail::traceless_basis(n);
    Matrix<Rational> hp = h_plus(n);
    // Rows: gl coordinates; columns: traceless basis directions.
    std::vector<std::vector<Rational>> rows(n * n, std::vector<Rational>(basis.size(), Rational(0)));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        auto img = detail::flatten(bracket(hp, basis[k]));
        for (std::size_t coord = 0; coord < n * n; ++coord) rows[coord][k] = img[coord];
    }
    auto ker = kernel_basis(std::move(rows), basis.size());
    std::vector<Matrix<Rational>> inv;
    for (const auto& coeffs : ker) {
        Matrix<Rational> v(n);
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (sgn(coeffs[k]) != 0) v = v + basis[k] * coeffs[k];
        inv.push_back(std::move(v));
    }
    if (inv.size() != n - 1)
        throw std::logic_error("parabolic_invariants: centralizer dimension is not n-1");
    std::vector<Matrix<Rational>> powers;
    for (std::size_t i = 1; i < n; ++i) powers.push_back(h_plus_power(n, i));
    for (const auto& v : inv)
        if (!detail::in_span(powers, v))
            throw std::logic_error("parabolic_invariants: kernel vector outside the power span");
    for (const auto& p : powers)
        if (!detail::in_span(inv, p))
            throw std::logic_error("parabolic_invariants: power missing from the kernel span");
    return inv;
}

// Multiplicities of the conjugation action of the diagonal one-parameter
// subgroup on traceless matrices, peeled into irreducible dimensions.
// For dimension n this comes out as 2n-1, 2n-3, ..., 3.
inline std::vector<std::size_t> clebsch_gordan_dims(std::size_t n) {
    if (n < 2) throw std::invalid_argument("clebsch_gordan_dims: need n >= 2");
    Matrix<Rational> e(2);
    e.at(0, 0) = Rational(1);
    e.at(1, 1) = Rational(-1);
    Matrix<Rational> he = sym_power_lie(e, n);
    std::vector<long> weight(n);
    for (std::size_t a = 0; a < n; ++a) weight[a] = static_cast<long>(he.at(a, a).get_num().get_si());
    std::map<long, std::size_t> mult;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b) ++mult[weight[a] - weight[b]];
    mult[0] += n - 1;
    long top = mult.rbegin()->first;
    std::vector<std::size_t> dims;
    std::size_t zero_weight_count = 0, total = 0;
    for (long w = top; w > 0; w -= 2) {
        std::size_t here = mult.count(w) ? mult[w] : 0;
        std::size_t above = mult.count(w + 2) ? mult[w + 2] : 0;
        if (here < above) throw std::logic_error("clebsch_gordan_dims: weight multiplicities not unimodal");
        for (std::size_t k = 0; k < here - above; ++k) {
            dims.push_back(static_cast<std::size_t>(w) + 1);
            ++zero_weight_count;
            total += static_cast<std::size_t>(w) + 1;
        }
    }
    if (zero_weight_count != mult[0] || total != n * n - 1)
        throw std::logic_error("clebsch_gordan_dims: decomposition does not fill the space");
    return dims;
}

}  // namespace charvar
