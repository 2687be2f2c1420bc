#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "charvar/matrix.hpp"
#include "charvar/poly.hpp"

namespace charvar {

// Characteristic polynomial det(v*Id - M) by the trace recursion
// M_1 = M, a_k = -trace(M_k)/k, M_{k+1} = M(M_k + a_k Id). Only exact
// integer divisions occur, so this works over any commutative Q-algebra.
template <class R>
Poly<R> char_poly(const Matrix<R>& M, Var v = Var::lambda) {
    std::size_t n = M.size();
    std::vector<R> c(n + 1, ring_ops<R>::zero());
    c[n] = ring_ops<R>::one();
    Matrix<R> Mk = M;
    for (std::size_t k = 1; k <= n; ++k) {
        R ak = ring_ops<R>::div_int(-Mk.trace(), static_cast<long>(k));
        c[n - k] = ak;
        if (k < n) Mk = M * (Mk + Matrix<R>::scalar(n, ak));
    }
    return Poly<R>(v, std::move(c));
}

// sigma_i(M) = (-1)^i * (coefficient of v^{n-i} in char_poly), 1 <= i <= n-1.
template <class R>
R elementary_symmetric(const Matrix<R>& M, std::size_t i) {
    std::size_t n = M.size();
    if (i < 1 || i >= n) throw std::out_of_range("elementary_symmetric: index must satisfy 1 <= i <= n-1");
    Poly<R> p = char_poly(M);
    R c = p.coeff(n - i);
    return (i % 2 == 0) ? c : -c;
}

// Division-free determinant by Laplace expansion with subset memoization.
// Exponential in the dimension; meant for small matrices over rings where
// Gaussian elimination is unavailable.
template <class R>
R det_expansion(const Matrix<R>& M) {
    std::size_t n = M.size();
    if (n == 0) return ring_ops<R>::one();
    if (n > 16) throw std::invalid_argument("det_expansion: dimension too large");
    std::vector<R> minor(std::size_t(1) << n, ring_ops<R>::zero());
    minor[0] = ring_ops<R>::one();
    for (std::size_t mask = 1; mask < minor.size(); ++mask) {
        std::size_t r = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        R acc = ring_ops<R>::zero();
        std::size_t idx = 0;  // position of column j within the mask
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask >> j & 1)) continue;
            const R& m = M.at(r, j);
            if (!ring_ops<R>::is_zero(m)) {
                R term = m * minor[mask ^ (std::size_t(1) << j)];
                if ((r + idx) % 2 == 0)
                    acc = acc + term;
                else
                    acc = acc - term;
            }
            ++idx;
        }
        minor[mask] = std::move(acc);
    }
    return minor.back();
}

namespace detail {

// Gaussian elimination to row echelon form, recording the pivot columns.
// Destroys rows in place; entries must form a field (every nonzero element
// invertible via ring_ops::try_invert).
template <class F>
std::vector<std::size_t> echelonize(std::vector<std::vector<F>>& rows, bool reduced, int* sign_out = nullptr) {
    std::size_t nrows = rows.size();
    std::size_t ncols = nrows ? rows[0].size() : 0;
    std::vector<std::size_t> pivots;
    int sign = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
        std::size_t sel = nrows;
        for (std::size_t r = rank; r < nrows; ++r)
            if (!ring_ops<F>::is_zero(rows[r][col])) { sel = r; break; }
        if (sel == nrows) continue;
        if (sel != rank) { std::swap(rows[sel], rows[rank]); sign = -sign; }
        auto inv = ring_ops<F>::try_invert(rows[rank][col]);
        if (!inv) throw std::domain_error("echelonize: pivot not invertible");
        for (std::size_t c = col; c < ncols; ++c) rows[rank][c] = rows[rank][c] * *inv;
        std::size_t start = reduced ? 0 : rank + 1;
        for (std::size_t r = start; r < nrows; ++r) {
            if (r == rank || ring_ops<F>::is_zero(rows[r][col])) continue;
            F factor = rows[r][col];
            for (std::size_t c = col; c < ncols; ++c) rows[r][c] = rows[r][c] - factor * rows[rank][c];
        }
        pivots.push_back(col);
        ++rank;
    }
    if (sign_out) *sign_out = sign;
    return pivots;
}

}  // namespace detail

template <class F>
std::vector<std::vector<F>> matrix_rows(const Matrix<F>& M) {
    std::vector<std::vector<F>> rows(M.size(), std::vector<F>(M.size(), ring_ops<F>::zero()));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j) rows[i][j] = M.at(i, j);
    return rows;
}

// Determinant over a field by Gaussian elimination.
template <class F>
F det_gaussian(const Matrix<F>& M) {
    std::size_t n = M.size();
    if (n == 0) return ring_ops<F>::one();
    auto rows = matrix_rows(M);
    F det = ring_ops<F>::one();
    int sign = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = n;
        for (std::size_t r = rank; r < n; ++r)
            if (!ring_ops<F>::is_zero(rows[r][col])) { sel = r; break; }
        if (sel == n) return ring_ops<F>::zero();
        if (sel != rank) { std::swap(rows[sel], rows[rank]); sign = -sign; }
        F pivot = rows[rank][col];
        det = det * pivot;
        F inv = ring_ops<F>::try_invert(pivot).value();
        for (std::size_t r = rank + 1; r < n; ++r) {
            if (ring_ops<F>::is_zero(rows[r][col])) continue;
            F factor = rows[r][col] * inv;
            for (std::size_t c = col; c < n; ++c) rows[r][c] = rows[r][c] - factor * rows[rank][c];
        }
        ++rank;
    }
    return sign < 0 ? -det : det;
}

// Rank of an arbitrary (possibly rectangular) row list over a field.
template <class F>
std::size_t rank_of_rows(std::vector<std::vector<F>> rows) {
    if (rows.empty()) return 0;
    return detail::echelonize(rows, false).size();
}

template <class F>
std::size_t rank(const Matrix<F>& M) {
    return rank_of_rows(matrix_rows(M));
}

// Basis of the right kernel of a (possibly rectangular) matrix given as rows.
template <class F>
std::vector<std::vector<F>> kernel_basis(std::vector<std::vector<F>> rows, std::size_t ncols) {
    for (const auto& r : rows)
        if (r.size() != ncols) throw std::invalid_argument("kernel_basis: ragged rows");
    std::vector<std::size_t> pivots = rows.empty() ? std::vector<std::size_t>{} : detail::echelonize(rows, true);
    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t free_col = 0; free_col < ncols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<F> v(ncols, ring_ops<F>::zero());
        v[free_col] = ring_ops<F>::one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Inverse of a square matrix over a field; throws if singular.
template <class F>
Matrix<F> inverse(const Matrix<F>& M) {
    std::size_t n = M.size();
    std::vector<std::vector<F>> rows(n, std::vector<F>(2 * n, ring_ops<F>::zero()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = M.at(i, j);
        rows[i][n + i] = ring_ops<F>::one();
    }
    auto pivots = detail::echelonize(rows, true);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw std::domain_error("inverse: singular matrix");
    for (std::size_t p : pivots)
        if (p >= n) throw std::domain_error("inverse: singular matrix");
    Matrix<F> inv(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = rows[i][n + j];
    return inv;
}

// Solves (c*Id - N)^{-1} for nilpotent N as an exact matrix of polynomials
// over the shift c: numerator sum_{k<n} c^{n-1-k} N^k, denominator c^n.
template <class R>
std::pair<Matrix<Poly<R>>, Poly<R>> unipotent_shifted_inverse(const Poly<R>& c, const Matrix<R>& N) {
    std::size_t n = N.size();
    if (N.pow(n).is_zero() == false)
        throw std::invalid_argument("unipotent_shifted_inverse: matrix is not nilpotent");
    Matrix<Poly<R>> num(n);
    Matrix<R> Nk = Matrix<R>::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        Poly<R> ck = c.pow(n - 1 - k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                num.at(i, j) += ck * Poly<R>(Nk.at(i, j), c.var());
        if (k + 1 < n) Nk = Nk * N;
    }
    return {num, c.pow(n)};
}

// Newton-form interpolation through (points[k], values[k]); exact over a field.
template <class F>
Poly<F> interpolate(const std::vector<F>& points, const std::vector<F>& values, Var v) {
    if (points.size() != values.size() || points.empty())
        throw std::invalid_argument("interpolate: point/value mismatch");
    std::size_t m = points.size();
    std::vector<F> dd = values;  // divided differences, built in place
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t k = m; k-- > level;) {
            F denom = points[k] - points[k - level];
            auto inv = ring_ops<F>::try_invert(denom);
            if (!inv) throw std::invalid_argument("interpolate: repeated points");
            dd[k] = (dd[k] - dd[k - 1]) * *inv;
        }
    Poly<F> result(dd[m - 1], v);
    for (std::size_t k = m - 1; k-- > 0;) {
        Poly<F> linear(v, {-points[k], ring_ops<F>::one()});
        result = result * linear + Poly<F>(dd[k], v);
    }
    return result;
}

// Determinant of a matrix of polynomials over a field by evaluation at
// rational points and interpolation; degree bound is the sum over rows of
// the maximal entry degree.
template <class F>
Poly<F> det_interpolated(const Matrix<Poly<F>>& M) {
    std::size_t n = M.size();
    if (n == 0) return Poly<F>(ring_ops<F>::one());
    Var v = Var::x;
    long bound = 0;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        int row_deg = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const Poly<F>& p = M.at(i, j);
            if (!p.is_constant()) { v = p.var(); any = true; }
            row_deg = std::max(row_deg, std::max(0, p.degree()));
        }
        bound += row_deg;
    }
    if (!any) {
        Matrix<F> C(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) C.at(i, j) = M.at(i, j).constant_term();
        return Poly<F>(det_gaussian(C), v);
    }
    std::vector<F> points, values;
    points.reserve(bound + 1);
    for (long t = 0; t <= bound; ++t) {
        F pt = F(t);
        Matrix<F> C(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) C.at(i, j) = M.at(i, j).eval(pt);
        points.push_back(pt);
        values.push_back(det_gaussian(C));
    }
    return interpolate(points, values, v);
}

}  // namespace charvar
