#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charvar/rational.hpp"

namespace charvar {

// Dense square matrix over an exact scalar ring.
template <class R>
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), e_(n * n, ring_ops<R>::zero()) {}
    Matrix(std::size_t n, std::vector<R> entries) : n_(n), e_(std::move(entries)) {
        if (e_.size() != n * n) throw std::invalid_argument("matrix: entry count mismatch");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring_ops<R>::one();
        return m;
    }
    static Matrix scalar(std::size_t n, const R& s) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = s;
        return m;
    }

    std::size_t size() const { return n_; }
    R& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const R& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    const std::vector<R>& entries() const { return e_; }

    bool is_zero() const {
        for (const R& x : e_)
            if (!ring_ops<R>::is_zero(x)) return false;
        return true;
    }

    R trace() const {
        R t = ring_ops<R>::zero();
        for (std::size_t i = 0; i < n_; ++i) t = t + at(i, i);
        return t;
    }

    Matrix transpose() const {
        Matrix m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    Matrix operator-() const {
        Matrix m = *this;
        for (R& x : m.e_) x = -x;
        return m;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix m = a;
        for (std::size_t k = 0; k < m.e_.size(); ++k) m.e_[k] = m.e_[k] + b.e_[k];
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-b); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        std::size_t n = a.n_;
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const R& aik = a.at(i, k);
                if (ring_ops<R>::is_zero(aik)) continue;
                for (std::size_t j = 0; j < n; ++j) m.at(i, j) = m.at(i, j) + aik * b.at(k, j);
            }
        return m;
    }

    friend Matrix operator*(const R& s, const Matrix& a) {
        Matrix m = a;
        for (R& x : m.e_) x = s * x;
        return m;
    }
    friend Matrix operator*(const Matrix& a, const R& s) { return s * a; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_) return false;
        for (std::size_t k = 0; k < a.e_.size(); ++k)
            if (!(a.e_[k] == b.e_[k])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix pow(std::size_t e) const {
        Matrix r = identity(n_);
        for (std::size_t k = 0; k < e; ++k) r = r * *this;
        return r;
    }

    template <class F>
    auto map(F&& f) const -> Matrix<decltype(f(std::declval<const R&>()))> {
        using T = decltype(f(std::declval<const R&>()));
        std::vector<T> out;
        out.reserve(e_.size());
        for (const R& x : e_) out.push_back(f(x));
        return Matrix<T>(n_, std::move(out));
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < n_; ++i) {
            if (i) out += "; ";
            for (std::size_t j = 0; j < n_; ++j) {
                if (j) out += ", ";
                out += ring_ops<R>::str(at(i, j));
            }
        }
        return out + "]";
    }

private:
    static void check_same(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("matrix: dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<R> e_;
};

// Lie bracket [a, b] = ab - ba.
template <class R>
Matrix<R> bracket(const Matrix<R>& a, const Matrix<R>& b) {
    return a * b - b * a;
}

}  // namespace charvar
