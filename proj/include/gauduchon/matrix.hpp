#pragma once

// Small dense matrices over any scalar with ScalarTraits. Sizes here never
// exceed 2n x 2n with n <= 8, so everything is plain row-major storage.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gauduchon/numeric.hpp"

namespace gauduchon {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), ScalarTraits<S>::zero()) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const S& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& k) {
    for (auto& x : data_) x *= k;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& k) { return a *= k; }
  friend Matrix operator*(const S& k, Matrix a) { return a *= k; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (exactly_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }
  Matrix conjugate() const {
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = conj_of(data_[k]);
    return out;
  }
  Matrix adjoint() const { return conjugate().transpose(); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }
  bool is_exactly_zero() const {
    for (const auto& x : data_)
      if (!exactly_zero(x)) return false;
    return true;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

/// True when u u^dagger = I: exactly for exact scalars, to `tol` otherwise.
template <class S>
bool is_unitary(const Matrix<S>& u, double tol = 1e-12) {
  if (u.rows() != u.cols()) return false;
  const Matrix<S> residual = u * u.adjoint() - Matrix<S>::identity(u.rows());
  if constexpr (ScalarTraits<S>::exact) return residual.is_exactly_zero();
  else return residual.max_abs() <= tol;
}

/// Row echelon reduction in place; returns pivot columns. Exact scalars pivot on
/// the first nonzero entry, floating ones on the largest entry above `tol`.
template <class S>
std::vector<int> row_reduce(Matrix<S>& m, double tol = 1e-12) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int best = -1;
    double best_mag = 0.0;
    for (int r = row; r < m.rows(); ++r) {
      if constexpr (ScalarTraits<S>::exact) {
        if (!exactly_zero(m(r, col))) {
          best = r;
          break;
        }
      } else {
        const double mag = magnitude(m(r, col));
        if (mag > tol && mag > best_mag) {
          best = r;
          best_mag = mag;
        }
      }
    }
    if (best < 0) continue;
    if (best != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(best, c));
    const S inv = ScalarTraits<S>::one() / m(row, col);
    for (int c = col; c < m.cols(); ++c) m(row, c) = m(row, c) * inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || exactly_zero(m(r, col))) continue;
      const S factor = m(r, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class S>
int rank(Matrix<S> m, double tol = 1e-12) {
  return static_cast<int>(row_reduce(m, tol).size());
}

/// Solves a x = b for square nonsingular a (b may have several columns).
template <class S>
Matrix<S> solve(const Matrix<S>& a, const Matrix<S>& b, double tol = 1e-12) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) throw std::invalid_argument("solve: shape mismatch");
  const int n = a.rows();
  Matrix<S> aug(n, n + b.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
  }
  const auto pivots = row_reduce(aug, tol);
  if (static_cast<int>(pivots.size()) < n || pivots.back() >= n) throw std::domain_error("solve: singular matrix");
  Matrix<S> x(n, b.cols());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < b.cols(); ++j) x(i, j) = aug(i, n + j);
  return x;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a, double tol = 1e-12) {
  return solve(a, Matrix<S>::identity(a.rows()), tol);
}

}  // namespace gauduchon
