#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <vector>

#include "margulis/error.hpp"

namespace margulis {

/// Exact scalar for the rational evaluation mode. Doubles convert into it
/// exactly (every finite double is a dyadic rational).
using Rational = boost::multiprecision::cpp_rational;

/// Minimal dense matrix over an exact scalar, mirroring the slice of the
/// Eigen API used by the generic polynomial routines (char_poly, poly_apply).
/// Kept separate from Eigen because Eigen expression templates and
/// boost::multiprecision SFINAE do not coexist.
template <class S>
class BasicMatrix {
 public:
  using Scalar = S;

  BasicMatrix() = default;
  BasicMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, S(0)) {}

  static BasicMatrix Zero(int rows, int cols) { return BasicMatrix(rows, cols); }

  static BasicMatrix Identity(int rows, int cols) {
    BasicMatrix m(rows, cols);
    for (int i = 0; i < rows && i < cols; ++i) m(i, i) = S(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  S trace() const {
    S t(0);
    for (int i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    BasicMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (aik == S(0)) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend BasicMatrix operator+(const BasicMatrix& a, const BasicMatrix& b) {
    BasicMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend BasicMatrix operator-(const BasicMatrix& a, const BasicMatrix& b) {
    BasicMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
  }

  friend BasicMatrix operator*(const S& s, const BasicMatrix& a) {
    BasicMatrix out = a;
    for (auto& v : out.data_) v *= s;
    return out;
  }

  friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

using RationalMatrix = BasicMatrix<Rational>;

/// Exact Gauss-Jordan inverse. Pivot selection only needs a nonzero entry
/// since the arithmetic is exact.
template <class S>
BasicMatrix<S> exact_inverse(BasicMatrix<S> a) {
  const int n = a.rows();
  if (n != a.cols()) fail(Errc::InvalidInput, "exact_inverse: square matrix required");
  BasicMatrix<S> inv = BasicMatrix<S>::Identity(n, n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != S(0)) {
        pivot = r;
        break;
      }
    if (pivot < 0) fail(Errc::InvalidInput, "exact_inverse: singular matrix");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const S d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = a(r, col);
      if (f == S(0)) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace margulis
