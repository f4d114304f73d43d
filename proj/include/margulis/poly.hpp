#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "margulis/error.hpp"

namespace margulis {

/// Univariate polynomial over a field scalar (double or an exact rational),
/// coefficients stored in ascending degree. Trailing zero coefficients are
/// trimmed so the leading coefficient is nonzero unless the polynomial is
/// identically zero.
template <class S>
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial zero() { return Polynomial(); }

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const { return coeffs_.empty(); }

  const std::vector<S>& coeffs() const { return coeffs_; }

  S coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return S(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  /// Horner evaluation.
  S operator()(const S& x) const {
    if (coeffs_.empty()) return S(0);
    S acc = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) acc = acc * x + coeffs_[static_cast<std::size_t>(k)];
    return acc;
  }

  S max_abs_coeff() const {
    using std::abs;
    S m(0);
    for (const S& c : coeffs_)
      if (abs(c) > m) m = abs(c);
    return m;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == S(0)) coeffs_.pop_back();
  }

  std::vector<S> coeffs_;
};

/// Divides p by x^k after checking that the k lowest coefficients are
/// negligible (magnitude at most tol times the largest coefficient; pass
/// tol = 0 in exact arithmetic). Throws NOT_DIVISIBLE otherwise.
template <class S>
Polynomial<S> poly_deflate(const Polynomial<S>& p, int k, double tol) {
  using std::abs;
  if (k == 0) return p;
  if (p.degree() < k) fail(Errc::NotDivisible, "degree below deflation order");
  const S threshold = S(tol) * p.max_abs_coeff();
  const auto& c = p.coeffs();
  for (int i = 0; i < k; ++i)
    if (abs(c[static_cast<std::size_t>(i)]) > threshold)
      fail(Errc::NotDivisible, "low-order coefficient above tolerance");
  std::vector<S> shifted(c.begin() + k, c.end());
  return Polynomial<S>(std::move(shifted));
}

}  // namespace margulis
