#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>
#include <vector>

#include "margulis/error.hpp"
#include "margulis/poly.hpp"

namespace margulis {

inline bool all_finite(const Eigen::MatrixXd& a) { return a.allFinite(); }

/// Complex eigenpairs of a real square matrix, columns matching values.
struct EigenData {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

/// Full eigendecomposition with a residual guarantee: every pair satisfies
/// ||A v - lambda v|| <= tol * ||A||_F * ||v||.
inline EigenData eigen_decompose(const Eigen::MatrixXd& a, double tol = 1e-9) {
  if (a.rows() != a.cols()) fail(Errc::InvalidInput, "eigen_decompose: square matrix required");
  if (!all_finite(a)) fail(Errc::InvalidInput, "eigen_decompose: non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) fail(Errc::NonConvergence, "eigen iteration failed");
  const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
  const double scale = a.norm();
  for (int i = 0; i < a.rows(); ++i) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(i);
    const double residual = (ac * v - solver.eigenvalues()[i] * v).norm();
    if (residual > tol * scale * v.norm())
      fail(Errc::NonConvergence, "eigenpair residual above tolerance");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier trace
/// recurrence. The only divisions are by the step index, so the coefficients
/// are polynomial in the entries and the routine is exact over rationals.
/// Works for Eigen::MatrixXd and BasicMatrix alike.
template <class M>
Polynomial<typename M::Scalar> char_poly(const M& a) {
  using S = typename M::Scalar;
  const int n = static_cast<int>(a.rows());
  if (n != static_cast<int>(a.cols())) fail(Errc::InvalidInput, "char_poly: square matrix required");
  std::vector<S> c(static_cast<std::size_t>(n) + 1, S(0));
  c[static_cast<std::size_t>(n)] = S(1);
  M acc = a;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) acc = a * acc + c[static_cast<std::size_t>(n - k + 1)] * a;
    c[static_cast<std::size_t>(n - k)] = -S(acc.trace()) / S(k);
  }
  return Polynomial<S>(std::move(c));
}

/// Horner evaluation of p at a square matrix.
template <class M>
M poly_apply(const Polynomial<typename M::Scalar>& p, const M& a) {
  using S = typename M::Scalar;
  const int n = static_cast<int>(a.rows());
  if (n != static_cast<int>(a.cols())) fail(Errc::InvalidInput, "poly_apply: square matrix required");
  M result = M::Zero(n, n);
  if (p.is_zero()) return result;
  result = p.coeffs().back() * M::Identity(n, n);
  for (int k = p.degree() - 1; k >= 0; --k) {
    M next = result * a + p.coeff(k) * M::Identity(n, n);
    result = std::move(next);
  }
  return result;
}

struct LeastSquaresSolution {
  Eigen::VectorXd y;
  double residual;
};

/// Minimum-norm least-squares solution of the vertically stacked system
/// built from (matrix, rhs) blocks sharing a column dimension. rank_tol > 0
/// overrides the decomposition's rank threshold. Never throws on
/// inconsistency; the caller inspects the residual.
inline LeastSquaresSolution min_norm_solve(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& blocks, double rank_tol = -1.0) {
  if (blocks.empty()) return {Eigen::VectorXd(), 0.0};
  const Eigen::Index cols = blocks.front().first.cols();
  Eigen::Index rows = 0;
  for (const auto& [mat, rhs] : blocks) {
    if (mat.cols() != cols) fail(Errc::InvalidInput, "min_norm_solve: column dimension mismatch");
    if (mat.rows() != rhs.size()) fail(Errc::InvalidInput, "min_norm_solve: block shape mismatch");
    rows += mat.rows();
  }
  Eigen::MatrixXd stacked(rows, cols);
  Eigen::VectorXd rhs(rows);
  Eigen::Index at = 0;
  for (const auto& [mat, vec] : blocks) {
    stacked.middleRows(at, mat.rows()) = mat;
    rhs.segment(at, vec.size()) = vec;
    at += mat.rows();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(stacked);
  if (rank_tol > 0) cod.setThreshold(rank_tol);
  const Eigen::VectorXd y = cod.solve(rhs);
  return {y, (stacked * y - rhs).norm()};
}

}  // namespace margulis
