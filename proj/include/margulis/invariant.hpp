#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "margulis/error.hpp"
#include "margulis/liegroup.hpp"
#include "margulis/linalg.hpp"
#include "margulis/poly.hpp"

namespace margulis {

/// Relative tolerance (against the largest coefficient) for stripping the
/// forced zero roots off the shifted characteristic polynomial.
inline constexpr double kDeflationRelTol = 1e-9;

/// Relative threshold on |P_g(0)| below which a nominally loxodromic element
/// is treated as numerically marginal.
inline constexpr double kDegenerateRelTol = 1e-10;

inline VElement adjoint_action(const GroupElement& g, const VElement& x) {
  return VElement(g.mat() * x.mat() * g.mat().inverse());
}

/// Element (g, X) of the affine group G x| V with multiplication
/// (g, X)(h, Y) = (gh, X + Ad_g Y).
struct AffineElement {
  GroupElement linear;
  VElement translation;

  static AffineElement identity(int n) {
    return {GroupElement::identity(n), VElement::zero(n)};
  }

  AffineElement inverse() const {
    const GroupElement li = linear.inverse();
    return {li, VElement(-adjoint_action(li, translation).mat())};
  }

  friend AffineElement operator*(const AffineElement& a, const AffineElement& b) {
    return {a.linear * b.linear, a.translation + adjoint_action(a.linear, b.translation)};
  }

  /// The affine action on V: Y -> Ad_g Y + X.
  VElement apply(const VElement& y) const { return adjoint_action(linear, y) + translation; }
};

/// Characteristic polynomial of I - Ad_g, monic of degree n^2 - 1. Its lowest
/// n - 1 coefficients vanish for loxodromic g because the unit eigenspace of
/// Ad_g contains the conjugated zero weight space.
inline Polynomial<double> shifted_char_poly(const GroupElement& g) {
  const Eigen::MatrixXd ad = adjoint_rep(g);
  const Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(ad.rows(), ad.cols()) - ad;
  return char_poly(shifted);
}

/// Exact-arithmetic counterpart of shifted_char_poly.
template <class M>
Polynomial<typename M::Scalar> shifted_char_poly_of(const M& g, const M& g_inv) {
  const M ad = adjoint_matrix<M>(g, g_inv);
  const int d = static_cast<int>(ad.rows());
  const M shifted = M::Identity(d, d) - ad;
  return char_poly(shifted);
}

/// The deflated polynomial P_g = CP_g / x^{n-1} together with its constant
/// term P_g(0), which is the product of (1 - mu) over the non-unit
/// eigenvalues mu of Ad_g and is nonzero exactly when the unit eigenspace has
/// the minimal dimension n - 1.
inline std::pair<Polynomial<double>, double> deflated_poly(const GroupElement& g,
                                                           double tol = kDeflationRelTol) {
  if (!is_loxodromic(g)) fail(Errc::NotLoxodromic, "deflated_poly requires a loxodromic element");
  const Polynomial<double> cp = shifted_char_poly(g);
  const Polynomial<double> p = poly_deflate(cp, g.n() - 1, tol);
  const double p0 = p.coeff(0);
  if (std::abs(p0) <= kDegenerateRelTol * p.max_abs_coeff())
    fail(Errc::Degenerate, "P_g(0) vanishes at working precision");
  return {p, p0};
}

/// Projection onto the unit eigenspace of Ad_g along its complementary
/// spectral subspaces, computed as P_g(0)^{-1} P_g(I - Ad_g). Idempotent with
/// trace n - 1, and commutes with Ad_g.
inline Eigen::MatrixXd unit_projector(const GroupElement& g, double tol = kLoxodromyTol) {
  if (!is_loxodromic(g, tol)) fail(Errc::NotLoxodromic, "unit_projector requires a loxodromic element");
  const auto [p, p0] = deflated_poly(g);
  const Eigen::MatrixXd ad = adjoint_rep(g);
  const Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(ad.rows(), ad.cols()) - ad;
  return poly_apply(p, shifted) / p0;
}

/// Margulis-Smilga invariant in the given frame: coordinates of the
/// zero-weight component of Ad_h^{-1} X. Exposed separately so callers can
/// exercise the frame ambiguity directly.
inline Eigen::VectorXd margulis_invariant_with_frame(const AffineElement& a, const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd pulled = h.inverse() * a.translation.mat() * h;
  Eigen::VectorXd out(a.linear.n() - 1);
  double partial = 0.0;
  for (int k = 0; k + 1 < a.linear.n(); ++k) {
    partial += pulled(k, k);
    out[k] = partial;
  }
  return out;
}

/// Margulis-Smilga invariant of (g, X), Jordan-frame route: decompose g,
/// pull the translation back through the frame and project to the zero
/// weight space. Well defined because the frame ambiguity acts trivially on
/// that projection.
inline Eigen::VectorXd margulis_invariant(const AffineElement& a, double tol = kLoxodromyTol) {
  const JordanFrame frame = jordan_decompose(a.linear, tol);
  return margulis_invariant_with_frame(a, frame.h);
}

/// Margulis-Smilga invariant, polynomial-projector route: apply the unit
/// eigenspace projector to the translation, then read the result off in the
/// frame. Agrees with the Jordan-frame route; the two paths share no linear
/// algebra beyond the frame itself.
inline Eigen::VectorXd margulis_invariant_via_projector(const AffineElement& a,
                                                        double tol = kLoxodromyTol) {
  const JordanFrame frame = jordan_decompose(a.linear, tol);
  const Eigen::MatrixXd proj = unit_projector(a.linear, tol);
  const Eigen::VectorXd image = proj * a.translation.coords();
  const VElement pulled =
      adjoint_action(GroupElement(frame.h).inverse(), VElement::from_coords(image, a.linear.n()));
  return pi0(pulled);
}

/// The invariant symmetric bilinear form on sl(n) in the fixed basis,
/// normalized as B(X, Y) = 2n tr(XY) (the Killing form of sl(n)).
struct InvariantForm {
  int n = 0;
  Eigen::MatrixXd gram;

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return x.dot(gram * y); }

  /// Gram block of the zero weight space in the H_k basis.
  Eigen::MatrixXd zero_weight_block() const {
    const int off = n * (n - 1);
    return gram.block(off, off, n - 1, n - 1);
  }

  /// Quadratic value of an invariant vector (H_k coordinates).
  double q_of_invariant(const Eigen::VectorXd& m) const { return m.dot(zero_weight_block() * m); }
};

inline InvariantForm invariant_form(const ModelSpec& model) {
  const int n = model.n;
  const int d = model.rep_dim();
  InvariantForm form;
  form.n = n;
  form.gram.setZero(d, d);
  for (int a = 0; a < d; ++a) {
    const Eigen::MatrixXd ba = sl_basis_element<Eigen::MatrixXd>(n, a);
    for (int b = a; b < d; ++b) {
      const Eigen::MatrixXd bb = sl_basis_element<Eigen::MatrixXd>(n, b);
      const double value = 2.0 * n * (ba * bb).trace();
      form.gram(a, b) = value;
      form.gram(b, a) = value;
    }
  }
  return form;
}

/// Invariant quadratic value Q = B(M, M), computed frame-free: with
/// v = P_g(I - Ad_g) X one has v = P_g(0) Ad_h M, and B is Ad-invariant, so
/// Q = B(v, v) / P_g(0)^2. No Jordan frame enters.
inline double invariant_q(const AffineElement& a, double tol = kLoxodromyTol) {
  if (!is_loxodromic(a.linear, tol)) fail(Errc::NotLoxodromic, "invariant_q requires a loxodromic element");
  const auto [p, p0] = deflated_poly(a.linear);
  const Eigen::MatrixXd ad = adjoint_rep(a.linear);
  const Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(ad.rows(), ad.cols()) - ad;
  const Eigen::VectorXd v = poly_apply(p, shifted) * a.translation.coords();
  const InvariantForm form = invariant_form(ModelSpec(a.linear.n()));
  return form.eval(v, v) / (p0 * p0);
}

}  // namespace margulis
