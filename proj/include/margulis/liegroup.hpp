#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "margulis/error.hpp"
#include "margulis/linalg.hpp"

namespace margulis {

/// Default gap tolerance on log eigenvalue moduli for the loxodromy test.
inline constexpr double kLoxodromyTol = 1e-6;

/// The concrete model family: PSL(n,R) acting on sl(n,R) by conjugation.
/// The maximal split torus is the positive diagonal subgroup, the zero
/// weight space is the traceless diagonals, and every structural object the
/// invariant machinery needs has a closed form.
struct ModelSpec {
  int n = 2;

  ModelSpec() = default;
  explicit ModelSpec(int n_) : n(n_) {
    if (n < 2) fail(Errc::InvalidInput, "ModelSpec: n must be at least 2");
  }

  int rep_dim() const { return n * n - 1; }
  int zero_weight_dim() const { return n - 1; }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) { return a.n == b.n; }
};

// Fixed basis of sl(n): E_ij for i != j in row-major pair order, then
// H_k = E_kk - E_{k+1,k+1} for k = 0..n-2. All coordinate vectors in the
// artifact are serialized in this order.

inline int off_diag_index(int n, int i, int j) { return i * (n - 1) + (j < i ? j : j - 1); }

template <class M>
M sl_basis_element(int n, int index) {
  using S = typename M::Scalar;
  M b = M::Zero(n, n);
  const int off = n * (n - 1);
  if (index < off) {
    const int i = index / (n - 1);
    int j = index % (n - 1);
    if (j >= i) ++j;
    b(i, j) = S(1);
  } else {
    const int k = index - off;
    b(k, k) = S(1);
    b(k + 1, k + 1) = S(-1);
  }
  return b;
}

/// Matrix of X -> g X g^{-1} on sl(n) in the fixed basis. Template shared by
/// the floating-point and exact paths.
template <class M>
M adjoint_matrix(const M& g, const M& g_inv) {
  using S = typename M::Scalar;
  const int n = static_cast<int>(g.rows());
  const int d = n * n - 1;
  const int off = n * (n - 1);
  M ad = M::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const M image = g * sl_basis_element<M>(n, col) * g_inv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) ad(off_diag_index(n, i, j), col) = image(i, j);
    S partial(0);
    for (int k = 0; k + 1 < n; ++k) {
      partial += image(k, k);
      ad(off + k, col) = partial;
    }
  }
  return ad;
}

/// Unimodular representative of an element of PSL(n,R). Construction
/// normalizes the determinant to +1 exactly up to roundoff; for even n the
/// stored matrix is one of the two lifts, which the adjoint action cannot
/// distinguish.
class GroupElement {
 public:
  explicit GroupElement(Eigen::MatrixXd mat, double det_tol = 1e-6) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 2)
      fail(Errc::InvalidInput, "GroupElement: square matrix of size >= 2 required");
    if (!all_finite(mat_)) fail(Errc::InvalidInput, "GroupElement: non-finite entries");
    double det = mat_.determinant();
    if (std::abs(std::abs(det) - 1.0) > det_tol)
      fail(Errc::InvalidInput, "GroupElement: determinant not of unit modulus");
    if (det < 0) {
      if (mat_.rows() % 2 == 0)
        fail(Errc::InvalidInput, "GroupElement: negative determinant has no unimodular lift for even n");
      mat_ = -mat_;
      det = -det;
    }
    mat_ /= std::pow(det, 1.0 / mat_.rows());
  }

  const Eigen::MatrixXd& mat() const { return mat_; }
  int n() const { return static_cast<int>(mat_.rows()); }

  GroupElement inverse() const { return GroupElement(mat_.inverse().eval()); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.mat_ * b.mat_);
  }

  static GroupElement identity(int n) { return GroupElement(Eigen::MatrixXd::Identity(n, n)); }

 private:
  Eigen::MatrixXd mat_;
};

/// Element of V = sl(n,R): a traceless matrix, interchangeable with its
/// coordinate vector in the fixed basis. Construction projects away the
/// trace component after validating it is negligible.
class VElement {
 public:
  explicit VElement(Eigen::MatrixXd mat, double trace_tol = 1e-8) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 2)
      fail(Errc::InvalidInput, "VElement: square matrix of size >= 2 required");
    if (!all_finite(mat_)) fail(Errc::InvalidInput, "VElement: non-finite entries");
    const double tr = mat_.trace();
    if (std::abs(tr) > trace_tol * (1.0 + mat_.norm()))
      fail(Errc::InvalidInput, "VElement: trace above tolerance");
    mat_.diagonal().array() -= tr / mat_.rows();
  }

  static VElement zero(int n) { return VElement(Eigen::MatrixXd::Zero(n, n)); }

  static VElement from_coords(const Eigen::VectorXd& coords, int n) {
    const int off = n * (n - 1);
    if (coords.size() != n * n - 1) fail(Errc::InvalidInput, "VElement: coordinate length mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) m(i, j) = coords[off_diag_index(n, i, j)];
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
      const double cur = (k + 1 < n) ? coords[off + k] : 0.0;
      m(k, k) = cur - prev;
      prev = cur;
    }
    return VElement(std::move(m));
  }

  Eigen::VectorXd coords() const {
    const int n = this->n();
    const int off = n * (n - 1);
    Eigen::VectorXd v(n * n - 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) v[off_diag_index(n, i, j)] = mat_(i, j);
    double partial = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      partial += mat_(k, k);
      v[off + k] = partial;
    }
    return v;
  }

  const Eigen::MatrixXd& mat() const { return mat_; }
  int n() const { return static_cast<int>(mat_.rows()); }
  double norm() const { return mat_.norm(); }

  friend VElement operator+(const VElement& a, const VElement& b) { return VElement(a.mat_ + b.mat_); }
  friend VElement operator-(const VElement& a, const VElement& b) { return VElement(a.mat_ - b.mat_); }
  friend VElement operator*(double s, const VElement& a) { return VElement(s * a.mat_); }

 private:
  Eigen::MatrixXd mat_;
};

/// Coordinates of the zero-weight component of X in the H_k basis: partial
/// sums of the diagonal. The off-diagonal part of X is exactly the sum of the
/// nonzero weight spaces, so this is the projection along that decomposition.
inline Eigen::VectorXd pi0(const VElement& x) {
  const int n = x.n();
  Eigen::VectorXd out(n - 1);
  double partial = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    partial += x.mat()(k, k);
    out[k] = partial;
  }
  return out;
}

/// The zero-weight component itself (diagonal part of X) as an element of V.
inline VElement zero_weight_part(const VElement& x) {
  return VElement(x.mat().diagonal().asDiagonal());
}

/// Restricted weight data of the adjoint model: the n^2 - n functionals
/// a |-> a_i - a_j plus the zero weight with multiplicity n - 1.
struct WeightTable {
  struct Weight {
    int i, j;
    double eval(const Eigen::VectorXd& a) const { return a[i] - a[j]; }
  };
  std::vector<Weight> nonzero;
  int zero_multiplicity = 0;
};

inline WeightTable weight_table(const ModelSpec& model) {
  WeightTable table;
  table.zero_multiplicity = model.zero_weight_dim();
  for (int i = 0; i < model.n; ++i)
    for (int j = 0; j < model.n; ++j)
      if (i != j) table.nonzero.push_back({i, j});
  return table;
}

/// Sorted (decreasing) log eigenvalue moduli. Conjugation-invariant; sums to
/// zero for unimodular input.
inline std::vector<double> jordan_projection(const GroupElement& g) {
  const EigenData eig = eigen_decompose(g.mat());
  std::vector<double> jd(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) jd[static_cast<std::size_t>(i)] = std::log(std::abs(eig.values[i]));
  std::sort(jd.begin(), jd.end(), std::greater<>());
  return jd;
}

/// True iff the log moduli are pairwise separated by more than tol, i.e. the
/// Jordan projection lies in the open chamber.
inline bool is_loxodromic(const GroupElement& g, double tol = kLoxodromyTol) {
  const std::vector<double> jd = jordan_projection(g);
  for (std::size_t i = 0; i + 1 < jd.size(); ++i)
    if (jd[i] - jd[i + 1] <= tol) return false;
  return true;
}

/// Frame data (h, m, exp(jd)) with g = h * diag(signs) * diag(exp(jd)) * h^{-1}.
/// h is determined up to right multiplication by invertible diagonals; the
/// stored representative follows a fixed column convention so decompositions
/// are reproducible.
struct JordanFrame {
  Eigen::MatrixXd h;         // det +1, columns ordered by decreasing eigenvalue modulus
  std::vector<int> signs;    // entries of the elliptic part m, product +1
  std::vector<double> jd;    // strictly decreasing, sums to 0

  Eigen::MatrixXd reconstruct() const {
    const int n = static_cast<int>(jd.size());
    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag[i] = signs[static_cast<std::size_t>(i)] * std::exp(jd[static_cast<std::size_t>(i)]);
    return h * diag.asDiagonal() * h.inverse();
  }
};

/// Jordan decomposition of a loxodromic element. Distinct moduli force real
/// eigendata (a complex pair would share a modulus), so the elliptic part is
/// a sign diagonal and the columns of h are real eigenvectors sorted by
/// decreasing modulus. Column convention: unit norm, first nonzero entry
/// positive, last column rescaled so det(h) = +1.
inline JordanFrame jordan_decompose(const GroupElement& g, double tol = kLoxodromyTol) {
  if (!is_loxodromic(g, tol)) fail(Errc::NotLoxodromic, "jordan_decompose requires a loxodromic element");
  const int n = g.n();
  const EigenData eig = eigen_decompose(g.mat());

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(eig.values[a]) > std::abs(eig.values[b]); });

  JordanFrame frame;
  frame.h.resize(n, n);
  frame.signs.resize(static_cast<std::size_t>(n));
  frame.jd.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const std::complex<double> lambda = eig.values[order[static_cast<std::size_t>(c)]];
    if (std::abs(lambda.imag()) > tol * (1.0 + std::abs(lambda)))
      fail(Errc::ComplexEigendata, "eigenvalue with non-negligible imaginary part");
    Eigen::VectorXcd v = eig.vectors.col(order[static_cast<std::size_t>(c)]);
    // Rotate the phase so the vector is real.
    int max_at = 0;
    v.cwiseAbs().maxCoeff(&max_at);
    v *= std::conj(v[max_at]) / std::abs(v[max_at]);
    if (v.imag().norm() > 1e-7 * v.norm())
      fail(Errc::ComplexEigendata, "eigenvector with non-negligible imaginary part");
    Eigen::VectorXd col = v.real();
    col.normalize();
    const double peak = col.cwiseAbs().maxCoeff();
    for (int r = 0; r < n; ++r)
      if (std::abs(col[r]) > 1e-9 * peak) {
        if (col[r] < 0) col = -col;
        break;
      }
    frame.h.col(c) = col;
    frame.signs[static_cast<std::size_t>(c)] = lambda.real() >= 0 ? 1 : -1;
    frame.jd[static_cast<std::size_t>(c)] = std::log(std::abs(lambda));
  }
  const double det = frame.h.determinant();
  frame.h.col(n - 1) /= det;
  return frame;
}

/// The (n^2-1) x (n^2-1) matrix of the adjoint action of g in the fixed basis.
inline Eigen::MatrixXd adjoint_rep(const GroupElement& g) {
  return adjoint_matrix<Eigen::MatrixXd>(g.mat(), g.mat().inverse());
}

}  // namespace margulis
