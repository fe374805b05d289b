#pragma once

#include <Eigen/Dense>

namespace distclust {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical thresholds shared by the matrix routines and the divergences.
/// Tests may pass a tightened copy; everything else uses the defaults.
struct Tolerances {
  // spd_sqrt accepts min eigenvalue >= -psd_relative * max(1, max eigenvalue).
  double psd_relative = 1e-10;
  // Divergences within -negative_guard * max(1, scale) of zero are clamped.
  double negative_guard = 1e-9;
  // Eigenvector sign rule: entries within this relative margin of the
  // column's largest magnitude count as ties.
  double sign_tie = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Dense symmetric matrix. Construction symmetrizes via (M + M^T) / 2 so the
/// stored entries are exactly mirror-equal.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix zero(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& diag);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }

  bool all_finite() const { return m_.allFinite(); }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, same order as values
};

/// Full symmetric eigendecomposition. Each eigenvector is sign-fixed so its
/// largest-magnitude entry is non-negative (lowest row index wins a tie),
/// which makes the output a deterministic function of the input.
EigenDecomposition sym_eigen(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Symmetric square root of a PSD matrix; slightly negative eigenvalues are
/// clamped to zero first.
SymMatrix spd_sqrt(const SymMatrix& m, const Tolerances& tol = kDefaultTolerances);

double spd_logdet(const SymMatrix& m);
SymMatrix spd_inverse(const SymMatrix& m);

/// m + eps * I with eps = eps_scale * trace(m) / dim, or eps_scale itself
/// when the trace is not positive.
SymMatrix regularize(const SymMatrix& m, double eps_scale);

double relative_frobenius(const Matrix& actual, const Matrix& expected);

}  // namespace distclust
