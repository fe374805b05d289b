#include "distclust/matrixcore.hpp"

#include <algorithm>
#include <cmath>

#include "distclust/errors.hpp"

namespace distclust {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(Errc::InvalidMatrix, "symmetric matrix must be square with dim >= 1");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::zero(Eigen::Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Vector& diag) { return SymMatrix(Matrix(diag.asDiagonal())); }

namespace {

void require_finite(const SymMatrix& m) {
  if (!m.all_finite()) throw Error(Errc::InvalidMatrix, "matrix has non-finite entries");
}

void fix_signs(Matrix& vectors, double tie) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    const double peak = vectors.col(c).cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) >= peak * (1.0 - tie)) {
        lead = r;
        break;
      }
    }
    if (vectors(lead, c) < 0.0) vectors.col(c) = -vectors.col(c);
  }
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m, const Tolerances& tol) {
  require_finite(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NumericalError, "symmetric eigensolver did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  fix_signs(out.vectors, tol.sign_tie);
  return out;
}

SymMatrix spd_sqrt(const SymMatrix& m, const Tolerances& tol) {
  const EigenDecomposition eig = sym_eigen(m, tol);
  const double top = std::max(1.0, eig.values.maxCoeff());
  if (eig.values.minCoeff() < -tol.psd_relative * top) {
    throw Error(Errc::NotPositiveSemidefinite,
                "min eigenvalue " + std::to_string(eig.values.minCoeff()) + " below tolerance");
  }
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix(eig.vectors * roots.asDiagonal() * eig.vectors.transpose());
}

double spd_logdet(const SymMatrix& m) {
  require_finite(m);
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularMatrix, "matrix is not positive definite");
  const Vector diag = llt.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) throw Error(Errc::SingularMatrix, "matrix is not positive definite");
  return 2.0 * diag.array().log().sum();
}

SymMatrix spd_inverse(const SymMatrix& m) {
  require_finite(m);
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularMatrix, "matrix is not positive definite");
  return SymMatrix(llt.solve(Matrix::Identity(m.dim(), m.dim())));
}

SymMatrix regularize(const SymMatrix& m, double eps_scale) {
  if (eps_scale < 0.0) throw Error(Errc::InvalidConfig, "eps_scale must be non-negative");
  const double tr = m.trace();
  const double eps = tr > 0.0 ? eps_scale * tr / static_cast<double>(m.dim()) : eps_scale;
  Matrix out = m.matrix();
  out.diagonal().array() += eps;
  return SymMatrix(out);
}

double relative_frobenius(const Matrix& actual, const Matrix& expected) {
  const double scale = std::max(1.0, expected.norm());
  return (actual - expected).norm() / scale;
}

}  // namespace distclust
