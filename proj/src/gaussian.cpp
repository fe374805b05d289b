#include "distclust/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "distclust/errors.hpp"

namespace distclust {

GaussianModel estimate_gaussian(const SampleGroup& group, double eps_scale) {
  const std::size_t q = group.size();
  if (q < 2) {
    throw Error(Errc::InsufficientSamples,
                "group '" + group.id + "' has " + std::to_string(q) + " samples, need >= 2");
  }
  const Eigen::Index d = group.dim();
  if (d < 1) throw Error(Errc::DimensionMismatch, "group '" + group.id + "' has zero-dimensional samples");

  Vector mean = Vector::Zero(d);
  for (const Vector& s : group.samples) {
    if (s.size() != d) {
      throw Error(Errc::DimensionMismatch, "group '" + group.id + "' mixes sample dimensions");
    }
    mean += s;
  }
  mean /= static_cast<double>(q);

  Matrix scatter = Matrix::Zero(d, d);
  for (const Vector& s : group.samples) {
    const Vector c = s - mean;
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  scatter.triangularView<Eigen::StrictlyUpper>() = scatter.transpose();
  scatter /= static_cast<double>(q - 1);

  return GaussianModel{std::move(mean), regularize(SymMatrix(scatter), eps_scale)};
}

double log_density(const GaussianModel& g, const Vector& x) {
  if (x.size() != g.dim()) throw Error(Errc::DimensionMismatch, "point and model dimensions differ");
  Eigen::LLT<Matrix> llt(g.covariance.matrix());
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularMatrix, "covariance is not positive definite");
  const Vector diff = x - g.mean;
  const double mahalanobis = llt.matrixL().solve(diff).squaredNorm();
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double d = static_cast<double>(g.dim());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + logdet + mahalanobis);
}

SampleGroup sample(const GaussianModel& g, std::size_t count, Rng& rng, std::string id) {
  const Matrix root = spd_sqrt(g.covariance).matrix();
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleGroup out{std::move(id), {}};
  out.samples.reserve(count);
  Vector z(g.dim());
  for (std::size_t i = 0; i < count; ++i) {
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = normal(rng);
    out.samples.emplace_back(g.mean + root * z);
  }
  return out;
}

}  // namespace distclust
