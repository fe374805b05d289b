#include "distclust/metrics.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "distclust/errors.hpp"
#include "distclust/parallel.hpp"

namespace distclust {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::WassersteinSq: return "wasserstein_sq";
    case Metric::Bhattacharyya: return "bhattacharyya";
    case Metric::Kl: return "kl";
    case Metric::Euclidean: return "euclidean";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "wasserstein_sq" || name == "wasserstein") return Metric::WassersteinSq;
  if (name == "bhattacharyya") return Metric::Bhattacharyya;
  if (name == "kl") return Metric::Kl;
  if (name == "euclidean") return Metric::Euclidean;
  throw Error(Errc::InvalidConfig, "unknown metric '" + std::string(name) + "'");
}

bool is_symmetric(Metric metric) { return metric != Metric::Kl; }

PreparedGaussian::PreparedGaussian(GaussianModel model, bool with_sqrt) : model_(std::move(model)) {
  if (!model_.mean.allFinite()) throw Error(Errc::InvalidMatrix, "model mean has non-finite entries");
  logdet_ = spd_logdet(model_.covariance);
  inverse_ = spd_inverse(model_.covariance).matrix();
  if (with_sqrt) sqrt_ = spd_sqrt(model_.covariance).matrix();
}

namespace {

void require_same_dim(const GaussianModel& a, const GaussianModel& b) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::DimensionMismatch, "models have dimensions " + std::to_string(a.dim()) + " and " +
                                             std::to_string(b.dim()));
  }
}

// Clamp round-off negatives to zero; anything further below zero is a bug.
double clamp_nonnegative(double value, double scale, const Tolerances& tol, const char* what) {
  if (value >= 0.0) return value;
  if (value < -tol.negative_guard * std::max(1.0, scale)) {
    throw Error(Errc::NumericalError, std::string(what) + " evaluated to " + std::to_string(value));
  }
  return 0.0;
}

double wasserstein_from_root(const Matrix& root1, const GaussianModel& g1, const GaussianModel& g2,
                             const Tolerances& tol) {
  const Matrix& s2 = g2.covariance.matrix();
  const Matrix inner = root1 * s2 * root1;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(Errc::NumericalError, "eigensolver failed in wasserstein_sq");
  const Vector& lambda = solver.eigenvalues();
  const double top = std::max(1.0, lambda.maxCoeff());
  if (lambda.minCoeff() < -tol.psd_relative * top) {
    throw Error(Errc::NotPositiveSemidefinite, "cross term in wasserstein_sq is not PSD");
  }
  const double cross = lambda.cwiseMax(0.0).cwiseSqrt().sum();
  const double tr = g1.covariance.trace() + s2.trace();
  const double mean_term = (g1.mean - g2.mean).squaredNorm();
  return clamp_nonnegative(mean_term + tr - 2.0 * cross, mean_term + tr, tol, "wasserstein_sq");
}

double bhattacharyya_impl(const GaussianModel& g1, double logdet1, const GaussianModel& g2, double logdet2,
                          const Tolerances& tol) {
  const Matrix avg = 0.5 * (g1.covariance.matrix() + g2.covariance.matrix());
  Eigen::LLT<Matrix> llt(avg);
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularMatrix, "averaged covariance is not positive definite");
  const double logdet_avg = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const Vector diff = g1.mean - g2.mean;
  const double mahalanobis = llt.matrixL().solve(diff).squaredNorm();
  const double log_term = logdet_avg - 0.5 * (logdet1 + logdet2);
  const double value = mahalanobis / 8.0 + 0.5 * log_term;
  return clamp_nonnegative(value, std::abs(logdet_avg) + mahalanobis, tol, "bhattacharyya");
}

}  // namespace

double wasserstein_sq(const GaussianModel& g1, const GaussianModel& g2, const Tolerances& tol) {
  require_same_dim(g1, g2);
  return wasserstein_from_root(spd_sqrt(g1.covariance, tol).matrix(), g1, g2, tol);
}

double wasserstein_sq(const PreparedGaussian& g1, const PreparedGaussian& g2, const Tolerances& tol) {
  require_same_dim(g1.model(), g2.model());
  if (g1.sqrt()) return wasserstein_from_root(*g1.sqrt(), g1.model(), g2.model(), tol);
  return wasserstein_sq(g1.model(), g2.model(), tol);
}

double bhattacharyya(const GaussianModel& g1, const GaussianModel& g2, const Tolerances& tol) {
  require_same_dim(g1, g2);
  return bhattacharyya_impl(g1, spd_logdet(g1.covariance), g2, spd_logdet(g2.covariance), tol);
}

double bhattacharyya(const PreparedGaussian& g1, const PreparedGaussian& g2, const Tolerances& tol) {
  require_same_dim(g1.model(), g2.model());
  return bhattacharyya_impl(g1.model(), g1.logdet(), g2.model(), g2.logdet(), tol);
}

double kl(const GaussianModel& g1, const GaussianModel& g2, const Tolerances& tol) {
  require_same_dim(g1, g2);
  return kl(PreparedGaussian(g1), PreparedGaussian(g2), tol);
}

double kl(const PreparedGaussian& g1, const PreparedGaussian& g2, const Tolerances& tol) {
  require_same_dim(g1.model(), g2.model());
  const Matrix& inv2 = g2.inverse();
  const Vector diff = g2.mean() - g1.mean();
  const double trace_term = inv2.cwiseProduct(g1.covariance()).sum();
  const double mahalanobis = diff.dot(inv2 * diff);
  const double d = static_cast<double>(g1.model().dim());
  const double log_term = g2.logdet() - g1.logdet();
  const double value = 0.5 * (log_term - d + trace_term + mahalanobis);
  return clamp_nonnegative(value, std::abs(log_term) + d + trace_term + mahalanobis, tol, "kl");
}

double euclidean(const GaussianModel& g1, const GaussianModel& g2) {
  require_same_dim(g1, g2);
  return (g1.mean - g2.mean).norm();
}

DistanceMatrix distance_matrix(std::span<const GaussianModel> models, Metric metric, unsigned threads,
                               const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(models.size());
  if (n < 2) throw Error(Errc::InvalidConfig, "distance_matrix needs at least 2 models");
  for (const GaussianModel& g : models) require_same_dim(models.front(), g);

  std::vector<PreparedGaussian> prepared;
  if (metric != Metric::Euclidean) {
    prepared.reserve(models.size());
    for (const GaussianModel& g : models) prepared.emplace_back(g, metric == Metric::WassersteinSq);
  }

  auto pair_value = [&](Eigen::Index i, Eigen::Index j) {
    try {
      switch (metric) {
        case Metric::WassersteinSq: return wasserstein_sq(prepared[i], prepared[j], tol);
        case Metric::Bhattacharyya: return bhattacharyya(prepared[i], prepared[j], tol);
        case Metric::Kl: return kl(prepared[i], prepared[j], tol);
        case Metric::Euclidean: return euclidean(models[i], models[j]);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what());
    }
    return 0.0;
  };

  DistanceMatrix out{metric, Matrix::Zero(n, n)};
  const bool symmetric = is_symmetric(metric);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = symmetric ? i + 1 : 0; j < n; ++j) {
      if (j == i) continue;
      out.entries(i, j) = pair_value(i, j);
    }
  });
  if (symmetric) out.entries.triangularView<Eigen::StrictlyLower>() = out.entries.transpose();
  return out;
}

std::string to_csv(const DistanceMatrix& x) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (j) os << ',';
      os << x.entries(i, j);
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const DistanceMatrix& x) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.size(); ++j) row.push_back(x.entries(i, j));
    rows.push_back(std::move(row));
  }
  return {{"metric", to_string(x.metric)}, {"n", x.size()}, {"rows", std::move(rows)}};
}

DistanceMatrix distance_matrix_from_json(const nlohmann::json& j) {
  try {
    DistanceMatrix out;
    out.metric = parse_metric(j.at("metric").get<std::string>());
    const auto n = j.at("n").get<Eigen::Index>();
    const auto& rows = j.at("rows");
    if (n < 1 || static_cast<Eigen::Index>(rows.size()) != n) {
      throw Error(Errc::SchemaError, "distance matrix row count does not match n");
    }
    out.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != n) throw Error(Errc::SchemaError, "distance matrix row has wrong length");
      for (Eigen::Index c = 0; c < n; ++c) out.entries(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("distance matrix JSON: ") + e.what());
  }
}

}  // namespace distclust
