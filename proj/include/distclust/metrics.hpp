#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "distclust/gaussian.hpp"
#include "distclust/matrixcore.hpp"

namespace distclust {

enum class Metric {
  WassersteinSq,
  Bhattacharyya,
  Kl,
  Euclidean,  // plain distance between means; used by the mean-only spectral baseline
};

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);
bool is_symmetric(Metric metric);

/// A GaussianModel with the factors every divergence needs computed once.
class PreparedGaussian {
 public:
  explicit PreparedGaussian(GaussianModel model, bool with_sqrt = false);

  const GaussianModel& model() const { return model_; }
  const Vector& mean() const { return model_.mean; }
  const Matrix& covariance() const { return model_.covariance.matrix(); }
  const Matrix& inverse() const { return inverse_; }
  double logdet() const { return logdet_; }
  // Present only when constructed with_sqrt.
  const std::optional<Matrix>& sqrt() const { return sqrt_; }

 private:
  GaussianModel model_;
  Matrix inverse_;
  double logdet_ = 0.0;
  std::optional<Matrix> sqrt_;
};

/// Squared 2-Wasserstein (Bures) distance:
/// |m1 - m2|^2 + Tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2).
double wasserstein_sq(const GaussianModel& g1, const GaussianModel& g2,
                      const Tolerances& tol = kDefaultTolerances);
double wasserstein_sq(const PreparedGaussian& g1, const PreparedGaussian& g2,
                      const Tolerances& tol = kDefaultTolerances);

double bhattacharyya(const GaussianModel& g1, const GaussianModel& g2,
                     const Tolerances& tol = kDefaultTolerances);
double bhattacharyya(const PreparedGaussian& g1, const PreparedGaussian& g2,
                     const Tolerances& tol = kDefaultTolerances);

/// KL(g1 || g2). Not symmetric.
double kl(const GaussianModel& g1, const GaussianModel& g2, const Tolerances& tol = kDefaultTolerances);
double kl(const PreparedGaussian& g1, const PreparedGaussian& g2,
          const Tolerances& tol = kDefaultTolerances);

double euclidean(const GaussianModel& g1, const GaussianModel& g2);

struct DistanceMatrix {
  Metric metric = Metric::WassersteinSq;
  Matrix entries;

  Eigen::Index size() const { return entries.rows(); }
};

/// X[i][j] = metric(models[i], models[j]). Symmetric metrics fill the upper
/// triangle and mirror it; the diagonal is exactly zero. Pair evaluation may
/// be spread over `threads` workers without changing the result.
DistanceMatrix distance_matrix(std::span<const GaussianModel> models, Metric metric,
                               unsigned threads = 1, const Tolerances& tol = kDefaultTolerances);

std::string to_csv(const DistanceMatrix& x);
nlohmann::json to_json(const DistanceMatrix& x);
DistanceMatrix distance_matrix_from_json(const nlohmann::json& j);

}  // namespace distclust
