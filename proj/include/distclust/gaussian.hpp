#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "distclust/matrixcore.hpp"
#include "distclust/rng.hpp"

namespace distclust {

inline constexpr double kDefaultEpsScale = 1e-8;

/// One clustering object: q ordered d-dimensional samples.
struct SampleGroup {
  std::string id;
  std::vector<Vector> samples;

  std::size_t size() const { return samples.size(); }
  Eigen::Index dim() const { return samples.empty() ? 0 : samples.front().size(); }
};

struct GaussianModel {
  Vector mean;
  SymMatrix covariance;

  Eigen::Index dim() const { return mean.size(); }
};

/// Unbiased mean and covariance (divisor q - 1), then regularize(eps_scale).
GaussianModel estimate_gaussian(const SampleGroup& group, double eps_scale = kDefaultEpsScale);

double log_density(const GaussianModel& g, const Vector& x);

/// Draws m + A z with A the symmetric square root of the covariance.
SampleGroup sample(const GaussianModel& g, std::size_t count, Rng& rng, std::string id = {});

}  // namespace distclust
