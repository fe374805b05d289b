#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distclust/assignment.hpp"
#include "distclust/gaussian.hpp"
#include "distclust/metrics.hpp"

namespace distclust {

enum class Algorithm {
  KMeansMeans,
  SpectralMeans,
  WassersteinSpectral,
  BhattacharyyaSpectral,
  Kl,
  KlPlusPlus,
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::KMeansMeans, Algorithm::SpectralMeans, Algorithm::Kl,
    Algorithm::KlPlusPlus,  Algorithm::WassersteinSpectral, Algorithm::BhattacharyyaSpectral,
};

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
/// Comma-separated names, or "all".
std::vector<Algorithm> parse_algorithm_list(std::string_view list);

/// "mean_only" for the baselines that see only estimated means,
/// "distribution" for the ones that use the full Gaussian.
std::string_view family(Algorithm a);
bool uses_spectral(Algorithm a);

struct PipelineConfig {
  Algorithm algorithm = Algorithm::BhattacharyyaSpectral;
  int k = 2;
  std::optional<double> sigma;  // kernel bandwidth; median heuristic when absent
  double eps_scale = kDefaultEpsScale;
  std::uint64_t seed = 0;
  int max_iter = 0;  // 0: algorithm default (300 for k-means, 100 for KL)
  int restarts = 10;
  bool kernel_on_sqrt = false;
  bool klpp_squared = false;
  unsigned threads = 1;
};

/// Throws InvalidConfig on hard violations; returns warnings for fields the
/// chosen algorithm ignores.
std::vector<std::string> check_config(const PipelineConfig& cfg);

/// Estimate -> divergence matrix -> partition.
ClusterAssignment run_pipeline(std::span<const SampleGroup> groups, const PipelineConfig& cfg);
ClusterAssignment cluster_models(std::span<const GaussianModel> models, const PipelineConfig& cfg);
/// Spectral branch on a precomputed distance matrix.
ClusterAssignment cluster_distance_matrix(const DistanceMatrix& x, const PipelineConfig& cfg);

std::vector<GaussianModel> estimate_all(std::span<const SampleGroup> groups, double eps_scale);

}  // namespace distclust
