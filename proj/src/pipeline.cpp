#include "distclust/pipeline.hpp"

#include "distclust/errors.hpp"
#include "distclust/klcluster.hpp"
#include "distclust/spectral.hpp"

namespace distclust {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::KMeansMeans: return "kmeans_means";
    case Algorithm::SpectralMeans: return "spectral_means";
    case Algorithm::WassersteinSpectral: return "wasserstein_spectral";
    case Algorithm::BhattacharyyaSpectral: return "bhattacharyya_spectral";
    case Algorithm::Kl: return "kl";
    case Algorithm::KlPlusPlus: return "klpp";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw Error(Errc::InvalidConfig, "unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  if (list == "all") return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string_view name = list.substr(start, comma == list.npos ? list.npos : comma - start);
    if (!name.empty()) out.push_back(parse_algorithm(name));
    if (comma == list.npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw Error(Errc::InvalidConfig, "empty algorithm list");
  return out;
}

std::string_view family(Algorithm a) {
  return a == Algorithm::KMeansMeans || a == Algorithm::SpectralMeans ? "mean_only" : "distribution";
}

bool uses_spectral(Algorithm a) {
  return a == Algorithm::SpectralMeans || a == Algorithm::WassersteinSpectral || a == Algorithm::BhattacharyyaSpectral;
}

std::vector<std::string> check_config(const PipelineConfig& cfg) {
  if (cfg.k < 2) throw Error(Errc::InvalidConfig, "k must be >= 2");
  if (cfg.eps_scale < 0.0) throw Error(Errc::InvalidConfig, "eps_scale must be >= 0");
  if (cfg.max_iter < 0 || cfg.restarts < 1) throw Error(Errc::InvalidConfig, "max_iter must be >= 0 and restarts >= 1");
  if (cfg.sigma && !(*cfg.sigma > 0.0)) throw Error(Errc::InvalidBandwidth, "sigma must be positive");

  std::vector<std::string> warnings;
  const std::string name(to_string(cfg.algorithm));
  if (!uses_spectral(cfg.algorithm)) {
    if (cfg.sigma) warnings.push_back("sigma ignored for " + name);
    if (cfg.kernel_on_sqrt) warnings.push_back("kernel-on-sqrt ignored for " + name);
  }
  if (cfg.algorithm != Algorithm::KlPlusPlus && cfg.klpp_squared) warnings.push_back("klpp-squared ignored for " + name);
  if (cfg.algorithm == Algorithm::Kl || cfg.algorithm == Algorithm::KlPlusPlus) {
    if (cfg.restarts != 10) warnings.push_back("restarts ignored for " + name);
  }
  return warnings;
}

std::vector<GaussianModel> estimate_all(std::span<const SampleGroup> groups, double eps_scale) {
  std::vector<GaussianModel> models;
  models.reserve(groups.size());
  for (const SampleGroup& g : groups) models.push_back(estimate_gaussian(g, eps_scale));
  return models;
}

namespace {

KMeansOptions kmeans_options(const PipelineConfig& cfg) {
  KMeansOptions opts;
  opts.restarts = cfg.restarts;
  if (cfg.max_iter > 0) opts.max_iter = cfg.max_iter;
  return opts;
}

Metric spectral_metric(Algorithm a) {
  switch (a) {
    case Algorithm::SpectralMeans: return Metric::Euclidean;
    case Algorithm::WassersteinSpectral: return Metric::WassersteinSq;
    case Algorithm::BhattacharyyaSpectral: return Metric::Bhattacharyya;
    default: throw Error(Errc::InvalidConfig, "algorithm '" + std::string(to_string(a)) + "' is not spectral");
  }
}

}  // namespace

ClusterAssignment cluster_distance_matrix(const DistanceMatrix& x, const PipelineConfig& cfg) {
  check_config(cfg);
  if (x.size() < cfg.k) throw Error(Errc::InvalidConfig, "fewer objects than clusters");
  Rng rng(cfg.seed);
  const AdjacencyMatrix w = kernelize(x, cfg.sigma, cfg.kernel_on_sqrt);
  return spectral_cluster(w, cfg.k, rng, kmeans_options(cfg));
}

ClusterAssignment cluster_models(std::span<const GaussianModel> models, const PipelineConfig& cfg) {
  check_config(cfg);
  if (models.size() < static_cast<std::size_t>(cfg.k)) throw Error(Errc::InvalidConfig, "fewer objects than clusters");
  Rng rng(cfg.seed);
  switch (cfg.algorithm) {
    case Algorithm::KMeansMeans: {
      std::vector<Vector> means;
      for (const GaussianModel& g : models) means.push_back(g.mean);
      return kmeans(means, cfg.k, rng, kmeans_options(cfg)).assignment;
    }
    case Algorithm::SpectralMeans:
    case Algorithm::WassersteinSpectral:
    case Algorithm::BhattacharyyaSpectral: {
      const DistanceMatrix x = distance_matrix(models, spectral_metric(cfg.algorithm), cfg.threads);
      const AdjacencyMatrix w = kernelize(x, cfg.sigma, cfg.kernel_on_sqrt);
      return spectral_cluster(w, cfg.k, rng, kmeans_options(cfg));
    }
    case Algorithm::Kl:
    case Algorithm::KlPlusPlus: {
      KlClusterOptions opts;
      opts.seeding = cfg.algorithm == Algorithm::KlPlusPlus ? Seeding::KlPlusPlus : Seeding::Random;
      if (cfg.max_iter > 0) opts.max_iter = cfg.max_iter;
      opts.squared_weights = cfg.klpp_squared;
      return kl_cluster(models, cfg.k, rng, opts).assignment;
    }
  }
  throw Error(Errc::InvalidConfig, "unhandled algorithm");
}

ClusterAssignment run_pipeline(std::span<const SampleGroup> groups, const PipelineConfig& cfg) {
  check_config(cfg);
  return cluster_models(estimate_all(groups, cfg.eps_scale), cfg);
}

}  // namespace distclust
