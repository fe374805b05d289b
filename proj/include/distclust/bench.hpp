#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "distclust/gaussian.hpp"
#include "distclust/ingest.hpp"
#include "distclust/pipeline.hpp"

namespace distclust {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct CellResult {
  Algorithm algorithm = Algorithm::KMeansMeans;
  int d = 0;
  int k = 0;
  std::optional<double> sigma_noise;  // stock cells only
  int trials_requested = 0;
  int trial_count = 0;  // trials_requested - failures
  int failures = 0;
  double nmi_mean = 0.0;
  double nmi_variance = 0.0;  // population variance over successful trials
  double wall_time_s = 0.0;   // summed per-trial clustering time
  std::vector<double> nmi_values;
  std::vector<std::string> failure_messages;
};

struct BenchmarkReport {
  std::string kind;  // "bench_synth" or "bench_stock"
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::string timestamp;
  std::vector<CellResult> cells;

  const CellResult* find(Algorithm a, int d, int k, std::optional<double> sigma = std::nullopt) const;
};

struct BenchSynthConfig {
  std::vector<int> d_list{7};
  std::vector<int> k_list{5};
  int trials = 50;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  int n_objects = 200;
  int samples_per_object = 30;
  bool simplex_boundary = false;
  // Template for every run; algorithm, k and seed are overwritten per trial.
  PipelineConfig pipeline;
  unsigned threads = 1;
};

/// Every (d, k, algorithm) cell scored over `trials` synthetic benchmarks.
/// Trial t uses seed derive_seed(base_seed, t) for both data generation and
/// clustering, so all algorithms in a trial see the same data.
BenchmarkReport bench_synth(const BenchSynthConfig& cfg);

struct BenchStockConfig {
  std::vector<int> k_list{3};
  std::vector<double> sigma_list{1.0, 2.0, 3.0};
  int trials = 10;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  PipelineConfig pipeline;
  unsigned threads = 1;
};

/// Noise-stability benchmark: each algorithm's clustering of the clean
/// groups is its own reference; noised copies are clustered with the same
/// seed and scored against that reference.
BenchmarkReport bench_stock(std::span<const SampleGroup> groups, const BenchStockConfig& cfg);

nlohmann::json to_json(const BenchmarkReport& report);
/// Report JSON without the run-dependent fields (timestamp, wall_time_s).
nlohmann::json canonical_json(const BenchmarkReport& report);

/// Writes report.json plus the plot-ready CSV files into `dir`.
void write_report(const BenchmarkReport& report, const std::filesystem::path& dir);

}  // namespace distclust
