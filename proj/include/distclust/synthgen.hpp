#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "distclust/assignment.hpp"
#include "distclust/gaussian.hpp"
#include "distclust/rng.hpp"

namespace distclust {

struct SynthParams {
  int d = 7;
  int k = 5;
  int n_objects = 200;
  int samples_per_object = 30;
  // Generator covariance eigenvalues; empty means {1, 2, ..., d}.
  std::vector<double> spectrum;
  // Draw means from the relative boundary of the simplex instead of the
  // whole simplex.
  bool simplex_boundary = false;
};

struct SyntheticBenchmark {
  std::vector<SampleGroup> groups;
  ClusterAssignment truth;
  std::vector<GaussianModel> generators;
  std::uint64_t seed = 0;
  SynthParams params;
};

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, with the
/// columns sign-corrected by the diagonal of R).
Matrix random_orthogonal(int d, Rng& rng);

/// Uniform point on the standard simplex {x >= 0, sum x = 1}.
Vector random_simplex_point(int d, Rng& rng);

/// Uniform point on the relative boundary of the standard simplex.
Vector random_simplex_boundary_point(int d, Rng& rng);

/// k generators N(simplex mean, U diag(spectrum) U^T); object t draws its
/// samples from generator t mod k. Deterministic in (params, seed).
SyntheticBenchmark generate_benchmark(const SynthParams& params, std::uint64_t seed);

/// Writes truth.json and groups.csv into `dir` (created if missing).
void write_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir);

}  // namespace distclust
