#include "distclust/synthgen.hpp"

#include <fstream>

#include "distclust/errors.hpp"
#include "distclust/io.hpp"

namespace distclust {

Matrix random_orthogonal(int d, Rng& rng) {
  if (d < 1) throw Error(Errc::InvalidConfig, "random_orthogonal needs d >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Vector random_simplex_point(int d, Rng& rng) {
  if (d < 2) throw Error(Errc::InvalidConfig, "random_simplex_point needs d >= 2");
  std::exponential_distribution<double> expo(1.0);
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = expo(rng);
  return x / x.sum();
}

Vector random_simplex_boundary_point(int d, Rng& rng) {
  if (d < 2) throw Error(Errc::InvalidConfig, "random_simplex_boundary_point needs d >= 2");
  // Facets of the standard simplex are congruent, so pick one uniformly.
  const int zeroed = std::uniform_int_distribution<int>(0, d - 1)(rng);
  Vector x = Vector::Zero(d);
  if (d == 2) {
    x(1 - zeroed) = 1.0;
    return x;
  }
  std::exponential_distribution<double> expo(1.0);
  for (int i = 0; i < d; ++i) {
    if (i != zeroed) x(i) = expo(rng);
  }
  return x / x.sum();
}

SyntheticBenchmark generate_benchmark(const SynthParams& params, std::uint64_t seed) {
  if (params.d < 2 || params.k < 2 || params.n_objects < params.k || params.samples_per_object < 2) {
    throw Error(Errc::InvalidConfig, "synthetic benchmark needs d >= 2, k >= 2, n_objects >= k, samples >= 2");
  }
  Vector spectrum(params.d);
  if (params.spectrum.empty()) {
    for (int i = 0; i < params.d; ++i) spectrum(i) = i + 1.0;
  } else {
    if (static_cast<int>(params.spectrum.size()) != params.d) {
      throw Error(Errc::InvalidConfig, "spectrum length must equal d");
    }
    for (int i = 0; i < params.d; ++i) {
      if (!(params.spectrum[i] >= 0.0)) throw Error(Errc::InvalidConfig, "spectrum entries must be non-negative");
      spectrum(i) = params.spectrum[i];
    }
  }

  SyntheticBenchmark out;
  out.seed = seed;
  out.params = params;
  Rng rng(seed);
  for (int c = 0; c < params.k; ++c) {
    Vector mean = params.simplex_boundary ? random_simplex_boundary_point(params.d, rng)
                                          : random_simplex_point(params.d, rng);
    const Matrix u = random_orthogonal(params.d, rng);
    out.generators.push_back({std::move(mean), SymMatrix(u * spectrum.asDiagonal() * u.transpose())});
  }

  out.truth.k = params.k;
  for (int t = 0; t < params.n_objects; ++t) {
    const int label = t % params.k;
    out.truth.labels.push_back(label);
    out.groups.push_back(sample(out.generators[label], static_cast<std::size_t>(params.samples_per_object), rng,
                                std::to_string(t)));
  }
  return out;
}

void write_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json truth = to_json(bench.truth);
  truth["seed"] = bench.seed;
  truth["params"] = {{"d", bench.params.d},
                     {"k", bench.params.k},
                     {"n_objects", bench.params.n_objects},
                     {"samples_per_object", bench.params.samples_per_object},
                     {"simplex_boundary", bench.params.simplex_boundary}};
  write_text(dir / "truth.json", truth.dump(2) + "\n");
  write_text(dir / "groups.csv", groups_to_csv(bench.groups));
}

}  // namespace distclust
