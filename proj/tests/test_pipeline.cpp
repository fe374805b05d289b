#include <doctest.h>

#include <filesystem>

#include "distclust/bench.hpp"
#include "distclust/errors.hpp"
#include "distclust/eval.hpp"
#include "distclust/io.hpp"
#include "distclust/pipeline.hpp"
#include "distclust/synthgen.hpp"

using namespace distclust;

namespace {

std::vector<SampleGroup> two_far_groups(Rng& rng) {
  const GaussianModel near{Vector::Zero(2), SymMatrix::identity(2)};
  const GaussianModel far{Vector::Constant(2, 100.0), SymMatrix::identity(2)};
  std::vector<SampleGroup> groups;
  for (int i = 0; i < 6; ++i) groups.push_back(sample(i % 2 ? far : near, 30, rng, "g" + std::to_string(i)));
  return groups;
}

std::vector<SampleGroup> fixture_groups() {
  return load_stock_csv(std::filesystem::path(DISTCLUST_TEST_DATA) / "stock_fixture_40.csv").groups;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (Algorithm a : kAllAlgorithms) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK(to_string(Algorithm::KlPlusPlus) == "klpp");
  CHECK(parse_algorithm_list("all").size() == 6);
  CHECK(parse_algorithm_list("kl,klpp") == std::vector<Algorithm>{Algorithm::Kl, Algorithm::KlPlusPlus});
  CHECK_THROWS_WITH_AS(parse_algorithm("dbscan"), doctest::Contains("InvalidConfig"), Error);
  CHECK(family(Algorithm::KMeansMeans) == "mean_only");
  CHECK(family(Algorithm::SpectralMeans) == "mean_only");
  CHECK(family(Algorithm::WassersteinSpectral) == "distribution");
  CHECK(family(Algorithm::Kl) == "distribution");
}

TEST_CASE("check_config") {
  PipelineConfig cfg;
  cfg.algorithm = Algorithm::Kl;
  cfg.sigma = 2.0;
  const std::vector<std::string> w = check_config(cfg);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == "sigma ignored for kl");
  cfg.algorithm = Algorithm::WassersteinSpectral;
  CHECK(check_config(cfg).empty());
  cfg.k = 1;
  CHECK_THROWS_AS(check_config(cfg), Error);
  cfg.k = 2;
  cfg.eps_scale = -1;
  CHECK_THROWS_AS(check_config(cfg), Error);
}

TEST_CASE("run_pipeline separates far groups with every algorithm") {
  Rng rng(1);
  const std::vector<SampleGroup> groups = two_far_groups(rng);
  const ClusterAssignment truth{{0, 1, 0, 1, 0, 1}, 2};
  for (Algorithm a : kAllAlgorithms) {
    CAPTURE(to_string(a));
    PipelineConfig cfg;
    cfg.algorithm = a;
    cfg.k = 2;
    cfg.seed = 3;
    CHECK(nmi(run_pipeline(groups, cfg), truth) == 1.0);
  }
}

TEST_CASE("run_pipeline on one synthetic benchmark") {
  const SyntheticBenchmark bench = generate_benchmark({}, 2024);
  PipelineConfig cfg;
  cfg.algorithm = Algorithm::BhattacharyyaSpectral;
  cfg.k = 5;
  cfg.seed = 2024;
  const ClusterAssignment a = run_pipeline(bench.groups, cfg);
  CHECK(nmi(a, bench.truth) >= 0.8);
  CHECK(run_pipeline(bench.groups, cfg) == a);
  cfg.threads = 3;
  CHECK(run_pipeline(bench.groups, cfg) == a);
}

TEST_CASE("cluster_distance_matrix rejects kl") {
  PipelineConfig cfg;
  cfg.algorithm = Algorithm::WassersteinSpectral;
  CHECK_THROWS_AS(cluster_distance_matrix({Metric::Kl, Matrix::Zero(3, 3)}, cfg), Error);
}

TEST_CASE("bench_synth") {
  SUBCASE("one trial has zero variance") {
    BenchSynthConfig cfg;
    cfg.trials = 1;
    cfg.algorithms = {Algorithm::KMeansMeans};
    const BenchmarkReport r = bench_synth(cfg);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].nmi_values.size() == 1);
    CHECK(r.cells[0].nmi_variance == 0.0);
    CHECK(r.cells[0].trial_count == 1);
    CHECK(r.find(Algorithm::KMeansMeans, 7, 5) != nullptr);
  }
  SUBCASE("grid shape, sanity and determinism") {
    BenchSynthConfig cfg;
    cfg.trials = 3;
    cfg.d_list = {3, 4};
    cfg.k_list = {2, 3};
    cfg.n_objects = 30;
    const BenchmarkReport r = bench_synth(cfg);
    CHECK(r.cells.size() == 2 * 2 * 6);
    for (const CellResult& c : r.cells) {
      CHECK(c.nmi_mean >= 0.0);
      CHECK(c.nmi_mean <= 1.0);
      CHECK(c.nmi_variance >= 0.0);
      CHECK(c.trial_count == c.trials_requested - c.failures);
    }
    cfg.threads = 3;
    CHECK(canonical_json(bench_synth(cfg)).dump() == canonical_json(r).dump());
  }
  SUBCASE("invalid grid fails before running") {
    BenchSynthConfig cfg;
    cfg.k_list = {5, 1};
    CHECK_THROWS_WITH_AS(bench_synth(cfg), doctest::Contains("InvalidConfig"), Error);
  }
}

TEST_CASE("bench_stock") {
  const std::vector<SampleGroup> groups = fixture_groups();
  SUBCASE("report shape") {
    BenchStockConfig cfg;
    cfg.trials = 2;
    cfg.k_list = {3, 4};
    const BenchmarkReport r = bench_stock(groups, cfg);
    CHECK(r.kind == "bench_stock");
    CHECK(r.cells.size() == 6 * 3 * 2);
    for (const CellResult& c : r.cells) {
      CHECK(c.sigma_noise.has_value());
      CHECK(c.nmi_mean >= 0.0);
      CHECK(c.nmi_mean <= 1.0);
    }
    const nlohmann::json j = to_json(r);
    CHECK(j.at("schema_version") == 1);
    for (const auto& cell : j.at("cells")) CHECK(cell.contains("family"));
  }
  SUBCASE("no noise reproduces the reference") {
    BenchStockConfig cfg;
    cfg.trials = 2;
    cfg.sigma_list = {0.0};
    const BenchmarkReport r = bench_stock(groups, cfg);
    for (const CellResult& c : r.cells) CHECK(c.nmi_mean == 1.0);
  }
  SUBCASE("too few groups") {
    BenchStockConfig cfg;
    cfg.k_list = {50};
    CHECK_THROWS_AS(bench_stock(groups, cfg), Error);
  }
}

TEST_CASE("report serialization") {
  BenchSynthConfig cfg;
  cfg.trials = 2;
  cfg.n_objects = 20;
  cfg.algorithms = {Algorithm::Kl, Algorithm::WassersteinSpectral};
  const BenchmarkReport r = bench_synth(cfg);
  const nlohmann::json full = to_json(r), canon = canonical_json(r);
  CHECK(full.contains("timestamp"));
  CHECK_FALSE(canon.contains("timestamp"));
  CHECK(full.at("cells")[0].contains("wall_time_s"));
  CHECK_FALSE(canon.at("cells")[0].contains("wall_time_s"));
  CHECK(canonical_json(bench_synth(cfg)).dump() == canon.dump());

  const auto dir = std::filesystem::temp_directory_path() / "distclust_test_report";
  std::filesystem::remove_all(dir);
  write_report(r, dir);
  CHECK(read_json(dir / "report.json").at("kind") == "bench_synth");
  CHECK(std::filesystem::exists(dir / "nmi_mean.csv"));
  CHECK(std::filesystem::exists(dir / "nmi_variance.csv"));
  std::filesystem::remove_all(dir);
}
