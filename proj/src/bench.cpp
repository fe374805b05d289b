#include "distclust/bench.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "distclust/errors.hpp"
#include "distclust/eval.hpp"
#include "distclust/io.hpp"
#include "distclust/parallel.hpp"
#include "distclust/synthgen.hpp"

namespace distclust {

const CellResult* BenchmarkReport::find(Algorithm a, int d, int k, std::optional<double> sigma) const {
  for (const CellResult& c : cells) {
    if (c.algorithm == a && c.d == d && c.k == k && c.sigma_noise == sigma) return &c;
  }
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

struct TrialOutcome {
  double nmi = 0.0;
  double seconds = 0.0;
  std::optional<std::string> error;
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Folds per-trial outcomes (in trial order) into the cell summary.
void summarize(CellResult& cell, const std::vector<TrialOutcome>& outcomes) {
  cell.trials_requested = static_cast<int>(outcomes.size());
  for (const TrialOutcome& o : outcomes) {
    cell.wall_time_s += o.seconds;
    if (o.error) {
      ++cell.failures;
      cell.failure_messages.push_back(*o.error);
    } else {
      cell.nmi_values.push_back(o.nmi);
    }
  }
  cell.trial_count = static_cast<int>(cell.nmi_values.size());
  if (cell.trial_count == 0) return;
  double sum = 0.0;
  for (double v : cell.nmi_values) sum += v;
  cell.nmi_mean = sum / cell.trial_count;
  double sq = 0.0;
  for (double v : cell.nmi_values) sq += (v - cell.nmi_mean) * (v - cell.nmi_mean);
  cell.nmi_variance = sq / cell.trial_count;
}

template <typename F>
TrialOutcome timed(F&& score) {
  TrialOutcome out;
  const auto start = Clock::now();
  try {
    out.nmi = score();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

nlohmann::json pipeline_json(const PipelineConfig& p) {
  nlohmann::json j = {{"eps_scale", p.eps_scale},
                      {"max_iter", p.max_iter},
                      {"restarts", p.restarts},
                      {"kernel_on_sqrt", p.kernel_on_sqrt},
                      {"klpp_squared", p.klpp_squared}};
  j["sigma"] = p.sigma ? nlohmann::json(*p.sigma) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json algorithm_names(const std::vector<Algorithm>& algorithms) {
  nlohmann::json out = nlohmann::json::array();
  for (Algorithm a : algorithms) out.push_back(to_string(a));
  return out;
}

// Hard config violations abort the batch up front; per-trial failures are
// reserved for data-dependent errors.
void check_grid(const PipelineConfig& base, std::span<const Algorithm> algorithms, std::span<const int> ks) {
  for (Algorithm a : algorithms) {
    for (int k : ks) {
      PipelineConfig cfg = base;
      cfg.algorithm = a;
      cfg.k = k;
      check_config(cfg);
    }
  }
}

}  // namespace

BenchmarkReport bench_synth(const BenchSynthConfig& cfg) {
  if (cfg.trials < 1) throw Error(Errc::InvalidConfig, "trials must be >= 1");
  if (cfg.algorithms.empty() || cfg.d_list.empty() || cfg.k_list.empty()) {
    throw Error(Errc::InvalidConfig, "bench_synth needs non-empty d, k and algorithm lists");
  }
  check_grid(cfg.pipeline, cfg.algorithms, cfg.k_list);

  struct GridPoint {
    int d, k;
  };
  std::vector<GridPoint> grid;
  for (int d : cfg.d_list) {
    for (int k : cfg.k_list) grid.push_back({d, k});
  }
  const std::size_t n_alg = cfg.algorithms.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);

  // outcomes[grid][algorithm][trial]
  std::vector<std::vector<std::vector<TrialOutcome>>> outcomes(
      grid.size(), std::vector<std::vector<TrialOutcome>>(n_alg, std::vector<TrialOutcome>(trials)));

  parallel_for(grid.size() * trials, cfg.threads, [&](std::size_t task) {
    const std::size_t gi = task / trials;
    const std::size_t t = task % trials;
    const std::uint64_t seed = derive_seed(cfg.base_seed, t);
    SynthParams params;
    params.d = grid[gi].d;
    params.k = grid[gi].k;
    params.n_objects = cfg.n_objects;
    params.samples_per_object = cfg.samples_per_object;
    params.simplex_boundary = cfg.simplex_boundary;

    std::optional<SyntheticBenchmark> bench;
    std::vector<GaussianModel> models;
    std::optional<std::string> data_error;
    try {
      bench = generate_benchmark(params, seed);
      models = estimate_all(bench->groups, cfg.pipeline.eps_scale);
    } catch (const std::exception& e) {
      data_error = e.what();
    }

    for (std::size_t a = 0; a < n_alg; ++a) {
      if (data_error) {
        outcomes[gi][a][t].error = data_error;
        continue;
      }
      PipelineConfig pc = cfg.pipeline;
      pc.algorithm = cfg.algorithms[a];
      pc.k = params.k;
      pc.seed = seed;
      pc.threads = 1;
      outcomes[gi][a][t] = timed([&] { return nmi(cluster_models(models, pc), bench->truth); });
    }
  });

  BenchmarkReport report;
  report.kind = "bench_synth";
  report.seed = cfg.base_seed;
  report.timestamp = utc_timestamp();
  report.config = {{"d_list", cfg.d_list},
                   {"k_list", cfg.k_list},
                   {"trials", cfg.trials},
                   {"n_objects", cfg.n_objects},
                   {"samples_per_object", cfg.samples_per_object},
                   {"simplex_boundary", cfg.simplex_boundary},
                   {"algorithms", algorithm_names(cfg.algorithms)},
                   {"pipeline", pipeline_json(cfg.pipeline)}};
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    for (std::size_t a = 0; a < n_alg; ++a) {
      CellResult cell;
      cell.algorithm = cfg.algorithms[a];
      cell.d = grid[gi].d;
      cell.k = grid[gi].k;
      summarize(cell, outcomes[gi][a]);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

BenchmarkReport bench_stock(std::span<const SampleGroup> groups, const BenchStockConfig& cfg) {
  if (cfg.trials < 1) throw Error(Errc::InvalidConfig, "trials must be >= 1");
  if (cfg.algorithms.empty() || cfg.k_list.empty() || cfg.sigma_list.empty()) {
    throw Error(Errc::InvalidConfig, "bench_stock needs non-empty k, sigma and algorithm lists");
  }
  check_grid(cfg.pipeline, cfg.algorithms, cfg.k_list);
  int max_k = 0;
  for (int k : cfg.k_list) max_k = std::max(max_k, k);
  if (groups.size() < static_cast<std::size_t>(max_k)) {
    throw Error(Errc::InvalidConfig, "stock data has " + std::to_string(groups.size()) + " symbols, need >= " +
                                         std::to_string(max_k));
  }
  const int d = static_cast<int>(groups.front().dim());
  const std::size_t n_alg = cfg.algorithms.size();
  const std::size_t n_k = cfg.k_list.size();
  const std::size_t n_sigma = cfg.sigma_list.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);

  auto config_for = [&](std::size_t a, std::size_t ki) {
    PipelineConfig pc = cfg.pipeline;
    pc.algorithm = cfg.algorithms[a];
    pc.k = cfg.k_list[ki];
    pc.seed = cfg.base_seed;
    pc.threads = 1;
    return pc;
  };

  // Reference clustering of the clean data, per (algorithm, k).
  const std::vector<GaussianModel> clean_models = estimate_all(groups, cfg.pipeline.eps_scale);
  std::vector<std::optional<ClusterAssignment>> reference(n_alg * n_k);
  std::vector<std::string> reference_error(n_alg * n_k);
  parallel_for(n_alg * n_k, cfg.threads, [&](std::size_t idx) {
    try {
      reference[idx] = cluster_models(clean_models, config_for(idx / n_k, idx % n_k));
    } catch (const std::exception& e) {
      reference_error[idx] = e.what();
    }
  });

  // outcomes[sigma][algorithm][k][trial]
  std::vector<std::vector<std::vector<std::vector<TrialOutcome>>>> outcomes(
      n_sigma, std::vector<std::vector<std::vector<TrialOutcome>>>(
                   n_alg, std::vector<std::vector<TrialOutcome>>(n_k, std::vector<TrialOutcome>(trials))));

  parallel_for(n_sigma * trials, cfg.threads, [&](std::size_t task) {
    const std::size_t si = task / trials;
    const std::size_t t = task % trials;
    Rng noise_rng(derive_seed(cfg.base_seed + 1 + si, t));
    std::vector<GaussianModel> models;
    std::optional<std::string> data_error;
    try {
      models = estimate_all(add_noise(groups, cfg.sigma_list[si], noise_rng), cfg.pipeline.eps_scale);
    } catch (const std::exception& e) {
      data_error = e.what();
    }
    for (std::size_t a = 0; a < n_alg; ++a) {
      for (std::size_t ki = 0; ki < n_k; ++ki) {
        TrialOutcome& slot = outcomes[si][a][ki][t];
        const std::size_t ref = a * n_k + ki;
        if (data_error) {
          slot.error = data_error;
        } else if (!reference[ref]) {
          slot.error = "reference clustering failed: " + reference_error[ref];
        } else {
          slot = timed([&] { return nmi(cluster_models(models, config_for(a, ki)), *reference[ref]); });
        }
      }
    }
  });

  BenchmarkReport report;
  report.kind = "bench_stock";
  report.seed = cfg.base_seed;
  report.timestamp = utc_timestamp();
  report.config = {{"k_list", cfg.k_list},
                   {"sigma_list", cfg.sigma_list},
                   {"trials", cfg.trials},
                   {"n_symbols", groups.size()},
                   {"algorithms", algorithm_names(cfg.algorithms)},
                   {"pipeline", pipeline_json(cfg.pipeline)}};
  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      for (std::size_t si = 0; si < n_sigma; ++si) {
        CellResult cell;
        cell.algorithm = cfg.algorithms[a];
        cell.d = d;
        cell.k = cfg.k_list[ki];
        cell.sigma_noise = cfg.sigma_list[si];
        summarize(cell, outcomes[si][a][ki]);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

nlohmann::json to_json(const BenchmarkReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellResult& c : report.cells) {
    nlohmann::json cell = {{"algorithm", to_string(c.algorithm)},
                           {"family", family(c.algorithm)},
                           {"d", c.d},
                           {"k", c.k},
                           {"trials_requested", c.trials_requested},
                           {"trial_count", c.trial_count},
                           {"failures", c.failures},
                           {"nmi_mean", c.nmi_mean},
                           {"nmi_variance", c.nmi_variance},
                           {"nmi_values", c.nmi_values},
                           {"wall_time_s", c.wall_time_s}};
    cell["sigma_noise"] = c.sigma_noise ? nlohmann::json(*c.sigma_noise) : nlohmann::json(nullptr);
    if (!c.failure_messages.empty()) cell["failure_messages"] = c.failure_messages;
    cells.push_back(std::move(cell));
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", report.kind},
          {"version", kVersion},
          {"seed", report.seed},
          {"timestamp", report.timestamp},
          {"config", report.config},
          {"cells", std::move(cells)}};
}

nlohmann::json canonical_json(const BenchmarkReport& report) {
  nlohmann::json j = to_json(report);
  j.erase("timestamp");
  for (auto& cell : j["cells"]) cell.erase("wall_time_s");
  return j;
}

void write_report(const BenchmarkReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", to_json(report).dump(2) + "\n");

  if (report.kind == "bench_stock") {
    std::string csv = "algorithm,family,k,sigma_noise,trial_count,nmi_mean,nmi_variance\n";
    for (const CellResult& c : report.cells) {
      csv += std::string(to_string(c.algorithm)) + "," + std::string(family(c.algorithm)) + "," + std::to_string(c.k) +
             "," + format_number(c.sigma_noise.value_or(0.0)) + "," + std::to_string(c.trial_count) + "," +
             format_number(c.nmi_mean) + "," + format_number(c.nmi_variance) + "\n";
    }
    write_text(dir / "stock_nmi.csv", csv);
    return;
  }

  std::string mean_csv = "algorithm,family,d,k,nmi_mean\n";
  std::string var_csv = "algorithm,family,d,k,nmi_variance\n";
  for (const CellResult& c : report.cells) {
    const std::string prefix = std::string(to_string(c.algorithm)) + "," + std::string(family(c.algorithm)) + "," +
                               std::to_string(c.d) + "," + std::to_string(c.k) + ",";
    mean_csv += prefix + format_number(c.nmi_mean) + "\n";
    var_csv += prefix + format_number(c.nmi_variance) + "\n";
  }
  write_text(dir / "nmi_mean.csv", mean_csv);
  write_text(dir / "nmi_variance.csv", var_csv);
}

}  // namespace distclust
