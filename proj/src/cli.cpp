#include "distclust/cli.hpp"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "distclust/bench.hpp"
#include "distclust/errors.hpp"
#include "distclust/eval.hpp"
#include "distclust/ingest.hpp"
#include "distclust/io.hpp"
#include "distclust/parallel.hpp"
#include "distclust/pipeline.hpp"
#include "distclust/synthgen.hpp"

namespace distclust {

namespace {

namespace fs = std::filesystem;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct PipelineFlags {
  std::string algorithm = "bhattacharyya_spectral";
  int k = 2;
  std::optional<double> sigma;
  double eps_scale = kDefaultEpsScale;
  std::uint64_t seed = 0;
  int max_iter = 0;
  int restarts = 10;
  bool kernel_on_sqrt = false;
  bool klpp_squared = false;

  void attach(CLI::App& cmd, bool with_algorithm_and_k) {
    if (with_algorithm_and_k) {
      cmd.add_option("--algorithm", algorithm,
                     "kmeans_means | spectral_means | wasserstein_spectral | bhattacharyya_spectral | kl | klpp")
          ->capture_default_str();
      cmd.add_option("--k", k, "Number of clusters")->required();
      cmd.add_option("--seed", seed, "Random seed")->capture_default_str();
    }
    cmd.add_option("--sigma", sigma, "Kernel bandwidth (default: median of positive distances)");
    cmd.add_option("--eps", eps_scale, "Covariance regularization scale")->capture_default_str();
    cmd.add_option("--max-iter", max_iter, "Iteration cap (0: algorithm default)")->capture_default_str();
    cmd.add_option("--restarts", restarts, "k-means restarts inside spectral clustering")->capture_default_str();
    cmd.add_flag("--kernel-on-sqrt", kernel_on_sqrt, "Kernelize sqrt of the distance entries");
    cmd.add_flag("--klpp-squared", klpp_squared, "Weight KL++ seeding draws by d*^2");
  }

  PipelineConfig config(unsigned threads) const {
    PipelineConfig cfg;
    cfg.algorithm = parse_algorithm(algorithm);
    cfg.k = k;
    cfg.sigma = sigma;
    cfg.eps_scale = eps_scale;
    cfg.seed = seed;
    cfg.max_iter = max_iter;
    cfg.restarts = restarts;
    cfg.kernel_on_sqrt = kernel_on_sqrt;
    cfg.klpp_squared = klpp_squared;
    cfg.threads = threads;
    return cfg;
  }
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

std::vector<SampleGroup> load_groups(const std::string& path) { return groups_from_csv(read_text(path)); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clustering of multiple-sample objects by distribution divergences", "distclust"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker cap (default: DISTCLUST_THREADS or core count)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "groups.csv -> Gaussian models JSON");
  std::string groups_path, models_path, distmat_path, out_path;
  double eps_scale = kDefaultEpsScale;
  estimate->add_option("--groups", groups_path, "groups.csv input")->required()->check(CLI::ExistingFile);
  estimate->add_option("--eps", eps_scale, "Covariance regularization scale")->capture_default_str();
  estimate->add_option("--out", out_path, "Output path (default stdout)");

  // distmat
  auto* distmat = app.add_subcommand("distmat", "models JSON -> distance matrix");
  std::string metric_name = "wasserstein_sq";
  std::string format;
  distmat->add_option("--models", models_path, "models JSON input")->required()->check(CLI::ExistingFile);
  distmat->add_option("--metric", metric_name, "wasserstein_sq | bhattacharyya | kl | euclidean")->capture_default_str();
  distmat->add_option("--format", format, "csv | json (default: from --out extension, else json)");
  distmat->add_option("--out", out_path, "Output path (default stdout)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "groups, models or distance matrix -> labels JSON");
  PipelineFlags cluster_flags;
  auto* in_groups = cluster->add_option("--groups", groups_path, "groups.csv input")->check(CLI::ExistingFile);
  auto* in_models = cluster->add_option("--models", models_path, "models JSON input")->check(CLI::ExistingFile);
  auto* in_distmat = cluster->add_option("--distmat", distmat_path, "distance matrix JSON (spectral algorithms)")
                         ->check(CLI::ExistingFile);
  in_groups->excludes(in_models)->excludes(in_distmat);
  in_models->excludes(in_distmat);
  cluster_flags.attach(*cluster, true);
  cluster->add_option("--out", out_path, "Output path (default stdout)");

  // nmi
  auto* nmi_cmd = app.add_subcommand("nmi", "NMI between two labels files");
  std::string labels_a, labels_b;
  nmi_cmd->add_option("a", labels_a, "labels JSON")->required()->check(CLI::ExistingFile);
  nmi_cmd->add_option("b", labels_b, "labels JSON")->required()->check(CLI::ExistingFile);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic benchmark directory");
  SynthParams synth_params;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  synth->add_option("--d", synth_params.d, "Dimension")->capture_default_str();
  synth->add_option("--k", synth_params.k, "Number of generators")->capture_default_str();
  synth->add_option("--n-objects", synth_params.n_objects, "Objects")->capture_default_str();
  synth->add_option("--samples", synth_params.samples_per_object, "Samples per object")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_flag("--simplex-boundary", synth_params.simplex_boundary, "Means on the simplex boundary");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // bench-synth
  auto* bsynth = app.add_subcommand("bench-synth", "Synthetic NMI benchmark over a (d, k) grid");
  BenchSynthConfig bs;
  PipelineFlags bs_flags;
  std::string bs_algorithms = "all", bs_out;
  bsynth->add_option("--d-list", bs.d_list, "Dimensions")->delimiter(',')->capture_default_str();
  bsynth->add_option("--k-list", bs.k_list, "Cluster counts")->delimiter(',')->capture_default_str();
  bsynth->add_option("--trials", bs.trials, "Trials per cell")->capture_default_str();
  bsynth->add_option("--seed", bs.base_seed, "Base seed")->capture_default_str();
  bsynth->add_option("--algorithms", bs_algorithms, "Comma-separated algorithms or 'all'")->capture_default_str();
  bsynth->add_option("--n-objects", bs.n_objects, "Objects per benchmark")->capture_default_str();
  bsynth->add_option("--samples", bs.samples_per_object, "Samples per object")->capture_default_str();
  bsynth->add_flag("--simplex-boundary", bs.simplex_boundary, "Means on the simplex boundary");
  bs_flags.attach(*bsynth, false);
  bsynth->add_option("--out-dir", bs_out, "Output directory")->required();

  // bench-stock
  auto* bstock = app.add_subcommand("bench-stock", "Noise-stability benchmark on OHLC stock data");
  BenchStockConfig bk;
  PipelineFlags bk_flags;
  LoadOptions load_opts;
  std::string bk_csv, bk_algorithms = "all", bk_out;
  bstock->add_option("--csv", bk_csv, "Stock CSV (date,symbol,open,close,low,high)")->required()->check(CLI::ExistingFile);
  bstock->add_option("--k-list", bk.k_list, "Cluster counts")->delimiter(',')->capture_default_str();
  bstock->add_option("--sigma-list", bk.sigma_list, "Noise levels")->delimiter(',')->capture_default_str();
  bstock->add_option("--trials", bk.trials, "Trials per cell")->capture_default_str();
  bstock->add_option("--seed", bk.base_seed, "Base seed")->capture_default_str();
  bstock->add_option("--algorithms", bk_algorithms, "Comma-separated algorithms or 'all'")->capture_default_str();
  bstock->add_option("--min-days", load_opts.min_days, "Drop symbols with fewer rows")->capture_default_str();
  bstock->add_flag("--strict", load_opts.strict, "Reject malformed rows instead of skipping");
  bstock->add_flag("--log-returns", load_opts.log_returns, "Use daily log returns instead of raw prices");
  bk_flags.attach(*bstock, false);
  bstock->add_option("--out-dir", bk_out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  if (threads == 0) threads = default_threads();

  try {
    if (*estimate) {
      const std::vector<GaussianModel> models = estimate_all(load_groups(groups_path), eps_scale);
      emit(models_to_json(models).dump(2) + "\n", out_path, out);
    } else if (*distmat) {
      const std::vector<GaussianModel> models = models_from_json(read_json(models_path));
      const DistanceMatrix x = distance_matrix(models, parse_metric(metric_name), threads);
      if (format.empty()) format = fs::path(out_path).extension() == ".csv" ? "csv" : "json";
      if (format != "csv" && format != "json") throw Error(Errc::InvalidConfig, "--format must be csv or json");
      emit(format == "csv" ? to_csv(x) : to_json(x).dump() + "\n", out_path, out);
    } else if (*cluster) {
      const PipelineConfig cfg = cluster_flags.config(threads);
      for (const std::string& w : check_config(cfg)) err << "warning: " << w << "\n";
      ClusterAssignment labels;
      if (!groups_path.empty()) {
        labels = run_pipeline(load_groups(groups_path), cfg);
      } else if (!models_path.empty()) {
        labels = cluster_models(models_from_json(read_json(models_path)), cfg);
      } else if (!distmat_path.empty()) {
        if (!uses_spectral(cfg.algorithm)) {
          throw Error(Errc::InvalidConfig, "--distmat input needs a spectral algorithm");
        }
        labels = cluster_distance_matrix(distance_matrix_from_json(read_json(distmat_path)), cfg);
      } else {
        err << "cluster: one of --groups, --models, --distmat is required\n";
        return kUsageError;
      }
      emit(to_json(labels).dump() + "\n", out_path, out);
    } else if (*nmi_cmd) {
      const double v = nmi(assignment_from_json(read_json(labels_a)), assignment_from_json(read_json(labels_b)));
      out << format_number(v) << "\n";
    } else if (*synth) {
      write_benchmark(generate_benchmark(synth_params, synth_seed), synth_out);
    } else if (*bsynth) {
      bs.algorithms = parse_algorithm_list(bs_algorithms);
      bs.pipeline = bs_flags.config(threads);
      bs.threads = threads;
      const BenchmarkReport report = bench_synth(bs);
      write_report(report, bs_out);
      for (const CellResult& c : report.cells) {
        out << to_string(c.algorithm) << " d=" << c.d << " k=" << c.k << " nmi_mean=" << format_number(c.nmi_mean)
            << " nmi_variance=" << format_number(c.nmi_variance) << " failures=" << c.failures << "\n";
      }
    } else if (*bstock) {
      const LoadResult data = load_stock_csv(bk_csv, load_opts);
      if (data.skipped_rows || data.dropped_symbols || data.range_violations) {
        err << "warning: skipped " << data.skipped_rows << " rows, dropped " << data.dropped_symbols
            << " symbols, " << data.range_violations << " low/high range violations\n";
      }
      bk.algorithms = parse_algorithm_list(bk_algorithms);
      bk.pipeline = bk_flags.config(threads);
      bk.threads = threads;
      const BenchmarkReport report = bench_stock(data.groups, bk);
      write_report(report, bk_out);
      for (const CellResult& c : report.cells) {
        out << to_string(c.algorithm) << " k=" << c.k << " sigma=" << format_number(*c.sigma_noise)
            << " nmi_mean=" << format_number(c.nmi_mean) << " nmi_variance=" << format_number(c.nmi_variance)
            << " failures=" << c.failures << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool usage = e.code() == Errc::InvalidConfig || e.code() == Errc::InvalidBandwidth;
    return usage ? kUsageError : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}

}  // namespace distclust
