#include "distclust/klcluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "distclust/errors.hpp"
#include "distclust/metrics.hpp"

namespace distclust {

std::vector<GaussianModel> center_update(std::span<const GaussianModel> models, const ClusterAssignment& a) {
  if (a.size() != models.size()) throw Error(Errc::DimensionMismatch, "assignment length does not match model count");
  validate(a);
  const Eigen::Index d = models.front().dim();

  std::vector<Vector> mean_sum(static_cast<std::size_t>(a.k), Vector::Zero(d));
  std::vector<int> counts(static_cast<std::size_t>(a.k), 0);
  for (std::size_t i = 0; i < models.size(); ++i) {
    mean_sum[a.labels[i]] += models[i].mean;
    ++counts[a.labels[i]];
  }
  for (int c = 0; c < a.k; ++c) {
    if (counts[c] == 0) throw Error(Errc::EmptyCluster, "cluster " + std::to_string(c) + " has no members");
    mean_sum[c] /= static_cast<double>(counts[c]);
  }

  std::vector<Matrix> cov_sum(static_cast<std::size_t>(a.k), Matrix::Zero(d, d));
  for (std::size_t i = 0; i < models.size(); ++i) {
    const int c = a.labels[i];
    const Vector offset = models[i].mean - mean_sum[c];
    cov_sum[c] += models[i].covariance.matrix() + offset * offset.transpose();
  }

  std::vector<GaussianModel> centers;
  centers.reserve(static_cast<std::size_t>(a.k));
  for (int c = 0; c < a.k; ++c) {
    centers.push_back({mean_sum[c], SymMatrix(cov_sum[c] / static_cast<double>(counts[c]))});
  }
  return centers;
}

namespace {

std::vector<PreparedGaussian> prepare_all(std::span<const GaussianModel> models) {
  std::vector<PreparedGaussian> out;
  out.reserve(models.size());
  for (const GaussianModel& g : models) out.emplace_back(g);
  return out;
}

struct Assignment {
  std::vector<int> labels;
  std::vector<double> divergence;  // KL(model || own center)
  double objective = 0.0;
};

// argmin_j KL(model_i || center_j), ties to the lowest j.
Assignment assign_nearest(const std::vector<PreparedGaussian>& models, const std::vector<PreparedGaussian>& centers) {
  Assignment out{std::vector<int>(models.size(), 0), std::vector<double>(models.size(), 0.0), 0.0};
  for (std::size_t i = 0; i < models.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double v = kl(models[i], centers[c]);
      if (v < best) {
        best = v;
        out.labels[i] = static_cast<int>(c);
      }
    }
    out.divergence[i] = best;
    out.objective += best;
  }
  return out;
}

// Each empty cluster takes the model with the largest divergence to its
// current center, drawn from clusters that keep at least one member.
void repair_empty(Assignment& a, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int label : a.labels) ++counts[label];
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::ptrdiff_t far = -1;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (counts[a.labels[i]] < 2) continue;
      if (far < 0 || a.divergence[i] > a.divergence[far]) far = static_cast<std::ptrdiff_t>(i);
    }
    if (far < 0) break;
    --counts[a.labels[far]];
    a.labels[far] = c;
    a.divergence[far] = 0.0;
    ++counts[c];
  }
}

std::vector<std::size_t> random_seed(std::size_t n, int k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots are a uniform k-subset in draw order.
  for (int c = 0; c < k; ++c) {
    const auto j = std::uniform_int_distribution<std::size_t>(static_cast<std::size_t>(c), n - 1)(rng);
    std::swap(idx[c], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace

std::vector<std::size_t> klpp_seed(std::span<const GaussianModel> models, int k, Rng& rng, bool squared_weights) {
  const std::size_t n = models.size();
  if (k < 1 || n < static_cast<std::size_t>(k)) throw Error(Errc::InvalidConfig, "klpp_seed needs 1 <= k <= n");
  const std::vector<PreparedGaussian> prepared = prepare_all(models);

  std::vector<std::size_t> chosen{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)};
  std::vector<bool> taken(n, false);
  taken[chosen.front()] = true;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  while (chosen.size() < static_cast<std::size_t>(k)) {
    const PreparedGaussian& latest = prepared[chosen.back()];
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = taken[i] ? 0.0 : std::min(nearest[i], kl(prepared[i], latest));
    }
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = squared_weights ? nearest[i] * nearest[i] : nearest[i];
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);

    std::size_t pick = n;
    if (total > 0.0) {
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (weight[i] <= 0.0) continue;
        pick = i;
        r -= weight[i];
        if (r < 0.0) break;
      }
    } else {
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i]) open.push_back(i);
      }
      pick = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    }
    taken[pick] = true;
    chosen.push_back(pick);
  }
  return chosen;
}

double kl_objective(std::span<const GaussianModel> models, std::span<const GaussianModel> centers,
                    const ClusterAssignment& a) {
  const std::vector<PreparedGaussian> prepared_centers = prepare_all(centers);
  double total = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    total += kl(PreparedGaussian(models[i]), prepared_centers[a.labels[i]]);
  }
  return total;
}

KlClusterState kl_cluster(std::span<const GaussianModel> models, int k, Rng& rng, const KlClusterOptions& opts) {
  const std::size_t n = models.size();
  if (k < 1 || n < static_cast<std::size_t>(k)) throw Error(Errc::InvalidConfig, "kl_cluster needs 1 <= k <= n");
  if (opts.max_iter < 1) throw Error(Errc::InvalidConfig, "kl_cluster needs max_iter >= 1");
  for (const GaussianModel& g : models) {
    if (g.dim() != models.front().dim()) throw Error(Errc::DimensionMismatch, "models have mixed dimensions");
  }

  const std::vector<PreparedGaussian> prepared = prepare_all(models);
  const std::vector<std::size_t> seeds = opts.seeding == Seeding::KlPlusPlus
                                             ? klpp_seed(models, k, rng, opts.squared_weights)
                                             : random_seed(n, k, rng);
  std::vector<PreparedGaussian> centers;
  for (std::size_t s : seeds) centers.push_back(prepared[s]);

  Assignment current = assign_nearest(prepared, centers);
  repair_empty(current, k);

  KlClusterState state;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const std::vector<GaussianModel> updated = center_update(models, ClusterAssignment{current.labels, k});
    centers = prepare_all(updated);
    state.centers = updated;

    double after_update = 0.0;
    for (std::size_t i = 0; i < n; ++i) after_update += kl(prepared[i], centers[current.labels[i]]);
    state.objective_trace.push_back(after_update);

    Assignment next = assign_nearest(prepared, centers);
    state.objective_trace.push_back(next.objective);
    state.iteration = iter;
    if (next.labels == current.labels) {
      state.converged = true;
      break;
    }
    repair_empty(next, k);
    current = std::move(next);
  }
  state.assignment = ClusterAssignment{std::move(current.labels), k};
  return state;
}

}  // namespace distclust
