#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distclust/assignment.hpp"
#include "distclust/gaussian.hpp"
#include "distclust/rng.hpp"

namespace distclust {

enum class Seeding { Random, KlPlusPlus };

struct KlClusterOptions {
  Seeding seeding = Seeding::KlPlusPlus;
  int max_iter = 100;
  // Weight KL++ draws by d*^2 instead of d*.
  bool squared_weights = false;
};

struct KlClusterState {
  ClusterAssignment assignment;
  std::vector<GaussianModel> centers;
  int iteration = 0;
  bool converged = false;
  // Summed KL(model || its center), recorded after every center update and
  // after every reassignment.
  std::vector<double> objective_trace;
};

/// Cluster centers minimizing summed KL(member || center): the mean of the
/// member means, and the mean of Sigma_i + (m_i - a)(m_i - a)^T.
/// Throws EmptyCluster if a label in [0, k) has no members.
std::vector<GaussianModel> center_update(std::span<const GaussianModel> models, const ClusterAssignment& a);

/// KL++ seeding: first index uniform, each next drawn with probability
/// proportional to the smallest KL from the model to a chosen center.
std::vector<std::size_t> klpp_seed(std::span<const GaussianModel> models, int k, Rng& rng,
                                   bool squared_weights = false);

KlClusterState kl_cluster(std::span<const GaussianModel> models, int k, Rng& rng,
                          const KlClusterOptions& opts = {});

/// Summed KL(models[i] || centers[labels[i]]).
double kl_objective(std::span<const GaussianModel> models, std::span<const GaussianModel> centers,
                    const ClusterAssignment& a);

}  // namespace distclust
