#pragma once

#include <optional>
#include <span>
#include <vector>

#include "distclust/assignment.hpp"
#include "distclust/matrixcore.hpp"
#include "distclust/metrics.hpp"
#include "distclust/rng.hpp"

namespace distclust {

/// Similarity graph W with entries exp(-x^2 / (2 sigma^2)).
struct AdjacencyMatrix {
  Matrix entries;
  double sigma = 1.0;

  Eigen::Index size() const { return entries.rows(); }
};

/// Median of the strictly positive upper-triangle entries; 1.0 if none.
double median_bandwidth(const Matrix& x);

/// Kernelizes a symmetric distance matrix. Without `sigma` the median
/// heuristic is used. With `on_sqrt` the square roots of the stored entries
/// are kernelized instead of the entries themselves.
AdjacencyMatrix kernelize(const DistanceMatrix& x, std::optional<double> sigma = std::nullopt,
                          bool on_sqrt = false);

/// D^-1/2 (D - W) D^-1/2 with D the degree matrix of W.
SymMatrix normalized_laplacian(const AdjacencyMatrix& w);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

struct KMeansResult {
  ClusterAssignment assignment;
  double wcss = 0.0;
  int iterations = 0;
  // WCSS after every Lloyd iteration of the winning restart.
  std::vector<double> wcss_trace;
};

/// Lloyd's algorithm with k-means++ seeding. Restart r is seeded with
/// seed_base + r where seed_base is drawn once from `rng`; the lowest WCSS
/// wins, ties going to the lowest restart index.
KMeansResult kmeans(std::span<const Vector> points, int k, Rng& rng, const KMeansOptions& opts = {});

/// Normalized spectral clustering: bottom-k eigenvectors of L_sym, rows
/// scaled to unit norm (zero rows stay zero), then kmeans on the rows.
ClusterAssignment spectral_cluster(const AdjacencyMatrix& w, int k, Rng& rng, const KMeansOptions& opts = {});

/// 1/2 * sum over clusters of cut(A, complement) / vol(A).
double ncut(const AdjacencyMatrix& w, const ClusterAssignment& a);

}  // namespace distclust
