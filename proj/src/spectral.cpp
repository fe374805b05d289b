#include "distclust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "distclust/errors.hpp"

namespace distclust {

double median_bandwidth(const Matrix& x) {
  std::vector<double> positive;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.cols(); ++j) {
      if (x(i, j) > 0.0) positive.push_back(x(i, j));
    }
  }
  if (positive.empty()) return 1.0;
  std::sort(positive.begin(), positive.end());
  const std::size_t mid = positive.size() / 2;
  return positive.size() % 2 ? positive[mid] : 0.5 * (positive[mid - 1] + positive[mid]);
}

AdjacencyMatrix kernelize(const DistanceMatrix& x, std::optional<double> sigma, bool on_sqrt) {
  if (!is_symmetric(x.metric)) {
    throw Error(Errc::MetricNotSymmetric, "cannot kernelize an asymmetric '" + std::string(to_string(x.metric)) + "' matrix");
  }
  const Eigen::Index n = x.size();
  if (x.entries.cols() != n || n < 1) throw Error(Errc::InvalidMatrix, "distance matrix must be square");
  if ((x.entries - x.entries.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(Errc::MetricNotSymmetric, "distance matrix entries are not symmetric");
  }

  Matrix base = x.entries;
  base.diagonal().setZero();
  if (on_sqrt) base = base.cwiseMax(0.0).cwiseSqrt();

  const double bandwidth = sigma ? *sigma : median_bandwidth(base);
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(Errc::InvalidBandwidth, "sigma must be positive and finite");
  }

  AdjacencyMatrix w{Matrix(n, n), bandwidth};
  const double denom = 2.0 * bandwidth * bandwidth;
  for (Eigen::Index i = 0; i < n; ++i) {
    w.entries(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-base(i, j) * base(i, j) / denom);
      w.entries(i, j) = v;
      w.entries(j, i) = v;
    }
  }
  return w;
}

SymMatrix normalized_laplacian(const AdjacencyMatrix& w) {
  const Vector degree = w.entries.rowwise().sum();
  if ((degree.array() <= 0.0).any()) throw Error(Errc::InvalidMatrix, "graph has a node with zero degree");
  const Vector inv_root = degree.cwiseSqrt().cwiseInverse();
  Matrix l = -(inv_root.asDiagonal() * w.entries * inv_root.asDiagonal());
  l.diagonal().array() += 1.0;
  return SymMatrix(l);
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Lloyd {
  const RowMatrix& x;
  int k;

  // k-means++: first center uniform, each next one drawn with probability
  // proportional to the squared distance to the nearest chosen center.
  RowMatrix seed(Rng& rng) const {
    const Eigen::Index n = x.rows();
    RowMatrix centers(k, x.cols());
    std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);

    auto pick = [&](Eigen::Index idx, int c) {
      chosen[static_cast<std::size_t>(idx)] = true;
      centers.row(c) = x.row(idx);
      for (Eigen::Index i = 0; i < n; ++i) {
        nearest[i] = std::min(nearest[i], (x.row(i) - centers.row(c)).squaredNorm());
      }
    };

    pick(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng), 0);
    for (int c = 1; c < k; ++c) {
      const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
      Eigen::Index idx = -1;
      if (total > 0.0) {
        double r = std::uniform_real_distribution<double>(0.0, total)(rng);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (nearest[i] <= 0.0) continue;
          idx = i;
          r -= nearest[i];
          if (r < 0.0) break;
        }
      } else {
        std::vector<Eigen::Index> open;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!chosen[i]) open.push_back(i);
        }
        idx = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      }
      pick(idx, c);
    }
    return centers;
  }

  double assign(const RowMatrix& centers, std::vector<int>& labels, std::vector<double>& dist) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[i] = best;
      dist[i] = best_d;
      total += best_d;
    }
    return total;
  }

  // Moves the point farthest from its centroid into each empty cluster.
  void repair_empty(std::vector<int>& labels, std::vector<double>& dist) const {
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int label : labels) ++counts[label];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (counts[labels[i]] < 2) continue;
        if (far < 0 || dist[i] > dist[far]) far = i;
      }
      if (far < 0) break;
      --counts[labels[far]];
      labels[far] = c;
      dist[far] = 0.0;
      ++counts[c];
    }
  }

  RowMatrix centroids(const std::vector<int>& labels) const {
    RowMatrix centers = RowMatrix::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      centers.row(labels[i]) += x.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);
    }
    return centers;
  }

  double wcss(const RowMatrix& centers, const std::vector<int>& labels) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) total += (x.row(i) - centers.row(labels[i])).squaredNorm();
    return total;
  }

  KMeansResult run(Rng& rng, int max_iter) const {
    const auto n = static_cast<std::size_t>(x.rows());
    RowMatrix centers = seed(rng);
    std::vector<int> labels(n, -1);
    std::vector<int> previous;
    std::vector<double> dist(n, 0.0);
    KMeansResult out;
    for (int iter = 0; iter < max_iter; ++iter) {
      previous = labels;
      assign(centers, labels, dist);
      repair_empty(labels, dist);
      centers = centroids(labels);
      out.wcss_trace.push_back(wcss(centers, labels));
      out.iterations = iter + 1;
      if (labels == previous) break;
    }
    out.wcss = out.wcss_trace.back();
    out.assignment = ClusterAssignment{std::move(labels), k};
    return out;
  }
};

}  // namespace

KMeansResult kmeans(std::span<const Vector> points, int k, Rng& rng, const KMeansOptions& opts) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (k < 1 || n < k) throw Error(Errc::InvalidConfig, "kmeans needs 1 <= k <= number of points");
  if (opts.restarts < 1 || opts.max_iter < 1) throw Error(Errc::InvalidConfig, "kmeans needs restarts, max_iter >= 1");
  const Eigen::Index dim = points.front().size();
  RowMatrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (points[i].size() != dim) throw Error(Errc::DimensionMismatch, "kmeans points have mixed dimensions");
    x.row(i) = points[i].transpose();
  }

  const Lloyd lloyd{x, k};
  const std::uint64_t seed_base = rng();
  KMeansResult best;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng local(seed_base + static_cast<std::uint64_t>(r));
    KMeansResult candidate = lloyd.run(local, opts.max_iter);
    if (r == 0 || candidate.wcss < best.wcss) best = std::move(candidate);
  }
  return best;
}

ClusterAssignment spectral_cluster(const AdjacencyMatrix& w, int k, Rng& rng, const KMeansOptions& opts) {
  const Eigen::Index n = w.size();
  if (k < 1 || n < k) throw Error(Errc::InvalidConfig, "spectral_cluster needs 1 <= k <= n");
  const EigenDecomposition eig = sym_eigen(normalized_laplacian(w));

  std::vector<Vector> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector row = eig.vectors.block(i, 0, 1, k).transpose();
    const double norm = row.norm();
    if (norm > 0.0) row /= norm;
    rows[i] = std::move(row);
  }
  return kmeans(rows, k, rng, opts).assignment;
}

double ncut(const AdjacencyMatrix& w, const ClusterAssignment& a) {
  if (static_cast<Eigen::Index>(a.size()) != w.size()) {
    throw Error(Errc::DimensionMismatch, "assignment length does not match graph size");
  }
  validate(a);
  std::vector<double> cut(static_cast<std::size_t>(a.k), 0.0);
  std::vector<double> vol(static_cast<std::size_t>(a.k), 0.0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      vol[a.labels[i]] += w.entries(i, j);
      if (a.labels[i] != a.labels[j]) cut[a.labels[i]] += w.entries(i, j);
    }
  }
  double total = 0.0;
  for (int c = 0; c < a.k; ++c) {
    if (vol[c] > 0.0) total += cut[c] / vol[c];
  }
  return 0.5 * total;
}

}  // namespace distclust
