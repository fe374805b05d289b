#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "distclust/errors.hpp"
#include "distclust/eval.hpp"
#include "distclust/spectral.hpp"
#include "oracles.hpp"

using namespace distclust;

namespace {

DistanceMatrix euclidean_points(const Matrix& pts) {
  const Eigen::Index n = pts.rows();
  DistanceMatrix x{Metric::Euclidean, Matrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) x.entries(i, j) = (pts.row(i) - pts.row(j)).norm();
  }
  return x;
}

AdjacencyMatrix random_kernel(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix pts(n, 2);
  for (int i = 0; i < n; ++i) pts.row(i) << u(rng), u(rng);
  return kernelize(euclidean_points(pts));
}

AdjacencyMatrix two_blocks(int block) {
  const int n = 2 * block;
  AdjacencyMatrix w{Matrix::Constant(n, n, 1e-12), 1.0};
  w.entries.topLeftCorner(block, block).setOnes();
  w.entries.bottomRightCorner(block, block).setOnes();
  return w;
}

std::vector<Vector> scalars(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back(Vector::Constant(1, x));
  return out;
}

}  // namespace

TEST_CASE("kernelize") {
  SUBCASE("zero matrix gives all ones") {
    const AdjacencyMatrix w = kernelize({Metric::WassersteinSq, Matrix::Zero(3, 3)}, 1.0);
    CHECK(w.entries == Matrix::Ones(3, 3));
  }
  SUBCASE("unit exponent") {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = std::sqrt(2.0) * 0.7;
    CHECK(kernelize({Metric::Bhattacharyya, x}, 0.7).entries(0, 1) == doctest::Approx(std::exp(-1.0)));
  }
  SUBCASE("median default bandwidth") {
    Matrix x(3, 3);
    x << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    const AdjacencyMatrix w = kernelize({Metric::WassersteinSq, x});
    CHECK(w.sigma == 2.0);
    CHECK(w.entries(0, 1) == doctest::Approx(std::exp(-1.0 / 8)));
    CHECK(w.entries(0, 2) == doctest::Approx(std::exp(-4.0 / 8)));
    CHECK(w.entries(1, 2) == doctest::Approx(std::exp(-9.0 / 8)));
    for (int i = 0; i < 3; ++i) CHECK(w.entries(i, i) == 1.0);
    CHECK(w.entries == w.entries.transpose());
  }
  SUBCASE("kernel on square roots") {
    Matrix x(2, 2);
    x << 0, 4, 4, 0;
    const AdjacencyMatrix w = kernelize({Metric::WassersteinSq, x}, 1.0, true);
    CHECK(w.entries(0, 1) == doctest::Approx(std::exp(-2.0)));
  }
  SUBCASE("monotone in distance") {
    Rng rng(8);
    const AdjacencyMatrix w = random_kernel(8, rng);
    // Rebuild the distances to compare orderings.
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 8; ++i) {
      for (int j = i + 1; j < 8; ++j) pairs.emplace_back(-std::log(w.entries(i, j)), w.entries(i, j));
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      if (pairs[i].first > pairs[i - 1].first) CHECK(pairs[i].second < pairs[i - 1].second);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(kernelize({Metric::Kl, Matrix::Zero(2, 2)}), doctest::Contains("MetricNotSymmetric"), Error);
    CHECK_THROWS_WITH_AS(kernelize({Metric::WassersteinSq, Matrix::Zero(2, 2)}, 0.0),
                         doctest::Contains("InvalidBandwidth"), Error);
    CHECK_THROWS_AS(kernelize({Metric::WassersteinSq, Matrix::Zero(2, 2)}, -1.0), Error);
  }
}

TEST_CASE("normalized_laplacian") {
  CHECK(normalized_laplacian({Matrix::Identity(3, 3), 1.0}).matrix().cwiseAbs().maxCoeff() == 0.0);
  Matrix half(2, 2);
  half << 0.5, -0.5, -0.5, 0.5;
  CHECK(relative_frobenius(normalized_laplacian({Matrix::Ones(2, 2), 1.0}).matrix(), half) < 1e-15);

  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const AdjacencyMatrix w = random_kernel(5 + t % 20, rng);
    const EigenDecomposition e = sym_eigen(normalized_laplacian(w));
    CHECK(e.values.minCoeff() >= -1e-8);
    CHECK(e.values.maxCoeff() <= 2.0 + 1e-8);
    CHECK(std::abs(e.values(0)) < 1e-8);
    const Vector root_degree = w.entries.rowwise().sum().cwiseSqrt().normalized();
    CHECK(std::abs(std::abs(e.vectors.col(0).dot(root_degree)) - 1.0) < 1e-8);
  }
}

TEST_CASE("kmeans") {
  SUBCASE("well separated") {
    Rng rng(1);
    const auto pts = scalars({0, 0.1, 10, 10.1});
    const KMeansResult r = kmeans(pts, 2, rng);
    CHECK(r.assignment.labels[0] == r.assignment.labels[1]);
    CHECK(r.assignment.labels[2] == r.assignment.labels[3]);
    CHECK(r.assignment.labels[0] != r.assignment.labels[2]);
  }
  SUBCASE("k = n gives singletons") {
    Rng rng(2);
    const auto pts = scalars({3, -1, 7, 2.5, 9});
    const KMeansResult r = kmeans(pts, 5, rng);
    CHECK(r.wcss == 0.0);
    std::vector<int> labels = r.assignment.labels;
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<int>{0, 1, 2, 3, 4});
  }
  SUBCASE("matches the exhaustive 1-D split") {
    Rng rng(3);
    const std::vector<double> xs{0, 1, 2, 3, 4, 5, 100, 101, 102, 103, 104, 105};
    std::vector<Vector> pts;
    for (double x : xs) pts.push_back(Vector::Constant(1, x));
    const KMeansResult r = kmeans(pts, 2, rng);
    CHECK(r.wcss == doctest::Approx(oracle::best_two_split_wcss(xs)).epsilon(1e-12));
    for (int i = 1; i < 6; ++i) CHECK(r.assignment.labels[i] == r.assignment.labels[0]);
  }
  SUBCASE("WCSS never increases across Lloyd iterations") {
    Rng data(4);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
      std::vector<Vector> pts;
      for (int i = 0; i < 60; ++i) pts.push_back(Vector::NullaryExpr(3, [&] { return normal(data); }));
      Rng rng(100 + t);
      const KMeansResult r = kmeans(pts, 4, rng, {.restarts = 1, .max_iter = 300});
      for (std::size_t i = 1; i < r.wcss_trace.size(); ++i) CHECK(r.wcss_trace[i] <= r.wcss_trace[i - 1] + 1e-12);
    }
  }
  SUBCASE("deterministic for a given seed") {
    const auto pts = scalars({0, 1, 2, 5, 6, 7, 20, 21});
    Rng a(9), b(9);
    CHECK(kmeans(pts, 3, a).assignment == kmeans(pts, 3, b).assignment);
  }
  SUBCASE("errors") {
    Rng rng(1);
    CHECK_THROWS_AS(kmeans(scalars({1, 2}), 3, rng), Error);
  }
}

TEST_CASE("spectral_cluster") {
  SUBCASE("disconnected blocks are recovered exactly") {
    const AdjacencyMatrix w = two_blocks(5);
    ClusterAssignment truth{{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      CHECK(nmi(spectral_cluster(w, 2, rng), truth) == 1.0);
    }
  }
  SUBCASE("n = k") {
    Rng rng(3);
    Rng data(4);
    const AdjacencyMatrix w = random_kernel(4, data);
    std::vector<int> labels = spectral_cluster(w, 4, rng).labels;
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("three separated 1-D Gaussians") {
    Rng rng(12);
    std::vector<GaussianModel> models;
    ClusterAssignment truth{{}, 3};
    for (int i = 0; i < 30; ++i) {
      const GaussianModel gen{Vector::Constant(1, 10.0 * (i % 3)), SymMatrix::identity(1)};
      models.push_back(estimate_gaussian(sample(gen, 30, rng)));
      truth.labels.push_back(i % 3);
    }
    const AdjacencyMatrix w = kernelize(distance_matrix(models, Metric::WassersteinSq));
    CHECK(nmi(spectral_cluster(w, 3, rng), truth) == 1.0);
  }
  SUBCASE("node relabeling permutes the partition") {
    Rng data(21);
    std::vector<GaussianModel> models;
    for (int i = 0; i < 24; ++i) {
      const GaussianModel gen{Vector::Constant(2, 4.0 * (i % 3)), SymMatrix::identity(2)};
      models.push_back(estimate_gaussian(sample(gen, 20, data)));
    }
    std::vector<int> perm(models.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), data);
    std::vector<GaussianModel> permuted;
    for (int p : perm) permuted.push_back(models[p]);

    Rng r1(5), r2(5);
    const ClusterAssignment base = spectral_cluster(kernelize(distance_matrix(models, Metric::Bhattacharyya)), 3, r1);
    const ClusterAssignment moved = spectral_cluster(kernelize(distance_matrix(permuted, Metric::Bhattacharyya)), 3, r2);
    ClusterAssignment back{std::vector<int>(models.size()), 3};
    for (std::size_t i = 0; i < perm.size(); ++i) back.labels[perm[i]] = moved.labels[i];
    CHECK(nmi(base, back) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ncut") {
  const AdjacencyMatrix blocks = two_blocks(4);
  CHECK(ncut(blocks, {{0, 0, 0, 0, 1, 1, 1, 1}, 2}) < 1e-11);
  CHECK(ncut({Matrix::Ones(4, 4), 1.0}, {{0, 0, 1, 1}, 2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ncut(blocks, {{0, 1}, 2}), Error);

  SUBCASE("spectral cut beats random balanced cuts") {
    Rng rng(1);
    int wins = 0;
    for (int t = 0; t < 100; ++t) {
      const int n = 6 + t % 5;
      const AdjacencyMatrix w = random_kernel(n, rng);
      const double spectral = ncut(w, spectral_cluster(w, 2, rng));
      double best_random = INFINITY;
      for (int r = 0; r < 50; ++r) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        ClusterAssignment cut{std::vector<int>(static_cast<std::size_t>(n), 0), 2};
        for (int i = 0; i < n / 2; ++i) cut.labels[idx[i]] = 1;
        best_random = std::min(best_random, ncut(w, cut));
      }
      if (spectral <= best_random + 1e-12) ++wins;
    }
    CHECK(wins >= 90);
  }
}
