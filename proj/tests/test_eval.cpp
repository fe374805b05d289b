#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "distclust/errors.hpp"
#include "distclust/eval.hpp"
#include "distclust/rng.hpp"
#include "oracles.hpp"

using namespace distclust;

namespace {

ClusterAssignment labels(std::vector<int> xs) {
  const int k = xs.empty() ? 1 : *std::max_element(xs.begin(), xs.end()) + 1;
  return {std::move(xs), k};
}

ClusterAssignment random_partition(int n, int k, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  ClusterAssignment a{std::vector<int>(static_cast<std::size_t>(n)), k};
  for (int& l : a.labels) l = pick(rng);
  return a;
}

}  // namespace

TEST_CASE("contingency") {
  CHECK(contingency(labels({0, 0, 1, 1}), labels({0, 0, 1, 1})).counts == std::vector<std::vector<long>>{{2, 0}, {0, 2}});
  CHECK(contingency(labels({0, 0, 1, 1}), labels({0, 1, 0, 1})).counts == std::vector<std::vector<long>>{{1, 1}, {1, 1}});
  const Contingency c = contingency(labels({0, 1, 2}), labels({0, 0, 1}));
  CHECK(c.counts == std::vector<std::vector<long>>{{1, 0}, {1, 0}, {0, 1}});
  CHECK(c.n == 3);
  CHECK_THROWS_WITH_AS(contingency(labels({0, 1}), labels({0})), doctest::Contains("DimensionMismatch"), Error);

  Rng rng(1);
  const ClusterAssignment a = random_partition(40, 4, rng), b = random_partition(40, 3, rng);
  const Contingency r = contingency(a, b);
  long total = 0;
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    long row = 0;
    for (long v : r.counts[i]) row += v;
    CHECK(row == std::count(a.labels.begin(), a.labels.end(), static_cast<int>(i)));
    total += row;
  }
  CHECK(total == 40);
}

TEST_CASE("entropy") {
  CHECK(entropy(labels({0, 0, 0})) == 0.0);
  CHECK(entropy(labels({0, 0, 1, 1})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(entropy(labels({0, 1, 1, 1})) == doctest::Approx(0.562335).epsilon(1e-6));
  // Empty clusters contribute nothing.
  CHECK(entropy({{0, 0, 2, 2}, 4}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("nmi examples") {
  CHECK(nmi(labels({0, 0, 1, 1, 2}), labels({0, 0, 1, 1, 2})) == 1.0);
  CHECK(nmi(labels({0, 0, 1, 1, 2}), labels({2, 2, 0, 0, 1})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nmi(labels({0, 0, 1, 1}), labels({0, 1, 0, 1})) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nmi(labels({0, 0, 0}), labels({0, 0, 0})) == 1.0);
  CHECK(nmi(labels({0, 0, 0, 0}), labels({0, 0, 1, 1})) == 0.0);
  CHECK_THROWS_AS(nmi(labels({0, 1}), labels({0, 1, 1})), Error);
}

TEST_CASE("nmi bounds and symmetry on random partitions") {
  Rng rng(2);
  std::uniform_int_distribution<int> size(1, 50), clusters(1, 8);
  for (int t = 0; t < 2000; ++t) {
    const int n = size(rng);
    const ClusterAssignment a = random_partition(n, clusters(rng), rng);
    const ClusterAssignment b = random_partition(n, clusters(rng), rng);
    const double v = nmi(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v == nmi(b, a));
    CHECK(mutual_information(a, b) <= std::min(entropy(a), entropy(b)) + 1e-12);
  }
}

TEST_CASE("nmi matches the brute-force table sum") {
  Rng rng(3);
  std::uniform_int_distribution<int> size(1, 12), clusters(1, 3);
  for (int t = 0; t < 1000; ++t) {
    const int n = size(rng);
    const ClusterAssignment a = random_partition(n, clusters(rng), rng);
    const ClusterAssignment b = random_partition(n, clusters(rng), rng);
    const oracle::NmiParts ref = oracle::nmi_bruteforce(a.labels, b.labels);
    CHECK(std::abs(entropy(a) - ref.ha) <= 1e-12);
    CHECK(std::abs(mutual_information(a, b) - ref.mi) <= 1e-12);
    CHECK(std::abs(nmi(a, b) - std::clamp(ref.nmi, 0.0, 1.0)) <= 1e-12);
  }
}
