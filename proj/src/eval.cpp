#include "distclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "distclust/errors.hpp"

namespace distclust {

namespace {

int label_span(const ClusterAssignment& a) {
  int span = a.k;
  for (int label : a.labels) {
    if (label < 0) throw Error(Errc::InvalidConfig, "negative cluster label");
    span = std::max(span, label + 1);
  }
  return span;
}

double entropy_of(const std::vector<long>& sizes, long n) {
  double h = 0.0;
  for (long s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

std::vector<long> row_sums(const Contingency& t) {
  std::vector<long> out;
  for (const auto& row : t.counts) {
    long s = 0;
    for (long c : row) s += c;
    out.push_back(s);
  }
  return out;
}

std::vector<long> col_sums(const Contingency& t) {
  std::vector<long> out(t.counts.empty() ? 0 : t.counts.front().size(), 0);
  for (const auto& row : t.counts) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
  return out;
}

double mutual_information(const Contingency& t) {
  const std::vector<long> rows = row_sums(t);
  const std::vector<long> cols = col_sums(t);
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const long c = t.counts[i][j];
      if (c == 0) continue;
      const double joint = static_cast<double>(c) / n;
      mi += joint * std::log(static_cast<double>(c) * n / (static_cast<double>(rows[i]) * static_cast<double>(cols[j])));
    }
  }
  return std::max(0.0, mi);
}

}  // namespace

Contingency contingency(const ClusterAssignment& a, const ClusterAssignment& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch, "partitions have " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()) + " objects");
  }
  Contingency t;
  t.n = static_cast<long>(a.size());
  t.counts.assign(static_cast<std::size_t>(label_span(a)), std::vector<long>(static_cast<std::size_t>(label_span(b)), 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++t.counts[a.labels[i]][b.labels[i]];
  return t;
}

double entropy(const ClusterAssignment& a) {
  if (a.labels.empty()) return 0.0;
  std::vector<long> sizes(static_cast<std::size_t>(label_span(a)), 0);
  for (int label : a.labels) ++sizes[label];
  return entropy_of(sizes, static_cast<long>(a.size()));
}

// Summation order depends on which partition indexes rows; fixing the order
// makes nmi(a, b) and nmi(b, a) bit-identical.
static bool swap_operands(const ClusterAssignment& a, const ClusterAssignment& b) {
  return std::tie(b.labels, b.k) < std::tie(a.labels, a.k);
}

double mutual_information(const ClusterAssignment& a, const ClusterAssignment& b) {
  if (swap_operands(a, b)) return mutual_information(b, a);
  const Contingency t = contingency(a, b);
  return t.n == 0 ? 0.0 : mutual_information(t);
}

double nmi(const ClusterAssignment& a, const ClusterAssignment& b) {
  if (swap_operands(a, b)) return nmi(b, a);
  const Contingency t = contingency(a, b);
  if (t.n == 0) return 1.0;
  const double h = entropy_of(row_sums(t), t.n) + entropy_of(col_sums(t), t.n);
  if (h <= 0.0) return 1.0;
  return std::clamp(2.0 * mutual_information(t) / h, 0.0, 1.0);
}

}  // namespace distclust
