#pragma once

#include <vector>

#include "distclust/assignment.hpp"

namespace distclust {

struct Contingency {
  std::vector<std::vector<long>> counts;  // [label in a][label in b]
  long n = 0;
};

Contingency contingency(const ClusterAssignment& a, const ClusterAssignment& b);

// Natural-log entropy of the label frequencies; 0 ln 0 is taken as 0.
double entropy(const ClusterAssignment& a);
double mutual_information(const ClusterAssignment& a, const ClusterAssignment& b);

/// 2 I(a, b) / (H(a) + H(b)); 1 when both partitions are trivial.
double nmi(const ClusterAssignment& a, const ClusterAssignment& b);

}  // namespace distclust
