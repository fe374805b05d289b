#pragma once

#include <vector>

#include <json.hpp>

namespace distclust {

/// Object index -> cluster label in [0, k).
struct ClusterAssignment {
  std::vector<int> labels;
  int k = 0;

  std::size_t size() const { return labels.size(); }
  bool operator==(const ClusterAssignment&) const = default;
};

/// Throws InvalidConfig if k < 1 or any label is outside [0, k).
void validate(const ClusterAssignment& a);

/// {"k": int, "labels": [int...]}
nlohmann::json to_json(const ClusterAssignment& a);
ClusterAssignment assignment_from_json(const nlohmann::json& j);

}  // namespace distclust
