#include "distclust/assignment.hpp"

#include "distclust/errors.hpp"

namespace distclust {

void validate(const ClusterAssignment& a) {
  if (a.k < 1) throw Error(Errc::InvalidConfig, "assignment needs k >= 1");
  for (int label : a.labels) {
    if (label < 0 || label >= a.k) {
      throw Error(Errc::InvalidConfig, "label " + std::to_string(label) + " outside [0, " + std::to_string(a.k) + ")");
    }
  }
}

nlohmann::json to_json(const ClusterAssignment& a) { return {{"k", a.k}, {"labels", a.labels}}; }

ClusterAssignment assignment_from_json(const nlohmann::json& j) {
  ClusterAssignment a;
  try {
    a.labels = j.at("labels").get<std::vector<int>>();
    if (j.contains("k")) {
      a.k = j.at("k").get<int>();
    } else {
      for (int label : a.labels) a.k = std::max(a.k, label + 1);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("labels JSON: ") + e.what());
  }
  validate(a);
  return a;
}

}  // namespace distclust
