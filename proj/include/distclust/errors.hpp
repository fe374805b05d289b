#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distclust {

enum class Errc {
  InvalidMatrix,
  NotPositiveSemidefinite,
  SingularMatrix,
  NumericalError,
  InsufficientSamples,
  DimensionMismatch,
  MetricNotSymmetric,
  InvalidBandwidth,
  EmptyCluster,
  InvalidConfig,
  SchemaError,
  RowError,
  IoError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the benchmark harness) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace distclust
