#include "distclust/errors.hpp"

namespace distclust {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidMatrix: return "InvalidMatrix";
    case Errc::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::NumericalError: return "NumericalError";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MetricNotSymmetric: return "MetricNotSymmetric";
    case Errc::InvalidBandwidth: return "InvalidBandwidth";
    case Errc::EmptyCluster: return "EmptyCluster";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SchemaError: return "SchemaError";
    case Errc::RowError: return "RowError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace distclust
