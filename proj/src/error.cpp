#include "superpose/error.hpp"

namespace superpose {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::zero_edge_mass: return "ZeroEdgeMass";
    case ErrorKind::zero_p10: return "ZeroP10";
    case ErrorKind::zero_mean: return "ZeroMean";
    case ErrorKind::empty_graph: return "EmptyGraph";
    case ErrorKind::degenerate_marginal: return "DegenerateMarginal";
    case ErrorKind::missing_records: return "MissingRecords";
    case ErrorKind::invalid_lambda: return "InvalidLambda";
    case ErrorKind::zero_denominator: return "ZeroDenominator";
    case ErrorKind::hypothesis_violation: return "HypothesisViolation";
    case ErrorKind::insufficient_support: return "InsufficientSupport";
    case ErrorKind::io: return "IOError";
  }
  return "Unknown";
}

bool is_degenerate(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::zero_edge_mass:
    case ErrorKind::zero_p10:
    case ErrorKind::zero_mean:
    case ErrorKind::empty_graph:
    case ErrorKind::degenerate_marginal:
    case ErrorKind::missing_records:
    case ErrorKind::invalid_lambda:
    case ErrorKind::zero_denominator:
    case ErrorKind::insufficient_support:
      return true;
    default:
      return false;
  }
}

}  // namespace superpose
