#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace superpose {

enum class ErrorKind {
  invalid_argument,
  config,
  zero_edge_mass,
  zero_p10,
  zero_mean,
  empty_graph,
  degenerate_marginal,
  missing_records,
  invalid_lambda,
  zero_denominator,
  hypothesis_violation,
  insufficient_support,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// True for the errors that mean "this statistic is undefined for this input".
bool is_degenerate(ErrorKind kind);

}  // namespace superpose
