#pragma once

#include <stdexcept>
#include <string>

namespace bclab {

// Parameter outside the mathematical domain of the operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Structurally invalid argument (inconsistent sizes, bad enum, ...).
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Request exceeds the desk-scale resource caps (enumeration depth, cover level).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation needs data the observable does not carry (e.g. derivatives of a C0 function).
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values produced where finite ones are required.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Request infeasible beyond a known bound; carries the largest feasible value.
struct range_error : std::out_of_range {
  range_error(const std::string& msg, int largest_ok)
      : std::out_of_range(msg), largest_feasible(largest_ok) {}
  int largest_feasible;
};

inline constexpr double kLambdaMin = 1e-6;
inline constexpr double kLambdaMax = 1.0 - 1e-6;

// Every operation restricts lambda to [1e-6, 1-1e-6]; endpoints are degenerate.
inline void require_lambda(double lambda) {
  if (!(lambda >= kLambdaMin && lambda <= kLambdaMax))
    throw domain_error("lambda must lie in [1e-6, 1-1e-6], got " + std::to_string(lambda));
}

}  // namespace bclab
