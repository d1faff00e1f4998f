#pragma once

#include <stdexcept>
#include <string>

namespace uvlag {

/// Thrown when an exact first-order oracle cannot be evaluated at a point
/// (e.g. indicator boundary without a normal-cone description).
struct OracleUnavailable : std::runtime_error {
  explicit OracleUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation is called outside its stated preconditions.
struct PreconditionViolation : std::invalid_argument {
  explicit PreconditionViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a shrunk relative interior comes out empty. Carries the
/// largest radius for which the set stays nonempty.
struct EpsilonTooLarge : std::runtime_error {
  double max_feasible_eps;
  EpsilonTooLarge(const std::string& what, double max_eps)
      : std::runtime_error(what), max_feasible_eps(max_eps) {}
};

/// Thrown when a cross-checked identity fails beyond tolerance.
struct InvariantViolation : std::runtime_error {
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the inner minimizer set is not a single cluster but the
/// caller requires a selection.
struct MultiClusterMinimizer : std::runtime_error {
  explicit MultiClusterMinimizer(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uvlag
