#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace uvlag {

using json = nlohmann::json;

enum class CertKind {
  ProxRegFunction,
  ProxRegSet,
  ProductSet,
  Perturbed,
  Monotonicity,
  WLipschitz,
  AssumptionA4,
  AssumptionA5,
  AssumptionA6,
  AssumptionA7,
  BallInclusion,
  QuadraticLowerBound,
  InnerSemicontinuity,
};

std::string to_string(CertKind kind);

/// Outcome of a sampled inequality / property check. A pass means "no
/// violation found at N samples", never a proof; a fail always carries a
/// witness.
struct Certificate {
  CertKind kind;
  json params = json::object();
  double max_violation = 0.0;
  bool pass = false;
  std::optional<json> witness;
  long samples_used = 0;
  long samples_skipped = 0;
  std::string note;

  json to_json() const;
};

/// Standard finish: sets pass from the violation/tolerance, stamps the note.
Certificate finalize_certificate(Certificate cert, double tolerance);

}  // namespace uvlag
