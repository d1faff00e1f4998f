#include "uvlag/certificate.hpp"

namespace uvlag {

std::string to_string(CertKind kind) {
  switch (kind) {
    case CertKind::ProxRegFunction: return "ProxRegFunction";
    case CertKind::ProxRegSet: return "ProxRegSet";
    case CertKind::ProductSet: return "ProductSet";
    case CertKind::Perturbed: return "Perturbed";
    case CertKind::Monotonicity: return "Monotonicity";
    case CertKind::WLipschitz: return "WLipschitz";
    case CertKind::AssumptionA4: return "AssumptionA4";
    case CertKind::AssumptionA5: return "AssumptionA5";
    case CertKind::AssumptionA6: return "AssumptionA6";
    case CertKind::AssumptionA7: return "AssumptionA7";
    case CertKind::BallInclusion: return "BallInclusion";
    case CertKind::QuadraticLowerBound: return "QuadraticLowerBound";
    case CertKind::InnerSemicontinuity: return "InnerSemicontinuity";
  }
  return "Unknown";
}

json Certificate::to_json() const {
  json j{{"kind", to_string(kind)},
         {"params", params},
         {"max_violation", max_violation},
         {"verdict", pass ? "pass" : "fail"},
         {"samples_used", samples_used},
         {"samples_skipped", samples_skipped},
         {"note", note}};
  j["witness"] = witness.has_value() ? *witness : json(nullptr);
  return j;
}

Certificate finalize_certificate(Certificate cert, double tolerance) {
  cert.pass = cert.max_violation <= tolerance;
  if (cert.pass) {
    cert.note = "no violation found at " + std::to_string(cert.samples_used) +
                " samples";
    cert.witness.reset();
  } else if (!cert.witness.has_value()) {
    cert.witness = json{{"max_violation", cert.max_violation}};
  }
  return cert;
}

}  // namespace uvlag
