#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uvlag/certificate.hpp"

namespace uvlag {

/// Batch-run configuration. Overrides apply where meaningful: eps to the
/// U-Lagrangian checks, eps_bar and rho to the prox-regularity certificates.
struct RunConfig {
  std::vector<std::string> problems;
  bool all_problems = false;
  std::string check = "all";
  std::optional<double> eps;
  std::optional<double> eps_bar;
  std::optional<double> rho;
  int grid_n = 41;
  long samples = 10000;
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
};

/// Static validation; returns human-readable problems (empty = valid).
std::vector<std::string> validate_config(const RunConfig& config);

const std::vector<std::string>& known_check_ids();

struct CheckRecord {
  std::string id;       // "<check>/<subject>" or "<check>"
  std::string anchor;   // statement label or "plumbing"
  json params = json::object();
  bool pass = false;
  bool expected_pass = true;
  double max_violation = 0.0;
  json witness = json(nullptr);
  double wall_ms = 0.0;
};

struct Report {
  json doc;
  /// 0: every record matches its expectation; 1: at least one does not.
  int exit_code = 0;
};

/// Execute the selected checks over the selected problems; records are
/// ordered by id and the document is reproducible byte-for-byte for a fixed
/// config and seed (wall-time fields aside).
Report run(const RunConfig& config);

/// Structural conformance with schemas/uvlag-report-1.schema.json.
bool report_conforms(const json& report, std::string* why = nullptr);

/// Copy with every wall_ms field zeroed (for byte comparisons).
json strip_wall_times(json report);

}  // namespace uvlag
