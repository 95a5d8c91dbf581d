#pragma once

// Verification suite: every invariant of the numerical modules run with
// fixed seeds, producing a machine-readable report. A check passes when its
// worst observed violation is within its tolerance times verify.tol_scale
// (count-based statistical checks are not scaled).

#include "harness/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slicemean::harness {

struct CheckRecord {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::uint64_t trials = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckRecord> checks;

  bool all_passed() const;
};

// Names accepted in verify.checks, in execution order.
const std::vector<std::string>& available_checks();

/// Throws Config for an unknown check name.
VerifyReport run_verify(const Config& cfg, unsigned threads);

CheckRecord run_check(const std::string& name, const Config& cfg, unsigned threads);

std::string format_report_csv(const VerifyReport& report);

// Full | |det L0,N| - |det L0| | sequence below N = 50 behind the
// determinant_limit check, as CSV (problem, N, abs_det_error).
std::string determinant_sequence_csv(const Config& cfg);
nlohmann::json report_json(const VerifyReport& report);

}  // namespace slicemean::harness
