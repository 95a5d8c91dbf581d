#pragma once

#include "harness/config.hpp"

#include <string>
#include <vector>

namespace slicemean::harness {

struct SweepRow {
  std::size_t n = 0;
  double quad_value = 0.0;
  double quad_err = 0.0;
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  double limit_value = 0.0;
  double abs_error = 0.0;  // |quad_value - limit_value|
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;        // ascending N
  std::vector<std::string> notes;    // skipped N values and why
  double limit_value = 0.0;
  std::string limit_source;          // "closed_form", "gauss_hermite" or "monte_carlo"
};

/// Limit of the slice means for the configured function: the closed form
/// when one exists, otherwise the configured (or automatic) numerical route.
IntegralResult evaluate_limit(const ValidatedProblem& vp, const TestFunction& phi, const Config& cfg,
                              unsigned threads, std::string* source);

/// Convergence sweep over cfg.schedule. Refuses functions outside the
/// limit theorem's L^p (p > 1) hypothesis with NotAdmissible.
SweepResult run_sweep(const Config& cfg, unsigned threads);

// Per-row Monte Carlo seed; depends only on (seed, N).
std::uint64_t row_seed(std::uint64_t seed, std::size_t n);

nlohmann::json validate_summary(const Config& cfg);
nlohmann::json slice_summary(const Config& cfg, std::size_t n, unsigned threads);
nlohmann::json limit_summary(const Config& cfg, unsigned threads);

}  // namespace slicemean::harness
