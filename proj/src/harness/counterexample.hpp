#pragma once

#include "harness/config.hpp"

#include <string>
#include <vector>

namespace slicemean::harness {

struct ProbeRow {
  double z = 0.0;
  double r = 0.0;
  double value = 0.0;
};

// One row per (z, R), grouped by z in configured order, R ascending.
std::vector<ProbeRow> run_counterexample(const CounterexampleSpec& spec);

std::string format_probe_csv(const std::vector<ProbeRow>& rows);

// Human-readable table with the conclusion each column demonstrates.
std::string probe_summary(const std::vector<ProbeRow>& rows);

}  // namespace slicemean::harness
