#pragma once

#include "harness/sweep.hpp"

#include <string>
#include <vector>

namespace slicemean::harness {

inline constexpr const char* kSweepCsvHeader =
    "N,quad_value,quad_err,mc_value,mc_stderr,limit_value,abs_error,wall_ms";

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Header plus one line per row. Throws InvalidArgument for an empty table.
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

/// Log-log chart of |quad - limit| and |mc - limit| against N, one polyline
/// per series, with no external assets.
std::string render_sweep_svg(const std::vector<SweepRow>& rows);

// Throws Io on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace slicemean::harness
