#pragma once

// Run configuration: one JSON document, unknown keys rejected.
//
// {
//   "problem":  {"Q": {"rows": m, "cols": s, "data": [...]}, "w0": [...], "k": 1, "n_cap": 1000000},
//   "function": {"kind": "CosLinear", "t": [1.0]},
//   "schedule": [32, 64, ..., 4096],
//   "quad":     {"radial_nodes": 128, "angular_nodes": 64, "polar_nodes": 32,
//                "target_rel_err": 1e-9, "max_radial_nodes": 512},
//   "mc":       {"n_samples": 100000, "shard_size": 65536},
//   "limit":    {"method": "auto" | "gauss_hermite" | "monte_carlo", "nodes": 48},
//   "seed":     42,
//   "verify":   {"checks": ["normalization", ...], "tol_scale": 1.0},
//   "counterexample": {"z": [0, 0.3], "R": [1, 10, 100, 1000], "nodes": 16},
//   "outputs":  {"csv_path": "...", "svg_path": "...", "record_timing": false}
// }

#include "core/affine_model.hpp"
#include "core/integrators.hpp"
#include "core/testfns.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slicemean::harness {

enum class LimitMethodKind { Auto, GaussHermite, MonteCarlo };

struct LimitSpec {
  LimitMethodKind method = LimitMethodKind::Auto;
  std::size_t nodes = 48;
};

struct VerifySpec {
  std::optional<std::vector<std::string>> checks;  // empty optional: run all
  double tol_scale = 1.0;
};

struct CounterexampleSpec {
  std::vector<double> z{0.0, 0.3};
  std::vector<double> r{1.0, 10.0, 100.0, 1000.0};
  std::size_t nodes = 16;
};

struct OutputSpec {
  std::string csv_path;
  std::string svg_path;
  // Wall-clock column; off by default so CSV output is byte-reproducible.
  bool record_timing = false;
};

struct Config {
  std::optional<AffineProblem> problem;
  ValidateOptions validate_options;
  std::optional<TestFunction> function;
  std::vector<std::size_t> schedule{32, 64, 128, 256, 512, 1024, 2048, 4096};
  QuadConfig quad;
  McConfig mc;  // mc.seed mirrors `seed`
  LimitSpec limit;
  std::uint64_t seed = 0;
  VerifySpec verify;
  CounterexampleSpec counterexample;
  OutputSpec outputs;

  void set_seed(std::uint64_t s) {
    seed = s;
    mc.seed = s;
  }
};

Config parse_config(const nlohmann::json& doc);
Config parse_config_text(std::string_view text);
Config load_config(const std::string& path);

AffineProblem parse_problem(const nlohmann::json& node, ValidateOptions* options = nullptr);
TestFunction parse_function(const nlohmann::json& node);

const AffineProblem& require_problem(const Config& cfg);
const TestFunction& require_function(const Config& cfg);

}  // namespace slicemean::harness
