#include "harness/config.hpp"

#include "core/error.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace slicemean::harness {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

void require_object(const json& node, const std::string& ctx) {
  if (!node.is_object()) config_error(ctx + " must be a JSON object");
}

void check_keys(const json& node, std::initializer_list<std::string_view> allowed,
                const std::string& ctx) {
  require_object(node, ctx);
  for (const auto& item : node.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) config_error("unknown key '" + item.key() + "' in " + ctx);
  }
}

double get_double(const json& node, const std::string& ctx) {
  if (!node.is_number()) config_error(ctx + " must be a number");
  return node.get<double>();
}

std::uint64_t get_count(const json& node, const std::string& ctx) {
  if (!node.is_number_integer() || (node.is_number_integer() && !node.is_number_unsigned() &&
                                     node.get<std::int64_t>() < 0)) {
    config_error(ctx + " must be a non-negative integer");
  }
  return node.get<std::uint64_t>();
}

std::vector<double> get_doubles(const json& node, const std::string& ctx) {
  if (!node.is_array()) config_error(ctx + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : node) out.push_back(get_double(v, ctx + "[]"));
  return out;
}

const json& required(const json& node, const char* key, const std::string& ctx) {
  if (!node.contains(key)) config_error(ctx + " is missing '" + key + "'");
  return node.at(key);
}

QuadConfig parse_quad(const json& node) {
  check_keys(node, {"radial_nodes", "angular_nodes", "polar_nodes", "target_rel_err", "max_radial_nodes"},
             "quad");
  QuadConfig q;
  if (node.contains("radial_nodes")) q.radial_nodes = get_count(node["radial_nodes"], "quad.radial_nodes");
  if (node.contains("angular_nodes")) q.angular_nodes = get_count(node["angular_nodes"], "quad.angular_nodes");
  if (node.contains("polar_nodes")) q.polar_nodes = get_count(node["polar_nodes"], "quad.polar_nodes");
  if (node.contains("target_rel_err")) q.target_rel_err = get_double(node["target_rel_err"], "quad.target_rel_err");
  q.max_radial_nodes = std::max(q.max_radial_nodes, q.radial_nodes);
  if (node.contains("max_radial_nodes")) {
    q.max_radial_nodes = get_count(node["max_radial_nodes"], "quad.max_radial_nodes");
  }
  try {
    check_config(q);
  } catch (const Error& e) {
    config_error(std::string("quad: ") + e.what());
  }
  return q;
}

McConfig parse_mc(const json& node) {
  check_keys(node, {"n_samples", "shard_size"}, "mc");
  McConfig mc;
  if (node.contains("n_samples")) mc.n_samples = get_count(node["n_samples"], "mc.n_samples");
  if (node.contains("shard_size")) mc.shard_size = get_count(node["shard_size"], "mc.shard_size");
  try {
    check_config(mc);
  } catch (const Error& e) {
    config_error(std::string("mc: ") + e.what());
  }
  return mc;
}

LimitSpec parse_limit(const json& node) {
  check_keys(node, {"method", "nodes"}, "limit");
  LimitSpec spec;
  if (node.contains("method")) {
    if (!node["method"].is_string()) config_error("limit.method must be a string");
    const auto m = node["method"].get<std::string>();
    if (m == "auto") spec.method = LimitMethodKind::Auto;
    else if (m == "gauss_hermite") spec.method = LimitMethodKind::GaussHermite;
    else if (m == "monte_carlo") spec.method = LimitMethodKind::MonteCarlo;
    else config_error("limit.method must be auto, gauss_hermite or monte_carlo");
  }
  if (node.contains("nodes")) spec.nodes = get_count(node["nodes"], "limit.nodes");
  if (spec.nodes < 2) config_error("limit.nodes must be >= 2");
  return spec;
}

VerifySpec parse_verify(const json& node) {
  check_keys(node, {"checks", "tol_scale"}, "verify");
  VerifySpec spec;
  if (node.contains("checks")) {
    if (!node["checks"].is_array()) config_error("verify.checks must be an array of names");
    std::vector<std::string> names;
    for (const auto& c : node["checks"]) {
      if (!c.is_string()) config_error("verify.checks entries must be strings");
      names.push_back(c.get<std::string>());
    }
    spec.checks = std::move(names);
  }
  if (node.contains("tol_scale")) {
    spec.tol_scale = get_double(node["tol_scale"], "verify.tol_scale");
    if (spec.tol_scale < 0.0) config_error("verify.tol_scale must be >= 0");
  }
  return spec;
}

CounterexampleSpec parse_counterexample(const json& node) {
  check_keys(node, {"z", "R", "nodes"}, "counterexample");
  CounterexampleSpec spec;
  if (node.contains("z")) spec.z = get_doubles(node["z"], "counterexample.z");
  if (node.contains("R")) spec.r = get_doubles(node["R"], "counterexample.R");
  if (node.contains("nodes")) spec.nodes = get_count(node["nodes"], "counterexample.nodes");
  for (double r : spec.r) {
    if (!(r > 0.0)) config_error("counterexample.R entries must be > 0");
  }
  if (spec.nodes < 2) config_error("counterexample.nodes must be >= 2");
  return spec;
}

OutputSpec parse_outputs(const json& node) {
  check_keys(node, {"csv_path", "svg_path", "record_timing"}, "outputs");
  OutputSpec spec;
  auto str = [&](const char* key) {
    if (!node[key].is_string()) config_error(std::string("outputs.") + key + " must be a string");
    return node[key].get<std::string>();
  };
  if (node.contains("csv_path")) spec.csv_path = str("csv_path");
  if (node.contains("svg_path")) spec.svg_path = str("svg_path");
  if (node.contains("record_timing")) {
    if (!node["record_timing"].is_boolean()) config_error("outputs.record_timing must be a boolean");
    spec.record_timing = node["record_timing"].get<bool>();
  }
  return spec;
}

}  // namespace

AffineProblem parse_problem(const json& node, ValidateOptions* options) {
  check_keys(node, {"Q", "w0", "k", "n_cap", "rank_tol"}, "problem");
  const json& q = required(node, "Q", "problem");
  check_keys(q, {"rows", "cols", "data"}, "problem.Q");
  const auto rows = get_count(required(q, "rows", "problem.Q"), "problem.Q.rows");
  const auto cols = get_count(required(q, "cols", "problem.Q"), "problem.Q.cols");
  const auto data = get_doubles(required(q, "data", "problem.Q"), "problem.Q.data");
  if (rows == 0 || cols == 0) config_error("problem.Q must have at least one row and column");
  if (data.size() != rows * cols) {
    config_error("problem.Q.data has " + std::to_string(data.size()) + " entries, expected " +
                 std::to_string(rows * cols));
  }
  AffineProblem p;
  try {
    p.q = numlin::from_row_major(rows, cols, data.data());
  } catch (const Error& e) {
    config_error(std::string("problem.Q: ") + e.what());
  }
  const auto w0 = get_doubles(required(node, "w0", "problem"), "problem.w0");
  if (w0.size() != rows) config_error("problem.w0 must have one entry per row of Q");
  p.w0 = Eigen::Map<const numlin::Vector>(w0.data(), static_cast<Eigen::Index>(w0.size()));
  p.k = get_count(required(node, "k", "problem"), "problem.k");
  if (p.k == 0) config_error("problem.k must be >= 1");
  if (options != nullptr) {
    if (node.contains("n_cap")) options->n_cap = get_count(node["n_cap"], "problem.n_cap");
    if (node.contains("rank_tol")) {
      options->rank_tol = get_double(node["rank_tol"], "problem.rank_tol");
      if (!(options->rank_tol > 0.0)) config_error("problem.rank_tol must be > 0");
    }
  }
  return p;
}

TestFunction parse_function(const json& node) {
  require_object(node, "function");
  const json& kind_node = required(node, "kind", "function");
  if (!kind_node.is_string()) config_error("function.kind must be a string");
  const auto kind = kind_node.get<std::string>();
  try {
    if (kind == "CosLinear" || kind == "SinLinear") {
      check_keys(node, {"kind", "t"}, "function");
      auto t = get_doubles(required(node, "t", "function"), "function.t");
      return kind == "CosLinear" ? TestFunction::cos_linear(std::move(t))
                                 : TestFunction::sin_linear(std::move(t));
    }
    if (kind == "Monomial") {
      check_keys(node, {"kind", "alpha"}, "function");
      const json& a = required(node, "alpha", "function");
      if (!a.is_array()) config_error("function.alpha must be an array of exponents");
      std::vector<unsigned> alpha;
      for (const auto& v : a) alpha.push_back(static_cast<unsigned>(get_count(v, "function.alpha[]")));
      return TestFunction::monomial(std::move(alpha));
    }
    if (kind == "IndicatorBall") {
      check_keys(node, {"kind", "center", "radius"}, "function");
      return TestFunction::indicator_ball(get_doubles(required(node, "center", "function"), "function.center"),
                                          get_double(required(node, "radius", "function"), "function.radius"));
    }
    if (kind == "BoundedCutoff") {
      check_keys(node, {"kind", "inner", "cap"}, "function");
      return TestFunction::bounded_cutoff(parse_function(required(node, "inner", "function")),
                                          get_double(required(node, "cap", "function"), "function.cap"));
    }
    if (kind == "CounterexampleG") {
      check_keys(node, {"kind"}, "function");
      return TestFunction::counterexample_g();
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    config_error(std::string("function: ") + e.what());
  }
  config_error("unknown function kind '" + kind + "'");
}

Config parse_config(const json& doc) {
  check_keys(doc, {"problem", "function", "schedule", "quad", "mc", "limit", "seed", "verify",
                   "counterexample", "outputs"},
             "config");
  Config cfg;
  if (doc.contains("problem")) cfg.problem = parse_problem(doc["problem"], &cfg.validate_options);
  if (doc.contains("function")) cfg.function = parse_function(doc["function"]);
  if (doc.contains("schedule")) {
    const json& s = doc["schedule"];
    if (!s.is_array()) config_error("schedule must be an array of N values");
    cfg.schedule.clear();
    for (const auto& v : s) {
      const auto n = get_count(v, "schedule[]");
      if (n == 0) config_error("schedule entries must be >= 1");
      cfg.schedule.push_back(n);
    }
  }
  if (doc.contains("quad")) cfg.quad = parse_quad(doc["quad"]);
  if (doc.contains("mc")) cfg.mc = parse_mc(doc["mc"]);
  if (doc.contains("limit")) cfg.limit = parse_limit(doc["limit"]);
  if (doc.contains("verify")) cfg.verify = parse_verify(doc["verify"]);
  if (doc.contains("counterexample")) cfg.counterexample = parse_counterexample(doc["counterexample"]);
  if (doc.contains("outputs")) cfg.outputs = parse_outputs(doc["outputs"]);
  cfg.set_seed(doc.contains("seed") ? get_count(doc["seed"], "seed") : 0);
  return cfg;
}

Config parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

const AffineProblem& require_problem(const Config& cfg) {
  if (!cfg.problem) config_error("config has no 'problem' section");
  return *cfg.problem;
}

const TestFunction& require_function(const Config& cfg) {
  if (!cfg.function) config_error("config has no 'function' section");
  return *cfg.function;
}

}  // namespace slicemean::harness
