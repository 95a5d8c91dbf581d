#include <doctest.h>

#include "core/error.hpp"
#include "harness/config.hpp"
#include "harness/counterexample.hpp"
#include "harness/emit.hpp"
#include "harness/sweep.hpp"
#include "harness/verify.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace slicemean;
using namespace slicemean::harness;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

const char* kFixtureA3 = R"({
  "problem": {"Q": {"rows": 1, "cols": 2, "data": [0, 1]}, "w0": [3], "k": 1},
  "function": {"kind": "Monomial", "alpha": [2]},
  "schedule": [64, 9, 16, 64, 256],
  "mc": {"n_samples": 20000},
  "seed": 42
})";

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Minimal XML well-formedness: balanced, properly nested tags, quoted
// attributes, no stray '<' in text.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool seen_root = false;
  while (i < doc.size()) {
    if (doc[i] != '<') {
      if (doc[i] == '&') {
        const auto semi = doc.find(';', i);
        if (semi == std::string::npos || semi - i > 6) return false;
      }
      ++i;
      continue;
    }
    const auto close = doc.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = doc.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?") || tag.starts_with("!")) continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" \n\t/"));
    if (stack.empty()) {
      if (seen_root) return false;
      seen_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  return seen_root && stack.empty();
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config cfg = parse_config_text(kFixtureA3);
  REQUIRE(cfg.problem);
  CHECK(cfg.problem->k == 1);
  CHECK(cfg.seed == 42);
  CHECK(cfg.mc.seed == 42);
  CHECK(cfg.mc.n_samples == 20000);
  const Config empty = parse_config_text("{}");
  CHECK_FALSE(empty.problem);
  CHECK(empty.schedule.front() == 32);
  CHECK(empty.schedule.back() == 4096);
}

TEST_CASE("config is fail-closed") {
  CHECK(code_of([] { parse_config_text(R"({"sedd": 1})"); }) == ErrorCode::Config);
  CHECK(code_of([] { parse_config_text(R"({"quad": {"radial": 8}})"); }) == ErrorCode::Config);
  CHECK(code_of([] { parse_config_text(R"({"problem": {"w0": [1], "k": 1}})"); }) == ErrorCode::Config);
  CHECK(code_of([] {
          parse_config_text(R"({"problem": {"Q": {"rows": 1, "cols": 2, "data": [1]}, "w0": [1], "k": 1}})");
        }) == ErrorCode::Config);
  CHECK(code_of([] { parse_config_text(R"({"function": {"kind": "Cosine", "t": [1]}})"); }) == ErrorCode::Config);
  CHECK(code_of([] { parse_config_text(R"({"seed": -1})"); }) == ErrorCode::Config);
  CHECK(code_of([] { parse_config_text("{not json"); }) == ErrorCode::Config);
  CHECK(code_of([] { load_config("/definitely/not/here.json"); }) == ErrorCode::Io);
}

TEST_CASE("double formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1 : 1);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(back == v);
  }
}

TEST_CASE("sweep rows, notes and CSV") {
  const Config cfg = parse_config_text(kFixtureA3);
  const SweepResult res = run_sweep(cfg, 2);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].n == 16);
  CHECK(res.rows[2].n == 256);
  REQUIRE(res.notes.size() == 1);
  CHECK(res.notes[0].find("SliceEmpty") != std::string::npos);
  CHECK(res.limit_source == "closed_form");
  for (const SweepRow& r : res.rows) {
    const double n = static_cast<double>(r.n);
    CHECK(std::abs(r.quad_value - (n - 9.0) / (n - 1.0)) < 1e-8);
    CHECK(r.abs_error == std::abs(r.quad_value - r.limit_value));
    CHECK(r.wall_ms == 0.0);
  }
  const std::string csv = format_sweep_csv(res.rows);
  const auto ls = lines(csv);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "N,quad_value,quad_err,mc_value,mc_stderr,limit_value,abs_error,wall_ms");
  CHECK(ls[1].starts_with("16,"));
  CHECK(code_of([] { format_sweep_csv({}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sweep CSV is identical across thread counts") {
  const Config cfg = parse_config_text(kFixtureA3);
  const std::string one = format_sweep_csv(run_sweep(cfg, 1).rows);
  CHECK(format_sweep_csv(run_sweep(cfg, 8).rows) == one);
  CHECK(format_sweep_csv(run_sweep(cfg, 3).rows) == one);
}

TEST_CASE("sweep refuses the L^1-only counterexample") {
  Config cfg = parse_config_text(R"({
    "problem": {"Q": {"rows": 1, "cols": 2, "data": [0, 1]}, "w0": [0], "k": 1},
    "function": {"kind": "CounterexampleG"}})");
  try {
    run_sweep(cfg, 1);
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAdmissible);
    CHECK(std::string(e.what()).find("L^p") != std::string::npos);
  }
}

TEST_CASE("SVG chart is well-formed with one polyline per series") {
  const SweepResult res = run_sweep(parse_config_text(kFixtureA3), 1);
  const std::string svg = render_sweep_svg(res.rows);
  CHECK(well_formed_xml(svg));
  CHECK(count_of(svg, "<polyline") == 2);
  CHECK(svg.find("href") == std::string::npos);
  CHECK_FALSE(well_formed_xml("<svg><g></svg>"));
  CHECK(code_of([] { render_sweep_svg({}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("counterexample table") {
  CounterexampleSpec spec;
  const auto rows = run_counterexample(spec);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].z == 0.0);
  CHECK(rows[0].value == doctest::Approx(std::numbers::pi / (2.0 * std::sqrt(2.0 * std::numbers::pi))));
  for (std::size_t i = 1; i < 4; ++i) CHECK(rows[i].value > rows[i - 1].value);
  CHECK(rows[3].value < std::sqrt(std::numbers::pi / 2.0));
  CHECK(lines(format_probe_csv(rows)).size() == 9);
  CHECK(probe_summary(rows).find("L^p") != std::string::npos);
}

TEST_CASE("verify: subsets, unknown names, forced failure") {
  Config cfg = parse_config_text(R"({"verify": {"checks": []}})");
  CHECK(run_verify(cfg, 1).checks.empty());
  CHECK(run_verify(cfg, 1).all_passed());
  cfg = parse_config_text(R"({"verify": {"checks": ["surface_constant", "dominating_bound"]}})");
  const VerifyReport ok = run_verify(cfg, 1);
  REQUIRE(ok.checks.size() == 2);
  CHECK(ok.all_passed());
  CHECK(lines(format_report_csv(ok)).size() == 3);
  cfg = parse_config_text(R"({"verify": {"checks": ["surface_constant"], "tol_scale": 0}})");
  CHECK_FALSE(run_verify(cfg, 1).all_passed());
  cfg = parse_config_text(R"({"verify": {"checks": ["no_such_check"]}})");
  CHECK(code_of([&] { run_verify(cfg, 1); }) == ErrorCode::Config);
}
