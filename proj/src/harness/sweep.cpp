#include "harness/sweep.hpp"

#include "core/error.hpp"
#include "core/integrators.hpp"
#include "core/slice_geometry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace slicemean::harness {

using nlohmann::json;

namespace {

json vector_json(const numlin::Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const numlin::Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json result_json(const IntegralResult& r) {
  return {{"value", r.value}, {"err_estimate", r.err_estimate}, {"n_evals", r.n_evals},
          {"diverged", r.diverged}};
}

void require_admissible(const TestFunction& phi) {
  if (!phi.sweep_admissible()) {
    fail(ErrorCode::NotAdmissible,
         phi.kind_name() + " is not admissible here: the limit theorem needs phi in L^p, p > 1, "
                           "with respect to the limiting Gaussian, and this function is " +
             phi.lp_class());
  }
}

}  // namespace

std::uint64_t row_seed(std::uint64_t seed, std::size_t n) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n);
}

IntegralResult evaluate_limit(const ValidatedProblem& vp, const TestFunction& phi, const Config& cfg,
                              unsigned threads, std::string* source) {
  if (cfg.limit.method == LimitMethodKind::Auto) {
    if (const auto closed = known_limit(phi, vp)) {
      if (source) *source = "closed_form";
      return {*closed, 0.0, 0, false};
    }
  }
  const bool hermite = cfg.limit.method == LimitMethodKind::GaussHermite ||
                       (cfg.limit.method == LimitMethodKind::Auto && vp.k() <= 3 &&
                        phi.hermite_admissible());
  if (hermite) {
    if (source) *source = "gauss_hermite";
    return gaussian_limit(vp, phi, GaussHermite{cfg.limit.nodes}, threads);
  }
  if (source) *source = "monte_carlo";
  return gaussian_limit(vp, phi, MonteCarlo{cfg.mc}, threads);
}

SweepResult run_sweep(const Config& cfg, unsigned threads) {
  const TestFunction& phi = require_function(cfg);
  require_admissible(phi);
  const ValidatedProblem vp = validate(require_problem(cfg), cfg.validate_options);

  SweepResult out;
  const IntegralResult limit = evaluate_limit(vp, phi, cfg, threads, &out.limit_source);
  out.limit_value = limit.value;

  std::vector<std::size_t> schedule = cfg.schedule;
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

  for (std::size_t n : schedule) {
    const auto start = std::chrono::steady_clock::now();
    SliceGeometry geom;
    try {
      geom = build_slice(vp, n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SliceEmpty && e.code() != ErrorCode::BelowMinN) throw;
      out.notes.push_back("N=" + std::to_string(n) + " skipped: " + error_code_name(e.code()) +
                          " (" + e.what() + ")");
      continue;
    }
    const IntegralResult quad = slice_mean_quadrature(geom, phi, cfg.quad);
    McConfig mc = cfg.mc;
    mc.seed = row_seed(cfg.seed, n);
    const IntegralResult sampled = slice_mean_mc(geom, phi, mc, threads);
    SweepRow row;
    row.n = n;
    row.quad_value = quad.value;
    row.quad_err = quad.err_estimate;
    row.mc_value = sampled.value;
    row.mc_stderr = sampled.err_estimate;
    row.limit_value = limit.value;
    row.abs_error = std::abs(quad.value - limit.value);
    if (cfg.outputs.record_timing) {
      const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
      row.wall_ms = dt.count();
    }
    out.rows.push_back(row);
  }
  return out;
}

json validate_summary(const Config& cfg) {
  const ValidatedProblem vp = validate(require_problem(cfg), cfg.validate_options);
  const ProjectionData pd = build_projection(vp, kLimitN);
  return {
      {"valid", true},
      {"m", vp.m()},
      {"k", vp.k()},
      {"support_width", vp.support()},
      {"width", vp.width()},
      {"z0", vector_json(vp.z0())},
      {"z0_norm_sq", vp.z0().squaredNorm()},
      {"n_min", vp.n_min()},
      {"rank_checks",
       {{"constraint_rank", vp.rank_checks().constraint_rank},
        {"projection_rank", vp.rank_checks().projection_rank}}},
      {"gram_limit", matrix_json(pd.gram)},
      {"log_det_l0_limit", pd.log_det_l0},
  };
}

json slice_summary(const Config& cfg, std::size_t n, unsigned threads) {
  const ValidatedProblem vp = validate(require_problem(cfg), cfg.validate_options);
  const SliceGeometry geom = build_slice(vp, n);
  json out = {
      {"N", geom.n},
      {"d", geom.d},
      {"m", geom.m},
      {"k", geom.k},
      {"z0N", vector_json(geom.z0n)},
      {"x0", vector_json(geom.x0)},
      {"a_z", geom.a_z},
      {"exponent", geom.exponent},
      {"log_prefactor", geom.log_prefactor},
      {"gram", matrix_json(geom.pd.gram)},
      {"log_det_l0", geom.pd.log_det_l0},
  };
  if (cfg.function) {
    const TestFunction& phi = *cfg.function;
    out["function"] = phi.kind_name();
    if (geom.k <= 3) out["quadrature"] = result_json(slice_mean_quadrature(geom, phi, cfg.quad));
    McConfig mc = cfg.mc;
    mc.seed = row_seed(cfg.seed, n);
    out["monte_carlo"] = result_json(slice_mean_mc(geom, phi, mc, threads));
  }
  return out;
}

json limit_summary(const Config& cfg, unsigned threads) {
  const ValidatedProblem vp = validate(require_problem(cfg), cfg.validate_options);
  const TestFunction& phi = require_function(cfg);
  std::string source;
  const IntegralResult r = evaluate_limit(vp, phi, cfg, threads, &source);
  json out = {{"function", phi.kind_name()}, {"method", source}, {"result", result_json(r)}};
  const auto closed = known_limit(phi, vp);
  out["known_limit"] = closed ? json(*closed) : json(nullptr);
  out["lp_class"] = phi.lp_class();
  return out;
}

}  // namespace slicemean::harness
