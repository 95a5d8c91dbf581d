#include "slicemean/slicemean.h"

#include "core/error.hpp"
#include "core/integrators.hpp"
#include "core/projections.hpp"
#include "core/slice_geometry.hpp"
#include "harness/config.hpp"
#include "harness/counterexample.hpp"
#include "harness/emit.hpp"
#include "harness/sweep.hpp"
#include "harness/verify.hpp"

#include <cstring>
#include <new>
#include <string>

using namespace slicemean;

struct slm_problem {
  ValidatedProblem vp;
};
struct slm_function {
  TestFunction fn;
};
struct slm_slice {
  SliceGeometry geom;
};
struct slm_config {
  harness::Config cfg;
};
struct slm_sweep {
  harness::SweepResult result;
};
struct slm_report {
  harness::VerifyReport report;
};

namespace {

thread_local std::string last_error;

slm_status to_status(ErrorCode code) { return static_cast<slm_status>(static_cast<int>(code)); }

template <class F>
slm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SLM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return SLM_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SLM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SLM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return SLM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

std::size_t to_n(uint64_t n) { return n == SLM_N_LIMIT ? kLimitN : static_cast<std::size_t>(n); }

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

slm_result to_result(const IntegralResult& r) { return {r.value, r.err_estimate, r.n_evals, r.diverged ? 1 : 0}; }

QuadConfig to_quad(const slm_quad_config* c) {
  if (!c) return {};
  return {c->radial_nodes, c->angular_nodes, c->polar_nodes, c->target_rel_err, c->max_radial_nodes};
}

McConfig to_mc(const slm_mc_config* c) {
  if (!c) return {};
  return {c->n_samples, c->seed, c->shard_size};
}

numlin::Vector to_vector(const double* x, std::size_t n) {
  require(x != nullptr || n == 0, "null vector argument");
  numlin::Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = x[i];
  return v;
}

}  // namespace

extern "C" {

const char* slm_version(void) { return "0.1.0"; }

const char* slm_status_string(slm_status status) {
  if (status == SLM_OK) return "Ok";
  if (status == SLM_ERR_INTERNAL) return "Internal";
  if (status >= SLM_ERR_INVALID_ARGUMENT && status <= SLM_ERR_IO) {
    return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
  }
  return "Unknown";
}

const char* slm_last_error(void) { return last_error.c_str(); }

void slm_string_free(char* s) { delete[] s; }

void slm_quad_config_default(slm_quad_config* cfg) {
  if (!cfg) return;
  const QuadConfig d;
  *cfg = {d.radial_nodes, d.angular_nodes, d.polar_nodes, d.target_rel_err, d.max_radial_nodes};
}

void slm_mc_config_default(slm_mc_config* cfg) {
  if (!cfg) return;
  const McConfig d;
  *cfg = {d.n_samples, d.seed, d.shard_size};
}

slm_status slm_problem_create(const double* q, size_t m, size_t s, const double* w0, size_t k, slm_problem** out) {
  return guarded([&] {
    require(q && w0 && out, "null argument");
    require(m > 0 && s > 0, "Q must be non-empty");
    AffineProblem p;
    p.q = numlin::from_row_major(m, s, q);
    p.w0 = to_vector(w0, m);
    p.k = k;
    *out = new slm_problem{validate(std::move(p))};
  });
}

slm_status slm_problem_from_json(const char* json, slm_problem** out) {
  return guarded([&] {
    require(json && out, "null argument");
    ValidateOptions options;
    AffineProblem p = harness::parse_problem(nlohmann::json::parse(json), &options);
    *out = new slm_problem{validate(std::move(p), options)};
  });
}

void slm_problem_destroy(slm_problem* p) { delete p; }
size_t slm_problem_k(const slm_problem* p) { return p ? p->vp.k() : 0; }
size_t slm_problem_m(const slm_problem* p) { return p ? p->vp.m() : 0; }
uint64_t slm_problem_min_n(const slm_problem* p) { return p ? p->vp.n_min() : 0; }

slm_status slm_problem_closest_point(const slm_problem* p, uint64_t n, double* out, size_t* len) {
  return guarded([&] {
    require(p && len, "null argument");
    const numlin::Vector z = closest_point(p->vp, to_n(n));
    const auto size = static_cast<std::size_t>(z.size());
    if (out) {
      require(*len >= size, "output buffer too small");
      for (std::size_t i = 0; i < size; ++i) out[i] = z(static_cast<Eigen::Index>(i));
    }
    *len = size;
  });
}

slm_status slm_problem_gram(const slm_problem* p, uint64_t n, double* gram, double* log_det_l0) {
  return guarded([&] {
    require(p != nullptr, "null problem");
    const ProjectionData pd = build_projection(p->vp, to_n(n));
    const auto k = static_cast<Eigen::Index>(p->vp.k());
    if (gram) {
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) gram[i * k + j] = pd.gram(i, j);
    }
    if (log_det_l0) *log_det_l0 = pd.log_det_l0;
  });
}

slm_status slm_problem_preimage_norm_sq(const slm_problem* p, uint64_t n, const double* x, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = preimage_norm_sq(build_projection(p->vp, to_n(n)), to_vector(x, p->vp.k()));
  });
}

slm_status slm_problem_kernel_projection_norm_sq(const slm_problem* p, const double* t, double* out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = kernel_projection_norm_sq(p->vp, to_vector(t, p->vp.k()));
  });
}

slm_status slm_function_from_json(const char* json, slm_function** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new slm_function{harness::parse_function(nlohmann::json::parse(json))};
  });
}

void slm_function_destroy(slm_function* f) { delete f; }
size_t slm_function_arity(const slm_function* f) { return f ? f->fn.arity() : 0; }

slm_status slm_function_eval(const slm_function* f, const double* x, size_t len, double* out) {
  return guarded([&] {
    require(f && x && out, "null argument");
    require(len == f->fn.arity(), "argument length does not match function arity");
    *out = f->fn.eval(std::span<const double>(x, len));
  });
}

slm_status slm_function_known_limit(const slm_function* f, const slm_problem* p, int* has_value, double* out) {
  return guarded([&] {
    require(f && p && has_value && out, "null argument");
    require(f->fn.arity() == p->vp.k(), "function arity does not match problem k");
    const auto v = known_limit(f->fn, p->vp);
    *has_value = v ? 1 : 0;
    *out = v ? *v : 0.0;
  });
}

slm_status slm_slice_create(const slm_problem* p, uint64_t n, slm_slice** out) {
  return guarded([&] {
    require(p && out, "null argument");
    require(n != SLM_N_LIMIT, "a slice needs a finite N");
    *out = new slm_slice{build_slice(p->vp, static_cast<std::size_t>(n))};
  });
}

void slm_slice_destroy(slm_slice* s) { delete s; }

void slm_slice_info_get(const slm_slice* s, slm_slice_info* out) {
  if (!s || !out) return;
  const SliceGeometry& g = s->geom;
  *out = {g.n, g.k, g.m, g.a_z, g.exponent, g.log_prefactor, g.pd.log_det_l0};
}

double slm_slice_weight(const slm_slice* s, double r) { return s ? weight(s->geom, r) : 0.0; }

slm_status slm_slice_mean_quadrature(const slm_slice* s, const slm_function* f, const slm_quad_config* cfg,
                                     slm_result* out) {
  return guarded([&] {
    require(s && f && out, "null argument");
    *out = to_result(slice_mean_quadrature(s->geom, f->fn, to_quad(cfg)));
  });
}

slm_status slm_slice_mean_mc(const slm_slice* s, const slm_function* f, const slm_mc_config* cfg, unsigned threads,
                             slm_result* out) {
  return guarded([&] {
    require(s && f && out, "null argument");
    *out = to_result(slice_mean_mc(s->geom, f->fn, to_mc(cfg), threads));
  });
}

slm_status slm_gaussian_limit_gh(const slm_problem* p, const slm_function* f, size_t nodes, slm_result* out) {
  return guarded([&] {
    require(p && f && out, "null argument");
    *out = to_result(gaussian_limit(p->vp, f->fn, GaussHermite{nodes}));
  });
}

slm_status slm_gaussian_limit_mc(const slm_problem* p, const slm_function* f, const slm_mc_config* cfg,
                                 unsigned threads, slm_result* out) {
  return guarded([&] {
    require(p && f && out, "null argument");
    *out = to_result(gaussian_limit(p->vp, f->fn, MonteCarlo{to_mc(cfg)}, threads));
  });
}

slm_status slm_counterexample_probe(double z, double r, size_t nodes, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = counterexample_probe(z, r, nodes);
  });
}

slm_status slm_config_parse(const char* json, slm_config** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new slm_config{harness::parse_config_text(json)};
  });
}

slm_status slm_config_load(const char* path, slm_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new slm_config{harness::load_config(path)};
  });
}

void slm_config_destroy(slm_config* c) { delete c; }
void slm_config_set_seed(slm_config* c, uint64_t seed) {
  if (c) c->cfg.set_seed(seed);
}
void slm_config_set_csv_path(slm_config* c, const char* path) {
  if (c) c->cfg.outputs.csv_path = path ? path : "";
}
void slm_config_set_svg_path(slm_config* c, const char* path) {
  if (c) c->cfg.outputs.svg_path = path ? path : "";
}
const char* slm_config_csv_path(const slm_config* c) { return c ? c->cfg.outputs.csv_path.c_str() : ""; }
const char* slm_config_svg_path(const slm_config* c) { return c ? c->cfg.outputs.svg_path.c_str() : ""; }

slm_status slm_run_validate_json(const slm_config* c, char** json_out) {
  return guarded([&] {
    require(c && json_out, "null argument");
    put_string(json_out, harness::validate_summary(c->cfg).dump(2));
  });
}

slm_status slm_run_slice_json(const slm_config* c, uint64_t n, unsigned threads, char** json_out) {
  return guarded([&] {
    require(c && json_out, "null argument");
    require(n != SLM_N_LIMIT, "a slice needs a finite N");
    put_string(json_out, harness::slice_summary(c->cfg, static_cast<std::size_t>(n), threads).dump(2));
  });
}

slm_status slm_run_limit_json(const slm_config* c, unsigned threads, char** json_out) {
  return guarded([&] {
    require(c && json_out, "null argument");
    put_string(json_out, harness::limit_summary(c->cfg, threads).dump(2));
  });
}

slm_status slm_run_sweep(const slm_config* c, unsigned threads, slm_sweep** out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = new slm_sweep{harness::run_sweep(c->cfg, threads)};
  });
}

void slm_sweep_destroy(slm_sweep* s) { delete s; }
size_t slm_sweep_row_count(const slm_sweep* s) { return s ? s->result.rows.size() : 0; }

slm_status slm_sweep_row_get(const slm_sweep* s, size_t i, slm_sweep_row* out) {
  return guarded([&] {
    require(s && out, "null argument");
    require(i < s->result.rows.size(), "row index out of range");
    const harness::SweepRow& r = s->result.rows[i];
    *out = {r.n, r.quad_value, r.quad_err, r.mc_value, r.mc_stderr, r.limit_value, r.abs_error, r.wall_ms};
  });
}

size_t slm_sweep_note_count(const slm_sweep* s) { return s ? s->result.notes.size() : 0; }
const char* slm_sweep_note(const slm_sweep* s, size_t i) {
  return s && i < s->result.notes.size() ? s->result.notes[i].c_str() : nullptr;
}
double slm_sweep_limit_value(const slm_sweep* s) { return s ? s->result.limit_value : 0.0; }
const char* slm_sweep_limit_source(const slm_sweep* s) { return s ? s->result.limit_source.c_str() : ""; }

slm_status slm_sweep_csv(const slm_sweep* s, char** csv_out) {
  return guarded([&] {
    require(s && csv_out, "null argument");
    put_string(csv_out, harness::format_sweep_csv(s->result.rows));
  });
}

slm_status slm_sweep_write_csv(const slm_sweep* s, const char* path) {
  return guarded([&] {
    require(s && path, "null argument");
    harness::write_text_file(path, harness::format_sweep_csv(s->result.rows));
  });
}

slm_status slm_sweep_write_svg(const slm_sweep* s, const char* path) {
  return guarded([&] {
    require(s && path, "null argument");
    harness::write_text_file(path, harness::render_sweep_svg(s->result.rows));
  });
}

slm_status slm_run_verify(const slm_config* c, unsigned threads, slm_report** out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = new slm_report{harness::run_verify(c->cfg, threads)};
  });
}

void slm_report_destroy(slm_report* r) { delete r; }
size_t slm_report_check_count(const slm_report* r) { return r ? r->report.checks.size() : 0; }

slm_status slm_report_check_get(const slm_report* r, size_t i, slm_check* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->report.checks.size(), "check index out of range");
    const harness::CheckRecord& c = r->report.checks[i];
    *out = {c.name.c_str(), c.passed ? 1 : 0, c.worst_violation, c.tolerance, c.trials, c.detail.c_str()};
  });
}

int slm_report_all_passed(const slm_report* r) { return r && r->report.all_passed() ? 1 : 0; }

slm_status slm_report_csv(const slm_report* r, char** csv_out) {
  return guarded([&] {
    require(r && csv_out, "null argument");
    put_string(csv_out, harness::format_report_csv(r->report));
  });
}

slm_status slm_report_write_csv(const slm_report* r, const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    harness::write_text_file(path, harness::format_report_csv(r->report));
  });
}

slm_status slm_report_json(const slm_report* r, char** json_out) {
  return guarded([&] {
    require(r && json_out, "null argument");
    put_string(json_out, harness::report_json(r->report).dump(2));
  });
}

slm_status slm_available_checks(char** names_out) {
  return guarded([&] {
    require(names_out != nullptr, "null argument");
    std::string all;
    for (const auto& name : harness::available_checks()) all += name + '\n';
    put_string(names_out, all);
  });
}

slm_status slm_run_counterexample(const slm_config* c, const char* csv_path, char** csv_out, char** summary_out) {
  return guarded([&] {
    require(c != nullptr, "null config");
    const auto rows = harness::run_counterexample(c->cfg.counterexample);
    const std::string csv = harness::format_probe_csv(rows);
    if (csv_path && *csv_path) harness::write_text_file(csv_path, csv);
    put_string(csv_out, csv);
    put_string(summary_out, harness::probe_summary(rows));
  });
}

}  // extern "C"
