#ifndef SLICEMEAN_SLICEMEAN_H
#define SLICEMEAN_SLICEMEAN_H

/*
 * C interface to the slicemean library: affine slices of the sphere
 * S^{N-1}(sqrt N), their normalized surface means of cylinder functions,
 * and the Gaussian limit of those means as N grows.
 *
 * All objects are opaque handles created by slm_*_create/parse/run calls and
 * released by the matching *_destroy. Every fallible call returns an
 * slm_status; on failure slm_last_error() gives a message for the calling
 * thread. Handles are immutable after creation and may be shared between
 * threads, except slm_config (slm_config_set_seed mutates it).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SLM_BUILDING_LIBRARY)
#    define SLM_API __declspec(dllexport)
#  else
#    define SLM_API __declspec(dllimport)
#  endif
#else
#  define SLM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slm_status {
  SLM_OK = 0,
  SLM_ERR_INVALID_ARGUMENT = 1,
  SLM_ERR_RANK_DEFICIENT = 2,
  SLM_ERR_PROJECTION_NOT_ONTO = 3,
  SLM_ERR_INFEASIBLE = 4,
  SLM_ERR_BELOW_MIN_N = 5,
  SLM_ERR_SLICE_EMPTY = 6,
  SLM_ERR_NOT_SPD = 7,
  SLM_ERR_UNSUPPORTED_DIMENSION = 8,
  SLM_ERR_NON_FINITE = 9,
  SLM_ERR_NOT_ADMISSIBLE = 10,
  SLM_ERR_CONFIG = 11,
  SLM_ERR_IO = 12,
  SLM_ERR_INTERNAL = 99
} slm_status;

/* Pass as N to request the N = infinity (limit) object. */
#define SLM_N_LIMIT ((uint64_t)0)

typedef struct slm_problem slm_problem;
typedef struct slm_function slm_function;
typedef struct slm_slice slm_slice;
typedef struct slm_config slm_config;
typedef struct slm_sweep slm_sweep;
typedef struct slm_report slm_report;

typedef struct slm_result {
  double value;
  double err_estimate; /* quadrature: |v(n) - v(n/2)|; Monte Carlo: standard error */
  uint64_t n_evals;
  int diverged;
} slm_result;

typedef struct slm_quad_config {
  size_t radial_nodes;
  size_t angular_nodes;
  size_t polar_nodes;
  double target_rel_err;
  size_t max_radial_nodes;
} slm_quad_config;

typedef struct slm_mc_config {
  uint64_t n_samples;
  uint64_t seed;
  uint64_t shard_size;
} slm_mc_config;

typedef struct slm_slice_info {
  uint64_t n;
  size_t k;
  size_t m;
  double radius;         /* a_z = sqrt(N - |z0_N|^2) */
  double exponent;       /* (N - k - m - 2) / 2 */
  double log_prefactor;
  double log_det_l0;     /* 1/2 ln det G_N */
} slm_slice_info;

typedef struct slm_sweep_row {
  uint64_t n;
  double quad_value;
  double quad_err;
  double mc_value;
  double mc_stderr;
  double limit_value;
  double abs_error;
  double wall_ms;
} slm_sweep_row;

typedef struct slm_check {
  const char* name;   /* owned by the report */
  int passed;
  double worst_violation;
  double tolerance;
  uint64_t trials;
  const char* detail; /* owned by the report */
} slm_check;

/* ---- library ---- */

SLM_API const char* slm_version(void);
SLM_API const char* slm_status_string(slm_status status);
/* Message of the last failed call on this thread; "" if none. */
SLM_API const char* slm_last_error(void);
/* Frees strings returned through char** out-parameters. */
SLM_API void slm_string_free(char* s);
SLM_API void slm_quad_config_default(slm_quad_config* cfg);
SLM_API void slm_mc_config_default(slm_mc_config* cfg);

/* ---- problems ---- */

/* q is row-major m x s. k is the number of projected coordinates. */
SLM_API slm_status slm_problem_create(const double* q, size_t m, size_t s, const double* w0, size_t k,
                                      slm_problem** out);
SLM_API slm_status slm_problem_from_json(const char* json, slm_problem** out);
SLM_API void slm_problem_destroy(slm_problem* p);
SLM_API size_t slm_problem_k(const slm_problem* p);
SLM_API size_t slm_problem_m(const slm_problem* p);
SLM_API uint64_t slm_problem_min_n(const slm_problem* p);
/* Least-norm point of the N-truncated constraints; out has room for
 * *len entries on input and receives the length on output. */
SLM_API slm_status slm_problem_closest_point(const slm_problem* p, uint64_t n, double* out, size_t* len);
/* k x k Gram matrix (row-major) and 1/2 ln det. */
SLM_API slm_status slm_problem_gram(const slm_problem* p, uint64_t n, double* gram, double* log_det_l0);
SLM_API slm_status slm_problem_preimage_norm_sq(const slm_problem* p, uint64_t n, const double* x,
                                                double* out);
SLM_API slm_status slm_problem_kernel_projection_norm_sq(const slm_problem* p, const double* t, double* out);

/* ---- test functions ---- */

/* JSON such as {"kind": "CosLinear", "t": [1.0]}. */
SLM_API slm_status slm_function_from_json(const char* json, slm_function** out);
SLM_API void slm_function_destroy(slm_function* f);
SLM_API size_t slm_function_arity(const slm_function* f);
SLM_API slm_status slm_function_eval(const slm_function* f, const double* x, size_t len, double* out);
/* *has_value is 0 when no closed form exists. */
SLM_API slm_status slm_function_known_limit(const slm_function* f, const slm_problem* p, int* has_value,
                                            double* out);

/* ---- slices and integrators ---- */

SLM_API slm_status slm_slice_create(const slm_problem* p, uint64_t n, slm_slice** out);
SLM_API void slm_slice_destroy(slm_slice* s);
SLM_API void slm_slice_info_get(const slm_slice* s, slm_slice_info* out);
SLM_API double slm_slice_weight(const slm_slice* s, double r);
/* cfg may be NULL for defaults. */
SLM_API slm_status slm_slice_mean_quadrature(const slm_slice* s, const slm_function* f,
                                             const slm_quad_config* cfg, slm_result* out);
SLM_API slm_status slm_slice_mean_mc(const slm_slice* s, const slm_function* f, const slm_mc_config* cfg,
                                     unsigned threads, slm_result* out);
SLM_API slm_status slm_gaussian_limit_gh(const slm_problem* p, const slm_function* f, size_t nodes,
                                         slm_result* out);
SLM_API slm_status slm_gaussian_limit_mc(const slm_problem* p, const slm_function* f, const slm_mc_config* cfg,
                                         unsigned threads, slm_result* out);
/* Integral of g(x + z) against the standard Gaussian over [-R, R]. */
SLM_API slm_status slm_counterexample_probe(double z, double r, size_t nodes, double* out);

/* ---- harness ---- */

SLM_API slm_status slm_config_parse(const char* json, slm_config** out);
SLM_API slm_status slm_config_load(const char* path, slm_config** out);
SLM_API void slm_config_destroy(slm_config* c);
SLM_API void slm_config_set_seed(slm_config* c, uint64_t seed);
SLM_API void slm_config_set_csv_path(slm_config* c, const char* path);
SLM_API void slm_config_set_svg_path(slm_config* c, const char* path);
SLM_API const char* slm_config_csv_path(const slm_config* c);
SLM_API const char* slm_config_svg_path(const slm_config* c);

/* JSON summaries; free *json_out with slm_string_free. n = SLM_N_LIMIT is invalid for run_slice. */
SLM_API slm_status slm_run_validate_json(const slm_config* c, char** json_out);
SLM_API slm_status slm_run_slice_json(const slm_config* c, uint64_t n, unsigned threads, char** json_out);
SLM_API slm_status slm_run_limit_json(const slm_config* c, unsigned threads, char** json_out);

SLM_API slm_status slm_run_sweep(const slm_config* c, unsigned threads, slm_sweep** out);
SLM_API void slm_sweep_destroy(slm_sweep* s);
SLM_API size_t slm_sweep_row_count(const slm_sweep* s);
SLM_API slm_status slm_sweep_row_get(const slm_sweep* s, size_t i, slm_sweep_row* out);
SLM_API size_t slm_sweep_note_count(const slm_sweep* s);
SLM_API const char* slm_sweep_note(const slm_sweep* s, size_t i);
SLM_API double slm_sweep_limit_value(const slm_sweep* s);
SLM_API const char* slm_sweep_limit_source(const slm_sweep* s);
SLM_API slm_status slm_sweep_csv(const slm_sweep* s, char** csv_out);
SLM_API slm_status slm_sweep_write_csv(const slm_sweep* s, const char* path);
SLM_API slm_status slm_sweep_write_svg(const slm_sweep* s, const char* path);

SLM_API slm_status slm_run_verify(const slm_config* c, unsigned threads, slm_report** out);
SLM_API void slm_report_destroy(slm_report* r);
SLM_API size_t slm_report_check_count(const slm_report* r);
SLM_API slm_status slm_report_check_get(const slm_report* r, size_t i, slm_check* out);
SLM_API int slm_report_all_passed(const slm_report* r);
SLM_API slm_status slm_report_csv(const slm_report* r, char** csv_out);
SLM_API slm_status slm_report_write_csv(const slm_report* r, const char* path);
SLM_API slm_status slm_report_json(const slm_report* r, char** json_out);
/* Names accepted in verify.checks, newline separated. */
SLM_API slm_status slm_available_checks(char** names_out);

/* Probe table for the configured z and R lists. csv_path may be NULL.
 * *csv_out (may be NULL) receives the CSV, *summary_out (may be NULL) the
 * text conclusion. */
SLM_API slm_status slm_run_counterexample(const slm_config* c, const char* csv_path, char** csv_out,
                                          char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* SLICEMEAN_SLICEMEAN_H */
