#include <doctest.h>

#include "slicemean/slicemean.h"

#include <cmath>
#include <cstring>
#include <string>

TEST_CASE("problem and slice through the C API") {
  const double q[] = {3.0, 4.0};
  const double w0[] = {5.0};
  slm_problem* p = nullptr;
  REQUIRE(slm_problem_create(q, 1, 2, w0, 1, &p) == SLM_OK);
  CHECK(slm_problem_min_n(p) == 4);
  CHECK(slm_problem_k(p) == 1);

  double z[4];
  size_t len = 4;
  REQUIRE(slm_problem_closest_point(p, SLM_N_LIMIT, z, &len) == SLM_OK);
  CHECK(len == 2);
  CHECK(z[0] == doctest::Approx(0.6));
  len = 1;
  CHECK(slm_problem_closest_point(p, SLM_N_LIMIT, z, &len) == SLM_ERR_INVALID_ARGUMENT);

  double gram = 0.0, logdet = 0.0;
  REQUIRE(slm_problem_gram(p, SLM_N_LIMIT, &gram, &logdet) == SLM_OK);
  CHECK(gram == doctest::Approx(0.64));
  CHECK(logdet == doctest::Approx(std::log(0.8)));

  slm_function* f = nullptr;
  REQUIRE(slm_function_from_json(R"({"kind": "Monomial", "alpha": [2]})", &f) == SLM_OK);
  slm_slice* s = nullptr;
  REQUIRE(slm_slice_create(p, 64, &s) == SLM_OK);
  slm_slice_info info{};
  slm_slice_info_get(s, &info);
  CHECK(info.radius == doctest::Approx(std::sqrt(63.0)));
  slm_result r{};
  REQUIRE(slm_slice_mean_quadrature(s, f, nullptr, &r) == SLM_OK);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  slm_mc_config mc;
  slm_mc_config_default(&mc);
  mc.n_samples = 10000;
  REQUIRE(slm_slice_mean_mc(s, f, &mc, 2, &r) == SLM_OK);
  CHECK(std::abs(r.value - 1.0) < 5.0 * r.err_estimate);

  int has = 0;
  double lim = 0.0;
  REQUIRE(slm_function_known_limit(f, p, &has, &lim) == SLM_OK);
  CHECK(has == 1);
  CHECK(lim == doctest::Approx(1.0));

  slm_slice_destroy(s);
  slm_function_destroy(f);
  slm_problem_destroy(p);
}

TEST_CASE("errors map to status codes with a message") {
  const double q[] = {1.0, 2.0, 2.0, 4.0};
  const double w0[] = {1.0, 1.0};
  slm_problem* p = nullptr;
  CHECK(slm_problem_create(q, 2, 2, w0, 1, &p) == SLM_ERR_RANK_DEFICIENT);
  CHECK(p == nullptr);
  CHECK(std::strlen(slm_last_error()) > 0);
  CHECK(std::string(slm_status_string(SLM_ERR_RANK_DEFICIENT)) == "RankDeficient");

  const double qa[] = {0.0, 1.0};
  const double wa[] = {3.0};
  REQUIRE(slm_problem_create(qa, 1, 2, wa, 1, &p) == SLM_OK);
  slm_slice* s = nullptr;
  CHECK(slm_slice_create(p, 9, &s) == SLM_ERR_SLICE_EMPTY);
  CHECK(slm_slice_create(p, SLM_N_LIMIT, &s) == SLM_ERR_INVALID_ARGUMENT);
  slm_problem_destroy(p);

  slm_config* c = nullptr;
  CHECK(slm_config_parse(R"({"unknown": 1})", &c) == SLM_ERR_CONFIG);
  CHECK(slm_config_load("/no/such/file.json", &c) == SLM_ERR_IO);
  CHECK(slm_function_from_json("[", nullptr) == SLM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("harness entry points through the C API") {
  slm_config* c = nullptr;
  REQUIRE(slm_config_parse(R"({
    "problem": {"Q": {"rows": 1, "cols": 2, "data": [0, 1]}, "w0": [0], "k": 1},
    "function": {"kind": "CosLinear", "t": [1.0]},
    "schedule": [32, 64],
    "mc": {"n_samples": 5000},
    "verify": {"checks": ["surface_constant"]}})", &c) == SLM_OK);
  slm_sweep* sw = nullptr;
  REQUIRE(slm_run_sweep(c, 2, &sw) == SLM_OK);
  REQUIRE(slm_sweep_row_count(sw) == 2);
  slm_sweep_row row{};
  REQUIRE(slm_sweep_row_get(sw, 1, &row) == SLM_OK);
  CHECK(row.n == 64);
  CHECK(row.limit_value == doctest::Approx(std::exp(-0.5)));
  CHECK(slm_sweep_row_get(sw, 2, &row) == SLM_ERR_INVALID_ARGUMENT);
  char* csv = nullptr;
  REQUIRE(slm_sweep_csv(sw, &csv) == SLM_OK);
  CHECK(std::string(csv).starts_with("N,quad_value"));
  slm_string_free(csv);
  slm_sweep_destroy(sw);

  slm_report* rep = nullptr;
  REQUIRE(slm_run_verify(c, 1, &rep) == SLM_OK);
  CHECK(slm_report_check_count(rep) == 1);
  CHECK(slm_report_all_passed(rep) == 1);
  slm_check chk{};
  REQUIRE(slm_report_check_get(rep, 0, &chk) == SLM_OK);
  CHECK(std::string(chk.name) == "surface_constant");
  slm_report_destroy(rep);

  char* json = nullptr;
  REQUIRE(slm_run_limit_json(c, 1, &json) == SLM_OK);
  CHECK(std::string(json).find("closed_form") != std::string::npos);
  slm_string_free(json);

  char* summary = nullptr;
  REQUIRE(slm_run_counterexample(c, nullptr, nullptr, &summary) == SLM_OK);
  CHECK(std::strlen(summary) > 0);
  slm_string_free(summary);
  slm_config_destroy(c);
}
