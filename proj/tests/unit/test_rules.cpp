#include <doctest.h>

#include "core/gauss_rules.hpp"

#include <cmath>

using namespace slicemean::rules;

namespace {

// E[u^j] under the density proportional to u^a (1-u)^b on [0, 1].
double beta_moment(int j, double a, double b) {
  double m = 1.0;
  for (int i = 0; i < j; ++i) m *= (a + 1 + i) / (a + b + 2 + i);
  return m;
}

double rule_moment(const GaussRule& r, int j) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], j);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Jacobi integrates polynomials up to degree 2n-1") {
  for (double a : {-0.5, 0.0, 0.5}) {
    for (double b : {0.0, 0.5, 3.0, 30.0, 2046.0}) {
      const std::size_t n = 12;
      const GaussRule r = gauss_jacobi_unit(n, a, b);
      for (int j = 0; j < 2 * static_cast<int>(n); ++j) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(j);
        const double exact = beta_moment(j, a, b);
        CHECK(std::abs(rule_moment(r, j) - exact) <= 1e-12 * exact + 1e-300);
      }
    }
  }
}

TEST_CASE("large rules for very skewed weights stay finite") {
  const GaussRule r = gauss_jacobi_unit(512, -0.5, 2046.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    REQUIRE(std::isfinite(r.weights[i]));
    REQUIRE(r.weights[i] >= 0.0);
    REQUIRE(r.nodes[i] > 0.0);
    REQUIRE(r.nodes[i] < 1.0);
    total += r.weights[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rule_moment(r, 1) == doctest::Approx(beta_moment(1, -0.5, 2046.0)).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre nodes are symmetric on [0, 1]") {
  const GaussRule r = gauss_legendre_unit(9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(r.nodes[i] + r.nodes[8 - i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.weights[i] == doctest::Approx(r.weights[8 - i]).epsilon(1e-13));
  }
  CHECK(r.nodes[4] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Gauss-Hermite reproduces standard normal moments") {
  const GaussRule r = gauss_hermite_normal(20);
  double double_factorial = 1.0;
  for (int j = 0; j < 20; ++j) {
    if (j > 0) double_factorial *= 2 * j - 1;
    CAPTURE(j);
    CHECK(rule_moment(r, 2 * j) == doctest::Approx(double_factorial).epsilon(1e-10));
    CHECK(std::abs(rule_moment(r, 2 * j + 1)) < 1e-10 * double_factorial);
  }
}

TEST_CASE("cached rules are shared") {
  auto a = cached_jacobi_unit(64, -0.5, 10.0);
  auto b = cached_jacobi_unit(64, -0.5, 10.0);
  CHECK(a.get() == b.get());
  CHECK(cached_hermite_normal(16).get() == cached_hermite_normal(16).get());
}
