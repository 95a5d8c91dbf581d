#include <doctest.h>

#include "core/error.hpp"
#include "core/integrators.hpp"
#include "harness/problems.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace slicemean;
using harness::fixture_a;
using harness::fixture_b;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

// Q = e_{k+1}^T, w0 = 0: the slice is the centred sphere of radius sqrt(N)
// in the N - 1 free coordinates.
AffineProblem coordinate_problem(std::size_t k) {
  AffineProblem p;
  p.k = k;
  p.q = numlin::Matrix::Zero(1, static_cast<Eigen::Index>(k + 1));
  p.q(0, static_cast<Eigen::Index>(k)) = 1.0;
  p.w0 = numlin::Vector::Zero(1);
  return p;
}

// E cos<t, x> for x uniform on the radius-a sphere in R^d:
// Gamma(d/2) (2/(a s))^{d/2-1} J_{d/2-1}(a s), s = |t|.
double sphere_cos_mean(double d, double a, double s) {
  const double nu = d / 2.0 - 1.0;
  const double log_v = std::lgamma(d / 2.0) + nu * std::log(2.0 / (a * s));
  return std::exp(log_v) * boost::math::cyl_bessel_j(nu, a * s);
}

}  // namespace

TEST_CASE("slice mean of cos matches the spherical Bessel formula for k = 1, 2, 3") {
  for (std::size_t k = 1; k <= 3; ++k) {
    const ValidatedProblem vp = validate(coordinate_problem(k));
    std::vector<double> t(k, 0.0);
    t[0] = 0.6;
    if (k > 1) t[1] = -0.8;
    if (k > 2) t[2] = 0.5;
    double s = 0.0;
    for (double x : t) s += x * x;
    s = std::sqrt(s);
    for (std::size_t n : {16, 64, 256}) {
      CAPTURE(k);
      CAPTURE(n);
      const IntegralResult r = slice_mean_quadrature(build_slice(vp, n), TestFunction::cos_linear(t));
      const double exact = sphere_cos_mean(static_cast<double>(n - 1), std::sqrt(static_cast<double>(n)), s);
      CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
      CHECK(r.err_estimate < 1e-8);
    }
  }
}

TEST_CASE("coordinate second moments: a^2 / (N - 1)") {
  for (std::size_t k = 1; k <= 3; ++k) {
    const ValidatedProblem vp = validate(coordinate_problem(k));
    std::vector<unsigned> alpha(k, 0);
    alpha[k - 1] = 2;
    for (std::size_t n : {8, 100, 4096}) {
      const IntegralResult r = slice_mean_quadrature(build_slice(vp, n), TestFunction::monomial(alpha));
      CHECK(r.value == doctest::Approx(static_cast<double>(n) / static_cast<double>(n - 1)).epsilon(1e-10));
    }
  }
  const ValidatedProblem a3 = validate(fixture_a(3.0));
  CHECK(slice_mean_quadrature(build_slice(a3, 100), TestFunction::monomial({2})).value ==
        doctest::Approx(91.0 / 99.0).epsilon(1e-12));
}

TEST_CASE("indicator and cutoff against incomplete beta probabilities") {
  // x1^2 / a^2 ~ Beta(1/2, (N - 2)/2) on fixture A.
  const ValidatedProblem a3 = validate(fixture_a(3.0));
  for (std::size_t n : {12, 16, 64, 1024, 4096}) {
    const SliceGeometry g = build_slice(a3, n);
    const double a2 = g.a_z * g.a_z;
    const double b = 0.5 * (static_cast<double>(n) - 2.0);
    const double p_inside = a2 <= 1.0 ? 1.0 : boost::math::ibeta(0.5, b, 1.0 / a2);
    const IntegralResult ind = slice_mean_quadrature(g, TestFunction::indicator_ball({0.0}, 1.0));
    CAPTURE(n);
    CHECK(std::abs(ind.value - p_inside) < 1e-9);
    // E min(x^2, 2) = a^2 E[u; u < c] + 2 P(u >= c), c = 2 / a^2.
    const double c = std::min(1.0, 2.0 / a2);
    const double head = 0.5 / (0.5 + b) * boost::math::ibeta(1.5, b, c);
    const double exact = a2 * head + 2.0 * (1.0 - boost::math::ibeta(0.5, b, c));
    const IntegralResult cut =
        slice_mean_quadrature(g, TestFunction::bounded_cutoff(TestFunction::monomial({2}), 2.0));
    CHECK(std::abs(cut.value - exact) < 1e-9);
  }
}

TEST_CASE("exact center identity on fixture B") {
  const ValidatedProblem b = validate(fixture_b());
  for (std::size_t n : {4, 5, 17, 333}) {
    const SliceGeometry g = build_slice(b, n);
    CHECK(slice_mean_quadrature(g, TestFunction::monomial({1})).value == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(slice_mean_quadrature(g, TestFunction::monomial({2})).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(slice_mean_quadrature(g, TestFunction::monomial({0})).value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("quadrature rejects unsupported input") {
  std::mt19937_64 rng(5);
  const ValidatedProblem k4 = validate(harness::random_problem(rng, 10, 1, 4));
  const SliceGeometry g4 = build_slice(k4, 32);
  CHECK(code_of([&] { slice_mean_quadrature(g4, TestFunction::cos_linear({1, 1, 1, 1})); }) ==
        ErrorCode::UnsupportedDimension);
  const SliceGeometry b = build_slice(validate(fixture_b()), 16);
  CHECK(code_of([&] { slice_mean_quadrature(b, TestFunction::cos_linear({1, 1})); }) ==
        ErrorCode::InvalidArgument);
  QuadConfig bad;
  bad.radial_nodes = 2;
  CHECK(code_of([&] { slice_mean_quadrature(b, TestFunction::cos_linear({1}), bad); }) ==
        ErrorCode::InvalidArgument);
  // Monte Carlo still covers k = 4.
  const IntegralResult mc = slice_mean_mc(g4, TestFunction::cos_linear({1, 1, 1, 1}), McConfig{20'000, 1, 4096});
  CHECK(std::isfinite(mc.value));
}

TEST_CASE("Monte Carlo slice means") {
  const SliceGeometry b = build_slice(validate(fixture_b()), 64);
  const IntegralResult one = slice_mean_mc(b, TestFunction::monomial({0}), McConfig{10'000, 3, 1000});
  CHECK(one.value == 1.0);
  CHECK(one.err_estimate == 0.0);
  const IntegralResult x = slice_mean_mc(b, TestFunction::monomial({1}), McConfig{100'000, 3, 8192});
  CHECK(std::abs(x.value - 0.6) < 4.0 * x.err_estimate);
  const SliceGeometry a3 = build_slice(validate(fixture_a(3.0)), 100);
  const auto sq = TestFunction::monomial({2});
  const IntegralResult mc = slice_mean_mc(a3, sq, McConfig{100'000, 4, 8192});
  CHECK(std::abs(mc.value - slice_mean_quadrature(a3, sq).value) < 4.0 * mc.err_estimate);
}

TEST_CASE("Monte Carlo is independent of the thread count") {
  const SliceGeometry b = build_slice(validate(fixture_b()), 300);
  const auto phi = TestFunction::cos_linear({1.3});
  const McConfig cfg{50'000, 99, 3000};
  const IntegralResult r1 = slice_mean_mc(b, phi, cfg, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const IntegralResult rt = slice_mean_mc(b, phi, cfg, t);
    CHECK(rt.value == r1.value);
    CHECK(rt.err_estimate == r1.err_estimate);
  }
}

TEST_CASE("quadrature and Monte Carlo agree for k = 2, 3 general problems") {
  std::mt19937_64 rng(8);
  for (std::size_t k : {2, 3}) {
    const ValidatedProblem vp = validate(harness::random_problem(rng, 7, 2, k));
    const SliceGeometry g = build_slice(vp, std::max<std::size_t>(vp.n_min(), 40));
    std::vector<double> t(k, 0.7);
    for (const TestFunction& phi : {TestFunction::cos_linear(t), TestFunction::indicator_ball(std::vector<double>(k, 0.0), 1.2)}) {
      const IntegralResult q = slice_mean_quadrature(g, phi);
      const IntegralResult s = slice_mean_mc(g, phi, McConfig{200'000, 17, 1 << 14});
      CAPTURE(k);
      CAPTURE(phi.kind_name());
      CHECK(std::abs(q.value - s.value) < 4.0 * std::hypot(q.err_estimate, s.err_estimate));
    }
  }
}

TEST_CASE("Gaussian limit by Gauss-Hermite") {
  const ValidatedProblem b = validate(fixture_b());
  CHECK(gaussian_limit(b, TestFunction::monomial({1}), GaussHermite{}).value == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(gaussian_limit(b, TestFunction::monomial({2}), GaussHermite{}).value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gaussian_limit(b, TestFunction::cos_linear({1.0}), GaussHermite{}).value ==
        doctest::Approx(std::exp(-0.32) * std::cos(0.6)).epsilon(1e-12));
  std::mt19937_64 rng(2);
  const ValidatedProblem k3 = validate(harness::random_problem(rng, 9, 1, 3));
  const auto phi = TestFunction::cos_linear({0.3, -0.4, 0.2});
  CHECK(gaussian_limit(k3, phi, GaussHermite{24}).value == doctest::Approx(*known_limit(phi, k3)).epsilon(1e-12));
  CHECK(code_of([&] { gaussian_limit(validate(fixture_a(0.0)), TestFunction::counterexample_g(), GaussHermite{}); }) ==
        ErrorCode::NotAdmissible);
}

TEST_CASE("Gaussian limit by Monte Carlo") {
  const ValidatedProblem b = validate(fixture_b());
  const auto phi = TestFunction::cos_linear({1.0});
  const IntegralResult r = gaussian_limit(b, phi, MonteCarlo{McConfig{200'000, 5, 1 << 14}});
  CHECK(std::abs(r.value - *known_limit(phi, b)) < 4.0 * r.err_estimate);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("divergence detector") {
  std::vector<Checkpoint> steady = {{1.0, 0.1}, {1.02, 0.07}, {0.99, 0.05}, {1.0, 0.035}};
  CHECK_FALSE(detect_divergence(steady));
  std::vector<Checkpoint> runaway = {{1.0, 0.01}, {1.5, 0.02}, {3.0, 0.05}};
  CHECK(detect_divergence(runaway));
  // A single jump is not enough.
  std::vector<Checkpoint> one_jump = {{1.0, 0.01}, {1.5, 0.02}, {1.5, 0.02}};
  CHECK_FALSE(detect_divergence(one_jump));
}

TEST_CASE("counterexample probe against the arctan antiderivative") {
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  CHECK(counterexample_probe(0.0, 1.0) == doctest::Approx(std::numbers::pi / (2.0 * std::sqrt(2.0 * std::numbers::pi))).epsilon(1e-12));
  for (double r : {10.0, 100.0, 1000.0}) {
    CHECK(counterexample_probe(0.0, r) == doctest::Approx(2.0 * norm * std::atan(r)).epsilon(1e-12));
  }
}

TEST_CASE("shifted counterexample grows") {
  // Composite Simpson on a fine grid as an independent oracle.
  auto simpson = [](double z, double r) {
    const int n = 200'000;
    const double h = 2.0 * r / n;
    auto f = [z](double x) { return std::exp(z * x - 0.5 * z * z) / (1.0 + x * x) / std::sqrt(2.0 * std::numbers::pi); };
    double s = f(-r) + f(r);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-r + i * h);
    return s * h / 3.0;
  };
  const double v10 = counterexample_probe(0.3, 10.0);
  const double v20 = counterexample_probe(0.3, 20.0);
  const double v30 = counterexample_probe(0.3, 30.0);
  CHECK(v10 == doctest::Approx(simpson(0.3, 10.0)).epsilon(1e-9));
  CHECK(v30 == doctest::Approx(simpson(0.3, 30.0)).epsilon(1e-9));
  CHECK(v10 < v20);
  CHECK(v20 < v30);
  CHECK(v30 / v10 > 10.0);
}
