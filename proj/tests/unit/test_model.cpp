#include <doctest.h>

#include "core/affine_model.hpp"
#include "core/error.hpp"
#include "core/projections.hpp"
#include "core/slice_geometry.hpp"
#include "harness/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace slicemean;
using harness::fixture_a;
using harness::fixture_b;
using numlin::Matrix;
using numlin::Vector;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

AffineProblem make(Matrix q, std::vector<double> w, std::size_t k) {
  AffineProblem p;
  p.q = std::move(q);
  p.w0 = Eigen::Map<Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  p.k = k;
  return p;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("fixture A validates with z0 = (0, c)") {
  for (double c : {0.0, 3.0}) {
    const ValidatedProblem vp = validate(fixture_a(c));
    REQUIRE(vp.z0().size() == 2);
    CHECK(vp.z0()(0) == 0.0);
    CHECK(vp.z0()(1) == doctest::Approx(c));
    CHECK(vp.m() == 1);
    CHECK(vp.width() == 2);
  }
}

TEST_CASE("validation errors") {
  Matrix onto(1, 2);
  onto << 1, 0;
  CHECK(code_of([&] { validate(make(onto, {1.0}, 1)); }) == ErrorCode::ProjectionNotOnto);
  Matrix dependent(2, 2);
  dependent << 1, 2, 2, 4;
  CHECK(code_of([&] { validate(make(dependent, {1.0, 1.0}, 1)); }) == ErrorCode::RankDeficient);
  CHECK(code_of([&] { validate(make(dependent, {1.0, 2.0}, 1)); }) == ErrorCode::RankDeficient);
}

TEST_CASE("minimum admissible N") {
  CHECK(validate(fixture_a(0.0)).n_min() == 4);
  CHECK(validate(fixture_a(3.0)).n_min() == 10);
  CHECK(validate(fixture_b()).n_min() == 4);
  CHECK(min_valid_n(validate(fixture_b())) == 4);
  // N > |z0|^2 binds when |z0|^2 is large.
  CHECK(validate(fixture_a(10.0)).n_min() == 101);
}

TEST_CASE("closest points") {
  const ValidatedProblem a = validate(fixture_a(2.0));
  const Vector za = closest_point(a, 100);
  REQUIRE(za.size() == 2);
  CHECK(za(0) == 0.0);
  CHECK(za(1) == doctest::Approx(2.0));
  const ValidatedProblem b = validate(fixture_b());
  const Vector zb = closest_point(b, kLimitN);
  CHECK(zb(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(zb(1) == doctest::Approx(0.8).epsilon(1e-14));
  const Vector z1 = truncated_closest_point(b, 1);
  REQUIRE(z1.size() == 1);
  CHECK(z1(0) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(code_of([&] { closest_point(b, 3); }) == ErrorCode::BelowMinN);
}

TEST_CASE("trailing zero columns do not change the problem") {
  AffineProblem padded = fixture_b();
  Matrix q = Matrix::Zero(1, 7);
  q.leftCols(2) = padded.q;
  padded.q = q;
  const ValidatedProblem vp = validate(padded);
  CHECK(vp.support() == 2);
  CHECK(vp.width() == 2);
  CHECK(vp.n_min() == 4);
  CHECK(vp.z0().size() == 2);
}

TEST_CASE("projection data for the fixtures") {
  const ValidatedProblem a = validate(fixture_a(0.0));
  for (std::size_t n : {std::size_t{4}, std::size_t{50}, kLimitN}) {
    const ProjectionData pd = build_projection(a, n);
    CHECK(pd.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(pd.log_det_l0) < 1e-15);
  }
  const ValidatedProblem b = validate(fixture_b());
  const ProjectionData inf = build_projection(b, kLimitN);
  CHECK(inf.gram(0, 0) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(inf.log_det_l0 == doctest::Approx(std::log(0.8)).epsilon(1e-14));
  const ProjectionData two = build_projection(b, 2);
  CHECK(two.gram(0, 0) == doctest::Approx(inf.gram(0, 0)).epsilon(1e-15));
  CHECK(preimage_norm_sq(inf, vec({1.0})) == doctest::Approx(1.5625).epsilon(1e-14));
  CHECK(preimage_norm_sq(inf, vec({0.0})) == 0.0);
  const Vector pushed = push_coordinates(inf, vec({0.6}), vec({1.0}));
  CHECK(pushed(0) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(push_coordinates(build_projection(a, kLimitN), vec({0.0}), vec({2.0}))(0) == doctest::Approx(2.0));
}

TEST_CASE("kernel projection norm by hand projection") {
  CHECK(kernel_projection_norm_sq(validate(fixture_a(1.0)), vec({1.0})) == doctest::Approx(1.0));
  // P0 e1 = e1 - (3/25)(3, 4) = (16/25, -12/25), squared norm 400/625.
  CHECK(kernel_projection_norm_sq(validate(fixture_b()), vec({1.0})) ==
        doctest::Approx(400.0 / 625.0).epsilon(1e-14));
  CHECK(kernel_projection_norm_sq(validate(fixture_b()), vec({0.0})) == 0.0);
}

TEST_CASE("push then preimage recovers |y|^2") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 10; ++i) {
    const ValidatedProblem vp = validate(harness::random_problem(rng, 12, 1 + i % 2, 1 + i % 3));
    const ProjectionData pd = build_projection(vp, vp.n_min());
    Vector y(static_cast<Eigen::Index>(vp.k()));
    for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = normal(rng);
    const Vector x0 = Vector::Zero(y.size());
    CHECK(preimage_norm_sq(pd, push_coordinates(pd, x0, y)) == doctest::Approx(y.squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("slice geometry") {
  const ValidatedProblem a3 = validate(fixture_a(3.0));
  CHECK(build_slice(a3, 10).a_z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(code_of([&] { build_slice(a3, 9); }) == ErrorCode::SliceEmpty);
  CHECK(code_of([&] { build_slice(a3, 3); }) == ErrorCode::BelowMinN);
  const SliceGeometry b = build_slice(validate(fixture_b()), 100);
  CHECK(b.a_z == doctest::Approx(std::sqrt(99.0)).epsilon(1e-14));
  CHECK(b.exponent == doctest::Approx(48.0));
  CHECK(weight(b, 0.0) == 1.0);
  CHECK(weight(b, b.a_z) == 0.0);
  CHECK(weight(b, 2.0 * b.a_z) == 0.0);
}

TEST_CASE("weight tends to exp(-r^2/2)") {
  const SliceGeometry g = build_slice(validate(fixture_a(0.0)), 1'000'000);
  CHECK(std::abs(weight(g, 1.0) - std::exp(-0.5)) < 1e-5);
}

TEST_CASE("normalizing prefactor") {
  CHECK(log_norm_prefactor(100, 0, 1, 5.0) == 0.0);
  // Direct formula with Gamma at small N: c_j = 2 pi^{(j+1)/2} / Gamma((j+1)/2).
  auto c = [](double j) { return 2.0 * std::pow(std::numbers::pi, (j + 1) / 2) / std::tgamma((j + 1) / 2); };
  const SliceGeometry g = build_slice(validate(fixture_b()), 20);
  const double expected = c(20 - 1 - 1 - 1) / c(20 - 1 - 1) / g.a_z;
  CHECK(std::exp(log_norm_prefactor(g)) == doctest::Approx(expected).epsilon(1e-13));
}
