#include <doctest.h>

#include "core/error.hpp"
#include "core/numlin.hpp"

#include <cmath>
#include <numbers>

using namespace slicemean;
using numlin::Matrix;
using numlin::Vector;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("kernel of an axis constraint is the other axis") {
  const Matrix k = numlin::kernel_onb(mat({{0, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(k(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(k(1, 0)) < 1e-15);
}

TEST_CASE("kernel of [[3,4]] is +-(0.8,-0.6)") {
  const Matrix k = numlin::kernel_onb(mat({{3, 4}}));
  REQUIRE(k.cols() == 1);
  const double sign = k(0, 0) > 0 ? 1.0 : -1.0;
  CHECK(sign * k(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(sign * k(1, 0) == doctest::Approx(-0.6).epsilon(1e-14));
}

TEST_CASE("full-rank square matrix has an empty kernel") {
  CHECK(numlin::kernel_onb(Matrix::Identity(2, 2)).cols() == 0);
  CHECK(numlin::numerical_rank(Matrix::Identity(2, 2)) == 2);
  CHECK(numlin::numerical_rank(mat({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("least-norm solutions") {
  const Vector a = numlin::least_norm_solution(mat({{0, 1}}), Vector::Constant(1, 2.5));
  CHECK(a(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a(1) == doctest::Approx(2.5));
  // Normal equations by hand: lambda = 5/25, x = lambda (3,4).
  const Vector b = numlin::least_norm_solution(mat({{3, 4}}), Vector::Constant(1, 5.0));
  CHECK(b(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(b(1) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(code_of([] { numlin::least_norm_solution(mat({{1, 2}, {2, 4}}), Vector::Ones(2)); }) ==
        ErrorCode::RankDeficient);
}

TEST_CASE("SPD solve and log-determinant") {
  Vector rhs(2);
  rhs << 1, 2;
  const auto id = numlin::spd_solve_and_logdet(Matrix::Identity(2, 2), rhs);
  CHECK(id.solution(0) == 1.0);
  CHECK(id.solution(1) == 2.0);
  CHECK(id.logdet == 0.0);
  const auto s = numlin::spd_solve_and_logdet(mat({{0.64}}), Vector::Ones(1));
  CHECK(s.solution(0) == doctest::Approx(1.5625).epsilon(1e-15));
  CHECK(s.logdet == doctest::Approx(std::log(0.64)).epsilon(1e-15));
  CHECK(code_of([] { numlin::spd_solve_and_logdet(mat({{0, 1}, {1, 0}}), Vector::Ones(2)); }) ==
        ErrorCode::NotSPD);
}

TEST_CASE("log surface constants") {
  const double pi = std::numbers::pi;
  CHECK(numlin::log_surface_constant(0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(numlin::log_surface_constant(1) == doctest::Approx(std::log(2 * pi)).epsilon(1e-15));
  CHECK(numlin::log_surface_constant(2) == doctest::Approx(std::log(4 * pi)).epsilon(1e-15));
  // |S^3| = 2 pi^2.
  CHECK(numlin::log_surface_constant(3) == doctest::Approx(std::log(2 * pi * pi)).epsilon(1e-14));
  // Recurrence c_{j+2} = 2 pi c_j / (j + 1), far past overflow of c_j itself.
  for (std::size_t j : {10u, 1000u, 1000000u}) {
    const double lhs = numlin::log_surface_constant(j + 2);
    const double rhs = std::log(2 * pi) + numlin::log_surface_constant(j) - std::log(j + 1.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
}
