#include "numlin.hpp"

#include "error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slicemean::numlin {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

std::size_t rank_from_singular_values(const Vector& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol * sv(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

Matrix from_row_major(std::size_t rows, std::size_t cols, const double* entries) {
  if (rows == 0 || cols == 0) fail(ErrorCode::InvalidArgument, "matrix must be non-empty");
  if (entries == nullptr) fail(ErrorCode::InvalidArgument, "matrix entries missing");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = entries[i * cols + j];
      if (!std::isfinite(v)) {
        fail(ErrorCode::InvalidArgument,
             "matrix entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return m;
}

std::size_t numerical_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Matrix kernel_onb(const Matrix& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  const auto svd = full_svd(m);
  const auto r = static_cast<Eigen::Index>(rank_from_singular_values(svd.singularValues(), tol));
  return svd.matrixV().rightCols(n - r);
}

Vector least_norm_solution(const Matrix& m, const Vector& w, double tol) {
  if (w.size() != m.rows()) {
    fail(ErrorCode::InvalidArgument, "right-hand side length does not match row count");
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const std::size_t r = rank_from_singular_values(svd.singularValues(), tol);
  if (r < static_cast<std::size_t>(m.rows())) {
    fail(ErrorCode::RankDeficient, "constraint matrix has rank " + std::to_string(r) +
                                       " < " + std::to_string(m.rows()) + " rows");
  }
  const Vector& sv = svd.singularValues();
  Vector coeffs = svd.matrixU().transpose() * w;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) /= sv(i);
  return svd.matrixV() * coeffs;
}

SpdSolve spd_solve_and_logdet(const Matrix& g, const Vector& rhs) {
  if (g.rows() != g.cols() || g.rows() != rhs.size()) {
    fail(ErrorCode::InvalidArgument, "spd_solve_and_logdet: dimension mismatch");
  }
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    fail(ErrorCode::NotSPD, "matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotSPD, "matrix is not positive definite");
  const Matrix& l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) fail(ErrorCode::NotSPD, "non-positive Cholesky pivot");
    logdet += 2.0 * std::log(l(i, i));
  }
  return {llt.solve(rhs), logdet};
}

double log_surface_constant(std::size_t j) {
  const double half = 0.5 * (static_cast<double>(j) + 1.0);
  return std::numbers::ln2 + half * std::log(std::numbers::pi) - std::lgamma(half);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace slicemean::numlin
