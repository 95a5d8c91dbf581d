#pragma once

// Dense linear algebra and special functions shared by every module.
// Matrices here are small (widths of a few dozen columns, Gram matrices at
// most 4x4), so everything goes through Eigen's dense SVD/LLT.

#include <Eigen/Dense>

#include <cstddef>

namespace slicemean::numlin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative rank cutoff: singular values below tol * sigma_max count as zero.
inline constexpr double kDefaultRankTol = 1e-10;

// Builds a matrix from row-major entries. Throws InvalidArgument on a size
// mismatch or a non-finite entry.
Matrix from_row_major(std::size_t rows, std::size_t cols, const double* entries);

std::size_t numerical_rank(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis of the null space of `m`, one basis vector per column.
/// The result has m.cols() - rank columns and may be empty. Sign and
/// ordering of the columns are arbitrary; callers only consume basis
/// invariant quantities such as K * K^T restricted to a block.
Matrix kernel_onb(const Matrix& m, double tol = kDefaultRankTol);

/// Minimal Euclidean norm solution of m * x = w, i.e. m^T (m m^T)^{-1} w.
/// Throws RankDeficient when m does not have full row rank at `tol`.
Vector least_norm_solution(const Matrix& m, const Vector& w,
                           double tol = kDefaultRankTol);

struct SpdSolve {
  Vector solution;
  double logdet = 0.0;
};

/// Solves g * x = rhs through a Cholesky factorization and returns ln det g
/// alongside. Throws NotSPD if g is not symmetric positive definite.
SpdSolve spd_solve_and_logdet(const Matrix& g, const Vector& rhs);

/// ln c_j where c_j = 2 pi^{(j+1)/2} / Gamma((j+1)/2) is the surface measure
/// of the unit j-sphere. Stays finite for j far beyond the overflow point of
/// c_j itself (around j = 340).
double log_surface_constant(std::size_t j);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

}  // namespace slicemean::numlin
