#include "affine_model.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slicemean {

namespace {

std::size_t effective_support(const numlin::Matrix& q) {
  Eigen::Index s = q.cols();
  while (s > 1 && q.col(s - 1).isZero(0.0)) --s;
  return static_cast<std::size_t>(s);
}

// Rank of the first-k projection restricted to ker of the given compact
// constraint block.
std::size_t projection_rank(const numlin::Matrix& q_block, std::size_t k, double tol) {
  const numlin::Matrix kernel = numlin::kernel_onb(q_block, tol);
  if (kernel.cols() == 0) return 0;
  return numlin::numerical_rank(kernel.topRows(static_cast<Eigen::Index>(k)), tol);
}

}  // namespace

ValidatedProblem validate(AffineProblem problem, const ValidateOptions& options) {
  const auto m = static_cast<std::size_t>(problem.q.rows());
  if (m == 0 || problem.q.cols() == 0) fail(ErrorCode::InvalidArgument, "Q must be non-empty");
  if (problem.k == 0) fail(ErrorCode::InvalidArgument, "cylinder dimension k must be >= 1");
  if (problem.w0.size() != problem.q.rows()) {
    fail(ErrorCode::InvalidArgument, "w0 length must equal the number of rows of Q");
  }
  if (!problem.q.allFinite() || !problem.w0.allFinite()) {
    fail(ErrorCode::InvalidArgument, "Q and w0 must be finite");
  }
  if (!(options.rank_tol > 0.0)) fail(ErrorCode::InvalidArgument, "rank tolerance must be > 0");

  ValidatedProblem vp;
  vp.rank_tol_ = options.rank_tol;
  vp.checks_.support_width = effective_support(problem.q);
  const std::size_t s = vp.checks_.support_width;
  const std::size_t k = problem.k;
  vp.width_ = std::max(s, k);

  vp.q_wide_ = numlin::Matrix::Zero(problem.q.rows(), static_cast<Eigen::Index>(vp.width_));
  vp.q_wide_.leftCols(static_cast<Eigen::Index>(s)) = problem.q.leftCols(static_cast<Eigen::Index>(s));

  vp.checks_.constraint_rank = numlin::numerical_rank(vp.q_wide_, options.rank_tol);
  if (vp.checks_.constraint_rank < m) {
    fail(ErrorCode::RankDeficient, "Q has rank " + std::to_string(vp.checks_.constraint_rank) +
                                       ", expected " + std::to_string(m));
  }
  vp.checks_.projection_rank = projection_rank(vp.q_wide_, k, options.rank_tol);
  if (vp.checks_.projection_rank < k) {
    fail(ErrorCode::ProjectionNotOnto,
         "projection of ker Q onto the first " + std::to_string(k) +
             " coordinates has rank " + std::to_string(vp.checks_.projection_rank));
  }
  vp.z0_ = numlin::least_norm_solution(vp.q_wide_, problem.w0, options.rank_tol);
  vp.problem_ = std::move(problem);

  const std::size_t floor_n = k + m + 2;
  std::size_t n_min = 0;
  for (std::size_t n = floor_n; n < vp.width_ && n_min == 0; ++n) {
    const numlin::Matrix block = truncated_constraints(vp, n);
    if (numlin::numerical_rank(block, options.rank_tol) < m) continue;
    if (projection_rank(block, k, options.rank_tol) < k) continue;
    const numlin::Vector z = numlin::least_norm_solution(block, vp.problem_.w0, options.rank_tol);
    if (static_cast<double>(n) > z.squaredNorm()) n_min = n;
  }
  if (n_min == 0) {
    // From width() on, z0_N = z0 and both rank conditions hold.
    const double r2 = vp.z0_.squaredNorm();
    const double need = std::floor(r2) + 1.0;
    if (need > static_cast<double>(options.n_cap)) {
      fail(ErrorCode::Infeasible, "no N <= " + std::to_string(options.n_cap) +
                                      " gives a non-empty slice (|z0|^2 = " + std::to_string(r2) + ")");
    }
    n_min = std::max({floor_n, vp.width_, static_cast<std::size_t>(need)});
  }
  if (n_min > options.n_cap) {
    fail(ErrorCode::Infeasible, "n_min = " + std::to_string(n_min) + " exceeds the cap " +
                                    std::to_string(options.n_cap));
  }
  vp.n_min_ = n_min;
  return vp;
}

numlin::Matrix truncated_constraints(const ValidatedProblem& vp, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "truncation level must be >= 1");
  const std::size_t w = std::min(n, vp.width());
  return vp.q_wide().leftCols(static_cast<Eigen::Index>(w));
}

numlin::Vector truncated_closest_point(const ValidatedProblem& vp, std::size_t n) {
  if (n >= vp.width()) return vp.z0();
  return numlin::least_norm_solution(truncated_constraints(vp, n), vp.problem().w0, vp.rank_tol());
}

numlin::Vector closest_point(const ValidatedProblem& vp, std::size_t n) {
  if (!is_limit(n) && n < vp.n_min()) {
    fail(ErrorCode::BelowMinN,
         "N = " + std::to_string(n) + " is below n_min = " + std::to_string(vp.n_min()));
  }
  return truncated_closest_point(vp, n);
}

std::size_t min_valid_n(const ValidatedProblem& vp) { return vp.n_min(); }

}  // namespace slicemean
