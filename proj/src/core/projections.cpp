#include "projections.hpp"

#include "error.hpp"

#include <string>

namespace slicemean {

ProjectionData projection_from_kernel(std::size_t n, std::size_t k, numlin::Matrix kernel_basis) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (kernel_basis.rows() < kk || kernel_basis.cols() < kk) {
    fail(ErrorCode::NotSPD, "kernel of Q_N is too small to project onto R^" + std::to_string(k));
  }
  ProjectionData pd;
  pd.n = n;
  pd.width = static_cast<std::size_t>(kernel_basis.rows());
  pd.top_rows = kernel_basis.topRows(kk);
  pd.kernel_basis = std::move(kernel_basis);
  pd.gram = pd.top_rows * pd.top_rows.transpose();
  pd.gram = 0.5 * (pd.gram + pd.gram.transpose());
  if (numlin::numerical_rank(pd.top_rows) < k) {
    fail(ErrorCode::NotSPD, "projection of ker Q_N is not onto R^" + std::to_string(k));
  }
  const auto solved = numlin::spd_solve_and_logdet(pd.gram, numlin::Vector::Zero(kk));
  pd.log_det_l0 = 0.5 * solved.logdet;
  Eigen::LLT<numlin::Matrix> llt(pd.gram);
  pd.chol = llt.matrixL();
  return pd;
}

ProjectionData build_projection(const ValidatedProblem& vp, std::size_t n) {
  const numlin::Matrix block = truncated_constraints(vp, n);
  return projection_from_kernel(n, vp.k(), numlin::kernel_onb(block, vp.rank_tol()));
}

double preimage_norm_sq(const ProjectionData& pd, const numlin::Vector& x) {
  if (x.size() != pd.gram.rows()) fail(ErrorCode::InvalidArgument, "preimage_norm_sq: wrong length");
  return numlin::spd_solve_and_logdet(pd.gram, x).solution.dot(x);
}

numlin::Vector push_coordinates(const ProjectionData& pd, const numlin::Vector& x0,
                                const numlin::Vector& y) {
  if (x0.size() != pd.chol.rows() || y.size() != pd.chol.cols()) {
    fail(ErrorCode::InvalidArgument, "push_coordinates: wrong length");
  }
  return x0 + pd.chol * y;
}

double kernel_projection_norm_sq(const ValidatedProblem& vp, const numlin::Vector& t) {
  const auto k = static_cast<Eigen::Index>(vp.k());
  if (t.size() != k) fail(ErrorCode::InvalidArgument, "kernel_projection_norm_sq: wrong length");
  const numlin::Matrix& q = vp.q_wide();
  numlin::Vector t_hat = numlin::Vector::Zero(q.cols());
  t_hat.head(k) = t;
  const numlin::Vector qt = q * t_hat;
  const numlin::Matrix qqt = q * q.transpose();
  const numlin::Vector lambda = qqt.ldlt().solve(qt);
  return t_hat.squaredNorm() - qt.dot(lambda);
}

}  // namespace slicemean
