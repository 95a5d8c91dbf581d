#include "harness/problems.hpp"

namespace slicemean::harness {

AffineProblem fixture_a(double c) {
  AffineProblem p;
  p.q = numlin::Matrix(1, 2);
  p.q << 0.0, 1.0;
  p.w0 = numlin::Vector::Constant(1, c);
  p.k = 1;
  return p;
}

AffineProblem fixture_b() {
  AffineProblem p;
  p.q = numlin::Matrix(1, 2);
  p.q << 3.0, 4.0;
  p.w0 = numlin::Vector::Constant(1, 5.0);
  p.k = 1;
  return p;
}

AffineProblem random_problem(std::mt19937_64& rng, std::size_t s, std::size_t m, std::size_t k) {
  std::normal_distribution<double> normal;
  AffineProblem p;
  p.q = numlin::Matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s));
  for (Eigen::Index i = 0; i < p.q.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.q.cols(); ++j) p.q(i, j) = normal(rng);
  }
  p.w0 = numlin::Vector(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < p.w0.size(); ++i) p.w0(i) = normal(rng);
  p.k = k;
  return p;
}

numlin::Matrix random_orthogonal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  numlin::Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<numlin::Matrix> qr(a);
  numlin::Matrix q = qr.householderQ();
  const numlin::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace slicemean::harness
