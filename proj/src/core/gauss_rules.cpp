#include "gauss_rules.hpp"

#include "error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace slicemean::rules {

namespace {

// Monic recurrence p_{j+1} = (x - alpha_j) p_j - beta_j p_{j-1}, stored for
// j = 0..n so that p_n itself can be evaluated. beta_0 is unused because
// the measure is normalized.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
};

Recurrence jacobi_unit_recurrence(std::size_t n, double a, double b) {
  // In [-1, 1] terms the weight is (1-t)^al (1+t)^be with al = b, be = a.
  const double al = b;
  const double be = a;
  const double sigma = al + be;
  Recurrence r;
  r.alpha.resize(n + 1);
  r.beta.assign(n + 1, 0.0);
  r.alpha[0] = (be + 1.0) / (sigma + 2.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double jj = static_cast<double>(j);
    const double s = 2.0 * jj + sigma;
    // (alpha_t + 1)/2 with the cancellation removed analytically.
    r.alpha[j] = (4.0 * jj * jj + 4.0 * jj * (sigma + 1.0) + 2.0 * sigma * (1.0 + be)) /
                 (2.0 * s * (s + 2.0));
    r.beta[j] = j == 1
                    ? (1.0 + al) * (1.0 + be) / (s * s * (s + 1.0))
                    : jj * (jj + al) * (jj + be) * (jj + sigma) / (s * s * (s + 1.0) * (s - 1.0));
  }
  return r;
}

Recurrence hermite_recurrence(std::size_t n) {
  Recurrence r;
  r.alpha.assign(n + 1, 0.0);
  r.beta.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) r.beta[j] = static_cast<double>(j);
  return r;
}

// Values are stored divided by exp(log_scale): far out in the tail of a
// very skewed weight the orthonormal polynomials overflow long before the
// Christoffel weight stops being representable as zero.
struct PolyEval {
  double pn = 0.0;               // orthonormal p_n(x)
  double dpn = 0.0;              // p_n'(x)
  double christoffel_sum = 0.0;  // sum_{j<n} p_j(x)^2
  double log_scale = 0.0;

  double weight() const { return std::exp(-2.0 * log_scale) / christoffel_sum; }
};

PolyEval eval_orthonormal(const Recurrence& r, std::size_t n, double x) {
  double p_prev = 0.0, p = 1.0;
  double d_prev = 0.0, d = 0.0;
  double sum = 0.0;
  double log_scale = 0.0;
  constexpr double kBig = 1e100;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(p) > kBig || std::abs(d) > kBig) {
      p /= kBig;
      p_prev /= kBig;
      d /= kBig;
      d_prev /= kBig;
      sum /= kBig * kBig;
      log_scale += std::log(kBig);
    }
    sum += p * p;
    const double sb = j == 0 ? 0.0 : std::sqrt(r.beta[j]);
    const double sb_next = std::sqrt(r.beta[j + 1]);
    const double p_next = ((x - r.alpha[j]) * p - sb * p_prev) / sb_next;
    const double d_next = ((x - r.alpha[j]) * d + p - sb * d_prev) / sb_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d, sum, log_scale};
}

GaussRule solve_rule(const Recurrence& r, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "Gauss rule needs at least one node");
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(nn);
  Eigen::VectorXd sub(nn - 1);
  for (Eigen::Index j = 0; j < nn; ++j) diag(j) = r.alpha[static_cast<std::size_t>(j)];
  for (Eigen::Index j = 1; j < nn; ++j) sub(j - 1) = std::sqrt(r.beta[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::NonFinite, "eigenvalue iteration for a Gauss rule did not converge");
  }
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    double x = x0;
    for (int it = 0; it < 2; ++it) {
      const PolyEval e = eval_orthonormal(r, n, x);
      const double step = e.pn / e.dpn;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    // A polish step that wanders off means the eigenvalue was already as
    // good as Newton can make it.
    if (!std::isfinite(x) || std::abs(x - x0) > 1e-8 * (1.0 + std::abs(x0))) x = x0;
    rule.nodes[i] = x;
    rule.weights[i] = eval_orthonormal(r, n, x).weight();
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

GaussRule gauss_jacobi_unit(std::size_t n, double a, double b) {
  if (!(a > -1.0) || !(b > -1.0)) {
    fail(ErrorCode::InvalidArgument, "Jacobi exponents must exceed -1");
  }
  return solve_rule(jacobi_unit_recurrence(n, a, b), n);
}

GaussRule gauss_legendre_unit(std::size_t n) { return gauss_jacobi_unit(n, 0.0, 0.0); }

GaussRule gauss_hermite_normal(std::size_t n) { return solve_rule(hermite_recurrence(n), n); }

std::shared_ptr<const GaussRule> cached_jacobi_unit(std::size_t n, double a, double b) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, double, double>, std::shared_ptr<const GaussRule>> cache;
  const auto key = std::make_tuple(n, a, b);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(gauss_jacobi_unit(n, a, b));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(rule)).first->second;
}

std::shared_ptr<const GaussRule> cached_hermite_normal(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const GaussRule>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(gauss_hermite_normal(n));
  std::lock_guard lock(mu);
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace slicemean::rules
