#pragma once

// The affine subspace A = Q^{-1}(w0) of l^2, represented by finitely
// supported constraint rows, and its closest points to the origin.

#include "numlin.hpp"

#include <cstddef>
#include <limits>

namespace slicemean {

// Truncation level standing for N = infinity.
inline constexpr std::size_t kLimitN = std::numeric_limits<std::size_t>::max();

inline bool is_limit(std::size_t n) { return n == kLimitN; }

struct AffineProblem {
  numlin::Matrix q;   // m x s; columns beyond s are implicitly zero
  numlin::Vector w0;  // length m
  std::size_t k = 1;  // number of leading coordinates the integrand sees
};

struct ValidateOptions {
  double rank_tol = numlin::kDefaultRankTol;
  std::size_t n_cap = 1'000'000;
};

struct RankChecks {
  std::size_t constraint_rank = 0;  // rank of Q
  std::size_t projection_rank = 0;  // rank of the first-k projection on ker Q
  std::size_t support_width = 0;    // s with trailing zero columns dropped
};

class ValidatedProblem {
 public:
  const AffineProblem& problem() const { return problem_; }
  std::size_t m() const { return static_cast<std::size_t>(problem_.q.rows()); }
  std::size_t k() const { return problem_.k; }
  // Effective support width of Q (trailing zero columns removed).
  std::size_t support() const { return checks_.support_width; }
  // max(support, k): every N at or above this reproduces the limit exactly.
  std::size_t width() const { return width_; }
  // Q restricted to (or zero-padded to) `width()` columns.
  const numlin::Matrix& q_wide() const { return q_wide_; }
  // Closest point of A to the origin, length width().
  const numlin::Vector& z0() const { return z0_; }
  std::size_t n_min() const { return n_min_; }
  double rank_tol() const { return rank_tol_; }
  const RankChecks& rank_checks() const { return checks_; }

 private:
  friend ValidatedProblem validate(AffineProblem problem, const ValidateOptions& options);

  AffineProblem problem_;
  numlin::Matrix q_wide_;
  numlin::Vector z0_;
  std::size_t width_ = 0;
  std::size_t n_min_ = 0;
  double rank_tol_ = numlin::kDefaultRankTol;
  RankChecks checks_;
};

/// Checks that Q is onto R^m and that the first-k projection maps ker Q onto
/// R^k, then finds z0 and the smallest admissible truncation level n_min:
/// rank Q_N = m, the projection of ker Q_N is onto R^k, N >= k + m + 2 and
/// N > |z0_N|^2. All four conditions are monotone in N.
ValidatedProblem validate(AffineProblem problem, const ValidateOptions& options = {});

// First min(n, width) columns of the widened constraint matrix (Q_N in
// compact form; the remaining columns of Q_N are zero).
numlin::Matrix truncated_constraints(const ValidatedProblem& vp, std::size_t n);

/// z0_N without the n_min precondition. Throws RankDeficient when Q_N is
/// not onto R^m.
numlin::Vector truncated_closest_point(const ValidatedProblem& vp, std::size_t n);

/// z0_N for n >= n_min, or z0 for n = kLimitN. Length min(n, width).
numlin::Vector closest_point(const ValidatedProblem& vp, std::size_t n);

std::size_t min_valid_n(const ValidatedProblem& vp);

}  // namespace slicemean
