#pragma once

// Closed registry of cylinder integrands phi on R^k. Each kind carries the
// integrability metadata the limit theorem needs as a hypothesis, so the
// set is deliberately not user-extensible.

#include "affine_model.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace slicemean {

class TestFunction;

namespace fn {

struct CosLinear {
  std::vector<double> t;
};
struct SinLinear {
  std::vector<double> t;
};
struct Monomial {
  std::vector<unsigned> alpha;
};
struct IndicatorBall {
  std::vector<double> center;
  double radius = 1.0;
};
struct BoundedCutoff {
  std::shared_ptr<const TestFunction> inner;
  double cap = 1.0;
};
// g(x) = exp(x^2/2) / (1 + x^2), k = 1.
struct CounterexampleG {};

using Kind = std::variant<CosLinear, SinLinear, Monomial, IndicatorBall, BoundedCutoff,
                          CounterexampleG>;

}  // namespace fn

class TestFunction {
 public:
  static TestFunction cos_linear(std::vector<double> t);
  static TestFunction sin_linear(std::vector<double> t);
  static TestFunction monomial(std::vector<unsigned> alpha);
  static TestFunction indicator_ball(std::vector<double> center, double radius);
  static TestFunction bounded_cutoff(TestFunction inner, double cap);
  static TestFunction counterexample_g();

  const fn::Kind& kind() const { return kind_; }
  std::string kind_name() const;

  // Number of leading coordinates the function reads.
  std::size_t arity() const;

  bool bounded() const;
  // Sup of |phi| when bounded(), +inf otherwise.
  double bound() const;
  // Integrability class with respect to the limiting Gaussian.
  std::string lp_class() const;
  bool has_closed_form_limit() const;
  // Dominated by a sub-Gaussian envelope, so Gauss-Hermite applies.
  bool hermite_admissible() const;
  // Admissible as phi in a convergence sweep: bounded or L^p for some p > 1.
  bool sweep_admissible() const;
  // Real-analytic in x. Indicators and cutoffs are not; quadrature then
  // switches to an adaptive radial rule.
  bool smooth() const;

  /// Pointwise value; x must have arity() entries. CounterexampleG is
  /// evaluated as exp(x^2/2 - ln(1 + x^2)) and saturates to +inf.
  double eval(std::span<const double> x) const;

 private:
  explicit TestFunction(fn::Kind kind) : kind_(std::move(kind)) {}

  fn::Kind kind_;
};

/// Limit value from the Gaussian with mean z0_(k) and covariance G_inf:
/// CosLinear/SinLinear via the characteristic function, monomials of total
/// degree <= 2 from the first two moments. Empty for everything else.
std::optional<double> known_limit(const TestFunction& phi, const ValidatedProblem& vp);

}  // namespace slicemean
