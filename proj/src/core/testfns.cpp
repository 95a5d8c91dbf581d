#include "testfns.hpp"

#include "error.hpp"
#include "projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace slicemean {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_finite(const std::vector<double>& v, const char* what) {
  if (v.empty()) fail(ErrorCode::InvalidArgument, std::string(what) + " must be non-empty");
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
  }
}

unsigned total_degree(const fn::Monomial& mono) {
  return std::accumulate(mono.alpha.begin(), mono.alpha.end(), 0u);
}

}  // namespace

TestFunction TestFunction::cos_linear(std::vector<double> t) {
  require_finite(t, "CosLinear t");
  return TestFunction(fn::CosLinear{std::move(t)});
}

TestFunction TestFunction::sin_linear(std::vector<double> t) {
  require_finite(t, "SinLinear t");
  return TestFunction(fn::SinLinear{std::move(t)});
}

TestFunction TestFunction::monomial(std::vector<unsigned> alpha) {
  if (alpha.empty()) fail(ErrorCode::InvalidArgument, "Monomial alpha must be non-empty");
  return TestFunction(fn::Monomial{std::move(alpha)});
}

TestFunction TestFunction::indicator_ball(std::vector<double> center, double radius) {
  require_finite(center, "IndicatorBall center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorCode::InvalidArgument, "IndicatorBall radius must be positive and finite");
  }
  return TestFunction(fn::IndicatorBall{std::move(center), radius});
}

TestFunction TestFunction::bounded_cutoff(TestFunction inner, double cap) {
  if (!(cap > 0.0) || !std::isfinite(cap)) {
    fail(ErrorCode::InvalidArgument, "BoundedCutoff cap must be positive and finite");
  }
  return TestFunction(
      fn::BoundedCutoff{std::make_shared<const TestFunction>(std::move(inner)), cap});
}

TestFunction TestFunction::counterexample_g() { return TestFunction(fn::CounterexampleG{}); }

std::string TestFunction::kind_name() const {
  return std::visit(overloaded{
                        [](const fn::CosLinear&) { return "CosLinear"; },
                        [](const fn::SinLinear&) { return "SinLinear"; },
                        [](const fn::Monomial&) { return "Monomial"; },
                        [](const fn::IndicatorBall&) { return "IndicatorBall"; },
                        [](const fn::BoundedCutoff&) { return "BoundedCutoff"; },
                        [](const fn::CounterexampleG&) { return "CounterexampleG"; },
                    },
                    kind_);
}

std::size_t TestFunction::arity() const {
  return std::visit(overloaded{
                        [](const fn::CosLinear& f) { return f.t.size(); },
                        [](const fn::SinLinear& f) { return f.t.size(); },
                        [](const fn::Monomial& f) { return f.alpha.size(); },
                        [](const fn::IndicatorBall& f) { return f.center.size(); },
                        [](const fn::BoundedCutoff& f) { return f.inner->arity(); },
                        [](const fn::CounterexampleG&) { return std::size_t{1}; },
                    },
                    kind_);
}

bool TestFunction::bounded() const {
  return std::visit(overloaded{
                        [](const fn::Monomial& f) { return total_degree(f) == 0; },
                        [](const fn::CounterexampleG&) { return false; },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

bool TestFunction::smooth() const {
  return std::visit(overloaded{
                        [](const fn::IndicatorBall&) { return false; },
                        [](const fn::BoundedCutoff&) { return false; },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

double TestFunction::bound() const {
  if (!bounded()) return std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const fn::BoundedCutoff& f) { return f.cap; },
                        [](const auto&) { return 1.0; },
                    },
                    kind_);
}

std::string TestFunction::lp_class() const {
  return std::visit(overloaded{
                        [](const fn::Monomial&) { return "L^p for all p < inf"; },
                        [](const fn::CounterexampleG&) { return "L^1 only"; },
                        [](const auto&) { return "bounded (L^inf)"; },
                    },
                    kind_);
}

bool TestFunction::has_closed_form_limit() const {
  return std::visit(overloaded{
                        [](const fn::CosLinear&) { return true; },
                        [](const fn::SinLinear&) { return true; },
                        [](const fn::Monomial& f) { return total_degree(f) <= 2; },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

bool TestFunction::hermite_admissible() const {
  return !std::holds_alternative<fn::CounterexampleG>(kind_);
}

bool TestFunction::sweep_admissible() const {
  return !std::holds_alternative<fn::CounterexampleG>(kind_);
}

double TestFunction::eval(std::span<const double> x) const {
  return std::visit(
      overloaded{
          [&](const fn::CosLinear& f) { return std::cos(dot(f.t, x)); },
          [&](const fn::SinLinear& f) { return std::sin(dot(f.t, x)); },
          [&](const fn::Monomial& f) {
            double v = 1.0;
            for (std::size_t i = 0; i < f.alpha.size(); ++i) {
              for (unsigned p = 0; p < f.alpha[i]; ++p) v *= x[i];
            }
            return v;
          },
          [&](const fn::IndicatorBall& f) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < f.center.size(); ++i) {
              const double dx = x[i] - f.center[i];
              r2 += dx * dx;
            }
            return r2 < f.radius * f.radius ? 1.0 : 0.0;
          },
          [&](const fn::BoundedCutoff& f) {
            const double v = f.inner->eval(x);
            if (std::isnan(v)) return v;
            return std::clamp(v, -f.cap, f.cap);
          },
          [&](const fn::CounterexampleG&) {
            const double x2 = x[0] * x[0];
            return std::exp(0.5 * x2 - std::log1p(x2));
          },
      },
      kind_);
}

std::optional<double> known_limit(const TestFunction& phi, const ValidatedProblem& vp) {
  if (!phi.has_closed_form_limit() || phi.arity() != vp.k()) return std::nullopt;
  const auto k = static_cast<Eigen::Index>(vp.k());
  const numlin::Vector mean = vp.z0().head(k);
  const numlin::Matrix gram = build_projection(vp, kLimitN).gram;
  return std::visit(
      overloaded{
          [&](const fn::CosLinear& f) -> std::optional<double> {
            const numlin::Vector t = Eigen::Map<const numlin::Vector>(f.t.data(), k);
            return std::exp(-0.5 * t.dot(gram * t)) * std::cos(t.dot(mean));
          },
          [&](const fn::SinLinear& f) -> std::optional<double> {
            const numlin::Vector t = Eigen::Map<const numlin::Vector>(f.t.data(), k);
            return std::exp(-0.5 * t.dot(gram * t)) * std::sin(t.dot(mean));
          },
          [&](const fn::Monomial& f) -> std::optional<double> {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = 0; i < k; ++i) {
              for (unsigned p = 0; p < f.alpha[static_cast<std::size_t>(i)]; ++p) idx.push_back(i);
            }
            if (idx.empty()) return 1.0;
            if (idx.size() == 1) return mean(idx[0]);
            return mean(idx[0]) * mean(idx[1]) + gram(idx[0], idx[1]);
          },
          [&](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      phi.kind());
}

}  // namespace slicemean
