#include "integrators.hpp"

#include "error.hpp"
#include "gauss_rules.hpp"
#include "parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <numbers>
#include <random>
#include <string>

namespace slicemean {

namespace {

// Unit directions in R^k with normalized weights: a rule for the uniform
// probability on S^{k-1}.
struct SphereRule {
  numlin::Matrix directions;  // k x count
  std::vector<double> weights;
};

SphereRule sphere_rule(std::size_t k, std::size_t angular, std::size_t polar) {
  SphereRule rule;
  const double two_pi = 2.0 * std::numbers::pi;
  if (k == 1) {
    rule.directions = numlin::Matrix(1, 2);
    rule.directions << 1.0, -1.0;
    rule.weights = {0.5, 0.5};
  } else if (k == 2) {
    rule.directions = numlin::Matrix(2, static_cast<Eigen::Index>(angular));
    for (std::size_t j = 0; j < angular; ++j) {
      const double theta = two_pi * static_cast<double>(j) / static_cast<double>(angular);
      rule.directions(0, static_cast<Eigen::Index>(j)) = std::cos(theta);
      rule.directions(1, static_cast<Eigen::Index>(j)) = std::sin(theta);
    }
    rule.weights.assign(angular, 1.0 / static_cast<double>(angular));
  } else {
    const rules::GaussRule gl = rules::gauss_legendre_unit(polar);
    rule.directions = numlin::Matrix(3, static_cast<Eigen::Index>(polar * angular));
    rule.weights.reserve(polar * angular);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < polar; ++i) {
      const double mu = 2.0 * gl.nodes[i] - 1.0;
      const double rho = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (std::size_t j = 0; j < angular; ++j, ++col) {
        const double phi = two_pi * static_cast<double>(j) / static_cast<double>(angular);
        rule.directions(0, col) = rho * std::cos(phi);
        rule.directions(1, col) = rho * std::sin(phi);
        rule.directions(2, col) = mu;
        rule.weights.push_back(gl.weights[i] / static_cast<double>(angular));
      }
    }
  }
  return rule;
}

void require_arity(const TestFunction& phi, std::size_t k) {
  if (phi.arity() != k) {
    fail(ErrorCode::InvalidArgument, phi.kind_name() + " reads " + std::to_string(phi.arity()) +
                                         " coordinates but the problem has k = " + std::to_string(k));
  }
}

double checked_eval(const TestFunction& phi, const numlin::Vector& x) {
  const double v = phi.eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  if (!std::isfinite(v)) {
    fail(ErrorCode::NonFinite, phi.kind_name() + " is not finite at a sample point");
  }
  return v;
}

// Sphere rule pushed through the factor once: x = x0 + rho * (C omega).
class Shells {
 public:
  Shells(const SliceGeometry& geom, const TestFunction& phi, std::size_t angular, std::size_t polar)
      : geom_(geom), phi_(phi), sphere_(sphere_rule(geom.k, angular, polar)),
        pushed_(geom.pd.chol * sphere_.directions), x_(static_cast<Eigen::Index>(geom.k)) {}

  // Average of phi over the radius-rho shell of the projected ball.
  double average(double rho) {
    double shell = 0.0;
    for (Eigen::Index j = 0; j < pushed_.cols(); ++j) {
      x_ = geom_.x0 + rho * pushed_.col(j);
      shell += sphere_.weights[static_cast<std::size_t>(j)] * checked_eval(phi_, x_);
    }
    evals_ += static_cast<std::uint64_t>(pushed_.cols());
    return shell;
  }

  std::uint64_t evals() const { return evals_; }

 private:
  const SliceGeometry& geom_;
  const TestFunction& phi_;
  SphereRule sphere_;
  numlin::Matrix pushed_;
  numlin::Vector x_;
  std::uint64_t evals_ = 0;
};

struct QuadPass {
  double value = 0.0;
  double err = 0.0;  // adaptive path only
  std::uint64_t evals = 0;
};

QuadPass quadrature_pass(const SliceGeometry& geom, const TestFunction& phi, std::size_t radial,
                         std::size_t angular, std::size_t polar) {
  const double beta_a = 0.5 * static_cast<double>(geom.k) - 1.0;
  const auto rule = rules::cached_jacobi_unit(radial, beta_a, geom.exponent);
  Shells shells(geom, phi, angular, polar);
  QuadPass pass;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    pass.value += rule->weights[i] * shells.average(geom.a_z * std::sqrt(rule->nodes[i]));
  }
  pass.evals = shells.evals();
  return pass;
}

// Radial integral in r over [0, a_z] by globally adaptive 15-point
// Gauss-Kronrod: the panel with the largest |K15 - G7| is bisected until the
// total falls below the target or `max_panels` is reached. Jumps of the
// shell average (indicator boundaries, cutoff kinks) only cost extra panels
// near the jump.
QuadPass adaptive_radial_pass(const SliceGeometry& geom, const TestFunction& phi, const QuadConfig& cfg,
                              std::size_t angular, std::size_t polar) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  Shells shells(geom, phi, angular, polar);
  const double km1 = static_cast<double>(geom.k) - 1.0;
  auto integrand = [&](double r) {
    const double w = weight(geom, r);
    return w == 0.0 ? 0.0 : std::pow(r, km1) * w * shells.average(r);
  };
  const double scale =
      std::exp(geom.log_prefactor + numlin::log_surface_constant(geom.k - 1));

  struct Panel {
    double lo, hi, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto make_panel = [&](double lo, double hi) {
    double err = 0.0;
    const double v = Kronrod::integrate(integrand, lo, hi, 0, 0.0, &err);
    return Panel{lo, hi, v, err};
  };

  std::priority_queue<Panel> heap;
  double running_v = 0.0, running_e = 0.0;
  auto push = [&](const Panel& p) {
    running_v += p.value;
    running_e += p.err;
    heap.push(p);
  };
  // Initial grid resolves the bulk of the weight, which sits at r = O(1)
  // however large a_z is.
  const std::size_t initial = 16;
  const double reach = std::min(geom.a_z, 8.0 + 2.0 * std::sqrt(static_cast<double>(geom.k)));
  for (std::size_t i = 0; i < initial; ++i) {
    push(make_panel(reach * static_cast<double>(i) / initial, reach * static_cast<double>(i + 1) / initial));
  }
  if (reach < geom.a_z) push(make_panel(reach, geom.a_z));

  auto totals = [&heap]() {
    // Summed in a fixed order so the result does not depend on heap layout.
    std::vector<Panel> panels;
    auto copy = heap;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    double v = 0.0, e = 0.0;
    for (const Panel& p : panels) {
      v += p.value;
      e += p.err;
    }
    return std::pair{v, e};
  };

  const std::size_t max_panels = std::max<std::size_t>(cfg.max_radial_nodes, initial + 1);
  while (heap.size() < max_panels &&
         scale * running_e > cfg.target_rel_err * std::max(1.0, std::abs(scale * running_v))) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = make_panel(worst.lo, mid);
    const Panel right = make_panel(mid, worst.hi);
    running_v -= worst.value;
    running_e -= worst.err;
    push(left);
    push(right);
  }
  const auto [value, err] = totals();
  return {scale * value, scale * err, shells.evals()};
}

IntegralResult require_finite(IntegralResult r, const TestFunction& phi) {
  if (!std::isfinite(r.value) || !std::isfinite(r.err_estimate)) {
    fail(ErrorCode::NonFinite, "slice mean of " + phi.kind_name() + " is not finite");
  }
  return r;
}

}  // namespace

void check_config(const QuadConfig& cfg) {
  if (cfg.radial_nodes < 8 || cfg.angular_nodes < 8 || cfg.polar_nodes < 8) {
    fail(ErrorCode::InvalidArgument, "quadrature node counts must be >= 8");
  }
  if (!(cfg.target_rel_err > 0.0 && cfg.target_rel_err < 1e-2)) {
    fail(ErrorCode::InvalidArgument, "target_rel_err must lie in (0, 1e-2)");
  }
  if (cfg.max_radial_nodes < cfg.radial_nodes) {
    fail(ErrorCode::InvalidArgument, "max_radial_nodes must be >= radial_nodes");
  }
}

void check_config(const McConfig& cfg) {
  if (cfg.n_samples < 1) fail(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (cfg.shard_size < 1) fail(ErrorCode::InvalidArgument, "shard_size must be >= 1");
}

IntegralResult slice_mean_quadrature(const SliceGeometry& geom, const TestFunction& phi,
                                     const QuadConfig& cfg) {
  check_config(cfg);
  if (geom.k == 0 || geom.k > 3) {
    fail(ErrorCode::UnsupportedDimension,
         "deterministic quadrature supports k <= 3; use Monte Carlo for k = " + std::to_string(geom.k));
  }
  require_arity(phi, geom.k);

  std::size_t radial = cfg.radial_nodes;
  std::size_t angular = cfg.angular_nodes;
  std::size_t polar = cfg.polar_nodes;

  if (!phi.smooth()) {
    QuadPass fine = adaptive_radial_pass(geom, phi, cfg, angular, polar);
    IntegralResult result{fine.value, fine.err, fine.evals};
    if (geom.k >= 2) {
      // Direction-rule error: compare against half the angular resolution.
      const QuadPass coarse = adaptive_radial_pass(geom, phi, cfg, angular / 2, polar / 2);
      result.err_estimate += std::abs(fine.value - coarse.value);
      result.n_evals += coarse.evals;
    }
    return require_finite(result, phi);
  }

  const QuadPass coarse = quadrature_pass(geom, phi, radial / 2, angular / 2, polar / 2);
  QuadPass fine = quadrature_pass(geom, phi, radial, angular, polar);
  IntegralResult result{fine.value, std::abs(fine.value - coarse.value), coarse.evals + fine.evals};
  const std::size_t angular_cap = 4 * cfg.angular_nodes;
  const std::size_t polar_cap = 4 * cfg.polar_nodes;
  while (result.err_estimate > cfg.target_rel_err * std::max(1.0, std::abs(result.value)) &&
         radial < cfg.max_radial_nodes) {
    radial *= 2;
    if (angular < angular_cap) angular *= 2;
    if (polar < polar_cap) polar *= 2;
    const QuadPass next = quadrature_pass(geom, phi, radial, angular, polar);
    result.err_estimate = std::abs(next.value - result.value);
    result.value = next.value;
    result.n_evals += next.evals;
  }
  return require_finite(result, phi);
}

IntegralResult slice_mean_mc(const SliceGeometry& geom, const TestFunction& phi,
                             const McConfig& cfg, unsigned threads) {
  check_config(cfg);
  require_arity(phi, geom.k);
  const numlin::Matrix& top = geom.pd.top_rows;
  const auto head = top.cols();
  const std::size_t tail_dof = geom.n - geom.pd.width;
  const double a_z = geom.a_z;

  auto shard = [&](std::uint64_t, std::uint64_t count, std::mt19937_64& engine) {
    std::normal_distribution<double> normal;
    std::chi_squared_distribution<double> chi2(static_cast<double>(tail_dof > 0 ? tail_dof : 1));
    numlin::Vector g(head);
    numlin::Vector x(static_cast<Eigen::Index>(geom.k));
    parallel::Moments acc;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (Eigen::Index i = 0; i < head; ++i) g(i) = normal(engine);
      double norm2 = g.squaredNorm();
      if (tail_dof > 0) norm2 += chi2(engine);
      x = geom.x0 + (a_z / std::sqrt(norm2)) * (top * g);
      acc.add(checked_eval(phi, x));
    }
    return acc;
  };
  const auto parts = parallel::run_shards(cfg.n_samples, cfg.shard_size, cfg.seed, threads, shard);
  const auto total = parallel::reduce(parts, parts.size());
  return {total.mean, total.stderr_of_mean(), total.count, false};
}

bool detect_divergence(const std::vector<Checkpoint>& checkpoints, double factor) {
  int streak = 0;
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    const double jump = std::abs(checkpoints[i].estimate - checkpoints[i - 1].estimate);
    if (jump > factor * checkpoints[i - 1].stderr_of_mean) {
      if (++streak >= 2) return true;
    } else {
      streak = 0;
    }
  }
  return false;
}

IntegralResult gaussian_limit(const ValidatedProblem& vp, const TestFunction& phi,
                              const LimitMethod& method, unsigned threads) {
  const std::size_t k = vp.k();
  require_arity(phi, k);
  const ProjectionData pd = build_projection(vp, kLimitN);
  const numlin::Vector mean = vp.z0().head(static_cast<Eigen::Index>(k));

  if (const auto* gh = std::get_if<GaussHermite>(&method)) {
    if (k > 3) {
      fail(ErrorCode::UnsupportedDimension, "Gauss-Hermite limit supports k <= 3");
    }
    if (!phi.hermite_admissible()) {
      fail(ErrorCode::NotAdmissible,
           phi.kind_name() + " has no sub-Gaussian envelope; Gauss-Hermite does not apply");
    }
    if (gh->nodes < 2) fail(ErrorCode::InvalidArgument, "Gauss-Hermite needs >= 2 nodes");
    auto tensor = [&](std::size_t n) {
      const auto rule = rules::cached_hermite_normal(n);
      std::size_t total = 1;
      for (std::size_t i = 0; i < k; ++i) total *= n;
      numlin::Vector g(static_cast<Eigen::Index>(k));
      double sum = 0.0;
      for (std::size_t flat = 0; flat < total; ++flat) {
        double w = 1.0;
        std::size_t rest = flat;
        for (std::size_t d = 0; d < k; ++d) {
          const std::size_t idx = rest % n;
          rest /= n;
          g(static_cast<Eigen::Index>(d)) = rule->nodes[idx];
          w *= rule->weights[idx];
        }
        sum += w * checked_eval(phi, numlin::Vector(mean + pd.chol * g));
      }
      return std::make_pair(sum, static_cast<std::uint64_t>(total));
    };
    const auto fine = tensor(gh->nodes);
    const auto coarse = tensor(gh->nodes / 2);
    return {fine.first, std::abs(fine.first - coarse.first), fine.second + coarse.second, false};
  }

  const McConfig& cfg = std::get<MonteCarlo>(method).cfg;
  check_config(cfg);
  auto shard = [&](std::uint64_t, std::uint64_t count, std::mt19937_64& engine) {
    std::normal_distribution<double> normal;
    numlin::Vector g(static_cast<Eigen::Index>(k));
    numlin::Vector x(static_cast<Eigen::Index>(k));
    parallel::Moments acc;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < k; ++i) g(static_cast<Eigen::Index>(i)) = normal(engine);
      x = mean + pd.chol * g;
      // Overflow to +inf is a legitimate observation of a heavy tail here.
      const double v = phi.eval(std::span<const double>(x.data(), k));
      if (std::isnan(v)) fail(ErrorCode::NonFinite, phi.kind_name() + " returned NaN");
      acc.add(v);
    }
    return acc;
  };
  const auto parts = parallel::run_shards(cfg.n_samples, cfg.shard_size, cfg.seed, threads, shard);

  std::vector<Checkpoint> checkpoints;
  for (std::size_t c = 1; c < parts.size(); c *= 2) {
    const auto prefix = parallel::reduce(parts, c);
    checkpoints.push_back({prefix.mean, prefix.stderr_of_mean()});
  }
  const auto total = parallel::reduce(parts, parts.size());
  checkpoints.push_back({total.mean, total.stderr_of_mean()});

  IntegralResult result{total.mean, total.stderr_of_mean(), total.count, false};
  result.diverged = !std::isfinite(total.mean) || detect_divergence(checkpoints);
  return result;
}

double counterexample_probe(double z, double r, std::size_t nodes) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "R must be positive and finite");
  if (!std::isfinite(z)) fail(ErrorCode::InvalidArgument, "z must be finite");
  if (nodes < 2) fail(ErrorCode::InvalidArgument, "need at least 2 nodes per panel");
  const rules::GaussRule gl = rules::gauss_legendre_unit(nodes);
  auto composite = [&](std::size_t panels) {
    const double h = 2.0 * r / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = -r + h * static_cast<double>(p);
      double panel = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double x = lo + h * gl.nodes[i];
        panel += gl.weights[i] * std::exp(z * x - 0.5 * z * z) / (1.0 + x * x);
      }
      sum += h * panel;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi);
  };
  std::size_t panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(2.0 * r)));
  double prev = composite(panels);
  for (int round = 0; round < 12; ++round) {
    panels *= 2;
    const double next = composite(panels);
    const bool settled = std::abs(next - prev) <= 1e-10 * std::abs(next);
    prev = next;
    if (settled) break;
  }
  return prev;
}

}  // namespace slicemean
