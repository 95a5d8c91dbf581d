#include "harness/verify.hpp"

#include "core/error.hpp"
#include "core/gauss_rules.hpp"
#include "core/integrators.hpp"
#include "core/projections.hpp"
#include "core/slice_geometry.hpp"
#include "harness/emit.hpp"
#include "harness/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace slicemean::harness {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Ctx {
  const Config& cfg;
  unsigned threads;
  double scale;

  std::mt19937_64 rng(std::uint64_t salt) const {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(salt)};
    return std::mt19937_64(seq);
  }
};

// Tracks the worst violation of "error <= tolerance" over many trials.
struct Tally {
  double worst = 0.0;
  std::uint64_t trials = 0;
  bool ok = true;

  void observe(double error, double allowed) {
    ++trials;
    worst = std::max(worst, error);
    if (!(error <= allowed)) ok = false;
  }
};

CheckRecord finish(const std::string& name, const Tally& t, double tolerance, std::string detail = {}) {
  return {name, t.ok, t.worst, tolerance, t.trials, std::move(detail)};
}

struct RandomSpec {
  std::size_t m;
  std::size_t k;
};

// Draws a valid random problem with support width 50 (retries are
// measure-zero events but keep the suite total).
ValidatedProblem draw_problem(std::mt19937_64& rng, std::size_t s, RandomSpec spec) {
  for (int attempt = 0;; ++attempt) {
    try {
      return validate(random_problem(rng, s, spec.m, spec.k));
    } catch (const Error&) {
      if (attempt > 20) throw;
    }
  }
}

RandomSpec spec_for(std::size_t i) { return {1 + i % 2, 1 + i % 3}; }

CheckRecord check_kernel_basis(const Ctx& ctx) {
  auto rng = ctx.rng(1);
  std::uniform_int_distribution<int> rows_d(1, 4), extra_d(1, 16);
  std::normal_distribution<double> normal;
  const double tol = numlin::kDefaultRankTol;
  Tally t;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = rows_d(rng);
    const int n = m + extra_d(rng);
    numlin::Matrix a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    if (trial % 5 == 4 && m > 1) a.row(m - 1) = 2.0 * a.row(0);  // rank deficient
    const numlin::Matrix k = numlin::kernel_onb(a, tol);
    const double scale_a = a.cwiseAbs().maxCoeff();
    const double residual = k.cols() ? (a * k).cwiseAbs().maxCoeff() / scale_a : 0.0;
    const double ortho =
        k.cols() ? (k.transpose() * k - numlin::Matrix::Identity(k.cols(), k.cols())).cwiseAbs().maxCoeff() / 10.0
                 : 0.0;
    t.observe(std::max(residual, ortho), tol * ctx.scale);
  }
  return finish("kernel_basis", t, tol);
}

CheckRecord check_least_norm(const Ctx& ctx) {
  auto rng = ctx.rng(2);
  std::normal_distribution<double> normal;
  const double tol = 1e-10;
  Tally t;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 4;
    const int n = m + 1 + trial % 13;
    numlin::Matrix a(m, n);
    numlin::Vector w(m);
    for (int i = 0; i < m; ++i) {
      w(i) = normal(rng);
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    const numlin::Vector x = numlin::least_norm_solution(a, w);
    const numlin::Matrix k = numlin::kernel_onb(a);
    double err = (a * x - w).cwiseAbs().maxCoeff();
    if (k.cols()) err = std::max(err, (k.transpose() * x).cwiseAbs().maxCoeff());
    t.observe(err, tol * ctx.scale);
  }
  return finish("least_norm_orthogonality", t, tol);
}

CheckRecord check_surface_constant(const Ctx& ctx) {
  const double tol = 1e-12;
  Tally t;
  for (std::size_t j = 0; j <= 50; ++j) {
    const double half = 0.5 * (static_cast<double>(j) + 1.0);
    const double direct = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
    const double rel = std::abs(std::exp(numlin::log_surface_constant(j)) - direct) / direct;
    t.observe(rel, tol * ctx.scale);
  }
  // Far beyond the overflow point of c_j the log form must stay finite.
  const double far = numlin::log_surface_constant(10'000'000);
  t.observe(std::isfinite(far) ? 0.0 : 1.0, 0.0);
  return finish("surface_constant", t, tol);
}

CheckRecord check_zero_padding(const Ctx& ctx) {
  auto rng = ctx.rng(3);
  const double tol = 1e-14;
  Tally t;
  const QuadConfig quad;
  const auto cosine = TestFunction::cos_linear({1.0});
  std::vector<AffineProblem> bases = {fixture_a(3.0), fixture_b()};
  for (int i = 0; i < 4; ++i) bases.push_back(random_problem(rng, 12, 1, 1));
  for (const AffineProblem& base : bases) {
    AffineProblem padded = base;
    padded.q = numlin::Matrix::Zero(base.q.rows(), base.q.cols() + 5);
    padded.q.leftCols(base.q.cols()) = base.q;
    const ValidatedProblem v1 = validate(base);
    const ValidatedProblem v2 = validate(padded);
    double err = std::abs(static_cast<double>(v1.n_min()) - static_cast<double>(v2.n_min()));
    err = std::max(err, (v1.z0() - v2.z0()).cwiseAbs().maxCoeff());
    const std::size_t n = std::max<std::size_t>(v1.n_min(), 64);
    const double q1 = slice_mean_quadrature(build_slice(v1, n), cosine, quad).value;
    const double q2 = slice_mean_quadrature(build_slice(v2, n), cosine, quad).value;
    err = std::max(err, std::abs(q1 - q2));
    t.observe(err, tol * ctx.scale);
  }
  return finish("zero_padding", t, tol);
}

CheckRecord check_closest_point(const Ctx& ctx) {
  auto rng = ctx.rng(4);
  const double tol = 1e-12;
  Tally t;
  const ValidatedProblem b = validate(fixture_b());
  for (std::size_t n = 2; n <= 64; n *= 2) {
    t.observe((truncated_closest_point(b, n) - b.z0()).norm(), tol * ctx.scale);
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const ValidatedProblem vp = draw_problem(rng, 50, spec_for(i));
    // |z0_N|^2 - |z0|^2 is non-increasing and vanishes once N covers the support.
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = vp.n_min(); n <= 60; ++n) {
      const numlin::Vector zn = truncated_closest_point(vp, n);
      const double gap = zn.squaredNorm() - vp.z0().squaredNorm();
      t.observe(std::max(0.0, gap - prev), tol * ctx.scale);
      t.observe(std::max(0.0, -gap), tol * ctx.scale);
      if (n >= vp.width()) t.observe((zn - vp.z0()).cwiseAbs().maxCoeff(), tol * ctx.scale);
      prev = gap;
    }
    const numlin::Matrix kernel = numlin::kernel_onb(vp.q_wide(), vp.rank_tol());
    t.observe((kernel.transpose() * vp.z0()).cwiseAbs().maxCoeff(), 1e-10 * ctx.scale);
  }
  return finish("closest_point_convergence", t, tol);
}

struct DeterminantSeries {
  std::size_t problem;
  std::size_t n;
  double error;  // | |det L0,N| - |det L0| |
};

// 20 random problems with s = 50; errors for N from n_min through 49.
std::vector<DeterminantSeries> determinant_series(const Ctx& ctx, Tally* limit_tally) {
  auto rng = ctx.rng(5);
  std::vector<DeterminantSeries> out;
  for (std::size_t i = 0; i < 20; ++i) {
    const ValidatedProblem vp = draw_problem(rng, 50, spec_for(i));
    const double det_inf = std::exp(build_projection(vp, kLimitN).log_det_l0);
    if (limit_tally) {
      for (std::size_t n : {50, 51, 64, 100, 1000, 100000}) {
        limit_tally->observe(std::abs(std::exp(build_projection(vp, n).log_det_l0) - det_inf),
                             1e-12 * ctx.scale);
      }
    }
    for (std::size_t n = vp.n_min(); n < 50; ++n) {
      out.push_back({i, n, std::abs(std::exp(build_projection(vp, n).log_det_l0) - det_inf)});
    }
  }
  return out;
}

CheckRecord check_determinant_limit(const Ctx& ctx) {
  Tally t;
  const auto series = determinant_series(ctx, &t);
  std::size_t inversions = 0;
  double largest = 0.0, at_49 = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    largest = std::max(largest, series[i].error);
    if (series[i].n == 49) at_49 = std::max(at_49, series[i].error);
    if (i > 0 && series[i].problem == series[i - 1].problem && series[i].error > series[i - 1].error) {
      ++inversions;
    }
  }
  std::ostringstream detail;
  detail.precision(3);
  detail << "N < 50: largest error " << largest << ", largest at N=49 " << at_49
         << ", monotonicity inversions " << inversions << " (reported only)";
  return finish("determinant_limit", t, 1e-12, detail.str());
}

CheckRecord check_preimage_inequality(const Ctx& ctx) {
  auto rng = ctx.rng(6);
  std::normal_distribution<double> normal;
  const double tol = 1e-12;
  Tally t;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const ValidatedProblem vp = draw_problem(rng, 50, spec_for(trial));
    std::uniform_int_distribution<std::size_t> n_d(vp.n_min(), 49);
    const std::size_t n = n_d(rng);
    numlin::Vector x(static_cast<Eigen::Index>(vp.k()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 2.0 * normal(rng);
    const double at_n = preimage_norm_sq(build_projection(vp, n), x);
    const double at_inf = preimage_norm_sq(build_projection(vp, kLimitN), x);
    t.observe(std::max(0.0, at_inf - at_n), tol * ctx.scale);
  }
  return finish("preimage_norm_inequality", t, tol);
}

// Kernel basis from a Householder QR of Q^T: an independent route to the
// same subspace as the SVD used by build_projection.
numlin::Matrix kernel_by_qr(const numlin::Matrix& q) {
  Eigen::HouseholderQR<numlin::Matrix> qr(q.transpose());
  const numlin::Matrix full = qr.householderQ();
  return full.rightCols(q.cols() - q.rows());
}

CheckRecord check_basis_invariance(const Ctx& ctx) {
  auto rng = ctx.rng(7);
  const double tol = 1e-12;
  Tally t;
  for (std::size_t i = 0; i < 20; ++i) {
    const ValidatedProblem vp = draw_problem(rng, 50, spec_for(i));
    const ProjectionData svd_route = build_projection(vp, kLimitN);
    numlin::Matrix other = kernel_by_qr(vp.q_wide());
    other = other * random_orthogonal(rng, static_cast<std::size_t>(other.cols()));
    const ProjectionData qr_route = projection_from_kernel(kLimitN, vp.k(), other);
    t.observe((svd_route.gram - qr_route.gram).cwiseAbs().maxCoeff(), tol * ctx.scale);
  }
  return finish("basis_invariance", t, tol);
}

// prefactor * |S^{k-1}| * ∫_0^a r^{k-1} weight(r) dr with r = a sin(theta),
// integrated by composite Gauss-Legendre in theta. Independent of the
// Gauss-Jacobi rule and of the Beta function.
std::pair<double, double> normalization_by_panels(const SliceGeometry& geom) {
  const auto gl = rules::gauss_legendre_unit(20);
  auto integral = [&](std::size_t panels) {
    const double h = 0.5 * std::numbers::pi / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double theta = h * (static_cast<double>(p) + gl.nodes[i]);
        const double r = geom.a_z * std::sin(theta);
        sum += h * gl.weights[i] * std::pow(r, static_cast<double>(geom.k) - 1.0) * weight(geom, r) *
               geom.a_z * std::cos(theta);
      }
    }
    return sum;
  };
  const double log_scale = geom.log_prefactor + numlin::log_surface_constant(geom.k - 1);
  const double fine = std::exp(log_scale) * integral(400);
  const double coarse = std::exp(log_scale) * integral(200);
  return {fine, std::abs(fine - coarse)};
}

CheckRecord check_normalization(const Ctx& ctx) {
  Tally t;
  const auto one = TestFunction::monomial({0});
  double worst_bound = 0.0;
  for (const AffineProblem& p : {fixture_a(3.0), fixture_b()}) {
    const ValidatedProblem vp = validate(p);
    for (std::size_t n : {16, 64, 256, 1024, 4096}) {
      const SliceGeometry geom = build_slice(vp, n);
      const auto [value, err] = normalization_by_panels(geom);
      // Round-off of the log-gamma difference inside log_prefactor.
      const double roundoff =
          64.0 * kEps *
          (std::abs(numlin::log_surface_constant(geom.d - geom.k - geom.m)) +
           std::abs(numlin::log_surface_constant(geom.d - geom.m)) + 1.0);
      worst_bound = std::max(worst_bound, err + roundoff);
      t.observe(std::abs(value - 1.0), (err + roundoff) * ctx.scale);
      const double quad = slice_mean_quadrature(geom, one, ctx.cfg.quad).value;
      t.observe(std::abs(quad - 1.0), 1e-12 * ctx.scale);
    }
  }
  std::ostringstream detail;
  detail << "largest allowed deviation " << worst_bound;
  return finish("normalization", t, worst_bound, detail.str());
}

CheckRecord check_constant_limit(const Ctx& ctx) {
  const double tol = 1e-3;
  Tally t;
  const std::size_t n = 1'000'000;
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t m = 1; m <= 2; ++m) {
      AffineProblem p;
      p.k = k;
      p.q = numlin::Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k + m));
      for (std::size_t i = 0; i < m; ++i) p.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k + i)) = 1.0;
      p.w0 = numlin::Vector::Zero(static_cast<Eigen::Index>(m));
      const SliceGeometry geom = build_slice(validate(p), n);
      const double target = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(k));
      t.observe(std::abs(std::exp(log_norm_prefactor(geom)) - target) / target, tol * ctx.scale);
    }
  }
  return finish("constant_limit", t, tol);
}

CheckRecord check_dominating_bound(const Ctx& ctx) {
  auto rng = ctx.rng(8);
  std::uniform_int_distribution<int> km(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = 1e-12;
  Tally t;
  for (int trial = 0; trial < 10'000; ++trial) {
    const int k = km(rng), m = km(rng);
    const double lo = k + m + 3;
    const double n = std::floor(lo * std::pow(1e5 / lo, unit(rng)));
    // Half the draws spread over (0, N], half near the maximizer y = k+m+2.
    const double y = trial % 2 ? n * (1.0 - unit(rng)) : std::min(n, (k + m + 2) * 2.0 * (1.0 - unit(rng)));
    const double e = 0.5 * (n - k - m - 2);
    const double lhs = std::exp(e * std::log1p(-y / n));
    const double rhs = std::exp(0.5 * (k + m + 2) - 0.5 * y);
    t.observe(std::max(0.0, lhs - rhs), tol * ctx.scale);
  }
  return finish("dominating_bound", t, tol);
}

CheckRecord check_weight_monotone(const Ctx& ctx) {
  const double tol = 1e-15;
  Tally t;
  for (const AffineProblem& p : {fixture_a(0.0), fixture_a(3.0), fixture_b()}) {
    const ValidatedProblem vp = validate(p);
    for (std::size_t n : {vp.n_min(), std::size_t{64}, std::size_t{4096}}) {
      const SliceGeometry geom = build_slice(vp, n);
      double prev = weight(geom, 0.0);
      t.observe(std::abs(prev - 1.0), tol * ctx.scale);
      for (int i = 1; i <= 2000; ++i) {
        const double w = weight(geom, geom.a_z * i / 2000.0);
        t.observe(std::max(0.0, w - prev), tol * ctx.scale);
        prev = w;
      }
      t.observe(weight(geom, geom.a_z), 0.0);
      // Continuity at the boundary needs a positive exponent; at
      // N = k + m + 2 the weight is the indicator of the ball.
      if (geom.exponent > 0.0) {
        const double delta = 1e-12;
        const double near = weight(geom, geom.a_z * (1.0 - delta));
        t.observe(std::max(0.0, near - std::pow(2.0 * delta, geom.exponent)), tol * ctx.scale);
      }
    }
  }
  return finish("weight_monotone", t, tol);
}

CheckRecord check_characteristic_function(const Ctx& ctx) {
  auto rng = ctx.rng(9);
  std::normal_distribution<double> normal;
  const double tol = 1e-10;
  Tally t;
  for (std::size_t i = 0; i < 20; ++i) {
    const ValidatedProblem vp = draw_problem(rng, 50, spec_for(i));
    const ProjectionData pd = build_projection(vp, kLimitN);
    for (int j = 0; j < 100; ++j) {
      std::vector<double> tv(vp.k());
      for (double& x : tv) x = normal(rng);
      const numlin::Vector tt = Eigen::Map<const numlin::Vector>(tv.data(), static_cast<Eigen::Index>(tv.size()));
      const double via_gram = tt.dot(pd.gram * tt);
      const double via_p0 = kernel_projection_norm_sq(vp, tt);
      t.observe(std::abs(via_gram - via_p0), tol * ctx.scale);
      // Characteristic function of the pushforward vs the l^2 form.
      const double via_cphi =
          std::exp(-0.5 * via_p0) * std::cos(tt.dot(vp.z0().head(static_cast<Eigen::Index>(vp.k()))));
      t.observe(std::abs(*known_limit(TestFunction::cos_linear(tv), vp) - via_cphi), tol * ctx.scale);
    }
  }
  return finish("characteristic_function_identity", t, tol);
}

CheckRecord check_exact_identities(const Ctx& ctx) {
  Tally t;
  const auto x1 = TestFunction::monomial({1});
  const auto x2 = TestFunction::monomial({2});
  const ValidatedProblem b = validate(fixture_b());
  for (std::size_t n = 4; n <= 4096; n *= 2) {
    const SliceGeometry geom = build_slice(b, n);
    t.observe(std::abs(slice_mean_quadrature(geom, x1, ctx.cfg.quad).value - 0.6), 1e-10 * ctx.scale);
    t.observe(std::abs(slice_mean_quadrature(geom, x2, ctx.cfg.quad).value - 1.0), 1e-8 * ctx.scale);
  }
  const ValidatedProblem a = validate(fixture_a(3.0));
  for (std::size_t n : {16, 64, 256, 1024, 4096}) {
    const double expected = (static_cast<double>(n) - 9.0) / (static_cast<double>(n) - 1.0);
    t.observe(std::abs(slice_mean_quadrature(build_slice(a, n), x2, ctx.cfg.quad).value - expected),
              1e-8 * ctx.scale);
  }
  return finish("exact_identities", t, 1e-8);
}

CheckRecord check_factor_invariance(const Ctx& ctx) {
  auto rng = ctx.rng(10);
  std::normal_distribution<double> normal;
  Tally t;
  for (std::size_t i = 0; i < 12; ++i) {
    const std::size_t k = 1 + i % 3;
    const ValidatedProblem vp = draw_problem(rng, 10, {1 + i % 2, k});
    SliceGeometry geom = build_slice(vp, 64);
    std::vector<double> tv(k);
    for (double& x : tv) x = normal(rng);
    const auto phi = TestFunction::cos_linear(tv);
    const IntegralResult base = slice_mean_quadrature(geom, phi, ctx.cfg.quad);
    geom.pd.chol = geom.pd.chol * random_orthogonal(rng, k);
    const IntegralResult rotated = slice_mean_quadrature(geom, phi, ctx.cfg.quad);
    t.observe(std::abs(rotated.value - base.value),
              (10.0 * std::max(base.err_estimate, rotated.err_estimate) + 1e-12) * ctx.scale);
  }
  return finish("factor_invariance", t, 1e-12);
}

CheckRecord check_mc_determinism(const Ctx& ctx) {
  Tally t;
  const unsigned many = std::max(ctx.threads, 4u);
  const ValidatedProblem b = validate(fixture_b());
  const SliceGeometry geom = build_slice(b, 256);
  const auto phi = TestFunction::cos_linear({1.0});
  McConfig mc{200'000, ctx.cfg.seed, 10'000};
  const IntegralResult one = slice_mean_mc(geom, phi, mc, 1);
  const IntegralResult par = slice_mean_mc(geom, phi, mc, many);
  t.observe(std::abs(one.value - par.value) + std::abs(one.err_estimate - par.err_estimate), 0.0);
  const IntegralResult lim1 = gaussian_limit(b, phi, MonteCarlo{mc}, 1);
  const IntegralResult limp = gaussian_limit(b, phi, MonteCarlo{mc}, many);
  t.observe(std::abs(lim1.value - limp.value) + std::abs(lim1.err_estimate - limp.err_estimate), 0.0);
  return finish("mc_determinism", t, 0.0);
}

std::vector<TestFunction> cross_oracle_functions(double center) {
  return {TestFunction::cos_linear({1.0}), TestFunction::sin_linear({1.0}),
          TestFunction::cos_linear({2.5}), TestFunction::indicator_ball({center}, 1.0),
          TestFunction::bounded_cutoff(TestFunction::monomial({2}), 2.0)};
}

CheckRecord check_cross_oracle(const Ctx& ctx) {
  Tally t;
  std::size_t disagreements = 0, combos = 0;
  double worst_z = 0.0;
  const std::vector<std::pair<AffineProblem, double>> fixtures = {{fixture_a(3.0), 0.0}, {fixture_b(), 0.6}};
  for (const auto& [problem, center] : fixtures) {
    const ValidatedProblem vp = validate(problem);
    for (const TestFunction& phi : cross_oracle_functions(center)) {
      for (std::size_t n : {16, 64, 256, 1024, 4096}) {
        const SliceGeometry geom = build_slice(vp, n);
        const IntegralResult q = slice_mean_quadrature(geom, phi, ctx.cfg.quad);
        McConfig mc = ctx.cfg.mc;
        mc.seed = ctx.cfg.seed + 1000 + combos;
        const IntegralResult s = slice_mean_mc(geom, phi, mc, ctx.threads);
        const double combined = std::hypot(q.err_estimate, s.err_estimate);
        const double z = std::abs(q.value - s.value) / combined;
        worst_z = std::max(worst_z, z);
        if (!(std::abs(q.value - s.value) <= 4.0 * combined)) ++disagreements;
        ++combos;
      }
    }
  }
  t.trials = combos;
  t.worst = static_cast<double>(disagreements);
  t.ok = combos == 50 && disagreements <= 2;
  std::ostringstream detail;
  detail << combos - disagreements << " of " << combos << " combinations agree within 4 combined errors; "
         << "largest |quad - mc| / combined error = " << worst_z;
  return finish("cross_oracle", t, 2.0, detail.str());
}

CheckRecord check_main_convergence(const Ctx& ctx) {
  Tally t;
  std::ostringstream detail;
  detail.precision(3);
  const auto cosine = TestFunction::cos_linear({1.0});
  const std::pair<const char*, AffineProblem> fixtures[] = {{"fixture A (c = 0)", fixture_a(0.0)},
                                                            {"fixture B", fixture_b()}};
  for (const auto& [label, p] : fixtures) {
    const ValidatedProblem vp = validate(p);
    const double limit = *known_limit(cosine, vp);
    double prev = std::numeric_limits<double>::infinity();
    int bad_inversions = 0, inversions = 0;
    double last = 0.0;
    for (std::size_t n = 32; n <= 4096; n *= 2) {
      const double err = std::abs(slice_mean_quadrature(build_slice(vp, n), cosine, ctx.cfg.quad).value - limit);
      if (err > prev) {
        ++inversions;
        if (err >= 1e-6 || inversions > 1) ++bad_inversions;
      }
      prev = last = err;
    }
    detail << label << ": error " << last << " at N=4096, " << inversions << " inversions; ";
    t.observe(bad_inversions > 0 ? std::numeric_limits<double>::infinity() : last, 1e-3 * ctx.scale);
  }
  return finish("main_convergence", t, 1e-3, detail.str());
}

CheckRecord check_known_limit_vs_mc(const Ctx& ctx) {
  auto rng = ctx.rng(11);
  std::normal_distribution<double> normal;
  Tally t;
  std::uint64_t salt = 0;
  for (const AffineProblem& p : {fixture_a(0.0), fixture_b()}) {
    const ValidatedProblem vp = validate(p);
    for (int i = 0; i < 20; ++i) {
      const auto phi = TestFunction::cos_linear({normal(rng)});
      McConfig mc{1'000'000, ctx.cfg.seed + 5000 + salt++, std::uint64_t{1} << 16};
      const IntegralResult r = gaussian_limit(vp, phi, MonteCarlo{mc}, ctx.threads);
      // Measured in standard errors; the bound is not a round-off tolerance.
      t.observe(std::abs(*known_limit(phi, vp) - r.value) / r.err_estimate, 4.0);
    }
  }
  return finish("known_limit_vs_mc", t, 4.0, "worst_violation is |closed form - mc| in standard errors");
}

CheckRecord check_bounded_spot(const Ctx& ctx) {
  auto rng = ctx.rng(12);
  std::normal_distribution<double> normal;
  Tally t;
  const std::vector<TestFunction> fns = {
      TestFunction::cos_linear({1.0, -2.0}), TestFunction::sin_linear({0.5, 3.0}),
      TestFunction::indicator_ball({0.2, -0.1}, 1.5),
      TestFunction::bounded_cutoff(TestFunction::monomial({2, 1}), 2.0),
      TestFunction::bounded_cutoff(TestFunction::monomial({3, 0}), 0.5)};
  for (const TestFunction& phi : fns) {
    for (int i = 0; i < 10'000; ++i) {
      const double spread = std::exp(3.0 * normal(rng));
      const double x[2] = {spread * normal(rng), spread * normal(rng)};
      t.observe(std::max(0.0, std::abs(phi.eval(x)) - phi.bound()), 0.0);
    }
  }
  return finish("bounded_spot_check", t, 0.0);
}

using CheckFn = std::function<CheckRecord(const Ctx&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"kernel_basis", check_kernel_basis},
      {"least_norm_orthogonality", check_least_norm},
      {"surface_constant", check_surface_constant},
      {"zero_padding", check_zero_padding},
      {"closest_point_convergence", check_closest_point},
      {"determinant_limit", check_determinant_limit},
      {"preimage_norm_inequality", check_preimage_inequality},
      {"basis_invariance", check_basis_invariance},
      {"normalization", check_normalization},
      {"constant_limit", check_constant_limit},
      {"dominating_bound", check_dominating_bound},
      {"weight_monotone", check_weight_monotone},
      {"characteristic_function_identity", check_characteristic_function},
      {"exact_identities", check_exact_identities},
      {"known_limit_vs_mc", check_known_limit_vs_mc},
      {"bounded_spot_check", check_bounded_spot},
      {"factor_invariance", check_factor_invariance},
      {"mc_determinism", check_mc_determinism},
      {"cross_oracle", check_cross_oracle},
      {"main_convergence", check_main_convergence},
  };
  return checks;
}

}  // namespace

std::string determinant_sequence_csv(const Config& cfg) {
  const Ctx ctx{cfg, 1, cfg.verify.tol_scale};
  std::string out = "problem,N,abs_det_error\n";
  for (const DeterminantSeries& d : determinant_series(ctx, nullptr)) {
    out += std::to_string(d.problem) + ',' + std::to_string(d.n) + ',' + format_double(d.error) + '\n';
  }
  return out;
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

const std::vector<std::string>& available_checks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

CheckRecord run_check(const std::string& name, const Config& cfg, unsigned threads) {
  const Ctx ctx{cfg, std::max(threads, 1u), cfg.verify.tol_scale};
  for (const auto& [check_name, fn] : registry()) {
    if (check_name == name) return fn(ctx);
  }
  fail(ErrorCode::Config, "unknown verify check '" + name + "'");
}

VerifyReport run_verify(const Config& cfg, unsigned threads) {
  const std::vector<std::string>& names = cfg.verify.checks ? *cfg.verify.checks : available_checks();
  for (const auto& name : names) {
    if (std::find(available_checks().begin(), available_checks().end(), name) == available_checks().end()) {
      fail(ErrorCode::Config, "unknown verify check '" + name + "'");
    }
  }
  VerifyReport report;
  for (const auto& name : names) report.checks.push_back(run_check(name, cfg, threads));
  return report;
}

std::string format_report_csv(const VerifyReport& report) {
  std::string out = "name,passed,worst_violation,tolerance,trials\n";
  for (const CheckRecord& c : report.checks) {
    out += c.name + ',' + (c.passed ? "true" : "false") + ',' + format_double(c.worst_violation) + ',' +
           format_double(c.tolerance) + ',' + std::to_string(c.trials) + '\n';
  }
  return out;
}

nlohmann::json report_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst_violation", c.worst_violation},
                      {"tolerance", c.tolerance},
                      {"trials", c.trials},
                      {"detail", c.detail}});
  }
  return {{"all_passed", report.all_passed()}, {"checks", checks}};
}

}  // namespace slicemean::harness
