#pragma once

// Three independent evaluators of a slice mean and its limit:
//  * slice_mean_quadrature: deterministic disintegration quadrature,
//  * slice_mean_mc: uniform sampling on the slice sphere,
//  * gaussian_limit: the limiting Gaussian integral on R^k,
// plus the truncated integral used to exhibit the counterexample.

#include "affine_model.hpp"
#include "slice_geometry.hpp"
#include "testfns.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace slicemean {

struct QuadConfig {
  std::size_t radial_nodes = 128;
  std::size_t angular_nodes = 64;  // k = 2 circle, k = 3 azimuth
  std::size_t polar_nodes = 32;    // k = 3 only
  double target_rel_err = 1e-9;
  // Radial refinement stops here even if the target is not met.
  std::size_t max_radial_nodes = 512;
};

struct McConfig {
  std::uint64_t n_samples = 100'000;
  std::uint64_t seed = 0;
  std::uint64_t shard_size = std::uint64_t{1} << 16;
};

struct IntegralResult {
  double value = 0.0;
  double err_estimate = 0.0;  // quadrature: |v(n) - v(n/2)|; MC: standard error
  std::uint64_t n_evals = 0;
  bool diverged = false;
};

void check_config(const QuadConfig& cfg);
void check_config(const McConfig& cfg);

/// Normalized slice mean by the disintegration formula in radial form:
/// |y| = a_z sqrt(u) turns the weight into the Beta(k/2, exponent + 1)
/// density in u, integrated with the matching Gauss-Jacobi rule; the unit
/// sphere in R^k is covered by the two points +-1 (k = 1), an equispaced
/// periodic rule (k = 2) or Gauss-Legendre in the polar cosine times an
/// equispaced azimuth (k = 3). Throws UnsupportedDimension for k > 3.
IntegralResult slice_mean_quadrature(const SliceGeometry& geom, const TestFunction& phi,
                                     const QuadConfig& cfg = {});

/// Monte Carlo slice mean: y = a_z g/|g| for g ~ N(0, I_{N-m}), x = z0_N + K y.
/// Only the block of K touching the first k coordinates is materialized;
/// the remaining N - width components of g enter through |g|^2 as one
/// chi-square draw.
IntegralResult slice_mean_mc(const SliceGeometry& geom, const TestFunction& phi,
                             const McConfig& cfg, unsigned threads = 1);

struct GaussHermite {
  std::size_t nodes = 48;
};
struct MonteCarlo {
  McConfig cfg;
};
using LimitMethod = std::variant<GaussHermite, MonteCarlo>;

/// E[phi(z0_(k) + C g)] with g ~ N(0, I_k) and C C^T = G_inf. The Monte
/// Carlo route flags `diverged` when the running estimate fails to settle
/// (see detect_divergence).
IntegralResult gaussian_limit(const ValidatedProblem& vp, const TestFunction& phi,
                              const LimitMethod& method, unsigned threads = 1);

struct Checkpoint {
  double estimate = 0.0;
  double stderr_of_mean = 0.0;
};

// True when two consecutive doublings each move the estimate by more than
// `factor` standard errors of the earlier checkpoint.
bool detect_divergence(const std::vector<Checkpoint>& checkpoints, double factor = 10.0);

/// (2 pi)^{-1/2} ∫_{-R}^{R} exp(z x - z^2/2) / (1 + x^2) dx, the truncated
/// integral of g(x) = exp(x^2/2)/(1+x^2) against N(z, 1). Composite
/// Gauss-Legendre with `nodes` points per panel; panels are halved until
/// two successive values agree to 1e-10 relative.
double counterexample_probe(double z, double r, std::size_t nodes = 16);

}  // namespace slicemean
