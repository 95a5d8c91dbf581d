#pragma once

// Geometry of S_{A_N} = S^{N-1}(sqrt N) ∩ Q_N^{-1}(w0): a sphere of
// dimension N-1-m centred at z0_N with radius a_z = sqrt(N - |z0_N|^2).
//
// After the change of variables x = x0 + C y (C C^T = G_N) the projected
// domain D_N is the ball |y| < a_z and the normalized slice mean of a
// cylinder function phi becomes
//
//   exp(log_prefactor) * ∫_{|y|<a_z} phi(x0 + C y) (1 - |y|^2/a_z^2)^exponent dy
//
// with exponent = (N - k - m - 2)/2 and
// log_prefactor = ln c_{N-1-k-m} - ln c_{N-1-m} - k ln a_z.

#include "affine_model.hpp"
#include "projections.hpp"

#include <cstddef>

namespace slicemean {

struct SliceGeometry {
  std::size_t n = 0;
  std::size_t d = 0;  // n - 1
  std::size_t m = 0;
  std::size_t k = 0;
  numlin::Vector z0n;  // slice centre, compact length min(n, width)
  numlin::Vector x0;   // first k coordinates of z0n
  double a_z = 0.0;
  double exponent = 0.0;
  double log_prefactor = 0.0;
  ProjectionData pd;
};

/// Throws SliceEmpty when N <= |z0_N|^2, BelowMinN when N < n_min.
SliceGeometry build_slice(const ValidatedProblem& vp, std::size_t n);

/// (1 - r^2/a_z^2)^exponent on [0, a_z), zero outside.
double weight(const SliceGeometry& geom, double r);

double log_norm_prefactor(const SliceGeometry& geom);

// ln[c_{d-k-m} / (a_z^k c_{d-m})] for raw dimensions; k = 0 gives 0.
double log_norm_prefactor(std::size_t n, std::size_t k, std::size_t m, double a_z);

}  // namespace slicemean
