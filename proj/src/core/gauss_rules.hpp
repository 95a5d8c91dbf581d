#pragma once

// Gauss rules from three-term recurrences: nodes are eigenvalues of the
// Jacobi matrix (polished by Newton steps on the orthonormal polynomial),
// weights come from the Christoffel function 1 / sum_j p_j(x)^2. Weights
// are normalized to sum to one, so every rule integrates against a
// probability measure.

#include <cstddef>
#include <memory>
#include <vector>

namespace slicemean::rules {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule for the Beta(a+1, b+1) density on [0, 1], i.e. weight u^a (1-u)^b
/// with a, b > -1. Recurrence coefficients are formed directly in u so
/// nodes near u = 0 keep full relative accuracy even for b in the
/// thousands.
GaussRule gauss_jacobi_unit(std::size_t n, double a, double b);

// Uniform density on [0, 1].
GaussRule gauss_legendre_unit(std::size_t n);

// Standard normal density.
GaussRule gauss_hermite_normal(std::size_t n);

// Process-wide memoized versions; safe to call concurrently.
std::shared_ptr<const GaussRule> cached_jacobi_unit(std::size_t n, double a, double b);
std::shared_ptr<const GaussRule> cached_hermite_normal(std::size_t n);

}  // namespace slicemean::rules
