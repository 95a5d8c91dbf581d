#pragma once

// Reference problems used by the verification suite and the tests.

#include "core/affine_model.hpp"

#include <cstddef>
#include <random>

namespace slicemean::harness {

// Q = [[0, 1]], w0 = [c], k = 1: the slice fixes x_2 = c.
AffineProblem fixture_a(double c);

// Q = [[3, 4]], w0 = [5], k = 1: z0 = (0.6, 0.8), G = 0.64.
AffineProblem fixture_b();

// m x s Gaussian constraint rows and Gaussian w0. Valid with probability
// one when s > k + m.
AffineProblem random_problem(std::mt19937_64& rng, std::size_t s, std::size_t m, std::size_t k);

// Random orthogonal n x n matrix (QR of a Gaussian matrix, signs fixed).
numlin::Matrix random_orthogonal(std::mt19937_64& rng, std::size_t n);

}  // namespace slicemean::harness
