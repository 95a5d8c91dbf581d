#pragma once

// Finite Gram-matrix data for the coordinate projection restricted to
// ker Q_N and to its orthogonal complement of ker L_N.

#include "affine_model.hpp"
#include "numlin.hpp"

#include <cstddef>

namespace slicemean {

struct ProjectionData {
  std::size_t n = 0;           // truncation level, kLimitN for the limit
  std::size_t width = 0;       // min(n, vp.width()): columns of the compact block
  numlin::Matrix gram;         // G = L0 L0^*, k x k
  double log_det_l0 = 0.0;     // ln |det L0| = ln det G / 2
  numlin::Matrix chol;         // lower triangular C with C C^T = G
  // Orthonormal basis of ker Q_N inside the first `width` coordinates. The
  // full kernel basis of Q_N is block-diagonal: this block plus the unit
  // vectors e_{width+1}, ..., e_N, which never touch the first k rows.
  numlin::Matrix kernel_basis;
  numlin::Matrix top_rows;     // first k rows of kernel_basis
};

/// Throws NotSPD when the projection fails to be onto R^k at this N.
ProjectionData build_projection(const ValidatedProblem& vp, std::size_t n);

// Builds G and its factor from an explicit kernel basis block.
ProjectionData projection_from_kernel(std::size_t n, std::size_t k, numlin::Matrix kernel_basis);

/// |L0^{-1} x|^2 = <G^{-1} x, x>: squared norm of the smallest preimage.
double preimage_norm_sq(const ProjectionData& pd, const numlin::Vector& x);

// x0 + C y, so that preimage_norm_sq(pd, result - x0) == |y|^2.
numlin::Vector push_coordinates(const ProjectionData& pd, const numlin::Vector& x0,
                                const numlin::Vector& y);

/// |P0 t|^2, with P0 the orthogonal projection of l^2 onto ker Q and t
/// embedded in the first k coordinates. Computed through the row space of
/// Q (|t|^2 - t^T Q^T (Q Q^T)^{-1} Q t), not through a kernel basis.
double kernel_projection_norm_sq(const ValidatedProblem& vp, const numlin::Vector& t);

}  // namespace slicemean
