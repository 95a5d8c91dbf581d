#include "slice_geometry.hpp"

#include "error.hpp"

#include <cmath>
#include <string>

namespace slicemean {

double log_norm_prefactor(std::size_t n, std::size_t k, std::size_t m, double a_z) {
  if (n < k + m + 2) fail(ErrorCode::InvalidArgument, "log_norm_prefactor: N < k + m + 2");
  if (!(a_z > 0.0)) fail(ErrorCode::InvalidArgument, "log_norm_prefactor: a_z must be > 0");
  if (k == 0) return 0.0;
  const std::size_t d = n - 1;
  return numlin::log_surface_constant(d - k - m) - numlin::log_surface_constant(d - m) -
         static_cast<double>(k) * std::log(a_z);
}

double log_norm_prefactor(const SliceGeometry& geom) { return geom.log_prefactor; }

SliceGeometry build_slice(const ValidatedProblem& vp, std::size_t n) {
  if (is_limit(n)) fail(ErrorCode::InvalidArgument, "slice geometry needs a finite N");
  const std::size_t floor_n = vp.k() + vp.m() + 2;
  if (n < floor_n) {
    fail(ErrorCode::BelowMinN, "N = " + std::to_string(n) + " is below n_min = " +
                                   std::to_string(vp.n_min()));
  }
  numlin::Vector z0n;
  try {
    z0n = truncated_closest_point(vp, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    fail(ErrorCode::BelowMinN, "Q_N is not onto at N = " + std::to_string(n));
  }
  const double r2 = z0n.squaredNorm();
  if (static_cast<double>(n) <= r2) {
    fail(ErrorCode::SliceEmpty, "slice is empty at N = " + std::to_string(n) +
                                    " (|z0_N|^2 = " + std::to_string(r2) + ")");
  }
  if (n < vp.n_min()) {
    fail(ErrorCode::BelowMinN, "N = " + std::to_string(n) + " is below n_min = " +
                                   std::to_string(vp.n_min()));
  }

  SliceGeometry geom;
  geom.n = n;
  geom.d = n - 1;
  geom.m = vp.m();
  geom.k = vp.k();
  geom.x0 = z0n.head(static_cast<Eigen::Index>(geom.k));
  geom.z0n = std::move(z0n);
  geom.a_z = std::sqrt(static_cast<double>(n) - r2);
  geom.exponent = 0.5 * (static_cast<double>(geom.d) - static_cast<double>(geom.k) -
                         static_cast<double>(geom.m) - 1.0);
  geom.log_prefactor = log_norm_prefactor(n, geom.k, geom.m, geom.a_z);
  geom.pd = build_projection(vp, n);
  return geom;
}

double weight(const SliceGeometry& geom, double r) {
  if (r < 0.0) r = -r;
  if (r >= geom.a_z) return 0.0;
  const double ratio = r / geom.a_z;
  return std::exp(geom.exponent * std::log1p(-ratio * ratio));
}

}  // namespace slicemean
