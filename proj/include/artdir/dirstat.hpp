#pragma once

#include "artdir/geom.hpp"
#include "artdir/rng.hpp"

#include <vector>

namespace artdir {

/// von Mises-Fisher parameters on S^2: mean direction and concentration.
struct VmfParams {
  UnitVec mu;
  double kappa = 0.0;
};

struct DirectionSamples {
  std::vector<UnitVec> directions;

  std::size_t size() const { return directions.size(); }
};

inline constexpr double kVmfKappaMax = 1e6;
inline constexpr double kResultantMin = 1e-6;

/// vMF density per steradian on S^2, normalization specialized to R^3:
/// kappa / (4 pi sinh kappa) * exp(kappa mu.d), evaluated in a large-kappa
/// safe form. Below kappa = 1e-6 the uniform limit 1/(4 pi) is used.
double vmf_pdf(const UnitVec& d, const VmfParams& params);

/// Moment estimator: mu is the normalized vector sum, kappa the Banerjee
/// closed form r(3 - r^2)/(1 - r^2) capped at 1e6. Throws
/// DegenerateResultant when the mean resultant length is <= 1e-6.
VmfParams vmf_fit(const DirectionSamples& s);

/// n i.i.d. draws, deterministic given the generator state. The tangential
/// component w = cos(theta) is drawn by exact CDF inversion,
/// w = 1 + ln(u + (1-u) e^{-2 kappa}) / kappa, then rotated to mu.
DirectionSamples vmf_sample(const VmfParams& params, std::size_t n, Rng& rng);

/// Riemannian log map at u: tangent vector of length arccos(u.d) toward d.
Vec3 sphere_log(const UnitVec& u, const UnitVec& d);

/// Riemannian exp map at u.
UnitVec sphere_exp(const UnitVec& u, const Vec3& tangent);

/// Geodesic interpolation between unit vectors (t in [0,1]).
UnitVec slerp(const UnitVec& a, const UnitVec& b, double t);

/// Minimizer of sum arccos(mu.d_i)^2 by tangent-space fixed point iteration
/// from the normalized Euclidean mean. Converged when the mean log-map
/// vector has norm < 1e-12 (1000 iteration cap; NonConvergence if still
/// >= 1e-9 at the cap). Throws DegenerateResultant on balanced samples.
UnitVec frechet_mean(const DirectionSamples& s);

}  // namespace artdir
