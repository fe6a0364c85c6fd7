#include "artdir/dirstat.hpp"

#include <cmath>

namespace artdir {

namespace {
constexpr double kKappaUniform = 1e-6;

/// Any rotation taking +z to u; used to move samples from the pole to mu.
Mat3 frame_to(const UnitVec& u) {
  return Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), u.vec())
      .toRotationMatrix();
}
}  // namespace

double vmf_pdf(const UnitVec& d, const VmfParams& params) {
  if (params.kappa < kKappaUniform) {
    return 1.0 / (4.0 * kPi);
  }
  const double k = params.kappa;
  const double t = params.mu.dot(d);
  // kappa/(4 pi sinh k) e^{k t} == k e^{k(t-1)} / (2 pi (1 - e^{-2k}))
  return k * std::exp(k * (t - 1.0)) / (2.0 * kPi * (1.0 - std::exp(-2.0 * k)));
}

VmfParams vmf_fit(const DirectionSamples& s) {
  if (s.size() < 2) {
    throw TooFewSamples("vmf_fit: need at least 2 samples");
  }
  Vec3 sum = Vec3::Zero();
  for (const UnitVec& d : s.directions) {
    sum += d.vec();
  }
  const double rbar = sum.norm() / static_cast<double>(s.size());
  if (rbar <= kResultantMin) {
    throw DegenerateResultant("vmf_fit: mean resultant length below 1e-6");
  }
  VmfParams p;
  p.mu = UnitVec::normalized(sum);
  const double denom = 1.0 - rbar * rbar;
  p.kappa = denom > 0.0 ? rbar * (3.0 - rbar * rbar) / denom : kVmfKappaMax;
  p.kappa = std::min(p.kappa, kVmfKappaMax);
  return p;
}

DirectionSamples vmf_sample(const VmfParams& params, std::size_t n, Rng& rng) {
  const Mat3 rot = frame_to(params.mu);
  const double k = params.kappa;
  DirectionSamples out;
  out.directions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_pos();
    double w;
    if (k < kKappaUniform) {
      w = 2.0 * u - 1.0;
    } else {
      w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * k)) / k;
    }
    w = std::clamp(w, -1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
    const Vec3 local(r * std::cos(phi), r * std::sin(phi), w);
    out.directions.push_back(UnitVec::normalized(rot * local));
  }
  return out;
}

Vec3 sphere_log(const UnitVec& u, const UnitVec& d) {
  const double c = std::clamp(u.dot(d), -1.0, 1.0);
  const double theta = std::acos(c);
  const Vec3 w = d.vec() - c * u.vec();
  const double wn = w.norm();
  if (wn < 1e-15) {
    // d == u (log is zero); the antipode is excluded by resultant checks
    // upstream, so a zero tangent is the only remaining case.
    return Vec3::Zero();
  }
  return (theta / wn) * w;
}

UnitVec sphere_exp(const UnitVec& u, const Vec3& tangent) {
  const double theta = tangent.norm();
  if (theta < 1e-15) {
    return u;
  }
  return UnitVec::normalized(std::cos(theta) * u.vec() +
                             (std::sin(theta) / theta) * tangent);
}

UnitVec slerp(const UnitVec& a, const UnitVec& b, double t) {
  return sphere_exp(a, t * sphere_log(a, b));
}

UnitVec frechet_mean(const DirectionSamples& s) {
  if (s.size() == 0) {
    throw TooFewSamples("frechet_mean: empty sample set");
  }
  Vec3 sum = Vec3::Zero();
  for (const UnitVec& d : s.directions) {
    sum += d.vec();
  }
  if (sum.norm() / static_cast<double>(s.size()) <= kResultantMin) {
    throw DegenerateResultant(
        "frechet_mean: antipodally balanced samples, mean unidentifiable");
  }

  UnitVec mu = UnitVec::normalized(sum);
  const int kMaxIters = 1000;
  double update = 0.0;
  for (int it = 0; it < kMaxIters; ++it) {
    Vec3 grad = Vec3::Zero();
    for (const UnitVec& d : s.directions) {
      grad += sphere_log(mu, d);
    }
    grad /= static_cast<double>(s.size());
    update = grad.norm();
    if (update < 1e-12) {
      return mu;
    }
    mu = sphere_exp(mu, grad);
  }
  if (update >= 1e-9) {
    throw NonConvergence("frechet_mean: fixed point iteration cap reached");
  }
  return mu;
}

}  // namespace artdir
