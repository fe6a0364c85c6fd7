#pragma once

#include "artdir/geom.hpp"

#include <vector>

namespace artdir {

/// Paired point sets: targets[i] is where sources[i] ended up.
struct Correspondences {
  std::vector<Vec3> sources;
  std::vector<Vec3> targets;

  std::size_t size() const { return sources.size(); }
};

/// Least-squares rigid transform minimizing sum ||T s_i - t_i||^2 (Kabsch).
/// The rotation always has det +1; a reflection optimum is corrected by
/// flipping the smallest singular direction.
///
/// Throws InsufficientPoints (< 3 pairs) and DegenerateConfiguration when
/// the source points are collinear or coincident (second singular value of
/// the source scatter below 1e-12 of the largest).
RigidTransform fit_rigid(const Correspondences& c);

/// Mean of ||T s_i - t_i||^2 over all pairs, meters^2.
double residual(const Correspondences& c, const RigidTransform& t);

}  // namespace artdir
