#include "artdir/pipeline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace artdir {

GraspPointResult select_grasp_point(const Scene& scene, int part) {
  if (part <= 0) {
    throw UnknownPart("select_grasp_point: part ids are positive");
  }
  Vec3 holdable_sum = Vec3::Zero();
  Vec3 movable_sum = Vec3::Zero();
  std::size_t n_holdable = 0;
  std::size_t n_movable = 0;
  for (const AttributedPoint& p : scene.points) {
    if (p.movable_id != part) continue;
    movable_sum += p.position;
    ++n_movable;
    if (p.holdable_id > 0) {
      holdable_sum += p.position;
      ++n_holdable;
    }
  }
  if (n_movable == 0) {
    throw UnknownPart("select_grasp_point: no points with movable id " +
                      std::to_string(part));
  }
  GraspPointResult res;
  if (n_holdable > 0) {
    res.point = holdable_sum / static_cast<double>(n_holdable);
  } else {
    res.point = movable_sum / static_cast<double>(n_movable);
    res.fallback = true;
  }
  return res;
}

namespace {

struct PoseCandidate {
  Mat3 rotation;
  Vec3 origin;
  double width;
};

double rotation_distance(const Mat3& a, const Mat3& b) {
  const Mat3 rel = a.transpose() * b;
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

std::vector<Vec3> fan_directions(const Vec3& base, std::size_t count,
                                 Rng& rng) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  dirs.push_back(base);
  if (count == 1) return dirs;
  Vec3 ref = std::abs(base.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = base.cross(ref).normalized();
  const Vec3 e2 = base.cross(e1);
  const std::size_t remaining = count - 1;
  const std::size_t ring1 = (remaining + 1) / 2;
  for (std::size_t i = 0; i < remaining; ++i) {
    const bool inner = i < ring1;
    const double tilt = inner ? 10.0 * kPi / 180.0 : 20.0 * kPi / 180.0;
    const std::size_t ring_count = inner ? ring1 : remaining - ring1;
    const std::size_t j = inner ? i : i - ring1;
    const double az = 2.0 * kPi * static_cast<double>(j) /
                          static_cast<double>(ring_count) +
                      rng.uniform(0.0, 0.1);
    const Vec3 d = std::cos(tilt) * base +
                   std::sin(tilt) * (std::cos(az) * e1 + std::sin(az) * e2);
    dirs.push_back(d.normalized());
  }
  return dirs;
}

}  // namespace

GraspPose sample_grasp_pose(const Scene& scene, const Vec3& g,
                            const GripperSpec& gripper,
                            const RigidTransform& home, Rng& rng, int n_rot) {
  // Holdable geometry near the grasp point: mean normal and principal axis.
  std::vector<Vec3> holdable;
  Vec3 normal_sum = Vec3::Zero();
  for (const AttributedPoint& p : scene.points) {
    if (p.holdable_id > 0 &&
        (p.position - g).norm() < 4.0 * gripper.finger_length) {
      holdable.push_back(p.position);
      normal_sum += p.normal.vec();
    }
  }
  if (holdable.empty()) {
    throw NoValidGrasp("sample_grasp_pose: no holdable points near g");
  }

  Vec3 approach_base = -normal_sum;
  if (approach_base.norm() < 1e-9) {
    approach_base = Vec3::UnitZ();  // balanced normals: approach along view
  }
  approach_base.normalize();

  Mat3 scatter = Mat3::Zero();
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : holdable) centroid += p;
  centroid /= static_cast<double>(holdable.size());
  for (const Vec3& p : holdable) {
    const Vec3 d = p - centroid;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Vec3 long_axis = eig.eigenvectors().col(2);

  const std::size_t n_approach =
      std::max<std::size_t>(1, static_cast<std::size_t>(n_rot) / 16);
  const std::size_t n_roll =
      std::max<std::size_t>(1, static_cast<std::size_t>(n_rot) / n_approach);
  const std::vector<Vec3> approaches =
      fan_directions(approach_base, n_approach, rng);

  const double half_len = gripper.finger_length / 2.0;
  const double half_breadth = gripper.finger_width / 2.0;

  bool found = false;
  std::vector<PoseCandidate> valid;
  for (const Vec3& approach : approaches) {
    // Roll 0 closes across the handle's long axis.
    Vec3 x0 = approach.cross(long_axis);
    if (x0.norm() < 1e-6) {
      Vec3 ref = std::abs(approach.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      x0 = approach.cross(ref);
    }
    x0.normalize();
    for (std::size_t j = 0; j < n_roll; ++j) {
      // Full sweep: flipped jaw assignments are distinct candidates so the
      // home-distance tie-break can pick between them.
      const double phi = 2.0 * kPi * static_cast<double>(j) /
                         static_cast<double>(n_roll);
      const Vec3 x =
          Eigen::AngleAxisd(phi, approach).toRotationMatrix() * x0;
      const Vec3 y = approach.cross(x);
      Mat3 r;
      r.col(0) = x;
      r.col(1) = y;
      r.col(2) = approach;
      const Vec3 origin = g + half_len * approach;

      // Fingers span local z in [-finger_length, 0].
      double max_abs_x = 0.0;
      bool captured = false;
      for (const Vec3& p : holdable) {
        const Vec3 q = r.transpose() * (p - origin);
        if (std::abs(q.y()) <= half_breadth && q.z() >= -gripper.finger_length &&
            q.z() <= 0.0) {
          max_abs_x = std::max(max_abs_x, std::abs(q.x()));
          captured = true;
        }
      }
      if (!captured) continue;
      const double width = 2.0 * max_abs_x + gripper.clearance_margin;
      if (width > gripper.max_opening) continue;

      const double inner = width / 2.0;
      const double outer = inner + gripper.finger_thickness;
      const double palm_x = gripper.max_opening / 2.0 + gripper.finger_thickness;
      bool collides = false;
      for (const AttributedPoint& pt : scene.points) {
        const Vec3 q = r.transpose() * (pt.position - origin);
        if (std::abs(q.y()) > half_breadth) continue;
        if (q.z() >= -gripper.finger_length && q.z() <= 0.0) {
          const double ax = std::abs(q.x());
          if (ax > inner && ax < outer) {
            collides = true;
            break;
          }
        } else if (q.z() < -gripper.finger_length &&
                   q.z() >= -gripper.finger_length - gripper.palm_depth &&
                   std::abs(q.x()) <= palm_x) {
          collides = true;
          break;
        }
      }
      if (collides) continue;
      valid.push_back({r, origin, width});
      found = true;
    }
  }
  if (!found) {
    throw NoValidGrasp("sample_grasp_pose: all sampled poses collide");
  }

  double min_width = std::numeric_limits<double>::infinity();
  for (const PoseCandidate& c : valid) min_width = std::min(min_width, c.width);
  const PoseCandidate* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const PoseCandidate& c : valid) {
    if (c.width > min_width + 1e-3) continue;
    const double dist = rotation_distance(home.rotation, c.rotation);
    if (dist < best_dist) {
      best_dist = dist;
      best = &c;
    }
  }

  GraspPose pose;
  pose.pose = RigidTransform{best->rotation, best->origin};
  pose.width = best->width;
  pose.grasp_point = g;
  return pose;
}

DirectionEstimate estimate_direction(const Scene& scene,
                                     const DisplacementField& field,
                                     const Vec3& g,
                                     const EstimatorConfig& cfg) {
  if (field.size() != scene.points.size()) {
    throw LengthMismatch("estimate_direction: field not aligned with scene");
  }
  if (cfg.subset_size < 3) {
    throw DataError("estimate_direction: subset_size must be >= 3");
  }

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.valid[i] && scene.points[i].movable_id > 0) {
      usable.push_back(i);
    }
  }
  if (usable.size() < static_cast<std::size_t>(cfg.min_valid_points) ||
      usable.size() < static_cast<std::size_t>(cfg.subset_size)) {
    throw InsufficientField(
        "estimate_direction: too few valid movable displacement vectors");
  }

  const Rng base(cfg.seed);
  DirectionEstimate est;
  est.samples.directions.reserve(cfg.subset_count);
  est.residuals.reserve(cfg.subset_count);
  for (int k = 0; k < cfg.subset_count; ++k) {
    Rng sub = base.substream(static_cast<std::uint64_t>(k));
    const std::vector<std::size_t> pick = sub.sample_without_replacement(
        usable.size(), static_cast<std::size_t>(cfg.subset_size));
    Correspondences c;
    c.sources.reserve(pick.size());
    c.targets.reserve(pick.size());
    for (const std::size_t j : pick) {
      const std::size_t i = usable[j];
      c.sources.push_back(scene.points[i].position);
      c.targets.push_back(scene.points[i].position + field.vectors[i]);
    }
    try {
      const RigidTransform t = fit_rigid(c);
      est.samples.directions.push_back(direction_from_transform(t, g));
      est.residuals.push_back(residual(c, t));
    } catch (const DegenerateDisplacement&) {
      ++est.degenerate_subsets;
    } catch (const DegenerateConfiguration&) {
      ++est.degenerate_subsets;
    }
  }

  if (est.samples.size() * 2 < static_cast<std::size_t>(cfg.subset_count)) {
    throw TooManyDegenerateSubsets(
        "estimate_direction: more than half the subsets were degenerate");
  }
  est.vmf = vmf_fit(est.samples);
  est.d_star = frechet_mean(est.samples);
  return est;
}

UnitVec baseline_normal_only(const Scene& scene, int part) {
  DirectionSamples normals;
  for (const AttributedPoint& p : scene.points) {
    if (p.movable_id == part) {
      normals.directions.push_back(p.normal);
    }
  }
  if (normals.size() == 0) {
    throw UnknownPart("baseline_normal_only: no points with movable id " +
                      std::to_string(part));
  }
  return frechet_mean(normals);
}

UnitVec baseline_flow_argmax(const Scene& scene,
                             const DisplacementField& field, const Vec3&) {
  if (field.size() != scene.points.size()) {
    throw LengthMismatch("baseline_flow_argmax: field not aligned with scene");
  }
  double best = 0.0;
  std::size_t best_i = 0;
  bool any = false;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.valid[i] || scene.points[i].movable_id == 0) continue;
    any = true;
    const double m = field.vectors[i].norm();
    if (m > best) {
      best = m;
      best_i = i;
    }
  }
  if (!any) {
    throw InsufficientField("baseline_flow_argmax: no valid movable vectors");
  }
  if (best <= kDirectionEps) {
    throw DegenerateDisplacement(
        "baseline_flow_argmax: all displacements are zero");
  }
  return UnitVec::normalized(field.vectors[best_i]);
}

}  // namespace artdir
