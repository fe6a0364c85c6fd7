#pragma once

#include "artdir/geom.hpp"
#include "artdir/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace artdir {

enum class JointKind { revolute, prismatic, screw };

std::string to_string(JointKind k);
JointKind joint_kind_from_string(const std::string& s);

/// Joint parameterization. axis_point is unused for prismatic joints;
/// pitch (meters/radian) applies to screw joints only.
struct JointModel {
  JointKind kind = JointKind::revolute;
  UnitVec axis_direction{Vec3::UnitY()};
  Vec3 axis_point = Vec3::Zero();
  double pitch = 0.0;
};

/// Rigid transform produced by advancing the joint by delta
/// (radians for revolute/screw, meters for prismatic).
RigidTransform joint_transform(const JointModel& joint, double delta);

/// Exact direction of the displacement the joint induces at point g for a
/// perturbation delta (the chord direction of the finite motion).
UnitVec truth_direction(const JointModel& joint, const Vec3& g, double delta);

/// delta -> 0 limit of truth_direction: axis x (g - c) for revolute,
/// the axis itself for prismatic, their pitch-weighted mix for screw.
UnitVec tangent_direction(const JointModel& joint, const Vec3& g);

/// Parametric articulated scene: a fixed cuboid body, a movable panel
/// (door/drawer face) attached through `joint`, and a bar handle on the
/// panel front. All quantities are given in the object frame; camera_pose
/// maps object coordinates into the camera frame (+z away from the camera,
/// +x right, +y down).
struct SceneSpec {
  Vec3 body_dims = Vec3(0.7, 0.9, 0.35);
  Vec3 panel_dims = Vec3(0.6, 0.8, 0.02);
  Vec3 handle_dims = Vec3(0.04, 0.24, 0.05);
  Vec3 handle_offset = Vec3(0.2, 0.0, 0.0);  // on the panel front plane
  JointModel joint;
  double density = 1e4;  // points per m^2
  RigidTransform camera_pose;

  static SceneSpec door(double pitch = 0.0);  // revolute (screw if pitch != 0)
  static SceneSpec drawer();                  // prismatic
  static SceneSpec screw(double pitch = 0.03);
};

/// Randomized variation of the default specs, for benchmark populations.
SceneSpec sample_scene_spec(JointKind kind, Rng& rng);

struct Scene {
  std::vector<AttributedPoint> points;
  JointModel joint_truth;  // camera frame
  std::uint64_t seed = 0;

  std::size_t count_movable() const;
  std::size_t count_holdable() const;
};

/// Samples every cuboid face at `density`, labels body/panel/handle points
/// (m,h) = (0,0)/(1,0)/(1,1), maps to the camera frame and keeps only
/// camera-facing points (normal . position < 0). Deterministic given rng
/// state. Throws EmptyScene when fewer than 100 movable or no holdable
/// points survive culling.
Scene generate_scene(const SceneSpec& spec, Rng& rng);

/// Per-point displacement vectors q_i, index-aligned with a Scene.
struct DisplacementField {
  std::vector<Vec3> vectors;
  std::vector<std::uint8_t> valid;
  double delta = 0.0;

  std::size_t size() const { return vectors.size(); }
};

/// q_i = T(delta) p_i - p_i on movable points, exactly zero elsewhere.
DisplacementField ground_truth_field(const Scene& scene, double delta);

/// Corruption model: per-vector direction jitter (half-normal angle about a
/// random orthogonal axis), relative magnitude noise, uniform-direction
/// outliers, and dropout (marked invalid, not deleted).
struct NoiseSpec {
  double sigma_dir = 0.0;        // radians
  double sigma_mag = 0.0;        // relative
  double outlier_fraction = 0.0; // [0, 1)
  double dropout_fraction = 0.0; // [0, 1)

  bool is_zero() const {
    return sigma_dir == 0.0 && sigma_mag == 0.0 && outlier_fraction == 0.0 &&
           dropout_fraction == 0.0;
  }
};

struct CorruptionStats {
  std::size_t outliers = 0;
  std::size_t dropped = 0;
};

/// Movable entries are identified by nonzero ground-truth vectors; fixed
/// (zero) entries pass through untouched.
DisplacementField corrupt(const DisplacementField& field,
                          const NoiseSpec& noise, Rng& rng,
                          CorruptionStats* stats = nullptr);

/// Field-quality metric: relative L1 magnitude error and 1 - cosine
/// direction error, averaged over entries with nonzero truth.
struct FlowError {
  double magnitude_term = 0.0;
  double direction_term = 0.0;
  std::size_t compared = 0;
  std::size_t skipped = 0;
};

FlowError flow_error(const DisplacementField& estimate,
                     const DisplacementField& truth);

}  // namespace artdir
