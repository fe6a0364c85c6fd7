#include "artdir/artsim.hpp"

#include <algorithm>
#include <cmath>

namespace artdir {

std::string to_string(JointKind k) {
  switch (k) {
    case JointKind::revolute:
      return "revolute";
    case JointKind::prismatic:
      return "prismatic";
    case JointKind::screw:
      return "screw";
  }
  return "unknown";
}

JointKind joint_kind_from_string(const std::string& s) {
  if (s == "revolute") return JointKind::revolute;
  if (s == "prismatic") return JointKind::prismatic;
  if (s == "screw") return JointKind::screw;
  throw DataError("unknown joint kind: " + s);
}

RigidTransform joint_transform(const JointModel& joint, double delta) {
  switch (joint.kind) {
    case JointKind::prismatic:
      return RigidTransform::translate(delta * joint.axis_direction.vec());
    case JointKind::revolute:
      return RigidTransform::rotate_about(joint.axis_direction,
                                          joint.axis_point, delta);
    case JointKind::screw: {
      const RigidTransform rot = RigidTransform::rotate_about(
          joint.axis_direction, joint.axis_point, delta);
      return RigidTransform::translate(joint.pitch * delta *
                                       joint.axis_direction.vec()) *
             rot;
    }
  }
  throw DataError("joint_transform: invalid joint kind");
}

UnitVec truth_direction(const JointModel& joint, const Vec3& g, double delta) {
  return direction_from_transform(joint_transform(joint, delta), g);
}

UnitVec tangent_direction(const JointModel& joint, const Vec3& g) {
  const Vec3 a = joint.axis_direction.vec();
  switch (joint.kind) {
    case JointKind::prismatic:
      return joint.axis_direction;
    case JointKind::revolute:
      return UnitVec::normalized(a.cross(g - joint.axis_point));
    case JointKind::screw:
      return UnitVec::normalized(a.cross(g - joint.axis_point) +
                                 joint.pitch * a);
  }
  throw DataError("tangent_direction: invalid joint kind");
}

namespace {

struct Cuboid {
  Vec3 center;
  Vec3 half;  // half extents
  int movable_id;
  int holdable_id;
  std::array<int, 3> color;
};

// Uniform samples on all six faces of a cuboid, with outward analytic
// normals, count per face = round(density * area).
void sample_cuboid(const Cuboid& box, double density, Rng& rng,
                   std::vector<AttributedPoint>& out) {
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const double area = 4.0 * box.half[u] * box.half[v];
    const auto count =
        static_cast<std::size_t>(std::llround(density * area));
    for (int sign : {-1, +1}) {
      Vec3 normal = Vec3::Zero();
      normal[axis] = sign;
      for (std::size_t i = 0; i < count; ++i) {
        Vec3 p = box.center;
        p[axis] += sign * box.half[axis];
        p[u] += rng.uniform(-box.half[u], box.half[u]);
        p[v] += rng.uniform(-box.half[v], box.half[v]);
        AttributedPoint pt;
        pt.position = p;
        pt.normal = UnitVec(normal);
        pt.color = box.color;
        pt.movable_id = box.movable_id;
        pt.holdable_id = box.holdable_id;
        out.push_back(pt);
      }
    }
  }
}

JointModel default_joint(JointKind kind, const Vec3& panel_dims,
                         double pitch) {
  JointModel j;
  j.kind = kind;
  switch (kind) {
    case JointKind::prismatic:
      j.axis_direction = UnitVec(Vec3::UnitZ());
      j.axis_point = Vec3::Zero();
      j.pitch = 0.0;
      break;
    case JointKind::revolute:
    case JointKind::screw:
      // Hinge along the panel's left vertical edge; the axis sign makes a
      // positive perturbation swing the panel outward, toward the viewer.
      j.axis_direction = UnitVec(Vec3(0.0, -1.0, 0.0));
      j.axis_point = Vec3(-panel_dims.x() / 2.0, 0.0, -panel_dims.z() / 2.0);
      j.pitch = kind == JointKind::screw ? pitch : 0.0;
      break;
  }
  return j;
}

RigidTransform default_camera_pose() {
  // Object frame: +x right, +y up, +z toward the viewer. Camera frame:
  // +x right, +y down, +z away from the camera. The camera sits 1.4 m in
  // front of the object, slightly off-axis so grazing faces cull cleanly.
  Mat3 flip;
  flip << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  const Mat3 tilt =
      (Eigen::AngleAxisd(0.18, Vec3::UnitY()) *
       Eigen::AngleAxisd(-0.12, Vec3::UnitX()))
          .toRotationMatrix();
  return RigidTransform{tilt * flip, Vec3(0.05, 0.04, 1.4)};
}

}  // namespace

SceneSpec SceneSpec::door(double pitch) {
  SceneSpec s;
  s.joint = default_joint(pitch == 0.0 ? JointKind::revolute : JointKind::screw,
                          s.panel_dims, pitch);
  s.camera_pose = default_camera_pose();
  return s;
}

SceneSpec SceneSpec::drawer() {
  SceneSpec s;
  s.handle_offset = Vec3(0.0, 0.0, 0.0);
  s.joint = default_joint(JointKind::prismatic, s.panel_dims, 0.0);
  s.camera_pose = default_camera_pose();
  return s;
}

SceneSpec SceneSpec::screw(double pitch) { return door(pitch); }

SceneSpec sample_scene_spec(JointKind kind, Rng& rng) {
  SceneSpec s = kind == JointKind::prismatic ? SceneSpec::drawer()
                : kind == JointKind::screw   ? SceneSpec::screw()
                                             : SceneSpec::door();
  const double sx = rng.uniform(0.8, 1.25);
  const double sy = rng.uniform(0.8, 1.25);
  s.body_dims = Vec3(s.body_dims.x() * sx, s.body_dims.y() * sy,
                     s.body_dims.z() * rng.uniform(0.8, 1.2));
  s.panel_dims = Vec3(s.panel_dims.x() * sx, s.panel_dims.y() * sy,
                      s.panel_dims.z());
  if (kind != JointKind::prismatic) {
    s.handle_offset.x() = 0.33 * s.panel_dims.x() * rng.uniform(0.9, 1.1);
  }
  s.handle_offset.y() = rng.uniform(-0.2, 0.2) * s.panel_dims.y();
  s.joint = default_joint(kind, s.panel_dims,
                          kind == JointKind::screw ? rng.uniform(0.015, 0.05)
                                                   : 0.0);
  // Jitter the viewpoint.
  Mat3 flip;
  flip << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  const Mat3 tilt = (Eigen::AngleAxisd(rng.uniform(0.08, 0.3), Vec3::UnitY()) *
                     Eigen::AngleAxisd(rng.uniform(-0.25, -0.05), Vec3::UnitX()))
                        .toRotationMatrix();
  s.camera_pose = RigidTransform{
      tilt * flip, Vec3(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                        rng.uniform(1.2, 1.8))};
  return s;
}

std::size_t Scene::count_movable() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const AttributedPoint& p) { return p.movable_id > 0; }));
}

std::size_t Scene::count_holdable() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const AttributedPoint& p) { return p.holdable_id > 0; }));
}

Scene generate_scene(const SceneSpec& spec, Rng& rng) {
  if (spec.density <= 0.0 || spec.body_dims.minCoeff() <= 0.0 ||
      spec.panel_dims.minCoeff() <= 0.0 || spec.handle_dims.minCoeff() <= 0.0) {
    throw DataError("generate_scene: dimensions and density must be positive");
  }

  // Object-frame layout: panel front face on the z = 0 plane, body behind
  // it, handle bar protruding toward the viewer.
  const Vec3& bd = spec.body_dims;
  const Vec3& pd = spec.panel_dims;
  const Vec3& hd = spec.handle_dims;

  std::vector<Cuboid> boxes;
  boxes.push_back({Vec3(0, 0, -pd.z() - bd.z() / 2.0), bd / 2.0, 0, 0,
                   {170, 170, 170}});
  boxes.push_back({Vec3(0, 0, -pd.z() / 2.0), pd / 2.0, 1, 0,
                   {200, 200, 200}});
  boxes.push_back({Vec3(spec.handle_offset.x(), spec.handle_offset.y(),
                        hd.z() / 2.0),
                   hd / 2.0, 1, 1, {90, 90, 90}});

  std::vector<AttributedPoint> object_points;
  for (const Cuboid& b : boxes) {
    sample_cuboid(b, spec.density, rng, object_points);
  }

  Scene scene;
  scene.seed = rng.seed();
  scene.points.reserve(object_points.size());
  const RigidTransform& cam = spec.camera_pose;
  for (AttributedPoint pt : object_points) {
    pt.position = cam * pt.position;
    pt.normal = UnitVec::normalized(cam.rotation * pt.normal.vec());
    if (pt.normal.vec().dot(pt.position) < 0.0) {  // camera-facing only
      scene.points.push_back(pt);
    }
  }

  JointModel j = spec.joint;
  j.axis_direction =
      UnitVec::normalized(cam.rotation * j.axis_direction.vec());
  j.axis_point = cam * j.axis_point;
  scene.joint_truth = j;

  if (scene.count_movable() < 100 || scene.count_holdable() == 0) {
    throw EmptyScene("generate_scene: too few movable/holdable points; "
                     "increase density");
  }
  return scene;
}

DisplacementField ground_truth_field(const Scene& scene, double delta) {
  if (delta == 0.0) {
    throw DataError("ground_truth_field: delta must be nonzero");
  }
  const RigidTransform t = joint_transform(scene.joint_truth, delta);
  DisplacementField field;
  field.delta = delta;
  field.vectors.reserve(scene.points.size());
  field.valid.assign(scene.points.size(), 1);
  for (const AttributedPoint& pt : scene.points) {
    field.vectors.push_back(pt.movable_id > 0 ? Vec3(t * pt.position -
                                                     pt.position)
                                              : Vec3(Vec3::Zero()));
  }
  return field;
}

DisplacementField corrupt(const DisplacementField& field,
                          const NoiseSpec& noise, Rng& rng,
                          CorruptionStats* stats) {
  if (noise.outlier_fraction < 0.0 || noise.outlier_fraction >= 1.0 ||
      noise.dropout_fraction < 0.0 || noise.dropout_fraction >= 1.0) {
    throw DataError("corrupt: outlier/dropout fractions must lie in [0, 1)");
  }
  DisplacementField out = field;
  if (stats) {
    *stats = CorruptionStats{};
  }
  if (noise.is_zero()) {
    return out;
  }

  std::vector<std::size_t> movable;
  double mag_lo = 0.0, mag_hi = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double m = field.vectors[i].norm();
    if (m > 0.0) {
      if (movable.empty()) {
        mag_lo = mag_hi = m;
      } else {
        mag_lo = std::min(mag_lo, m);
        mag_hi = std::max(mag_hi, m);
      }
      movable.push_back(i);
    }
  }

  for (const std::size_t i : movable) {
    Vec3 q = out.vectors[i];
    if (noise.sigma_dir > 0.0) {
      const double angle = std::abs(rng.normal(0.0, noise.sigma_dir));
      // Rotation axis orthogonal to q, so the vector deviates by exactly
      // `angle`.
      const UnitVec dir = UnitVec::normalized(q);
      Vec3 ref = std::abs(dir.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      const Vec3 e1 = dir.vec().cross(ref).normalized();
      const Vec3 e2 = dir.vec().cross(e1);
      const double psi = rng.uniform(0.0, 2.0 * kPi);
      const Vec3 axis = std::cos(psi) * e1 + std::sin(psi) * e2;
      q = Eigen::AngleAxisd(angle, axis) * q;
    }
    if (noise.sigma_mag > 0.0) {
      q *= 1.0 + rng.normal(0.0, noise.sigma_mag);
    }
    out.vectors[i] = q;
  }

  const auto n_outliers = static_cast<std::size_t>(
      noise.outlier_fraction * static_cast<double>(movable.size()));
  if (n_outliers > 0) {
    const std::vector<std::size_t> chosen =
        rng.sample_without_replacement(movable.size(), n_outliers);
    for (const std::size_t k : chosen) {
      out.vectors[movable[k]] =
          rng.uniform(mag_lo, mag_hi) * rng.unit_sphere();
    }
    if (stats) {
      stats->outliers = n_outliers;
    }
  }

  const auto n_drop = static_cast<std::size_t>(
      noise.dropout_fraction * static_cast<double>(movable.size()));
  if (n_drop > 0) {
    const std::vector<std::size_t> chosen =
        rng.sample_without_replacement(movable.size(), n_drop);
    for (const std::size_t k : chosen) {
      out.valid[movable[k]] = 0;
    }
    if (stats) {
      stats->dropped = n_drop;
    }
  }
  return out;
}

FlowError flow_error(const DisplacementField& estimate,
                     const DisplacementField& truth) {
  if (estimate.size() != truth.size()) {
    throw LengthMismatch("flow_error: fields are not index-aligned");
  }
  FlowError err;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Vec3& q = truth.vectors[i];
    const Vec3& qh = estimate.vectors[i];
    const double l1 = q.lpNorm<1>();
    if (l1 == 0.0) {
      ++err.skipped;
      continue;
    }
    err.magnitude_term += (qh - q).lpNorm<1>() / l1;
    const double denom = qh.norm() * q.norm();
    const double cosine = denom > 0.0 ? qh.dot(q) / denom : 0.0;
    err.direction_term += 1.0 - cosine;
    ++err.compared;
  }
  if (err.compared == 0) {
    throw NoComparablePoints("flow_error: all truth vectors are zero");
  }
  err.magnitude_term /= static_cast<double>(err.compared);
  err.direction_term /= static_cast<double>(err.compared);
  return err;
}

}  // namespace artdir
