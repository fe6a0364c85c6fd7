#include "artdir/tacsim.hpp"

#include <algorithm>
#include <cmath>

namespace artdir {

double ContactState::peak_deformation() const {
  double peak = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    peak = std::max(peak, deformation(i).norm());
  }
  return peak;
}

double ContactState::mean_squared_deformation() const {
  if (current.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    acc += deformation(i).squaredNorm();
  }
  return acc / static_cast<double>(current.size());
}

RigidTransform TacWorld::handle_pose() const {
  return joint_transform(joint, joint_coord) * handle_home;
}

double TacWorld::elastic_energy_at(double coord) const {
  const RigidTransform pose = joint_transform(joint, coord) * handle_home;
  const RigidTransform inv = gripper_pose.inverse();
  double acc = 0.0;
  for (std::size_t i = 0; i < markers_handle.size(); ++i) {
    const Vec3 q = inv * (pose * markers_handle[i]);
    acc += (q - markers_gripper[i]).squaredNorm();
  }
  return 0.5 * stiffness * acc;
}

double TacWorld::elastic_energy() const { return elastic_energy_at(joint_coord); }

ContactState TacWorld::contact() const {
  ContactState c;
  const std::size_t n = markers_gripper.size();
  c.rows = c.cols = static_cast<int>(std::lround(std::sqrt(double(n))));
  c.reference = markers_gripper;
  c.current.resize(n);
  const RigidTransform pose = handle_pose();
  const RigidTransform inv = gripper_pose.inverse();
  for (std::size_t i = 0; i < n; ++i) {
    c.current[i] = inv * (pose * markers_handle[i]);
  }
  c.slipped = slipped;
  return c;
}

TacWorld make_tac_world(const JointModel& joint, const Vec3& grasp_point,
                        double joint_min, double joint_max, double stiffness,
                        double slip_threshold, int grid,
                        double patch_half_extent) {
  if (stiffness <= 0.0 || grid < 2) {
    throw DataError("make_tac_world: stiffness must be positive, grid >= 2");
  }
  TacWorld w;
  w.joint = joint;
  w.handle_home = RigidTransform::translate(grasp_point);
  w.gripper_pose = w.handle_home;
  w.stiffness = stiffness;
  w.slip_threshold = slip_threshold;
  w.joint_min = joint_min;
  w.joint_max = joint_max;
  w.joint_coord = 0.0;

  // Marker patch on the contact plane x = 0 (x is the closing axis).
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double s = grid > 1 ? 2.0 * i / (grid - 1) - 1.0 : 0.0;
      const double t = grid > 1 ? 2.0 * j / (grid - 1) - 1.0 : 0.0;
      w.markers_gripper.emplace_back(0.0, s * patch_half_extent,
                                     t * patch_half_extent);
    }
  }
  // Gripper and handle frames coincide at grasp time.
  w.markers_handle = w.markers_gripper;
  return w;
}

namespace {

// Golden-section minimization of the elastic energy over the joint
// coordinate within [lo, hi].
double minimize_joint(const TacWorld& w, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = w.elastic_energy_at(c);
  double fd = w.elastic_energy_at(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = w.elastic_energy_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = w.elastic_energy_at(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

ContactState step_world(TacWorld& w, const RigidTransform& motion) {
  if (w.slipped) {
    throw DataError("step_world: contact already slipped");
  }
  w.gripper_pose = motion * w.gripper_pose;
  // Repeated motion composition drifts off SO(3); project back whenever the
  // orthonormality tolerance is exceeded.
  if (!w.gripper_pose.valid()) {
    w.gripper_pose = w.gripper_pose.orthonormalized();
  }

  // Unconstrained minimization in a window around the current coordinate,
  // expanded while the minimizer is pinned at a window edge; the joint
  // range is applied afterwards so boundary violations are explicit.
  const double range = w.joint_max - w.joint_min;
  const double window = std::max(0.25 * range, 0.05);
  double lo = w.joint_coord - window;
  double hi = w.joint_coord + window;
  const double lo_cap = w.joint_min - range - 1.0;
  const double hi_cap = w.joint_max + range + 1.0;
  double free_coord = 0.0;
  for (;;) {
    free_coord = minimize_joint(w, lo, hi);
    const bool at_lo = free_coord <= lo + 1e-9;
    const bool at_hi = free_coord >= hi - 1e-9;
    if ((!at_lo && !at_hi) || (lo <= lo_cap && hi >= hi_cap)) break;
    const double span = hi - lo;
    if (at_lo) lo = std::max(lo - span, lo_cap);
    if (at_hi) hi = std::min(hi + span, hi_cap);
  }

  const double slack = 1e-9;
  bool at_limit = false;
  double coord = free_coord;
  if (free_coord > w.joint_max + slack) {
    coord = w.joint_max;
    at_limit = true;
  } else if (free_coord < w.joint_min - slack) {
    coord = w.joint_min;
    at_limit = true;
  } else {
    coord = std::clamp(free_coord, w.joint_min, w.joint_max);
  }

  w.joint_coord = coord;
  ContactState contact = w.contact();
  if (contact.peak_deformation() > w.slip_threshold) {
    w.slipped = true;
    contact.slipped = true;
    // Cap reported deformations at the threshold; the grip has let go.
    for (std::size_t i = 0; i < contact.current.size(); ++i) {
      const Vec3 d = contact.deformation(i);
      if (d.norm() > w.slip_threshold) {
        contact.current[i] =
            contact.reference[i] + d.normalized() * w.slip_threshold;
      }
    }
  }
  if (at_limit) {
    throw JointLimit("step_world: motion exceeds the joint range");
  }
  return contact;
}

namespace {

// One damped gradient-descent update of f on SE(3): translation step
// -gain * grad_t f, rotation step preconditioned by the marker second
// moment so both act as fractional corrections.
RigidTransform correction_motion(const TacWorld& w, double gain) {
  const ContactState c = w.contact();
  const std::size_t n = c.current.size();
  Vec3 mean_def = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  double qsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = c.deformation(i);
    mean_def += d;
    moment += c.current[i].cross(d);
    qsq += c.current[i].squaredNorm();
  }
  mean_def /= static_cast<double>(n);
  // Translation: move the gripper along the mean deformation (gripper
  // frame -> world). Rotation: least-squares angular correction about the
  // gripper origin.
  const Vec3 dt_world = w.gripper_pose.rotation * (gain * mean_def);
  Vec3 omega = Vec3::Zero();
  if (qsq > 1e-18) {
    omega = gain * (moment / qsq);
  }
  Mat3 r = Mat3::Identity();
  const double angle = omega.norm();
  if (angle > 1e-15) {
    r = Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
  }
  const Mat3 rot_world =
      w.gripper_pose.rotation * r * w.gripper_pose.rotation.transpose();
  // Rotate about the gripper origin, then translate.
  const Vec3 t = dt_world + w.gripper_pose.translation -
                 rot_world * w.gripper_pose.translation;
  return RigidTransform{rot_world, t};
}

}  // namespace

RolloutReport regulate(TacWorld w, const UnitVec& d,
                       const ControllerConfig& cfg) {
  if (cfg.step_size <= 0.0 || cfg.correction_gain <= 0.0 ||
      cfg.correction_gain > 1.0) {
    throw DataError("regulate: step size and gain must be positive, gain <= 1");
  }
  if (!(cfg.deformation_budget < w.slip_threshold)) {
    throw DataError("regulate: deformation budget must stay below the slip "
                    "threshold");
  }
  RolloutReport report;
  const double f_target = std::pow(0.25 * cfg.deformation_budget, 2);
  Vec3 working_dir = d.vec();
  bool completed = false;

  for (int it = 0; it < cfg.max_iterations && !completed; ++it) {
    const Vec3 cycle_start = w.gripper_pose.translation;
    ContactState contact;
    try {
      contact = step_world(
          w, RigidTransform::translate(cfg.step_size * working_dir));
    } catch (const JointLimit&) {
      completed = w.joint_coord >= w.joint_max - 1e-9;
      contact = w.contact();
    }
    double peak = contact.peak_deformation();
    report.peak_deformation = std::max(report.peak_deformation, peak);
    if (w.slipped) {
      report.iterations.push_back(
          {w.joint_coord, contact.mean_squared_deformation(), peak});
      break;
    }

    if (cfg.correction_enabled) {
      for (int inner = 0; inner < cfg.max_inner_iterations; ++inner) {
        if (w.contact().mean_squared_deformation() <= f_target) break;
        try {
          contact = step_world(w, correction_motion(w, cfg.correction_gain));
        } catch (const JointLimit&) {
          contact = w.contact();
        }
        peak = contact.peak_deformation();
        report.peak_deformation = std::max(report.peak_deformation, peak);
        if (w.slipped) break;
      }
    }

    report.iterations.push_back({w.joint_coord,
                                 w.contact().mean_squared_deformation(),
                                 w.contact().peak_deformation()});
    if (w.slipped) break;
    if (w.joint_coord >= w.joint_max - 1e-9) {
      completed = true;
      break;
    }

    // Re-seed the working direction from the achieved motion: after
    // regulation it lies along what the constraint admits.
    const Vec3 achieved = w.gripper_pose.translation - cycle_start;
    if (achieved.norm() > 0.2 * cfg.step_size) {
      working_dir = achieved.normalized();
    }
  }

  report.success = completed && !w.slipped;
  report.final_joint_coord = w.joint_coord;
  report.termination = w.slipped        ? "slip"
                       : completed      ? "completed"
                                        : "max_iterations";
  return report;
}

}  // namespace artdir
