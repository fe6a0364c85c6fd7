#pragma once

#include "artdir/artsim.hpp"
#include "artdir/geom.hpp"

#include <string>
#include <vector>

namespace artdir {

/// Marker-grid contact state. Markers live in the gripper frame; the x
/// component is the normal depth (closing axis), (y, z) are tangential.
struct ContactState {
  int rows = 0;
  int cols = 0;
  std::vector<Vec3> reference;  // C0
  std::vector<Vec3> current;    // C_t
  bool slipped = false;

  Vec3 deformation(std::size_t i) const { return current[i] - reference[i]; }
  double peak_deformation() const;
  double mean_squared_deformation() const;  // the metric f, m^2
};

/// Minimal quasi-static world: a handle constrained to a joint manifold,
/// grasped through an elastic marker patch by a free-flying gripper.
struct TacWorld {
  JointModel joint;
  RigidTransform handle_home;   // handle pose at joint coordinate 0
  RigidTransform gripper_pose;
  double stiffness = 500.0;     // N/m per marker
  double slip_threshold = 0.006;  // meters
  double joint_min = 0.0;
  double joint_max = kPi / 2.0;
  double joint_coord = 0.0;
  bool slipped = false;

  std::vector<Vec3> markers_gripper;  // reference marker positions C0
  std::vector<Vec3> markers_handle;   // same markers in the handle frame

  RigidTransform handle_pose() const;
  double elastic_energy() const;  // Joules, at the current joint coordinate
  double elastic_energy_at(double coord) const;
  ContactState contact() const;
};

/// World with gripper and handle initially aligned at the grasp point and a
/// rows x cols marker patch of the given half extent.
TacWorld make_tac_world(const JointModel& joint, const Vec3& grasp_point,
                        double joint_min, double joint_max,
                        double stiffness = 500.0,
                        double slip_threshold = 0.006, int grid = 5,
                        double patch_half_extent = 0.006);

/// Applies a world-frame gripper motion, re-minimizes the elastic energy
/// over the joint coordinate, and returns the resulting contact. Sets the
/// slip flag (and caps deformation) when any marker exceeds the slip
/// threshold. Throws JointLimit when the minimizer is pinned at a range
/// bound, after clamping the state to that bound.
ContactState step_world(TacWorld& w, const RigidTransform& motion);

struct ControllerConfig {
  double step_size = 0.002;           // meters per iteration along d
  int max_iterations = 2000;
  double deformation_budget = 0.003;  // meters; must stay < slip threshold
  double correction_gain = 0.5;       // (0, 1]
  bool correction_enabled = true;
  int max_inner_iterations = 100;
};

struct RolloutIteration {
  double joint_coord = 0.0;
  double f = 0.0;  // mean squared marker deformation after regulation
  double peak_deformation = 0.0;
};

struct RolloutReport {
  std::vector<RolloutIteration> iterations;
  bool success = false;
  std::string termination;  // "completed", "slip", "max_iterations"
  double peak_deformation = 0.0;
  double final_joint_coord = 0.0;
};

/// Contact-regulating rollout: alternates a feedforward translation along
/// the working direction (seeded by d) with corrective SE(3) updates found
/// by damped gradient descent on f, until the joint range is traversed, the
/// contact slips, or the iteration cap is reached. The working direction is
/// re-seeded from the motion actually achieved each cycle, which is the
/// direction the contact constraint admits.
RolloutReport regulate(TacWorld w, const UnitVec& d,
                       const ControllerConfig& cfg);

}  // namespace artdir
