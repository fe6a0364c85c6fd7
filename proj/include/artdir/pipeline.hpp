#pragma once

#include "artdir/artsim.hpp"
#include "artdir/dirstat.hpp"
#include "artdir/kabsch.hpp"

#include <cstdint>
#include <vector>

namespace artdir {

/// Parallel-jaw gripper model: two finger boxes and a palm box in the
/// gripper frame (x = closing axis, y = jaw breadth, z = approach).
struct GripperSpec {
  double max_opening = 0.08;      // meters between finger inner faces
  double finger_length = 0.03;    // along approach
  double finger_thickness = 0.01; // along closing axis
  double finger_width = 0.02;     // along jaw breadth
  double palm_depth = 0.03;
  double clearance_margin = 0.002;
};

struct GraspPose {
  RigidTransform pose;  // gripper frame in camera frame
  double width = 0.0;   // closing width, meters
  Vec3 grasp_point = Vec3::Zero();
};

struct GraspPointResult {
  Vec3 point = Vec3::Zero();
  bool fallback = false;  // true when the part had no holdable points
};

/// Centroid of the part's holdable points; falls back to the movable
/// centroid (flagged) when the part has none. Throws UnknownPart.
GraspPointResult select_grasp_point(const Scene& scene, int part);

/// Samples n_rot gripper orientations (approach axes fanned around the
/// negated mean holdable normal, rolls swept from the holdable region's
/// principal axis), keeps collision-free poses, and returns the one with
/// minimal closing width; ties within 1 mm go to the pose nearest `home`.
/// Throws NoValidGrasp when every sampled pose collides.
GraspPose sample_grasp_pose(const Scene& scene, const Vec3& g,
                            const GripperSpec& gripper,
                            const RigidTransform& home, Rng& rng,
                            int n_rot = 256);

struct EstimatorConfig {
  int subset_count = 500;
  int subset_size = 20;
  int min_valid_points = 50;
  std::uint64_t seed = 0;
};

struct DirectionEstimate {
  UnitVec d_star;
  VmfParams vmf;
  DirectionSamples samples;
  std::vector<double> residuals;  // per-subset Kabsch residual, m^2
  std::size_t degenerate_subsets = 0;
};

/// Subset-sampled rigid fitting: K random subsets of the valid movable
/// displacement entries, a Kabsch fit per subset, each mapped through the
/// grasp point into a direction sample; a vMF fit plus the Frechet mean of
/// the surviving samples give the estimate. Subset k draws from rng
/// substream k, so evaluation order cannot change the result.
DirectionEstimate estimate_direction(const Scene& scene,
                                     const DisplacementField& field,
                                     const Vec3& g,
                                     const EstimatorConfig& cfg);

/// Frechet mean of the part's surface normals.
UnitVec baseline_normal_only(const Scene& scene, int part);

/// Direction of the largest valid movable displacement vector.
UnitVec baseline_flow_argmax(const Scene& scene,
                             const DisplacementField& field, const Vec3& g);

}  // namespace artdir
