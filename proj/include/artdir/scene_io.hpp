#pragma once

#include "artdir/artsim.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace artdir {

/// Sidecar metadata stored next to scene/field CSVs.
struct SceneMeta {
  JointModel joint;
  double delta = 0.0;
  RigidTransform camera_pose;
  std::uint64_t seed = 0;
};

// Columnar UTF-8 CSV, header `x,y,z,r,g,b,nx,ny,nz,m,h`, positions with
// 12 significant digits.
void write_scene_csv(const std::string& path, const Scene& scene);
Scene read_scene_csv(const std::string& path);

// CSV with header `qx,qy,qz,valid`, row-aligned with the scene file.
void write_field_csv(const std::string& path, const DisplacementField& field);
DisplacementField read_field_csv(const std::string& path);

void write_meta_json(const std::string& path, const SceneMeta& meta);
SceneMeta read_meta_json(const std::string& path);

/// Scene CSV + sidecar combined (restores joint truth).
Scene load_scene(const std::string& scene_csv, const std::string& meta_json);

nlohmann::json joint_to_json(const JointModel& joint);
JointModel joint_from_json(const nlohmann::json& j);
nlohmann::json transform_to_json(const RigidTransform& t);
RigidTransform transform_from_json(const nlohmann::json& j);

}  // namespace artdir
