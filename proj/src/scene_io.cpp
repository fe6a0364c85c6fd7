#include "artdir/scene_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace artdir {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> split_numeric(const std::string& line, std::size_t expect,
                                  const std::string& context) {
  std::vector<double> out;
  out.reserve(expect);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    const std::string tok =
        line.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw DataError(context + ": non-numeric token '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expect) {
    throw DataError(context + ": expected " + std::to_string(expect) +
                    " columns, got " + std::to_string(out.size()));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw DataError("cannot open for writing: " + path);
  }
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw DataError("cannot open for reading: " + path);
  }
  return f;
}

}  // namespace

void write_scene_csv(const std::string& path, const Scene& scene) {
  std::ofstream f = open_out(path);
  f << "x,y,z,r,g,b,nx,ny,nz,m,h\n";
  for (const AttributedPoint& p : scene.points) {
    f << fmt(p.position.x()) << ',' << fmt(p.position.y()) << ','
      << fmt(p.position.z()) << ',' << p.color[0] << ',' << p.color[1] << ','
      << p.color[2] << ',' << fmt(p.normal.x()) << ',' << fmt(p.normal.y())
      << ',' << fmt(p.normal.z()) << ',' << p.movable_id << ','
      << p.holdable_id << '\n';
  }
}

Scene read_scene_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("x,y,z", 0) != 0) {
    throw DataError("scene csv: missing header: " + path);
  }
  Scene scene;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<double> v =
        split_numeric(line, 11, path + ":" + std::to_string(row));
    AttributedPoint p;
    p.position = Vec3(v[0], v[1], v[2]);
    p.color = {static_cast<int>(v[3]), static_cast<int>(v[4]),
               static_cast<int>(v[5])};
    p.normal = UnitVec::normalized(Vec3(v[6], v[7], v[8]));
    p.movable_id = static_cast<int>(v[9]);
    p.holdable_id = static_cast<int>(v[10]);
    if (!p.consistent()) {
      throw DataError("scene csv: holdable point outside a movable part at " +
                      path + ":" + std::to_string(row));
    }
    scene.points.push_back(p);
  }
  return scene;
}

void write_field_csv(const std::string& path, const DisplacementField& field) {
  std::ofstream f = open_out(path);
  f << "qx,qy,qz,valid\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Vec3& q = field.vectors[i];
    f << fmt(q.x()) << ',' << fmt(q.y()) << ',' << fmt(q.z()) << ','
      << int(field.valid[i]) << '\n';
  }
}

DisplacementField read_field_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("qx,qy,qz", 0) != 0) {
    throw DataError("field csv: missing header: " + path);
  }
  DisplacementField field;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<double> v =
        split_numeric(line, 4, path + ":" + std::to_string(row));
    field.vectors.emplace_back(v[0], v[1], v[2]);
    field.valid.push_back(v[3] != 0.0 ? 1 : 0);
  }
  return field;
}

nlohmann::json joint_to_json(const JointModel& joint) {
  return nlohmann::json{
      {"kind", to_string(joint.kind)},
      {"axis_direction",
       {joint.axis_direction.x(), joint.axis_direction.y(),
        joint.axis_direction.z()}},
      {"axis_point",
       {joint.axis_point.x(), joint.axis_point.y(), joint.axis_point.z()}},
      {"pitch", joint.pitch}};
}

JointModel joint_from_json(const nlohmann::json& j) {
  JointModel joint;
  joint.kind = joint_kind_from_string(j.at("kind").get<std::string>());
  const auto& a = j.at("axis_direction");
  joint.axis_direction =
      UnitVec::normalized(Vec3(a.at(0), a.at(1), a.at(2)));
  if (j.contains("axis_point")) {
    const auto& p = j.at("axis_point");
    joint.axis_point = Vec3(p.at(0), p.at(1), p.at(2));
  }
  joint.pitch = j.value("pitch", 0.0);
  return joint;
}

nlohmann::json transform_to_json(const RigidTransform& t) {
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      rot.push_back(t.rotation(r, c));
    }
  }
  return nlohmann::json{
      {"rotation", rot},
      {"translation",
       {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

RigidTransform transform_from_json(const nlohmann::json& j) {
  RigidTransform t;
  const auto& rot = j.at("rotation");
  if (rot.size() != 9) {
    throw DataError("transform json: rotation must have 9 entries");
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      t.rotation(r, c) = rot.at(3 * r + c).get<double>();
    }
  }
  const auto& tr = j.at("translation");
  t.translation = Vec3(tr.at(0), tr.at(1), tr.at(2));
  if (!t.valid(1e-6)) {
    throw DataError("transform json: rotation is not orthonormal");
  }
  return t;
}

void write_meta_json(const std::string& path, const SceneMeta& meta) {
  nlohmann::ordered_json j;
  j["joint"] = joint_to_json(meta.joint);
  j["delta"] = meta.delta;
  j["camera_pose"] = transform_to_json(meta.camera_pose);
  j["seed"] = meta.seed;
  std::ofstream f = open_out(path);
  f << j.dump(2) << '\n';
}

SceneMeta read_meta_json(const std::string& path) {
  std::ifstream f = open_in(path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("meta json: parse failure in " + path + ": " + e.what());
  }
  SceneMeta meta;
  meta.joint = joint_from_json(j.at("joint"));
  meta.delta = j.value("delta", 0.0);
  if (j.contains("camera_pose")) {
    meta.camera_pose = transform_from_json(j.at("camera_pose"));
  }
  meta.seed = j.value("seed", std::uint64_t{0});
  return meta;
}

Scene load_scene(const std::string& scene_csv, const std::string& meta_json) {
  Scene scene = read_scene_csv(scene_csv);
  const SceneMeta meta = read_meta_json(meta_json);
  scene.joint_truth = meta.joint;
  scene.seed = meta.seed;
  return scene;
}

}  // namespace artdir
