// Command line front end: scene generation, direction estimation, batch
// benchmarks, tactile rollouts, paired statistics, and depth utilities.

#include "artdir/depthfit.hpp"
#include "artdir/harness.hpp"
#include "artdir/scene_io.hpp"
#include "artdir/stats.hpp"
#include "artdir/tacsim.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace artdir;
using nlohmann::json;
using nlohmann::ordered_json;

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open config: " + path);
  try {
    json j;
    f >> j;
    return j;
  } catch (const json::exception& e) {
    throw DataError("config parse failure in " + path + ": " + e.what());
  }
}

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    const auto parent = std::filesystem::path(out_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream f(out_path);
    if (!f) throw DataError("cannot open for writing: " + out_path);
    f << j.dump(2) << '\n';
  }
}

std::vector<double> read_error_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open: " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(std::stod(line));
    } catch (const std::exception&) {
      continue;  // header or comment line
    }
  }
  if (out.empty()) throw DataError("no numeric rows in " + path);
  return out;
}

int cmd_gen(const std::string& config, const std::string& out_dir,
            std::uint64_t seed) {
  json j = config.empty() ? json::object() : load_json(config);
  const int count = j.value("count", 1);
  const JointKind kind =
      joint_kind_from_string(j.value("joint", std::string("revolute")));
  NoiseSpec noise;
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    noise.sigma_dir = n.value("sigma_dir", 0.0);
    noise.sigma_mag = n.value("sigma_mag", 0.0);
    noise.outlier_fraction = n.value("outlier_fraction", 0.0);
    noise.dropout_fraction = n.value("dropout_fraction", 0.0);
  }

  std::filesystem::create_directories(out_dir);
  const Rng master(seed);
  for (int i = 0; i < count; ++i) {
    Rng rng = master.substream(static_cast<std::uint64_t>(i));
    SceneSpec spec = sample_scene_spec(kind, rng);
    if (j.contains("density")) spec.density = j.at("density").get<double>();
    const Scene scene = generate_scene(spec, rng);
    const double delta = j.value("delta", 0.01);
    DisplacementField field = ground_truth_field(scene, delta);
    if (!noise.is_zero()) {
      Rng noise_rng = rng.substream(200);
      field = corrupt(field, noise, noise_rng);
    }

    char tag[16];
    std::snprintf(tag, sizeof(tag), "%03d", i);
    write_scene_csv(out_dir + "/scene_" + tag + ".csv", scene);
    write_field_csv(out_dir + "/field_" + tag + ".csv", field);
    SceneMeta meta;
    meta.joint = scene.joint_truth;
    meta.delta = delta;
    meta.camera_pose = spec.camera_pose;
    meta.seed = rng.seed();
    write_meta_json(out_dir + "/meta_" + tag + ".json", meta);
  }
  std::cout << "wrote " << count << " scene(s) to " << out_dir << '\n';
  return 0;
}

int cmd_estimate(const std::string& scene_path, const std::string& field_path,
                 const std::string& config, std::uint64_t seed,
                 const std::string& out_dir) {
  const Scene scene = read_scene_csv(scene_path);
  const DisplacementField field = read_field_csv(field_path);
  EstimatorConfig cfg;
  cfg.seed = seed;
  if (!config.empty()) {
    const json j = load_json(config);
    cfg.subset_count = j.value("subset_count", cfg.subset_count);
    cfg.subset_size = j.value("subset_size", cfg.subset_size);
    cfg.min_valid_points = j.value("min_valid_points", cfg.min_valid_points);
  }
  const GraspPointResult grasp = select_grasp_point(scene, 1);
  const DirectionEstimate est =
      estimate_direction(scene, field, grasp.point, cfg);
  ordered_json out = estimate_to_json(est);
  out["grasp_point"] = {grasp.point.x(), grasp.point.y(), grasp.point.z()};
  out["grasp_fallback"] = grasp.fallback;
  emit(out, out_dir.empty() ? "" : out_dir + "/estimate.json");
  return 0;
}

int cmd_bench(const std::string& config, std::uint64_t seed, bool seed_set,
              const std::string& out_dir, const std::string& methods) {
  BenchmarkConfig cfg = config.empty()
                            ? BenchmarkConfig{}
                            : benchmark_config_from_json(load_json(config));
  if (seed_set) cfg.master_seed = seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!methods.empty()) {
    cfg.methods.clear();
    std::size_t pos = 0;
    while (pos <= methods.size()) {
      const std::size_t comma = methods.find(',', pos);
      cfg.methods.push_back(methods.substr(
          pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const ErrorTable table = run_benchmark(cfg);
  if (!cfg.out_dir.empty()) {
    export_plot_data(table, cfg.out_dir);
    std::cout << "benchmark written to " << cfg.out_dir << '\n';
  } else {
    std::cout << error_table_summary(table).dump(2) << '\n';
  }
  return 0;
}

int cmd_tacsim(const std::string& config, const std::string& out_dir) {
  const json j = load_json(config);
  const JointModel joint = joint_from_json(j.at("joint"));
  const auto& gp = j.at("grasp_point");
  const Vec3 g(gp.at(0), gp.at(1), gp.at(2));
  const auto& dd = j.at("direction");
  const UnitVec d = UnitVec::normalized(Vec3(dd.at(0), dd.at(1), dd.at(2)));

  double joint_min = 0.0, joint_max = kPi / 2.0;
  if (j.contains("joint_range")) {
    joint_min = j.at("joint_range").at(0).get<double>();
    joint_max = j.at("joint_range").at(1).get<double>();
  }
  TacWorld world = make_tac_world(joint, g, joint_min, joint_max,
                                  j.value("stiffness", 500.0),
                                  j.value("slip_threshold", 0.006));
  ControllerConfig cfg;
  if (j.contains("controller")) {
    const auto& c = j.at("controller");
    cfg.step_size = c.value("step_size", cfg.step_size);
    cfg.max_iterations = c.value("max_iterations", cfg.max_iterations);
    cfg.deformation_budget =
        c.value("deformation_budget", cfg.deformation_budget);
    cfg.correction_gain = c.value("correction_gain", cfg.correction_gain);
    cfg.correction_enabled =
        c.value("correction_enabled", cfg.correction_enabled);
  }
  const RolloutReport report = regulate(world, d, cfg);

  ordered_json out;
  out["success"] = report.success;
  out["termination"] = report.termination;
  out["peak_deformation"] = report.peak_deformation;
  out["final_joint_coord"] = report.final_joint_coord;
  ordered_json iters = ordered_json::array();
  for (const RolloutIteration& it : report.iterations) {
    iters.push_back({{"joint_coord", it.joint_coord},
                     {"f", it.f},
                     {"peak_deformation", it.peak_deformation}});
  }
  out["iterations"] = iters;
  emit(out, out_dir.empty() ? "" : out_dir + "/rollout.json");
  return 0;
}

int cmd_stats(const std::string& a_path, const std::string& b_path,
              const std::string& out_dir) {
  const std::vector<double> a = read_error_csv(a_path);
  const std::vector<double> b = read_error_csv(b_path);
  ordered_json out;
  out["n"] = a.size();
  out["median_a"] = median(a);
  out["median_b"] = median(b);
  out["p_a_less_b"] = paired_t_test_one_sided(a, b);
  out["p_b_less_a"] = paired_t_test_one_sided(b, a);
  emit(out, out_dir.empty() ? "" : out_dir + "/ttest.json");
  return 0;
}

int cmd_depth(const std::string& est_path, const std::string& sensor_path,
              const std::string& intrinsics, const std::string& out_dir,
              bool write_normals, std::uint64_t seed) {
  const DepthImage sensor = read_depth_pgm(sensor_path, intrinsics);
  ordered_json out;

  if (!est_path.empty()) {
    const DepthImage est = read_depth_pgm(est_path, intrinsics);
    if (est.width != sensor.width || est.height != sensor.height) {
      throw DataError("depth: est/sensor image sizes differ");
    }
    std::vector<double> est_disp, sensor_depth;
    for (std::size_t i = 0; i < sensor.values.size(); ++i) {
      if (est.values[i] > 0.0 && sensor.values[i] > 0.0) {
        est_disp.push_back(est.values[i]);
        sensor_depth.push_back(sensor.values[i]);
      }
    }
    Rng rng(seed);
    const LinearScaleModel model =
        ransac_scale(est_disp, sensor_depth, RansacConfig{}, rng);
    std::size_t inliers = 0;
    for (const auto m : model.inlier_mask) inliers += m;
    out["a"] = model.a;
    out["b"] = model.b;
    out["inliers"] = inliers;
    out["samples"] = est_disp.size();
    out["inlier_rmse"] = model.inlier_rmse;
  }

  if (write_normals) {
    if (out_dir.empty()) {
      throw DataError("depth: --out is required to write a normal map");
    }
    const NormalMap map = normals_from_depth(sensor);
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/normals.csv");
    if (!f) throw DataError("cannot write normal map");
    f << "x,y,z,r,g,b,nx,ny,nz,m,h\n";
    char buf[160];
    for (int v = 0; v < map.height; ++v) {
      for (int u = 0; u < map.width; ++u) {
        if (!map.valid_at(u, v)) continue;
        const Vec3 p = sensor.unproject(u, v);
        const Vec3& n = map.at(u, v);
        std::snprintf(buf, sizeof(buf),
                      "%.12g,%.12g,%.12g,128,128,128,%.12g,%.12g,%.12g,0,0\n",
                      p.x(), p.y(), p.z(), n.x(), n.y(), n.z());
        f << buf;
      }
    }
    out["normals"] = out_dir + "/normals.csv";
  }
  emit(out, out_dir.empty() ? "" : out_dir + "/depth_model.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse interaction-direction inference for articulated "
               "objects: synthetic scenes, subset-sampled rigid fitting, "
               "and benchmark tooling"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config, out_dir, methods;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--config", config, "JSON config file")->expected(1);
  app.add_option("--seed", seed, "master RNG seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--method", methods, "comma separated method list");

  auto* gen = app.add_subcommand("gen", "generate scenes and fields");
  auto* estimate =
      app.add_subcommand("estimate", "estimate a direction for one scene");
  std::string scene_path, field_path;
  estimate->add_option("--scene", scene_path, "scene CSV")->required();
  estimate->add_option("--field", field_path, "field CSV")->required();
  auto* bench = app.add_subcommand("bench", "run a benchmark config");
  auto* tacsim_cmd =
      app.add_subcommand("tacsim", "contact-regulated rollout");
  auto* stats_cmd =
      app.add_subcommand("stats", "one-sided paired t-test of two error CSVs");
  std::string a_path, b_path;
  stats_cmd->add_option("--a", a_path, "errors of method a")->required();
  stats_cmd->add_option("--b", b_path, "errors of method b")->required();
  auto* depth = app.add_subcommand("depth", "depth scale fit / normal map");
  std::string est_path, sensor_path, intrinsics;
  bool want_normals = false;
  depth->add_option("--est", est_path, "estimated (unscaled) depth PGM");
  depth->add_option("--sensor", sensor_path, "sensor depth PGM")->required();
  depth->add_option("--intrinsics", intrinsics, "intrinsics JSON")->required();
  depth->add_flag("--normals", want_normals, "write a normal map CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors -> 1, --help -> 0
  }

  try {
    if (gen->parsed()) {
      if (out_dir.empty()) throw DataError("gen: --out is required");
      return cmd_gen(config, out_dir, seed);
    }
    if (estimate->parsed()) {
      return cmd_estimate(scene_path, field_path, config, seed, out_dir);
    }
    if (bench->parsed()) {
      return cmd_bench(config, seed, seed_set, out_dir, methods);
    }
    if (tacsim_cmd->parsed()) {
      if (config.empty()) throw DataError("tacsim: --config is required");
      return cmd_tacsim(config, out_dir);
    }
    if (stats_cmd->parsed()) {
      return cmd_stats(a_path, b_path, out_dir);
    }
    if (depth->parsed()) {
      return cmd_depth(est_path, sensor_path, intrinsics, out_dir,
                       want_normals, seed);
    }
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
