#include "artdir/harness.hpp"

#include "artdir/scene_io.hpp"
#include "artdir/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace artdir {

namespace {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << content;
}

struct MethodResult {
  UnitVec direction;
  double kappa = 0.0;
};

MethodResult run_method(const std::string& method, const Scene& scene,
                        const DisplacementField& field, const Vec3& g,
                        const EstimatorConfig& cfg) {
  if (method == "pipeline") {
    const DirectionEstimate est = estimate_direction(scene, field, g, cfg);
    return {est.d_star, est.vmf.kappa};
  }
  if (method == "normal_only") {
    return {baseline_normal_only(scene, 1), 0.0};
  }
  if (method == "flow_argmax") {
    return {baseline_flow_argmax(scene, field, g), 0.0};
  }
  throw DataError("unknown method: " + method);
}

}  // namespace

std::vector<NoiseSpec> default_noise_grid() {
  std::vector<NoiseSpec> grid;
  for (const double rho : {0.0, 0.1}) {
    for (const double sigma : {0.0, 0.05, 0.1, 0.2, 0.4}) {
      NoiseSpec n;
      n.sigma_dir = sigma;
      n.outlier_fraction = rho;
      grid.push_back(n);
    }
  }
  return grid;
}

std::vector<double> ErrorTable::errors(const std::string& method,
                                       std::size_t noise_idx) const {
  std::vector<double> out;
  for (const ErrorRecord& r : rows) {
    if (r.method == method && r.noise_idx == noise_idx &&
        std::isfinite(r.error_rad)) {
      out.push_back(r.error_rad);
    }
  }
  return out;
}

std::size_t ErrorTable::failures(const std::string& method,
                                 std::size_t noise_idx) const {
  std::size_t n = 0;
  for (const ErrorRecord& r : rows) {
    if (r.method == method && r.noise_idx == noise_idx &&
        !std::isfinite(r.error_rad)) {
      ++n;
    }
  }
  return n;
}

std::pair<std::vector<double>, std::vector<double>> ErrorTable::paired_errors(
    const std::string& method_a, const std::string& method_b,
    std::size_t noise_idx) const {
  std::vector<double> a, b;
  // scene_id -> error, relying on one row per (scene, method, noise).
  std::map<int, double> map_a, map_b;
  for (const ErrorRecord& r : rows) {
    if (r.noise_idx != noise_idx || !std::isfinite(r.error_rad)) continue;
    if (r.method == method_a) map_a[r.scene_id] = r.error_rad;
    if (r.method == method_b) map_b[r.scene_id] = r.error_rad;
  }
  for (const auto& [scene, ea] : map_a) {
    const auto it = map_b.find(scene);
    if (it != map_b.end()) {
      a.push_back(ea);
      b.push_back(it->second);
    }
  }
  return {a, b};
}

std::vector<double> ErrorTable::kappas(std::size_t noise_idx) const {
  std::vector<double> out;
  for (const ErrorRecord& r : rows) {
    if (r.method == "pipeline" && r.noise_idx == noise_idx &&
        std::isfinite(r.error_rad)) {
      out.push_back(r.kappa);
    }
  }
  return out;
}

ErrorTable run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.scene_count < 1 || cfg.methods.empty() || cfg.joint_mix.empty() ||
      cfg.noise_grid.empty()) {
    throw DataError("run_benchmark: need scenes, methods, joints and noise");
  }
  ErrorTable table;
  table.noise_grid = cfg.noise_grid;
  const Rng master(cfg.master_seed);

  for (int scene_id = 0; scene_id < cfg.scene_count; ++scene_id) {
    const JointKind kind =
        cfg.joint_mix[static_cast<std::size_t>(scene_id) %
                      cfg.joint_mix.size()];
    Rng scene_rng = master.substream(static_cast<std::uint64_t>(scene_id));

    Scene scene;
    Vec3 g = Vec3::Zero();
    UnitVec d_true;
    DisplacementField truth;
    std::string scene_error;
    try {
      const SceneSpec spec = sample_scene_spec(kind, scene_rng);
      scene = generate_scene(spec, scene_rng);
      const double delta = kind == JointKind::prismatic ? cfg.delta_prismatic
                                                        : cfg.delta_revolute;
      truth = ground_truth_field(scene, delta);
      g = select_grasp_point(scene, 1).point;
      d_true = truth_direction(scene.joint_truth, g, delta);
    } catch (const Error& e) {
      scene_error = e.what();
    }

    for (std::size_t noise_idx = 0; noise_idx < cfg.noise_grid.size();
         ++noise_idx) {
      DisplacementField field;
      std::string field_error = scene_error;
      if (field_error.empty()) {
        try {
          Rng noise_rng = scene_rng.substream(200 + noise_idx);
          field = corrupt(truth, cfg.noise_grid[noise_idx], noise_rng);
        } catch (const Error& e) {
          field_error = e.what();
        }
      }
      for (const std::string& method : cfg.methods) {
        ErrorRecord rec;
        rec.scene_id = scene_id;
        rec.joint = kind;
        rec.noise_idx = noise_idx;
        rec.method = method;
        if (!field_error.empty()) {
          rec.error_rad = std::numeric_limits<double>::quiet_NaN();
          rec.status = sanitize(field_error);
        } else {
          try {
            EstimatorConfig est_cfg = cfg.estimator;
            est_cfg.seed = scene_rng.substream(100 + noise_idx).seed();
            const MethodResult res =
                run_method(method, scene, field, g, est_cfg);
            rec.error_rad = angle_between(res.direction, d_true);
            rec.kappa = res.kappa;
            rec.status = "ok";
          } catch (const Error& e) {
            rec.error_rad = std::numeric_limits<double>::quiet_NaN();
            rec.status = sanitize(e.what());
          }
        }
        table.rows.push_back(rec);
      }
    }
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/raw_errors.csv", error_table_csv(table));
    write_text(cfg.out_dir + "/summary.json",
               error_table_summary(table).dump(2) + "\n");
  }
  return table;
}

std::string error_table_csv(const ErrorTable& table) {
  std::ostringstream out;
  out << "scene,joint,noise_idx,sigma_dir,sigma_mag,outlier_fraction,"
         "dropout_fraction,method,error_rad,kappa,status\n";
  for (const ErrorRecord& r : table.rows) {
    const NoiseSpec& n = table.noise_grid.at(r.noise_idx);
    out << r.scene_id << ',' << to_string(r.joint) << ',' << r.noise_idx
        << ',' << fmt17(n.sigma_dir) << ',' << fmt17(n.sigma_mag) << ','
        << fmt17(n.outlier_fraction) << ',' << fmt17(n.dropout_fraction)
        << ',' << r.method << ','
        << (std::isfinite(r.error_rad) ? fmt17(r.error_rad) : "nan") << ','
        << fmt17(r.kappa) << ',' << r.status << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json summarize(const std::vector<double>& errors,
                                 std::size_t failures) {
  nlohmann::ordered_json j;
  j["count"] = errors.size();
  j["failures"] = failures;
  if (!errors.empty()) {
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q2 = quantile_sorted(sorted, 0.5);
    const double q3 = quantile_sorted(sorted, 0.75);
    const double iqr = q3 - q1;
    j["median"] = q2;
    j["q1"] = q1;
    j["q3"] = q3;
    j["whisker_lo"] = std::max(0.0, q1 - 1.5 * iqr);
    j["whisker_hi"] = std::min(kPi, q3 + 1.5 * iqr);
  }
  return j;
}

}  // namespace

nlohmann::json error_table_summary(const ErrorTable& table) {
  nlohmann::ordered_json j;
  std::vector<std::string> methods;
  for (const ErrorRecord& r : table.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  for (const std::string& m : methods) {
    nlohmann::ordered_json per_noise = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.noise_grid.size(); ++i) {
      nlohmann::ordered_json entry = summarize(table.errors(m, i),
                                               table.failures(m, i));
      entry["noise_idx"] = i;
      entry["sigma_dir"] = table.noise_grid[i].sigma_dir;
      entry["outlier_fraction"] = table.noise_grid[i].outlier_fraction;
      per_noise.push_back(entry);
    }
    j[m] = per_noise;
  }
  return j;
}

double paired_t_test_one_sided(const std::vector<double>& a,
                               const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("paired_t_test: samples must have equal length");
  }
  const std::size_t n = a.size();
  if (n < 2) {
    throw TooFewSamples("paired_t_test: need at least 2 pairs");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    if (mean == 0.0) return 0.5;
    return mean < 0.0 ? std::numeric_limits<double>::min()
                      : std::nextafter(1.0, 0.0);
  }
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return student_t_cdf(t, static_cast<double>(n - 1));
}

void export_plot_data(const ErrorTable& table, const std::string& out_dir) {
  if (table.rows.empty()) {
    throw EmptyTable("export_plot_data: empty error table");
  }
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> methods;
  for (const ErrorRecord& r : table.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }

  nlohmann::ordered_json summary;
  for (const std::string& m : methods) {
    nlohmann::ordered_json per_noise = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.noise_grid.size(); ++i) {
      const std::vector<double> errs = table.errors(m, i);
      std::ostringstream csv;
      csv << "error_rad\n";
      for (const double e : errs) csv << fmt17(e) << '\n';
      write_text(out_dir + "/plot_" + m + "_n" + std::to_string(i) + ".csv",
                 csv.str());

      nlohmann::ordered_json entry = summarize(errs, table.failures(m, i));
      entry["noise_idx"] = i;
      if (!errs.empty()) {
        const double bw = silverman_bandwidth(errs);
        const std::vector<double> kde = gaussian_kde(errs, 0.0, kPi, 181, bw);
        entry["kde_bandwidth"] = bw;
        entry["kde"] = kde;
      }
      per_noise.push_back(entry);
    }
    summary[m] = per_noise;
  }
  write_text(out_dir + "/plot_summary.json", summary.dump(2) + "\n");
}

nlohmann::json benchmark_config_to_json(const BenchmarkConfig& cfg) {
  nlohmann::ordered_json j;
  j["scene_count"] = cfg.scene_count;
  nlohmann::ordered_json joints = nlohmann::ordered_json::array();
  for (const JointKind k : cfg.joint_mix) joints.push_back(to_string(k));
  j["joints"] = joints;
  nlohmann::ordered_json noise = nlohmann::ordered_json::array();
  for (const NoiseSpec& n : cfg.noise_grid) {
    noise.push_back({{"sigma_dir", n.sigma_dir},
                     {"sigma_mag", n.sigma_mag},
                     {"outlier_fraction", n.outlier_fraction},
                     {"dropout_fraction", n.dropout_fraction}});
  }
  j["noise_grid"] = noise;
  j["methods"] = cfg.methods;
  j["seed"] = cfg.master_seed;
  j["estimator"] = {{"subset_count", cfg.estimator.subset_count},
                    {"subset_size", cfg.estimator.subset_size},
                    {"min_valid_points", cfg.estimator.min_valid_points}};
  j["delta_revolute"] = cfg.delta_revolute;
  j["delta_prismatic"] = cfg.delta_prismatic;
  return j;
}

BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j) {
  BenchmarkConfig cfg;
  cfg.scene_count = j.value("scene_count", cfg.scene_count);
  if (j.contains("joints")) {
    cfg.joint_mix.clear();
    for (const auto& k : j.at("joints")) {
      cfg.joint_mix.push_back(joint_kind_from_string(k.get<std::string>()));
    }
  }
  if (j.contains("noise_grid")) {
    cfg.noise_grid.clear();
    for (const auto& n : j.at("noise_grid")) {
      NoiseSpec spec;
      spec.sigma_dir = n.value("sigma_dir", 0.0);
      spec.sigma_mag = n.value("sigma_mag", 0.0);
      spec.outlier_fraction = n.value("outlier_fraction", 0.0);
      spec.dropout_fraction = n.value("dropout_fraction", 0.0);
      cfg.noise_grid.push_back(spec);
    }
  }
  if (j.contains("methods")) {
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
  }
  cfg.master_seed = j.value("seed", cfg.master_seed);
  if (j.contains("estimator")) {
    const auto& e = j.at("estimator");
    cfg.estimator.subset_count =
        e.value("subset_count", cfg.estimator.subset_count);
    cfg.estimator.subset_size =
        e.value("subset_size", cfg.estimator.subset_size);
    cfg.estimator.min_valid_points =
        e.value("min_valid_points", cfg.estimator.min_valid_points);
  }
  cfg.delta_revolute = j.value("delta_revolute", cfg.delta_revolute);
  cfg.delta_prismatic = j.value("delta_prismatic", cfg.delta_prismatic);
  return cfg;
}

nlohmann::json estimate_to_json(const DirectionEstimate& est) {
  nlohmann::ordered_json j;
  j["d_star"] = {est.d_star.x(), est.d_star.y(), est.d_star.z()};
  j["mu"] = {est.vmf.mu.x(), est.vmf.mu.y(), est.vmf.mu.z()};
  j["kappa"] = est.vmf.kappa;
  j["n_samples"] = est.samples.size();
  j["degenerate_subsets"] = est.degenerate_subsets;
  nlohmann::ordered_json rs;
  if (!est.residuals.empty()) {
    std::vector<double> sorted = est.residuals;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (const double r : sorted) mean += r;
    rs["mean"] = mean / static_cast<double>(sorted.size());
    rs["min"] = sorted.front();
    rs["max"] = sorted.back();
    rs["median"] = quantile_sorted(sorted, 0.5);
  }
  j["residual_stats"] = rs;
  return j;
}

}  // namespace artdir
