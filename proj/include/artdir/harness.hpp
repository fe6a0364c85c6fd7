#pragma once

#include "artdir/artsim.hpp"
#include "artdir/pipeline.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace artdir {

/// sigma_dir in {0, 0.05, 0.1, 0.2, 0.4} rad crossed with outlier fractions
/// {0, 0.1}.
std::vector<NoiseSpec> default_noise_grid();

/// Batch evaluation config: a population of generated scenes crossed with a
/// noise grid and a set of estimation methods.
struct BenchmarkConfig {
  int scene_count = 30;
  std::vector<JointKind> joint_mix = {JointKind::revolute,
                                      JointKind::prismatic, JointKind::screw};
  std::vector<NoiseSpec> noise_grid = default_noise_grid();
  std::vector<std::string> methods = {"pipeline", "normal_only",
                                      "flow_argmax"};
  std::uint64_t master_seed = 1;
  std::string out_dir;  // empty: do not write files
  EstimatorConfig estimator;
  double delta_revolute = 0.01;   // radians (also screw)
  double delta_prismatic = 0.01;  // meters
};

struct ErrorRecord {
  int scene_id = 0;
  JointKind joint = JointKind::revolute;
  std::size_t noise_idx = 0;
  std::string method;
  double error_rad = 0.0;  // NaN for failure rows
  double kappa = 0.0;      // pipeline rows only, 0 otherwise
  std::string status;      // "ok" or the error type
};

struct ErrorTable {
  std::vector<ErrorRecord> rows;
  std::vector<NoiseSpec> noise_grid;

  /// Finite per-method angular errors at one noise level, scene order.
  std::vector<double> errors(const std::string& method,
                             std::size_t noise_idx) const;
  std::size_t failures(const std::string& method,
                       std::size_t noise_idx) const;
  /// Scene-paired finite errors of two methods at one noise level.
  std::pair<std::vector<double>, std::vector<double>> paired_errors(
      const std::string& method_a, const std::string& method_b,
      std::size_t noise_idx) const;
  /// Finite pipeline kappas at one noise level, scene order.
  std::vector<double> kappas(std::size_t noise_idx) const;
};

/// Generates scene i from substream i of the master seed, builds the ground
/// truth field, corrupts it per noise level, runs each method, and records
/// the angle to the analytic truth direction at the grasp point. Per-scene
/// failures become NaN rows; the batch never aborts. Writes
/// raw_errors.csv + summary.json into out_dir when set.
ErrorTable run_benchmark(const BenchmarkConfig& cfg);

/// One-sided paired t-test of "a < b" (a has smaller values): returns
/// P(T_{n-1} < t) with t = mean(a-b) / (sd(a-b)/sqrt(n)). Zero-variance
/// differences degenerate by sign: p = 0.5, minimum representable, or
/// 1 - epsilon. Throws LengthMismatch and TooFewSamples (n < 2).
double paired_t_test_one_sided(const std::vector<double>& a,
                               const std::vector<double>& b);

/// Writes per-method raw error CSVs plus a summary JSON with median,
/// quartiles (linear interpolation), 1.5 IQR whiskers clipped to [0, pi],
/// and a 181-point Gaussian KDE (Silverman bandwidth) over [0, pi].
void export_plot_data(const ErrorTable& table, const std::string& out_dir);

std::string error_table_csv(const ErrorTable& table);
nlohmann::json error_table_summary(const ErrorTable& table);

nlohmann::json benchmark_config_to_json(const BenchmarkConfig& cfg);
BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const DirectionEstimate& est);

}  // namespace artdir
