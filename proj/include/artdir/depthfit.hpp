#pragma once

#include "artdir/geom.hpp"
#include "artdir/rng.hpp"

#include <string>
#include <vector>

namespace artdir {

/// Row-major depth image in meters; 0 encodes an invalid pixel. Pinhole
/// intrinsics in pixels, camera frame +z away, +x right, +y down.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;

  double at(int u, int v) const { return values[std::size_t(v) * width + u]; }
  double& at(int u, int v) { return values[std::size_t(v) * width + u]; }
  bool valid_at(int u, int v) const { return at(u, v) > 0.0; }

  Vec3 unproject(int u, int v) const {
    const double z = at(u, v);
    return Vec3((u - cx) / fx * z, (v - cy) / fy * z, z);
  }
};

struct NormalMap {
  int width = 0;
  int height = 0;
  std::vector<Vec3> normals;
  std::vector<std::uint8_t> valid;

  const Vec3& at(int u, int v) const {
    return normals[std::size_t(v) * width + u];
  }
  bool valid_at(int u, int v) const {
    return valid[std::size_t(v) * width + u] != 0;
  }
};

/// Per-pixel normals from the cross product of the vectors to the right and
/// below neighbors, sign-flipped to face the camera (n . P < 0). The last
/// row/column and pixels with invalid neighbors are masked out.
NormalMap normals_from_depth(const DepthImage& img);

struct RansacConfig {
  int iters = 1000;
  double inlier_tol = 0.010;  // meters, in depth space
  int min_inliers = 0;        // 0 -> max(50, 10% of samples)
};

/// Affine disparity map sensor_disparity = a * est_disparity + b.
struct LinearScaleModel {
  double a = 0.0;
  double b = 0.0;
  std::vector<std::uint8_t> inlier_mask;
  double inlier_rmse = 0.0;  // meters, over inliers
};

/// RANSAC fit of the disparity-to-disparity affine model with 2-point
/// minimal samples; the inlier test compares refined depth 1/(a e + b)
/// against the sensor depth. The final model is a least-squares refit on
/// the best consensus set. Throws InsufficientInliers when the best
/// consensus is smaller than min_inliers.
LinearScaleModel ransac_scale(const std::vector<double>& est_disparity,
                              const std::vector<double>& sensor_depth,
                              const RansacConfig& cfg, Rng& rng);

struct RefinedDepth {
  double value = 0.0;
  bool valid = false;  // false when a*est + b <= 0 (degenerate pixel)
};

RefinedDepth refine_depth(const LinearScaleModel& model, double est_disparity);

// 16-bit binary PGM in millimeters plus a JSON intrinsics sidecar
// {fx, fy, cx, cy}.
void write_depth_pgm(const std::string& path, const DepthImage& img);
DepthImage read_depth_pgm(const std::string& path,
                          const std::string& intrinsics_json);
void write_intrinsics_json(const std::string& path, const DepthImage& img);

}  // namespace artdir
