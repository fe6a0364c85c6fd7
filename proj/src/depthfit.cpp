#include "artdir/depthfit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace artdir {

NormalMap normals_from_depth(const DepthImage& img) {
  NormalMap map;
  map.width = img.width;
  map.height = img.height;
  map.normals.assign(std::size_t(img.width) * img.height, Vec3::Zero());
  map.valid.assign(std::size_t(img.width) * img.height, 0);
  for (int v = 0; v + 1 < img.height; ++v) {
    for (int u = 0; u + 1 < img.width; ++u) {
      if (!img.valid_at(u, v) || !img.valid_at(u + 1, v) ||
          !img.valid_at(u, v + 1)) {
        continue;
      }
      const Vec3 p = img.unproject(u, v);
      const Vec3 right = img.unproject(u + 1, v) - p;
      const Vec3 below = img.unproject(u, v + 1) - p;
      Vec3 n = right.cross(below);
      const double len = n.norm();
      if (len < 1e-15) continue;
      n /= len;
      if (n.dot(p) > 0.0) n = -n;  // camera-facing convention
      map.normals[std::size_t(v) * img.width + u] = n;
      map.valid[std::size_t(v) * img.width + u] = 1;
    }
  }
  return map;
}

LinearScaleModel ransac_scale(const std::vector<double>& est_disparity,
                              const std::vector<double>& sensor_depth,
                              const RansacConfig& cfg, Rng& rng) {
  const std::size_t n = est_disparity.size();
  if (sensor_depth.size() != n) {
    throw LengthMismatch("ransac_scale: disparity/depth length mismatch");
  }
  const std::size_t min_inliers =
      cfg.min_inliers > 0
          ? static_cast<std::size_t>(cfg.min_inliers)
          : std::max<std::size_t>(50, n / 10);
  if (n < 2 || n < min_inliers) {
    throw DataError("ransac_scale: too few samples");
  }
  std::vector<double> sensor_disp(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sensor_depth[i] > 0.0)) {
      throw DataError("ransac_scale: sensor depths must be positive");
    }
    sensor_disp[i] = 1.0 / sensor_depth[i];
  }

  const auto count_inliers = [&](double a, double b,
                                 std::vector<std::uint8_t>* mask) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double denom = a * est_disparity[i] + b;
      const bool in = denom > 0.0 &&
                      std::abs(1.0 / denom - sensor_depth[i]) <= cfg.inlier_tol;
      if (mask) (*mask)[i] = in ? 1 : 0;
      count += in ? 1 : 0;
    }
    return count;
  };

  double best_a = 0.0, best_b = 0.0;
  std::size_t best_count = 0;
  for (int it = 0; it < cfg.iters; ++it) {
    const std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    const double dx = est_disparity[j] - est_disparity[i];
    if (std::abs(dx) < 1e-15) continue;
    const double a = (sensor_disp[j] - sensor_disp[i]) / dx;
    const double b = sensor_disp[i] - a * est_disparity[i];
    const std::size_t count = count_inliers(a, b, nullptr);
    if (count > best_count) {
      best_count = count;
      best_a = a;
      best_b = b;
    }
  }
  if (best_count < min_inliers) {
    throw InsufficientInliers("ransac_scale: best consensus " +
                              std::to_string(best_count) + " < " +
                              std::to_string(min_inliers));
  }

  // Least-squares refit on the best consensus set, in disparity space.
  std::vector<std::uint8_t> mask(n, 0);
  count_inliers(best_a, best_b, &mask);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    sx += est_disparity[i];
    sy += sensor_disp[i];
    sxx += est_disparity[i] * est_disparity[i];
    sxy += est_disparity[i] * sensor_disp[i];
    ++m;
  }
  const double det = m * sxx - sx * sx;
  LinearScaleModel model;
  if (std::abs(det) < 1e-30) {
    model.a = best_a;
    model.b = best_b;
  } else {
    model.a = (m * sxy - sx * sy) / det;
    model.b = (sy * sxx - sx * sxy) / det;
  }

  model.inlier_mask.assign(n, 0);
  const std::size_t refined_count =
      count_inliers(model.a, model.b, &model.inlier_mask);
  if (refined_count < min_inliers) {
    throw InsufficientInliers("ransac_scale: refit lost the consensus set");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!model.inlier_mask[i]) continue;
    const double d = 1.0 / (model.a * est_disparity[i] + model.b);
    sq += (d - sensor_depth[i]) * (d - sensor_depth[i]);
  }
  model.inlier_rmse = std::sqrt(sq / static_cast<double>(refined_count));
  return model;
}

RefinedDepth refine_depth(const LinearScaleModel& model,
                          double est_disparity) {
  const double denom = model.a * est_disparity + model.b;
  if (denom <= 0.0) {
    return {0.0, false};
  }
  return {1.0 / denom, true};
}

void write_depth_pgm(const std::string& path, const DepthImage& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << "P5\n" << img.width << " " << img.height << "\n65535\n";
  for (const double v : img.values) {
    const double mm = std::clamp(v * 1000.0, 0.0, 65535.0);
    const auto q = static_cast<std::uint16_t>(std::lround(mm));
    const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8),
                                    static_cast<unsigned char>(q & 0xFF)};
    f.write(reinterpret_cast<const char*>(bytes), 2);
  }
}

namespace {
int next_pgm_token(std::istream& in) {
  // Skips whitespace and '#' comments.
  int c = in.get();
  while (c == '#' || std::isspace(c)) {
    if (c == '#') {
      while (c != '\n' && c != EOF) c = in.get();
    }
    c = in.get();
  }
  int value = 0;
  bool any = false;
  while (std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) throw DataError("pgm: malformed header");
  return value;
}
}  // namespace

DepthImage read_depth_pgm(const std::string& path,
                          const std::string& intrinsics_json) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for reading: " + path);
  char magic[2];
  f.read(magic, 2);
  if (!f || magic[0] != 'P' || magic[1] != '5') {
    throw DataError("pgm: expected binary P5 format: " + path);
  }
  DepthImage img;
  img.width = next_pgm_token(f);
  img.height = next_pgm_token(f);
  const int maxval = next_pgm_token(f);
  if (maxval != 65535) {
    throw DataError("pgm: expected 16-bit maxval 65535: " + path);
  }
  img.values.resize(std::size_t(img.width) * img.height);
  for (double& v : img.values) {
    unsigned char bytes[2];
    f.read(reinterpret_cast<char*>(bytes), 2);
    if (!f) throw DataError("pgm: truncated pixel data: " + path);
    v = static_cast<double>((bytes[0] << 8) | bytes[1]) / 1000.0;
  }

  std::ifstream jf(intrinsics_json);
  if (!jf) throw DataError("cannot open intrinsics: " + intrinsics_json);
  nlohmann::json j;
  try {
    jf >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("intrinsics json: parse failure: ") +
                    e.what());
  }
  img.fx = j.at("fx").get<double>();
  img.fy = j.at("fy").get<double>();
  img.cx = j.at("cx").get<double>();
  img.cy = j.at("cy").get<double>();
  return img;
}

void write_intrinsics_json(const std::string& path, const DepthImage& img) {
  nlohmann::ordered_json j{{"fx", img.fx},
                           {"fy", img.fy},
                           {"cx", img.cx},
                           {"cy", img.cy},
                           {"width", img.width},
                           {"height", img.height}};
  std::ofstream f(path);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
}

}  // namespace artdir
