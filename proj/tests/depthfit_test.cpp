#include "artdir/depthfit.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace artdir;
using namespace artdir::test;

namespace {

DepthImage make_image(int w, int h) {
  DepthImage img;
  img.width = w;
  img.height = h;
  img.values.assign(std::size_t(w) * h, 0.0);
  img.fx = 500.0;
  img.fy = 500.0;
  img.cx = w / 2.0;
  img.cy = h / 2.0;
  return img;
}

// Depth of the plane n.P = c along the ray of pixel (u, v).
double plane_depth(const DepthImage& img, const Vec3& n, double c, int u,
                   int v) {
  const Vec3 ray((u - img.cx) / img.fx, (v - img.cy) / img.fy, 1.0);
  return c / n.dot(ray);
}

}  // namespace

TEST_CASE("normals of a fronto-parallel plane") {
  DepthImage img = make_image(64, 48);
  for (double& v : img.values) v = 1.0;
  const NormalMap map = normals_from_depth(img);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const bool border = u == img.width - 1 || v == img.height - 1;
      CHECK(map.valid_at(u, v) == !border);
      if (!border) {
        CHECK((map.at(u, v) - Vec3(0, 0, -1)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("normals of a tilted plane are analytic") {
  DepthImage img = make_image(80, 60);
  const double tilt = 30.0 * kPi / 180.0;
  // Plane normal tilted about the x axis, passing at depth 1 on the axis.
  const Vec3 n(0.0, std::sin(tilt), -std::cos(tilt));
  const double c = n.dot(Vec3(0, 0, 1));
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      img.at(u, v) = plane_depth(img, n, c, u, v);
    }
  }
  const NormalMap map = normals_from_depth(img);
  for (int v = 0; v + 1 < img.height; ++v) {
    for (int u = 0; u + 1 < img.width; ++u) {
      REQUIRE(map.valid_at(u, v));
      CHECK((map.at(u, v) - n).norm() < 1e-6);
    }
  }
}

TEST_CASE("normals mask invalid neighborhoods") {
  DepthImage img = make_image(8, 8);
  img.at(3, 3) = 1.0;  // isolated valid pixel
  const NormalMap map = normals_from_depth(img);
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      CHECK_FALSE(map.valid_at(u, v));
    }
  }
}

TEST_CASE("normals are unit and camera-facing on a wavy surface") {
  DepthImage img = make_image(60, 40);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      img.at(u, v) = 1.5 + 0.1 * std::sin(0.2 * u) * std::cos(0.15 * v);
    }
  }
  const NormalMap map = normals_from_depth(img);
  for (int v = 0; v + 1 < img.height; ++v) {
    for (int u = 0; u + 1 < img.width; ++u) {
      REQUIRE(map.valid_at(u, v));
      CHECK(std::abs(map.at(u, v).norm() - 1.0) < 1e-12);
      CHECK(map.at(u, v).dot(img.unproject(u, v)) < 0.0);
    }
  }
}

namespace {

struct ScaleData {
  std::vector<double> est;
  std::vector<double> depth;
  std::vector<bool> is_inlier;
};

// a, b define the true disparity map; outliers are displaced far beyond the
// inlier tolerance.
ScaleData make_scale_data(double a, double b, std::size_t n,
                          double outlier_fraction, Rng& rng) {
  ScaleData data;
  const auto n_out = static_cast<std::size_t>(outlier_fraction * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = rng.uniform(0.3, 2.0);
    const double disp = a * e + b;
    double depth = 1.0 / disp;
    const bool outlier = i < n_out;
    if (outlier) {
      depth += (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.05, 0.5);
      if (depth <= 0.01) depth = 0.01;
    }
    data.est.push_back(e);
    data.depth.push_back(depth);
    data.is_inlier.push_back(!outlier);
  }
  return data;
}

}  // namespace

TEST_CASE("ransac_scale recovers an exact linear model") {
  Rng rng(1);
  const ScaleData data = make_scale_data(2.0, 0.1, 200, 0.0, rng);
  Rng fit_rng(2);
  const LinearScaleModel model =
      ransac_scale(data.est, data.depth, RansacConfig{}, fit_rng);
  CHECK(model.a == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(model.b == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(model.inlier_rmse <= RansacConfig{}.inlier_tol);
}

TEST_CASE("ransac_scale with 30 percent outliers identifies inliers exactly") {
  Rng rng(3);
  const ScaleData data = make_scale_data(2.0, 0.1, 1000, 0.3, rng);
  Rng fit_rng(4);
  const LinearScaleModel model =
      ransac_scale(data.est, data.depth, RansacConfig{}, fit_rng);
  CHECK(std::abs(model.a - 2.0) < 1e-6);
  CHECK(std::abs(model.b - 0.1) < 1e-6);
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < data.est.size(); ++i) {
    CHECK(bool(model.inlier_mask[i]) == data.is_inlier[i]);
    inliers += model.inlier_mask[i];
  }
  CHECK(inliers == 700);
}

TEST_CASE("ransac_scale fails cleanly on pure noise") {
  int failures = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    std::vector<double> est, depth;
    for (int i = 0; i < 200; ++i) {
      est.push_back(rng.uniform(0.3, 2.0));
      depth.push_back(rng.uniform(0.3, 3.0));
    }
    RansacConfig cfg;
    cfg.min_inliers = 50;
    Rng fit_rng(200 + seed);
    try {
      ransac_scale(est, depth, cfg, fit_rng);
    } catch (const InsufficientInliers&) {
      ++failures;
    }
  }
  CHECK(failures >= 19);
}

TEST_CASE("ransac_scale is scale consistent") {
  Rng rng(5);
  const ScaleData data = make_scale_data(1.7, 0.05, 300, 0.0, rng);
  const double s = 2.5;
  std::vector<double> scaled_depth = data.depth;
  for (double& d : scaled_depth) d *= s;
  Rng ra(6), rb(6);
  const LinearScaleModel base =
      ransac_scale(data.est, data.depth, RansacConfig{}, ra);
  const LinearScaleModel scaled =
      ransac_scale(data.est, scaled_depth, RansacConfig{}, rb);
  CHECK(std::abs(scaled.a - base.a / s) < 1e-9);
  CHECK(std::abs(scaled.b - base.b / s) < 1e-9);
}

TEST_CASE("ransac_scale determinism and refine_depth") {
  Rng rng(7);
  const ScaleData data = make_scale_data(2.0, 0.1, 400, 0.2, rng);
  Rng ra(8), rb(8);
  const LinearScaleModel ma =
      ransac_scale(data.est, data.depth, RansacConfig{}, ra);
  const LinearScaleModel mb =
      ransac_scale(data.est, data.depth, RansacConfig{}, rb);
  CHECK(ma.a == mb.a);
  CHECK(ma.b == mb.b);
  CHECK(ma.inlier_mask == mb.inlier_mask);

  const RefinedDepth ok = refine_depth(ma, 1.0);
  CHECK(ok.valid);
  CHECK(ok.value == doctest::Approx(1.0 / (ma.a + ma.b)).epsilon(1e-12));
  const RefinedDepth bad = refine_depth(ma, -1.0);
  CHECK_FALSE(bad.valid);
}

TEST_CASE("depth pgm round trip") {
  const std::string dir = "test_tmp_depth";
  std::filesystem::create_directories(dir);
  DepthImage img = make_image(17, 9);
  Rng rng(9);
  for (double& v : img.values) v = rng.uniform(0.2, 5.0);
  write_depth_pgm(dir + "/d.pgm", img);
  write_intrinsics_json(dir + "/d.json", img);
  const DepthImage back = read_depth_pgm(dir + "/d.pgm", dir + "/d.json");
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.fx == img.fx);
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    CHECK(std::abs(back.values[i] - img.values[i]) <= 5e-4 + 1e-12);
  }
  std::filesystem::remove_all(dir);
}
