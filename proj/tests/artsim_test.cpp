#include "artdir/artsim.hpp"

#include "artdir/kabsch.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace artdir;
using namespace artdir::test;

TEST_CASE("generate_scene structure") {
  Rng rng(1);
  const SceneSpec spec = SceneSpec::door();
  const Scene scene = generate_scene(spec, rng);

  CHECK(scene.count_movable() >= 100);
  std::size_t handle_points = 0;
  for (const AttributedPoint& p : scene.points) {
    CHECK(p.consistent());
    CHECK(std::abs(p.normal.vec().norm() - 1.0) < 1e-12);
    // Camera-facing culling invariant.
    CHECK(p.normal.vec().dot(p.position) < 0.0);
    if (p.holdable_id > 0) ++handle_points;
  }
  CHECK(handle_points >= 100);

  // Normals come from cuboid faces: exactly six distinct values.
  std::set<std::array<long, 3>> distinct;
  for (const AttributedPoint& p : scene.points) {
    distinct.insert({std::lround(p.normal.x() * 1e9),
                     std::lround(p.normal.y() * 1e9),
                     std::lround(p.normal.z() * 1e9)});
  }
  CHECK(distinct.size() <= 6);
}

TEST_CASE("generate_scene is deterministic per seed") {
  const SceneSpec spec = SceneSpec::drawer();
  Rng a(77), b(77);
  const Scene sa = generate_scene(spec, a);
  const Scene sb = generate_scene(spec, b);
  REQUIRE(sa.points.size() == sb.points.size());
  for (std::size_t i = 0; i < sa.points.size(); ++i) {
    CHECK(sa.points[i].position == sb.points[i].position);
    CHECK(sa.points[i].movable_id == sb.points[i].movable_id);
  }
}

TEST_CASE("generate_scene rejects hopeless density") {
  Rng rng(2);
  SceneSpec spec = SceneSpec::door();
  spec.density = 10.0;
  CHECK_THROWS_AS(generate_scene(spec, rng), EmptyScene);
}

TEST_CASE("ground_truth_field prismatic") {
  Rng rng(3);
  const SceneSpec spec = SceneSpec::drawer();
  const Scene scene = generate_scene(spec, rng);
  const DisplacementField field = ground_truth_field(scene, 0.01);
  const Vec3 expected = 0.01 * scene.joint_truth.axis_direction.vec();
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    if (scene.points[i].movable_id > 0) {
      CHECK((field.vectors[i] - expected).norm() < 1e-12);
    } else {
      CHECK(field.vectors[i].norm() == 0.0);
    }
  }
}

TEST_CASE("ground_truth_field revolute geometry") {
  // Hand-built scene so points sit exactly on and off the axis.
  Scene scene;
  scene.joint_truth.kind = JointKind::revolute;
  scene.joint_truth.axis_direction = UnitVec(Vec3::UnitY());
  scene.joint_truth.axis_point = Vec3(0.2, 0.0, 1.0);

  AttributedPoint on_axis;
  on_axis.position = Vec3(0.2, 0.5, 1.0);
  on_axis.movable_id = 1;
  AttributedPoint off_axis;
  off_axis.position = Vec3(0.5, -0.1, 1.2);
  off_axis.movable_id = 1;
  scene.points = {on_axis, off_axis};

  const double delta = 1e-3;
  const DisplacementField field = ground_truth_field(scene, delta);
  CHECK(field.vectors[0].norm() < 1e-15);

  const Vec3 radial = off_axis.position - scene.joint_truth.axis_point;
  const Vec3 along =
      radial.dot(Vec3::UnitY()) * Vec3::UnitY();
  const double r = (radial - along).norm();
  CHECK(field.vectors[1].norm() ==
        doctest::Approx(2.0 * r * std::sin(delta / 2.0)).epsilon(1e-12));
}

TEST_CASE("ground_truth_field is a rigid motion") {
  Rng rng(4);
  const SceneSpec spec = SceneSpec::door();
  const Scene scene = generate_scene(spec, rng);
  const double delta = 0.01;
  const DisplacementField field = ground_truth_field(scene, delta);

  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    if (scene.points[i].movable_id > 0) movable.push_back(i);
  }
  Rng pick(5);
  for (int k = 0; k < 200; ++k) {
    const std::size_t i = movable[pick.uniform_index(movable.size())];
    const std::size_t j = movable[pick.uniform_index(movable.size())];
    const double before =
        (scene.points[i].position - scene.points[j].position).norm();
    const double after = ((scene.points[i].position + field.vectors[i]) -
                          (scene.points[j].position + field.vectors[j]))
                             .norm();
    CHECK(std::abs(before - after) < 1e-9);
  }

  // Kabsch over all movable pairs recovers T(delta).
  Correspondences c;
  for (const std::size_t i : movable) {
    c.sources.push_back(scene.points[i].position);
    c.targets.push_back(scene.points[i].position + field.vectors[i]);
  }
  const RigidTransform fit = fit_rigid(c);
  const RigidTransform truth = joint_transform(scene.joint_truth, delta);
  CHECK(rotation_error(fit.rotation, truth.rotation) < 1e-9);
  CHECK((fit.translation - truth.translation).norm() < 1e-9);
}

TEST_CASE("screw field equals rotation-then-translation composition") {
  JointModel screw;
  screw.kind = JointKind::screw;
  screw.axis_direction = UnitVec::normalized(Vec3(0.3, 1.0, -0.2));
  screw.axis_point = Vec3(0.1, -0.4, 0.9);
  screw.pitch = 0.04;
  const double delta = 0.2;

  JointModel rev = screw;
  rev.kind = JointKind::revolute;
  rev.pitch = 0.0;

  const RigidTransform composed =
      RigidTransform::translate(screw.pitch * delta *
                                screw.axis_direction.vec()) *
      joint_transform(rev, delta);
  const RigidTransform direct = joint_transform(screw, delta);

  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK((composed * p - direct * p).norm() < 1e-12);
  }
}

TEST_CASE("corrupt") {
  Rng gen(10);
  const SceneSpec spec = SceneSpec::drawer();
  const Scene scene = generate_scene(spec, gen);
  const DisplacementField truth = ground_truth_field(scene, 0.01);

  SUBCASE("zero noise is the identity") {
    Rng rng(11);
    const DisplacementField same = corrupt(truth, NoiseSpec{}, rng);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      CHECK(same.vectors[i] == truth.vectors[i]);
      CHECK(same.valid[i] == truth.valid[i]);
    }
  }

  SUBCASE("outlier count is exact") {
    Rng rng(12);
    NoiseSpec noise;
    noise.outlier_fraction = 0.3;
    CorruptionStats stats;
    corrupt(truth, noise, rng, &stats);
    std::size_t n_movable = 0;
    for (const Vec3& q : truth.vectors) {
      if (q.norm() > 0.0) ++n_movable;
    }
    CHECK(stats.outliers ==
          static_cast<std::size_t>(0.3 * static_cast<double>(n_movable)));
  }

  SUBCASE("dropout flags invalid entries") {
    Rng rng(13);
    NoiseSpec noise;
    noise.dropout_fraction = 0.25;
    CorruptionStats stats;
    const DisplacementField dropped = corrupt(truth, noise, rng, &stats);
    std::size_t invalid = 0;
    for (std::size_t i = 0; i < dropped.size(); ++i) {
      if (!dropped.valid[i]) ++invalid;
    }
    CHECK(invalid == stats.dropped);
    CHECK(stats.dropped > 0);
  }

  SUBCASE("direction jitter follows half-normal statistics") {
    Rng dense_rng(140);
    SceneSpec dense = SceneSpec::drawer();
    dense.density = 2.5e4;
    const Scene big = generate_scene(dense, dense_rng);
    const DisplacementField big_truth = ground_truth_field(big, 0.01);
    Rng rng(14);
    NoiseSpec noise;
    noise.sigma_dir = 0.1;
    const DisplacementField noisy = corrupt(big_truth, noise, rng);
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < big_truth.size(); ++i) {
      if (big_truth.vectors[i].norm() == 0.0) continue;
      const double cosang = big_truth.vectors[i].normalized().dot(
          noisy.vectors[i].normalized());
      acc += std::acos(std::clamp(cosang, -1.0, 1.0));
      ++n;
    }
    REQUIRE(n >= 10000);
    const double mean = acc / static_cast<double>(n);
    const double expected = std::sqrt(2.0 / kPi) * noise.sigma_dir;
    CHECK(std::abs(mean - expected) / expected < 0.10);
  }

  SUBCASE("fraction bounds are enforced") {
    Rng rng(15);
    NoiseSpec bad;
    bad.outlier_fraction = 1.0;
    CHECK_THROWS_AS(corrupt(truth, bad, rng), DataError);
  }
}

TEST_CASE("flow_error") {
  Rng gen(20);
  const Scene scene = tiny_scene();
  const DisplacementField truth = ground_truth_field(scene, 0.02);

  SUBCASE("identical fields score zero") {
    const FlowError e = flow_error(truth, truth);
    CHECK(e.magnitude_term == 0.0);
    CHECK(e.direction_term == 0.0);
  }
  SUBCASE("doubled estimate") {
    DisplacementField est = truth;
    for (Vec3& q : est.vectors) q *= 2.0;
    const FlowError e = flow_error(est, truth);
    CHECK(e.magnitude_term == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.direction_term == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("negated estimate") {
    DisplacementField est = truth;
    for (Vec3& q : est.vectors) q = -q;
    const FlowError e = flow_error(est, truth);
    CHECK(e.magnitude_term == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.direction_term == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("all-zero truth has no comparable points") {
    DisplacementField zero = truth;
    for (Vec3& q : zero.vectors) q = Vec3::Zero();
    CHECK_THROWS_AS(flow_error(truth, zero), NoComparablePoints);
  }
  SUBCASE("nonzero iff different") {
    DisplacementField est = truth;
    est.vectors[0] += Vec3(1e-14, 0, 0);
    const FlowError e = flow_error(est, truth);
    CHECK(e.magnitude_term > 0.0);
    CHECK(e.magnitude_term < 1e-10);
  }
}

TEST_CASE("truth_direction matches the finite-motion chord") {
  JointModel joint;
  joint.kind = JointKind::revolute;
  joint.axis_direction = UnitVec(Vec3::UnitY());
  joint.axis_point = Vec3(0.0, 0.0, 1.0);
  const Vec3 g(0.4, 0.1, 1.3);

  const double delta = 1e-4;
  const UnitVec chord = truth_direction(joint, g, delta);
  const UnitVec tangent = tangent_direction(joint, g);
  CHECK(angle_between(chord, tangent) < 1e-3);
  CHECK(angle_between(chord, tangent) ==
        doctest::Approx(delta / 2.0).epsilon(0.01));
}
