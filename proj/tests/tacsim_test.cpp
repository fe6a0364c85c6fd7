#include "artdir/tacsim.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace artdir;
using namespace artdir::test;

namespace {

JointModel drawer_joint() {
  JointModel j;
  j.kind = JointKind::prismatic;
  j.axis_direction = UnitVec(Vec3::UnitX());
  return j;
}

JointModel door_joint(const Vec3& hinge_point) {
  JointModel j;
  j.kind = JointKind::revolute;
  j.axis_direction = UnitVec(Vec3::UnitY());
  j.axis_point = hinge_point;
  return j;
}

}  // namespace

TEST_CASE("step_world basics on a prismatic joint") {
  const Vec3 g(0.0, 0.0, 0.5);
  TacWorld w = make_tac_world(drawer_joint(), g, 0.0, 0.3);

  SUBCASE("zero motion changes nothing") {
    const double coord0 = w.joint_coord;
    const ContactState c = step_world(w, RigidTransform::identity());
    CHECK(w.joint_coord == coord0);
    CHECK(c.peak_deformation() < 1e-12);
  }
  SUBCASE("motion along the free direction advances the joint freely") {
    const ContactState c =
        step_world(w, RigidTransform::translate(Vec3(0.002, 0, 0)));
    CHECK(w.joint_coord == doctest::Approx(0.002).epsilon(1e-6));
    CHECK(c.peak_deformation() < 1e-9);
  }
  SUBCASE("orthogonal motion becomes deformation, joint holds") {
    const ContactState c =
        step_world(w, RigidTransform::translate(Vec3(0, 0.002, 0)));
    CHECK(std::abs(w.joint_coord) < 1e-9);
    CHECK(c.peak_deformation() == doctest::Approx(0.002).epsilon(1e-9));
  }
  SUBCASE("joint limit is reported") {
    CHECK_THROWS_AS(
        step_world(w, RigidTransform::translate(Vec3(0.5, 0, 0))),
        JointLimit);
    CHECK(w.joint_coord == doctest::Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("step_world energy consistency") {
  const Vec3 g(0.1, -0.2, 0.6);
  JointModel door = door_joint(Vec3(0.6, 0.0, 0.6));
  TacWorld w = make_tac_world(door, g, 0.0, kPi / 2.0);
  // Tangent at g points along +z; push mostly that way plus a bit of
  // deformation so the minimizer sits strictly inside the range.
  step_world(w, RigidTransform::translate(Vec3(0.001, 0, 0.002)));
  const double e0 = w.elastic_energy_at(w.joint_coord);
  CHECK(w.elastic_energy_at(w.joint_coord + 1e-4) > e0);
  CHECK(w.elastic_energy_at(w.joint_coord - 1e-4) > e0);
  CHECK(w.elastic_energy() == e0);
}

TEST_CASE("slip is latched and capped") {
  const Vec3 g(0.0, 0.0, 0.5);
  TacWorld w = make_tac_world(drawer_joint(), g, 0.0, 0.3, 500.0, 0.006);
  const ContactState c =
      step_world(w, RigidTransform::translate(Vec3(0, 0.02, 0)));
  CHECK(w.slipped);
  CHECK(c.slipped);
  CHECK(c.peak_deformation() <= 0.006 + 1e-12);
  CHECK_THROWS_AS(step_world(w, RigidTransform::identity()), DataError);
}

TEST_CASE("regulate: prismatic with the exact direction needs no correction") {
  const Vec3 g(0.0, 0.0, 0.5);
  TacWorld w = make_tac_world(drawer_joint(), g, 0.0, 0.2);
  ControllerConfig cfg;
  const RolloutReport report = regulate(w, UnitVec(Vec3::UnitX()), cfg);
  CHECK(report.success);
  CHECK(report.termination == "completed");
  CHECK(report.peak_deformation < 0.25 * cfg.deformation_budget);
}

TEST_CASE("regulate: revolute door with a 20 degree error") {
  const Vec3 hinge(0.55, 0.0, 0.8);
  const Vec3 g(0.0, 0.0, 0.8);  // 0.55 m from the hinge
  const JointModel door = door_joint(hinge);
  const UnitVec tangent = tangent_direction(door, g);
  const Vec3 off_axis = Vec3::UnitY();  // orthogonal to the tangent here
  const Vec3 d20 = (std::cos(20.0 * kPi / 180.0) * tangent.vec() +
                    std::sin(20.0 * kPi / 180.0) * off_axis);

  ControllerConfig cfg;
  SUBCASE("regulated rollout succeeds") {
    TacWorld w = make_tac_world(door, g, 0.0, kPi / 2.0);
    const RolloutReport report =
        regulate(w, UnitVec::normalized(d20), cfg);
    CHECK(report.success);
    CHECK(report.peak_deformation <= cfg.deformation_budget);
  }
  SUBCASE("without correction the same rollout slips") {
    TacWorld w = make_tac_world(door, g, 0.0, kPi / 2.0);
    ControllerConfig open_loop = cfg;
    open_loop.correction_enabled = false;
    const RolloutReport report =
        regulate(w, UnitVec::normalized(d20), open_loop);
    CHECK_FALSE(report.success);
    CHECK(report.termination == "slip");
  }
}

TEST_CASE("regulate: antiparallel direction fails") {
  const Vec3 hinge(0.55, 0.0, 0.8);
  const Vec3 g(0.0, 0.0, 0.8);
  const JointModel door = door_joint(hinge);
  const UnitVec tangent = tangent_direction(door, g);
  TacWorld w = make_tac_world(door, g, 0.0, kPi / 2.0);
  ControllerConfig cfg;
  cfg.max_iterations = 300;
  const RolloutReport report = regulate(w, -tangent, cfg);
  CHECK_FALSE(report.success);
  CHECK(report.final_joint_coord < 0.01);
}

TEST_CASE("disabling correction never reduces peak deformation") {
  const Vec3 hinge(0.55, 0.0, 0.8);
  const Vec3 g(0.0, 0.0, 0.8);
  const JointModel door = door_joint(hinge);
  const UnitVec tangent = tangent_direction(door, g);
  ControllerConfig cfg;
  cfg.max_iterations = 500;
  for (const double err_deg : {0.0, 10.0, 25.0}) {
    const Vec3 d = std::cos(err_deg * kPi / 180.0) * tangent.vec() +
                   std::sin(err_deg * kPi / 180.0) * Vec3::UnitY();
    TacWorld wa = make_tac_world(door, g, 0.0, kPi / 2.0);
    const RolloutReport with = regulate(wa, UnitVec::normalized(d), cfg);
    ControllerConfig open_loop = cfg;
    open_loop.correction_enabled = false;
    TacWorld wb = make_tac_world(door, g, 0.0, kPi / 2.0);
    const RolloutReport without =
        regulate(wb, UnitVec::normalized(d), open_loop);
    CHECK(without.peak_deformation >= with.peak_deformation - 1e-12);
  }
}

TEST_CASE("rollouts are deterministic") {
  const Vec3 hinge(0.55, 0.0, 0.8);
  const Vec3 g(0.0, 0.0, 0.8);
  const JointModel door = door_joint(hinge);
  const UnitVec tangent = tangent_direction(door, g);
  ControllerConfig cfg;
  TacWorld wa = make_tac_world(door, g, 0.0, kPi / 2.0);
  TacWorld wb = make_tac_world(door, g, 0.0, kPi / 2.0);
  const RolloutReport a = regulate(wa, tangent, cfg);
  const RolloutReport b = regulate(wb, tangent, cfg);
  REQUIRE(a.iterations.size() == b.iterations.size());
  CHECK(a.peak_deformation == b.peak_deformation);
  CHECK(a.final_joint_coord == b.final_joint_coord);
  for (std::size_t i = 0; i < a.iterations.size(); ++i) {
    CHECK(a.iterations[i].joint_coord == b.iterations[i].joint_coord);
    CHECK(a.iterations[i].f == b.iterations[i].f);
  }
}
