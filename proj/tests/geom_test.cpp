#include "artdir/geom.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace artdir;
using namespace artdir::test;

TEST_CASE("apply_transform basics") {
  const Vec3 p(1, 2, 3);
  CHECK((apply_transform(RigidTransform::identity(), p) - p).norm() == 0.0);

  const RigidTransform lift = RigidTransform::translate(Vec3(0, 0, 1));
  CHECK((apply_transform(lift, Vec3::Zero()) - Vec3(0, 0, 1)).norm() == 0.0);

  const RigidTransform turn{rot_z(kPi / 2.0), Vec3::Zero()};
  CHECK((apply_transform(turn, Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() <
        1e-15);
}

TEST_CASE("apply_transform preserves pairwise distances") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const RigidTransform t{random_rotation(rng),
                           Vec3(rng.normal(), rng.normal(), rng.normal())};
    const Vec3 a(rng.normal(), rng.normal(), rng.normal());
    const Vec3 b(rng.normal(), rng.normal(), rng.normal());
    CHECK(std::abs(((t * a) - (t * b)).norm() - (a - b).norm()) < 1e-9);
  }
}

TEST_CASE("angle_between") {
  const UnitVec e1(Vec3::UnitX());
  const UnitVec e2(Vec3::UnitY());
  CHECK(angle_between(e1, e1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(angle_between(e1, e2) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(angle_between(e1, -e1) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(angle_between(e2, e1) == angle_between(e1, e2));
}

TEST_CASE("direction_from_transform") {
  SUBCASE("pure translation") {
    const RigidTransform t = RigidTransform::translate(Vec3(0, 0, 2));
    const UnitVec d = direction_from_transform(t, Vec3(4, -1, 0.5));
    CHECK((d.vec() - Vec3(0, 0, 1)).norm() < 1e-12);
  }
  SUBCASE("rotation by 90 degrees about z at g=(1,0,0)") {
    const RigidTransform t{rot_z(kPi / 2.0), Vec3::Zero()};
    const UnitVec d = direction_from_transform(t, Vec3(1, 0, 0));
    const Vec3 expected = Vec3(-1, 1, 0).normalized();
    CHECK((d.vec() - expected).norm() < 1e-12);
  }
  SUBCASE("identity is degenerate") {
    CHECK_THROWS_AS(
        direction_from_transform(RigidTransform::identity(), Vec3(1, 2, 3)),
        DegenerateDisplacement);
  }
  SUBCASE("g on a revolute axis with zero translation is degenerate") {
    const RigidTransform t = RigidTransform::rotate_about(
        UnitVec(Vec3::UnitZ()), Vec3(1, 1, 0), 0.3);
    CHECK_THROWS_AS(direction_from_transform(t, Vec3(1, 1, 5)),
                    DegenerateDisplacement);
  }
  SUBCASE("output has unit norm") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      const RigidTransform t{random_rotation(rng),
                             Vec3(rng.normal(), rng.normal(), rng.normal())};
      const Vec3 g(rng.normal(), rng.normal(), rng.normal());
      CHECK(std::abs(direction_from_transform(t, g).vec().norm() - 1.0) <
            1e-9);
    }
  }
}

TEST_CASE("direction_from_transform is rotation equivariant") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Mat3 q = random_rotation(rng);
    const RigidTransform t{random_rotation(rng),
                           Vec3(rng.normal(), rng.normal(), rng.normal())};
    const Vec3 g(rng.normal(), rng.normal(), rng.normal());
    const RigidTransform conj =
        RigidTransform{q, Vec3::Zero()} * t * RigidTransform{q.transpose(),
                                                             Vec3::Zero()};
    const UnitVec lhs = direction_from_transform(conj, q * g);
    const UnitVec rhs =
        UnitVec::normalized(q * direction_from_transform(t, g).vec());
    CHECK(angle_between(lhs, rhs) < 1e-7);
  }
}

TEST_CASE("small-angle revolute direction approaches the tangent") {
  const UnitVec axis(Vec3(0, 1, 0));
  const Vec3 center(0.5, 0.0, -0.2);
  const Vec3 g(1.3, 0.4, 0.6);
  const double theta = 1e-4;
  const RigidTransform t = RigidTransform::rotate_about(axis, center, theta);
  const UnitVec d = direction_from_transform(t, g);
  const UnitVec tangent =
      UnitVec::normalized(axis.vec().cross(g - center));
  CHECK(angle_between(d, tangent) < 1e-3);
}

TEST_CASE("rigid transform validity and reorthonormalization") {
  Rng rng(5);
  RigidTransform t{random_rotation(rng), Vec3(0.1, 0.2, 0.3)};
  CHECK(t.valid());
  RigidTransform drifted = t;
  drifted.rotation(0, 0) += 1e-4;  // beyond the 1e-9 tolerance
  CHECK_FALSE(drifted.valid());
  CHECK(drifted.orthonormalized().valid());
  CHECK(drifted.orthonormalized().rotation.determinant() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit vector construction") {
  CHECK_THROWS_AS(UnitVec(Vec3(1.0, 0.0, 1e-4)), DegenerateError);
  CHECK_THROWS_AS(UnitVec::normalized(Vec3::Zero()), DegenerateDisplacement);
  const UnitVec u = UnitVec::normalized(Vec3(3, 4, 0));
  CHECK(u.x() == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("attributed point label invariant") {
  AttributedPoint p;
  p.movable_id = 0;
  p.holdable_id = 1;
  CHECK_FALSE(p.consistent());
  p.movable_id = 1;
  CHECK(p.consistent());
}
