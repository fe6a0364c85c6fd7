#pragma once

#include "artdir/core.hpp"
#include "artdir/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace artdir {

/// Direction on the unit sphere. Construction enforces |norm - 1| <= 1e-9;
/// use normalized() to build from an arbitrary nonzero vector.
template <typename Scalar>
class UnitVecT {
 public:
  UnitVecT() : v_(Vec3T<Scalar>::UnitZ()) {}

  explicit UnitVecT(const Vec3T<Scalar>& v) : v_(v) {
    if (std::abs(v.norm() - Scalar(1)) > Scalar(kUnitTol)) {
      throw DegenerateError("UnitVec: input norm deviates from 1 beyond 1e-9");
    }
  }

  /// Normalizes v; throws DegenerateDisplacement when ||v|| <= eps.
  static UnitVecT normalized(const Vec3T<Scalar>& v,
                             Scalar eps = Scalar(1e-12)) {
    const Scalar n = v.norm();
    if (!(n > eps)) {
      throw DegenerateDisplacement("UnitVec: cannot normalize near-zero vector");
    }
    UnitVecT u;
    u.v_ = v / n;
    return u;
  }

  const Vec3T<Scalar>& vec() const { return v_; }
  Scalar x() const { return v_.x(); }
  Scalar y() const { return v_.y(); }
  Scalar z() const { return v_.z(); }

  Scalar dot(const UnitVecT& o) const { return v_.dot(o.v_); }
  UnitVecT operator-() const {
    UnitVecT u;
    u.v_ = -v_;
    return u;
  }

 private:
  Vec3T<Scalar> v_;
};

using UnitVec = UnitVecT<double>;

/// Projects an arbitrary 3x3 matrix to the nearest rotation (Frobenius
/// norm), with the reflection case mapped to the nearest proper rotation.
template <typename Derived>
Mat3T<typename Derived::Scalar> nearest_rotation(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat3T<Scalar>> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3T<Scalar> r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < Scalar(0)) {
    Mat3T<Scalar> flip = Mat3T<Scalar>::Identity();
    flip(2, 2) = Scalar(-1);
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

/// Rigid transform T = [R|t] in SE(3). Rotation is stored as a matrix
/// because Kabsch produces one directly; valid() checks orthonormality and
/// det +1 to 1e-9, orthonormalized() projects drifted rotations back.
template <typename Scalar>
struct RigidTransformT {
  Mat3T<Scalar> rotation = Mat3T<Scalar>::Identity();
  Vec3T<Scalar> translation = Vec3T<Scalar>::Zero();

  static RigidTransformT identity() { return {}; }

  static RigidTransformT from_parts(const Mat3T<Scalar>& r,
                                    const Vec3T<Scalar>& t) {
    return {r, t};
  }

  static RigidTransformT translate(const Vec3T<Scalar>& t) {
    return {Mat3T<Scalar>::Identity(), t};
  }

  /// Rotation by angle about a unit axis through a point.
  static RigidTransformT rotate_about(const UnitVecT<Scalar>& axis,
                                      const Vec3T<Scalar>& point,
                                      Scalar angle) {
    const Mat3T<Scalar> r =
        Eigen::AngleAxis<Scalar>(angle, axis.vec()).toRotationMatrix();
    return {r, point - r * point};
  }

  Vec3T<Scalar> operator*(const Vec3T<Scalar>& p) const {
    return rotation * p + translation;
  }

  RigidTransformT operator*(const RigidTransformT& o) const {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }

  RigidTransformT inverse() const {
    const Mat3T<Scalar> rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  bool valid(Scalar tol = Scalar(kUnitTol)) const {
    const Mat3T<Scalar> err =
        rotation.transpose() * rotation - Mat3T<Scalar>::Identity();
    return err.template lpNorm<Eigen::Infinity>() <= tol &&
           std::abs(rotation.determinant() - Scalar(1)) <= tol &&
           translation.allFinite();
  }

  RigidTransformT orthonormalized() const {
    return {nearest_rotation(rotation), translation};
  }
};

using RigidTransform = RigidTransformT<double>;

/// One attributed observation point: position (camera frame, meters), RGB
/// color, surface normal, movable part id m (0 = fixed) and holdable id h
/// (h > 0 only on movable parts).
struct AttributedPoint {
  Vec3 position = Vec3::Zero();
  std::array<int, 3> color = {0, 0, 0};
  UnitVec normal;
  int movable_id = 0;
  int holdable_id = 0;

  bool consistent() const {
    return movable_id >= 0 && holdable_id >= 0 &&
           (holdable_id == 0 || movable_id > 0);
  }
};

inline Vec3 apply_transform(const RigidTransform& t, const Vec3& p) {
  return t * p;
}

/// Angle between two directions, radians in [0, pi]; the dot product is
/// clamped before acos.
template <typename Scalar>
Scalar angle_between(const UnitVecT<Scalar>& u, const UnitVecT<Scalar>& v) {
  const Scalar d = std::clamp(u.dot(v), Scalar(-1), Scalar(1));
  return std::acos(d);
}

inline constexpr double kDirectionEps = 1e-9;

/// Interaction direction induced by T at evaluation point g:
/// ((R - I) g + t) normalized. Throws DegenerateDisplacement when the
/// displacement norm is <= eps (identity transform, or g on a revolute axis).
inline UnitVec direction_from_transform(const RigidTransform& t, const Vec3& g,
                                        double eps = kDirectionEps) {
  const Vec3 disp = (t.rotation - Mat3::Identity()) * g + t.translation;
  const double n = disp.norm();
  if (n <= eps) {
    throw DegenerateDisplacement(
        "direction_from_transform: displacement norm below threshold");
  }
  return UnitVec::normalized(disp, eps);
}

}  // namespace artdir
