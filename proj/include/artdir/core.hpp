#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>

namespace artdir {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Tolerance for unit-norm and orthonormality checks on core types.
inline constexpr double kUnitTol = 1e-9;

}  // namespace artdir
