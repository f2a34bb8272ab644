#pragma once

#include <Eigen/Core>

#include "dirpose/errors.hpp"

namespace dirpose {

inline constexpr double kDegenerateDirectionEps = 1e-12;

// A 3-vector constrained to unit norm (tolerance 1e-12 on construction).
class UnitVec3 {
 public:
  // Requires an already-unit vector; use normalize_direction to project.
  explicit UnitVec3(const Eigen::Vector3d& v) : v_(v) {
    if (std::abs(v.norm() - 1.0) > kDegenerateDirectionEps) {
      throw UsageError("UnitVec3: vector is not unit length");
    }
  }
  UnitVec3(double x, double y, double z) : UnitVec3(Eigen::Vector3d(x, y, z)) {}

  const Eigen::Vector3d& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double dot(const UnitVec3& o) const { return v_.dot(o.v_); }

  // Angle to another unit vector, radians in [0, pi].
  double angle_to(const UnitVec3& o) const {
    double c = v_.dot(o.v_);
    return std::acos(std::clamp(c, -1.0, 1.0));
  }

  UnitVec3 operator-() const { return UnitVec3(Eigen::Vector3d(-v_)); }

 private:
  Eigen::Vector3d v_;
};

// v / ||v||. Throws DegenerateDirection when ||v|| <= 1e-12: below that
// the direction carries no information.
UnitVec3 normalize_direction(const Eigen::Vector3d& v);

}  // namespace dirpose
