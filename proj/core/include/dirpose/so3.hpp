#pragma once

#include <Eigen/Core>

#include "dirpose/random.hpp"
#include "dirpose/unit_vec.hpp"

namespace dirpose {

// A 3x3 orthonormal matrix with determinant +1 (tolerance 1e-9 on both).
class Rotation3 {
 public:
  Rotation3() : m_(Eigen::Matrix3d::Identity()) {}

  // Validates the SO(3) invariants; throws UsageError when violated.
  static Rotation3 from_matrix(const Eigen::Matrix3d& m);

  static Rotation3 from_axis_angle(const UnitVec3& axis, double angle);

  const Eigen::Matrix3d& matrix() const { return m_; }
  Eigen::Vector3d col(int i) const { return m_.col(i); }

  Rotation3 transposed() const { return Rotation3(m_.transpose(), Trusted{}); }
  Rotation3 operator*(const Rotation3& o) const {
    return Rotation3(m_ * o.m_, Trusted{});
  }
  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
  UnitVec3 operator*(const UnitVec3& v) const {
    return UnitVec3(Eigen::Vector3d(m_ * v.vec()));
  }

  // Rotation angle away from the identity, radians in [0, pi].
  double angle() const;

 private:
  struct Trusted {};
  Rotation3(const Eigen::Matrix3d& m, Trusted) : m_(m) {}
  Eigen::Matrix3d m_;

  friend Rotation3 procrustes_project(const Eigen::Matrix3d&);
  friend Rotation3 gram_schmidt_project(const Eigen::Vector3d&,
                                        const Eigen::Vector3d&);
  friend Rotation3 half_rotation(const Rotation3&);
  friend Rotation3 from_lookat(const UnitVec3&, const Eigen::Vector3d&);
  friend Rotation3 random_rotation(Rng&);
};

// Nearest rotation to M in Frobenius norm: U diag(1,1,det(UV^T)) V^T with
// U S V^T the SVD of M. Throws SingularInput when the smallest singular
// value is below 1e-9.
Rotation3 procrustes_project(const Eigen::Matrix3d& m);

// Builds a rotation from two independent vectors: column 1 is vx
// normalized, column 2 is vy orthogonalized against it, column 3 their
// cross product. Throws DegenerateFrame for (near-)parallel inputs.
Rotation3 gram_schmidt_project(const Eigen::Vector3d& vx,
                               const Eigen::Vector3d& vy);

// arccos((trace(R1^T R2) - 1) / 2), radians in [0, pi].
double geodesic_distance(const Rotation3& r1, const Rotation3& r2);

// The rotation r with r*r = R: same axis, half the angle. Throws
// AmbiguousHalfRotation when R's angle is within 1e-6 of pi, where the
// axis sign (and therefore the half) is not determined.
Rotation3 half_rotation(const Rotation3& rot);

// Replaces each column of R with a uniform draw from the spherical cap of
// half-angle max_angle around it, then projects back onto SO(3).
// max_angle = 0 returns R exactly.
Rotation3 perturb_rotation(const Rotation3& rot, double max_angle, Rng& rng);

// Camera orientation (camera-to-world) for a camera looking along `look`
// with image-up along the projection of `up`. Camera axes: x right,
// y image-up, z = -look. Throws DegenerateFrame when look is parallel
// to up.
Rotation3 from_lookat(const UnitVec3& look, const Eigen::Vector3d& up);

// Uniform over SO(3) via a normalized 4-normal quaternion.
Rotation3 random_rotation(Rng& rng);

// Area-uniform draw from the spherical cap of half-angle max_angle
// centered on axis.
UnitVec3 sample_cap(const UnitVec3& axis, double max_angle, Rng& rng);

}  // namespace dirpose
