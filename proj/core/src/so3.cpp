#include "dirpose/so3.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dirpose/errors.hpp"

namespace dirpose {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d& m) {
  Eigen::Matrix3d gram = m.transpose() * m;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw UsageError("Rotation3: matrix is not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-9) {
    throw UsageError("Rotation3: determinant is not +1");
  }
  return Rotation3(m, Trusted{});
}

Rotation3 Rotation3::from_axis_angle(const UnitVec3& axis, double angle) {
  // Rodrigues form keeps the result orthonormal to machine precision.
  const Eigen::Vector3d& a = axis.vec();
  Eigen::Matrix3d k;
  k << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity() + std::sin(angle) * k +
                      (1.0 - std::cos(angle)) * (k * k);
  return from_matrix(m);
}

double Rotation3::angle() const {
  double c = (m_.trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Rotation3 procrustes_project(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(2) <= 1e-9) {
    throw SingularInput("procrustes_project: rank-deficient input");
  }
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  double d = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Eigen::Matrix3d r =
      u * Eigen::Vector3d(1.0, 1.0, d).asDiagonal() * v.transpose();
  return Rotation3(r, Rotation3::Trusted{});
}

Rotation3 gram_schmidt_project(const Eigen::Vector3d& vx,
                               const Eigen::Vector3d& vy) {
  double nx = vx.norm();
  double ny = vy.norm();
  if (nx <= kDegenerateDirectionEps || ny <= kDegenerateDirectionEps) {
    throw DegenerateFrame("gram_schmidt_project: zero-length input");
  }
  Eigen::Vector3d c1 = vx / nx;
  if (std::abs(c1.dot(vy / ny)) >= 1.0 - 1e-9) {
    throw DegenerateFrame("gram_schmidt_project: parallel inputs");
  }
  Eigen::Vector3d c2 = vy - vy.dot(c1) * c1;
  c2.normalize();
  Eigen::Vector3d c3 = c1.cross(c2);
  Eigen::Matrix3d m;
  m.col(0) = c1;
  m.col(1) = c2;
  m.col(2) = c3;
  return Rotation3(m, Rotation3::Trusted{});
}

double geodesic_distance(const Rotation3& r1, const Rotation3& r2) {
  double c = ((r1.matrix().transpose() * r2.matrix()).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Rotation3 half_rotation(const Rotation3& rot) {
  double ang = rot.angle();
  if (ang >= kPi - 1e-6) {
    throw AmbiguousHalfRotation(
        "half_rotation: rotation angle within 1e-6 of pi");
  }
  if (ang < 1e-12) return rot;
  const Eigen::Matrix3d& m = rot.matrix();
  Eigen::Vector3d axis(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0),
                       m(1, 0) - m(0, 1));
  axis /= 2.0 * std::sin(ang);
  return Rotation3::from_axis_angle(normalize_direction(axis), ang / 2.0);
}

Rotation3 perturb_rotation(const Rotation3& rot, double max_angle, Rng& rng) {
  if (max_angle < 0.0 || max_angle >= kPi / 2.0) {
    throw UsageError("perturb_rotation: max_angle must be in [0, pi/2)");
  }
  if (max_angle == 0.0) return rot;
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    m.col(i) =
        sample_cap(UnitVec3(rot.col(i)), max_angle, rng).vec();
  }
  return procrustes_project(m);
}

Rotation3 from_lookat(const UnitVec3& look, const Eigen::Vector3d& up) {
  double nu = up.norm();
  if (nu <= kDegenerateDirectionEps) {
    throw DegenerateFrame("from_lookat: zero-length up vector");
  }
  Eigen::Vector3d z = -look.vec();
  Eigen::Vector3d x = (up / nu).cross(z);
  double nx = x.norm();
  if (nx <= 1e-9) {
    throw DegenerateFrame("from_lookat: look is parallel to up");
  }
  x /= nx;
  Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return Rotation3(m, Rotation3::Trusted{});
}

Rotation3 random_rotation(Rng& rng) {
  double q[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& c : q) {
      c = standard_normal(rng);
      n2 += c * c;
    }
  } while (n2 < 1e-12);
  double n = std::sqrt(n2);
  double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return Rotation3(m, Rotation3::Trusted{});
}

UnitVec3 sample_cap(const UnitVec3& axis, double max_angle, Rng& rng) {
  if (max_angle < 0.0 || max_angle > kPi) {
    throw UsageError("sample_cap: max_angle must be in [0, pi]");
  }
  // Area-uniform on the cap: cos(angle) uniform in [cos(max_angle), 1].
  double c = uniform_in(rng, std::cos(max_angle), 1.0);
  c = std::min(c, 1.0);
  double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double psi = uniform_in(rng, 0.0, 2.0 * kPi);

  const Eigen::Vector3d& a = axis.vec();
  Eigen::Vector3d helper =
      std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d e1 = a.cross(helper).normalized();
  Eigen::Vector3d e2 = a.cross(e1);
  Eigen::Vector3d v = c * a + s * (std::cos(psi) * e1 + std::sin(psi) * e2);
  return UnitVec3(Eigen::Vector3d(v.normalized()));
}

}  // namespace dirpose
