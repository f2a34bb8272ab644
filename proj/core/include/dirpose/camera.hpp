#pragma once

#include <Eigen/Core>

#include "dirpose/image.hpp"
#include "dirpose/so3.hpp"
#include "dirpose/unit_vec.hpp"

namespace dirpose {

// Camera conventions, shared by every module that touches pixels.
//
// Camera frame (used by from_lookat and world orientations): x right,
// y image-up, z backward; the camera looks along -z.
//
// Pixel-aligned frame: x right, y image-down, z = the look direction.
// The two frames differ by FLIP = diag(1, -1, -1). A point X in the
// pixel-aligned frame with z > 0 projects to pixel
//   u = cx + fx * x / z,   v = cy + fy * y / z,
// so pixel row indices grow downward. Pixel (0, 0) is centered at
// continuous (0, 0).
//
// Relative poses, homographies, and essential matrices are expressed in
// pixel-aligned frames. A point X0 in camera-0 coordinates maps to
// camera-1 coordinates X1 = R * X0 + s * t with unknown positive scale s
// and ||t|| = 1.

// Pinhole intrinsics. fov helpers assume square pixels and treat the
// stated field of view as horizontal.
struct Intrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
  }

  // Pixel-aligned-frame ray through pixel (u, v), unnormalized (z = 1).
  Eigen::Vector3d pixel_ray(double u, double v) const {
    return {(u - cx) / fx, (v - cy) / fy, 1.0};
  }

  // Projects a pixel-aligned-frame point with z > 0; returns false for
  // points at or behind the camera plane.
  bool project(const Eigen::Vector3d& x, Eigen::Vector2d* uv) const {
    if (x.z() <= 1e-12) return false;
    *uv = {cx + fx * x.x() / x.z(), cy + fy * x.y() / x.z()};
    return true;
  }
};

// fx = fy = (width/2) / tan(fov/2), principal point at the image center
// ((width-1)/2, (height-1)/2). fov must lie in (0, 180) degrees.
Intrinsics intrinsics_from_fov(double fov_deg, int width, int height);

// The pixel-aligned frame rotated by FLIP conversions.
inline Eigen::Matrix3d camera_flip() {
  return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
}

struct RelativePose {
  Rotation3 rotation;
  UnitVec3 translation{0.0, 0.0, 1.0};

  // The pose mapping camera-1 coordinates back to camera-0 coordinates.
  RelativePose inverse() const {
    Rotation3 rt = rotation.transposed();
    return {rt, UnitVec3(Eigen::Vector3d(-(rt * translation.vec())))};
  }
};

// K_out * rot^T * K_in^{-1}: the pixel map of the camera-coordinate
// change X' = rot^T X (pixel-aligned frames). With rot = I and
// K_out = K_in this is the identity.
Eigen::Matrix3d rotation_homography(const Intrinsics& k_in,
                                    const Intrinsics& k_out,
                                    const Rotation3& rot);

struct WarpResult {
  ImageBuffer image;
  ImageBuffer mask;  // single channel, 1 where the source covered the pixel
};

// Inverse-mapping warp: each output pixel samples the source at
// H^{-1} (u, v, 1) with bilinear interpolation. Samples falling outside
// the source produce 0 with mask = 0. Throws UsageError when H is
// singular (|det| <= 1e-12).
WarpResult warp_image(const ImageBuffer& src, const Eigen::Matrix3d& h,
                      int out_width, int out_height);

struct DerotatedPair {
  ImageBuffer img0, img1;
  ImageBuffer mask0, mask1;
  Rotation3 half;  // r with r*r = estimated rotation
};

// Warps both images into the middle frame halfway along the estimated
// rotation: image 0 under the coordinate change X0' = r X0 (homography
// argument r^T), image 1 under X1' = r^T X1 (homography argument r).
// When the estimate equals the true rotation the derotated pair is a
// pure-translation pair with ground truth t' = r^T t.
DerotatedPair derotate_pair(const ImageBuffer& img0, const ImageBuffer& img1,
                            const Rotation3& r_est, const Intrinsics& k_in,
                            const Intrinsics& k_out);

}  // namespace dirpose
