#include "dirpose/camera.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dirpose {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Intrinsics intrinsics_from_fov(double fov_deg, int width, int height) {
  if (!(fov_deg > 0.0) || !(fov_deg < 180.0)) {
    throw UsageError("intrinsics_from_fov: fov must be in (0, 180) degrees");
  }
  if (width < 1 || height < 1) {
    throw UsageError("intrinsics_from_fov: image size must be positive");
  }
  double f = (width / 2.0) / std::tan(fov_deg * kPi / 360.0);
  Intrinsics k;
  k.fx = k.fy = f;
  k.cx = (width - 1) / 2.0;
  k.cy = (height - 1) / 2.0;
  k.width = width;
  k.height = height;
  return k;
}

Eigen::Matrix3d rotation_homography(const Intrinsics& k_in,
                                    const Intrinsics& k_out,
                                    const Rotation3& rot) {
  if (!(k_in.fx > 0) || !(k_in.fy > 0) || !(k_out.fx > 0) || !(k_out.fy > 0)) {
    throw UsageError("rotation_homography: invalid intrinsics");
  }
  return k_out.matrix() * rot.matrix().transpose() * k_in.matrix().inverse();
}

WarpResult warp_image(const ImageBuffer& src, const Eigen::Matrix3d& h,
                      int out_width, int out_height) {
  if (std::abs(h.determinant()) <= 1e-12) {
    throw UsageError("warp_image: singular homography");
  }
  Eigen::Matrix3d hinv = h.inverse();
  WarpResult out{ImageBuffer(out_width, out_height, src.channels),
                 ImageBuffer(out_width, out_height, 1)};
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      Eigen::Vector3d p = hinv * Eigen::Vector3d(x, y, 1.0);
      if (std::abs(p.z()) <= 1e-12) continue;
      double sx = p.x() / p.z();
      double sy = p.y() / p.z();
      if (p.z() < 0.0) continue;  // behind the camera after a rotation warp
      if (sx < 0.0 || sx > src.width - 1 || sy < 0.0 || sy > src.height - 1) {
        continue;  // zero fill, mask stays 0
      }
      for (int c = 0; c < src.channels; ++c) {
        out.image.at(x, y, c) = bilinear_sample(src, sx, sy, c);
      }
      out.mask.at(x, y) = 1.0f;
    }
  }
  return out;
}

DerotatedPair derotate_pair(const ImageBuffer& img0, const ImageBuffer& img1,
                            const Rotation3& r_est, const Intrinsics& k_in,
                            const Intrinsics& k_out) {
  Rotation3 r = half_rotation(r_est);
  Eigen::Matrix3d h0 = rotation_homography(k_in, k_out, r.transposed());
  Eigen::Matrix3d h1 = rotation_homography(k_in, k_out, r);
  WarpResult w0 = warp_image(img0, h0, k_out.width, k_out.height);
  WarpResult w1 = warp_image(img1, h1, k_out.width, k_out.height);
  return {std::move(w0.image), std::move(w1.image), std::move(w0.mask),
          std::move(w1.mask), r};
}

}  // namespace dirpose
