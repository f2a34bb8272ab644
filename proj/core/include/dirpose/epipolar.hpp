#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirpose/camera.hpp"
#include "dirpose/pano.hpp"

namespace dirpose {

// Rank-2 matrix with two equal nonzero singular values; encodes the
// two-view constraint x1^T E x0 = 0 on normalized image points.
class EssentialMatrix {
 public:
  // Validates the singular-value structure; throws UsageError otherwise.
  static EssentialMatrix from_matrix(const Eigen::Matrix3d& e);

  const Eigen::Matrix3d& matrix() const { return e_; }

 private:
  explicit EssentialMatrix(const Eigen::Matrix3d& e) : e_(e) {}
  Eigen::Matrix3d e_;

  friend EssentialMatrix essential_from_pose(const RelativePose&);
};

// E = [t]_x R for the pose X1 = R X0 + s t. Singular values are exactly
// (1, 1, 0) since ||t|| = 1.
EssentialMatrix essential_from_pose(const RelativePose& pose);

// Epipolar line in image 1 for pixel x0 in image 0:
// l = K1^{-T} E K0^{-1} (x0, 1), normalized so a^2 + b^2 = 1. The pixel
// corresponding to x0 lies on this line.
Eigen::Vector3d epipolar_line(const EssentialMatrix& e,
                              const Eigen::Vector2d& x0, const Intrinsics& k0,
                              const Intrinsics& k1);

// (rotation error, translation error) in degrees: geodesic distance on
// SO(3) and arc distance on the sphere.
std::pair<double, double> angular_errors(const RelativePose& pred,
                                         const RelativePose& truth);

struct ErrorStats {
  double mean_deg = 0.0;
  double median_deg = 0.0;  // exact order statistic (midpoint when even)
  std::vector<double> per_pair;

  static ErrorStats from(std::vector<double> per_pair);
};

// Per pair, methods sorted ascending by error receive ranks 1..M (ties
// share the average of their positions); returns each method's mean rank.
// All methods must cover the same pairs.
std::vector<double> rank_methods(
    const std::vector<std::vector<double>>& errors_by_method);

// Side-by-side overlay: image 1 with the query points drawn, then one
// copy of image 0 per named pose with the corresponding epipolar lines
// clipped to its bounds. Point colors are assigned by index from a fixed
// palette; lines reuse their point's color.
ImageBuffer render_epipolar_overlay(
    const PosePair& pair,
    const std::vector<std::pair<std::string, RelativePose>>& poses,
    const std::vector<Eigen::Vector2d>& points_in_img1);

}  // namespace dirpose
