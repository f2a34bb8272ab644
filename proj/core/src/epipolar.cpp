#include "dirpose/epipolar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace dirpose {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

EssentialMatrix EssentialMatrix::from_matrix(const Eigen::Matrix3d& e) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(e);
  Eigen::Vector3d s = svd.singularValues();
  if (!(s(0) > 0.0) || s(2) / s(0) >= 1e-9) {
    throw UsageError("EssentialMatrix: matrix is not rank 2");
  }
  if (std::abs(s(0) - s(1)) > 1e-9 * s(0)) {
    throw UsageError("EssentialMatrix: nonzero singular values differ");
  }
  return EssentialMatrix(e);
}

EssentialMatrix essential_from_pose(const RelativePose& pose) {
  const Eigen::Vector3d& t = pose.translation.vec();
  Eigen::Matrix3d tx;
  tx << 0, -t.z(), t.y(), t.z(), 0, -t.x(), -t.y(), t.x(), 0;
  return EssentialMatrix(tx * pose.rotation.matrix());
}

Eigen::Vector3d epipolar_line(const EssentialMatrix& e,
                              const Eigen::Vector2d& x0, const Intrinsics& k0,
                              const Intrinsics& k1) {
  Eigen::Vector3d l = k1.matrix().inverse().transpose() * e.matrix() *
                      k0.matrix().inverse() *
                      Eigen::Vector3d(x0.x(), x0.y(), 1.0);
  double n = std::hypot(l.x(), l.y());
  if (n <= 1e-15) {
    // The query pixel is the epipole; every line through it works. Keep
    // the zero line so callers can skip it.
    return Eigen::Vector3d::Zero();
  }
  return l / n;
}

std::pair<double, double> angular_errors(const RelativePose& pred,
                                         const RelativePose& truth) {
  double rot = geodesic_distance(pred.rotation, truth.rotation) * 180.0 / kPi;
  double trans = pred.translation.angle_to(truth.translation) * 180.0 / kPi;
  return {rot, trans};
}

ErrorStats ErrorStats::from(std::vector<double> per_pair) {
  ErrorStats stats;
  stats.per_pair = std::move(per_pair);
  if (stats.per_pair.empty()) return stats;
  stats.mean_deg =
      std::accumulate(stats.per_pair.begin(), stats.per_pair.end(), 0.0) /
      static_cast<double>(stats.per_pair.size());
  std::vector<double> sorted = stats.per_pair;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  stats.median_deg = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return stats;
}

std::vector<double> rank_methods(
    const std::vector<std::vector<double>>& errors_by_method) {
  const std::size_t m = errors_by_method.size();
  if (m == 0) throw UsageError("rank_methods: no methods");
  const std::size_t n = errors_by_method[0].size();
  if (n == 0) throw UsageError("rank_methods: no pairs");
  for (const auto& e : errors_by_method) {
    if (e.size() != n) throw UsageError("rank_methods: mismatched pair counts");
  }

  std::vector<double> mean_rank(m, 0.0);
  std::vector<std::size_t> order(m);
  for (std::size_t pair = 0; pair < n; ++pair) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return errors_by_method[a][pair] < errors_by_method[b][pair];
    });
    // Tied errors share the average of the positions they occupy.
    std::size_t i = 0;
    while (i < m) {
      std::size_t j = i;
      while (j + 1 < m && errors_by_method[order[j + 1]][pair] ==
                              errors_by_method[order[i]][pair]) {
        ++j;
      }
      double shared = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) mean_rank[order[k]] += shared;
      i = j + 1;
    }
  }
  for (double& r : mean_rank) r /= static_cast<double>(n);
  return mean_rank;
}

namespace {

const std::array<Eigen::Vector3f, 10> kPalette = {{
    {0.90f, 0.10f, 0.10f},
    {0.10f, 0.60f, 0.95f},
    {0.10f, 0.75f, 0.20f},
    {0.95f, 0.75f, 0.10f},
    {0.75f, 0.15f, 0.80f},
    {0.95f, 0.45f, 0.10f},
    {0.15f, 0.85f, 0.80f},
    {0.90f, 0.35f, 0.60f},
    {0.55f, 0.40f, 0.15f},
    {0.45f, 0.50f, 0.95f},
}};

void put_pixel(ImageBuffer& img, int x, int y, const Eigen::Vector3f& c) {
  if (!img.contains(x, y)) return;
  img.at(x, y, 0) = c[0];
  img.at(x, y, 1) = c[1];
  img.at(x, y, 2) = c[2];
}

void draw_point(ImageBuffer& img, const Eigen::Vector2d& p,
                const Eigen::Vector3f& c) {
  int cx = static_cast<int>(std::lround(p.x()));
  int cy = static_cast<int>(std::lround(p.y()));
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      if (dx * dx + dy * dy <= 4) put_pixel(img, cx + dx, cy + dy, c);
    }
  }
}

// Clips the line a*x + b*y + c = 0 to the image and rasterizes it; lines
// that miss the image draw nothing.
void draw_line(ImageBuffer& img, const Eigen::Vector3d& line,
               const Eigen::Vector3f& color) {
  double a = line.x(), b = line.y(), c = line.z();
  if (std::hypot(a, b) <= 1e-15) return;
  std::vector<Eigen::Vector2d> hits;
  double w = img.width - 1.0, h = img.height - 1.0;
  auto push_if_valid = [&](double x, double y) {
    if (x >= -1e-9 && x <= w + 1e-9 && y >= -1e-9 && y <= h + 1e-9) {
      hits.emplace_back(std::clamp(x, 0.0, w), std::clamp(y, 0.0, h));
    }
  };
  if (std::abs(b) > 1e-15) {
    push_if_valid(0.0, -c / b);
    push_if_valid(w, -(c + a * w) / b);
  }
  if (std::abs(a) > 1e-15) {
    push_if_valid(-c / a, 0.0);
    push_if_valid(-(c + b * h) / a, h);
  }
  if (hits.size() < 2) return;
  // Farthest pair among the border hits spans the in-image segment.
  Eigen::Vector2d p0 = hits[0], p1 = hits[1];
  double best = (p1 - p0).norm();
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      double d = (hits[j] - hits[i]).norm();
      if (d > best) {
        best = d;
        p0 = hits[i];
        p1 = hits[j];
      }
    }
  }
  int steps = static_cast<int>(std::ceil(best)) * 2 + 1;
  for (int s = 0; s <= steps; ++s) {
    Eigen::Vector2d p = p0 + (p1 - p0) * (static_cast<double>(s) / steps);
    put_pixel(img, static_cast<int>(std::lround(p.x())),
              static_cast<int>(std::lround(p.y())), color);
  }
}

}  // namespace

ImageBuffer render_epipolar_overlay(
    const PosePair& pair,
    const std::vector<std::pair<std::string, RelativePose>>& poses,
    const std::vector<Eigen::Vector2d>& points_in_img1) {
  for (const auto& p : points_in_img1) {
    if (p.x() < 0 || p.x() > pair.img1.width - 1 || p.y() < 0 ||
        p.y() > pair.img1.height - 1) {
      throw UsageError("render_epipolar_overlay: point outside image bounds");
    }
  }
  Intrinsics k =
      intrinsics_from_fov(pair.fov_deg, pair.img0.width, pair.img0.height);

  const int panels = 1 + static_cast<int>(poses.size());
  ImageBuffer canvas(pair.img1.width * panels, pair.img1.height, 3);
  auto blit = [&](const ImageBuffer& src, int panel) {
    for (int y = 0; y < src.height; ++y) {
      for (int x = 0; x < src.width; ++x) {
        for (int c = 0; c < 3; ++c) {
          canvas.at(panel * pair.img1.width + x, y, c) = src.at(x, y, c);
        }
      }
    }
  };

  ImageBuffer img1 = pair.img1;
  for (std::size_t i = 0; i < points_in_img1.size(); ++i) {
    draw_point(img1, points_in_img1[i], kPalette[i % kPalette.size()]);
  }
  blit(img1, 0);

  for (std::size_t pi = 0; pi < poses.size(); ++pi) {
    ImageBuffer img0 = pair.img0;
    // Lines in image 0 for points in image 1 come from the inverse pose.
    EssentialMatrix einv = essential_from_pose(poses[pi].second.inverse());
    for (std::size_t i = 0; i < points_in_img1.size(); ++i) {
      Eigen::Vector3d line = epipolar_line(einv, points_in_img1[i], k, k);
      draw_line(img0, line, kPalette[i % kPalette.size()]);
    }
    blit(img0, static_cast<int>(pi) + 1);
  }
  return canvas;
}

}  // namespace dirpose
