#include "dirpose/pano.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>

#include "dirpose/sphere_grid.hpp"

namespace dirpose {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool inside_box(const SceneSpec& scene, const Eigen::Vector3d& p,
                double margin = 0.0) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(p[a]) >= scene.half_extents[a] - margin) return false;
  }
  return true;
}

// Two distinguishable checker colors per face, fixed by the scene seed.
std::array<Eigen::Vector3f, 12> face_palette(const SceneSpec& scene) {
  std::array<Eigen::Vector3f, 12> colors;
  for (int face = 0; face < 6; ++face) {
    Rng rng = substream(scene.seed, "scene/face_colors", face);
    Eigen::Vector3f a, b;
    for (int c = 0; c < 3; ++c) a[c] = static_cast<float>(uniform_in(rng, 0.1, 0.9));
    for (int c = 0; c < 3; ++c) b[c] = static_cast<float>(uniform_in(rng, 0.1, 0.9));
    if ((a - b).cwiseAbs().sum() < 0.6f) b = Eigen::Vector3f::Ones() - b;
    colors[2 * face] = a;
    colors[2 * face + 1] = b;
  }
  return colors;
}

}  // namespace

BoxHit intersect_box(const SceneSpec& scene, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir) {
  if (!inside_box(scene, origin)) {
    throw UsageError("intersect_box: origin must be strictly inside the room");
  }
  double best = std::numeric_limits<double>::infinity();
  int best_axis = 0;
  double best_sign = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dir[a]) < 1e-15) continue;
    double wall = std::copysign(scene.half_extents[a], dir[a]);
    double t = (wall - origin[a]) / dir[a];
    if (t < best) {
      best = t;
      best_axis = a;
      best_sign = dir[a] > 0.0 ? 1.0 : -1.0;
    }
  }
  BoxHit hit;
  hit.distance = best;
  hit.face = best_axis * 2 + (best_sign > 0.0 ? 1 : 0);
  hit.point = origin + best * dir;
  return hit;
}

Eigen::Vector3f shade_face(const SceneSpec& scene, int face,
                           const Eigen::Vector3d& point) {
  static thread_local bool cached = false;
  static thread_local std::uint64_t cached_seed = 0;
  static thread_local std::array<Eigen::Vector3f, 12> palette;
  if (!cached || cached_seed != scene.seed) {
    palette = face_palette(scene);
    cached_seed = scene.seed;
    cached = true;
  }
  int axis = face / 2;
  int u_axis = (axis + 1) % 3;
  int v_axis = (axis + 2) % 3;
  auto cell = [&](double w) {
    return static_cast<long>(std::floor(w / scene.checker_cell_m));
  };
  long parity = (cell(point[u_axis]) + cell(point[v_axis])) & 1;
  return palette[2 * face + parity];
}

Panorama render_pano(const SceneSpec& scene, const Eigen::Vector3d& center,
                     int width, int height) {
  if (width < 2 || height < 2) {
    throw UsageError("render_pano: resolution too small");
  }
  if (!inside_box(scene, center)) {
    throw UsageError("render_pano: center must be strictly inside the room");
  }
  Panorama pano;
  pano.center = center;
  pano.color = ImageBuffer(width, height, 3);
  pano.depth = ImageBuffer(width, height, 1);
  for (int i = 0; i < height; ++i) {
    double theta = (2 * i + 1) * kPi / (2.0 * height);
    double st = std::sin(theta), ct = std::cos(theta);
    for (int j = 0; j < width; ++j) {
      double phi = 2.0 * kPi * j / width;
      Eigen::Vector3d dir(st * std::cos(phi), st * std::sin(phi), ct);
      BoxHit hit = intersect_box(scene, center, dir);
      Eigen::Vector3f col = shade_face(scene, hit.face, hit.point);
      pano.color.at(j, i, 0) = col[0];
      pano.color.at(j, i, 1) = col[1];
      pano.color.at(j, i, 2) = col[2];
      pano.depth.at(j, i) = static_cast<float>(hit.distance);
    }
  }
  return pano;
}

std::pair<UnitVec3, UnitVec3> sample_lookat_pair(double cone_aperture_deg,
                                                 Rng& rng) {
  if (!(cone_aperture_deg > 0.0) || cone_aperture_deg > 180.0) {
    throw UsageError("sample_lookat_pair: aperture must be in (0, 180]");
  }
  // Area-uniform band: z uniform within +/- sin(45 deg).
  double zmax = std::sqrt(0.5);
  double z = uniform_in(rng, -zmax, zmax);
  double phi = uniform_in(rng, 0.0, 2.0 * kPi);
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  UnitVec3 l1(s * std::cos(phi), s * std::sin(phi), z);
  UnitVec3 l2 = sample_cap(l1, cone_aperture_deg * kPi / 180.0, rng);
  return {l1, l2};
}

namespace {

// Continuous pano coordinates of a world direction, with azimuth wrap.
void pano_coords(const ImageBuffer& img, const Eigen::Vector3d& dir,
                 double* row, double* col) {
  double theta = std::acos(std::clamp(dir.z() / dir.norm(), -1.0, 1.0));
  double phi = std::atan2(dir.y(), dir.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  *row = theta * img.height / kPi - 0.5;
  *col = phi * img.width / (2.0 * kPi);
}

float pano_bilinear(const ImageBuffer& img, double row, double col, int c) {
  row = std::clamp(row, 0.0, static_cast<double>(img.height - 1));
  int r0 = static_cast<int>(std::floor(row));
  int r1 = std::min(r0 + 1, img.height - 1);
  double fr = row - r0;
  int c0 = static_cast<int>(std::floor(col));
  double fc = col - c0;
  int c0w = ((c0 % img.width) + img.width) % img.width;
  int c1w = (c0w + 1) % img.width;
  double v0 = (1 - fc) * img.at(c0w, r0, c) + fc * img.at(c1w, r0, c);
  double v1 = (1 - fc) * img.at(c0w, r1, c) + fc * img.at(c1w, r1, c);
  return static_cast<float>((1 - fr) * v0 + fr * v1);
}

float pano_nearest(const ImageBuffer& img, double row, double col, int c) {
  int r = std::clamp(static_cast<int>(std::lround(row)), 0, img.height - 1);
  int cc = static_cast<int>(std::lround(col));
  cc = ((cc % img.width) + img.width) % img.width;
  return img.at(cc, r, c);
}

}  // namespace

std::pair<ImageBuffer, ImageBuffer> pano_to_perspective(
    const Panorama& pano, const Rotation3& orientation, const Intrinsics& k) {
  ImageBuffer color(k.width, k.height, 3);
  ImageBuffer depth(k.width, k.height, 1);
  Eigen::Matrix3d world_from_pixel = orientation.matrix() * camera_flip();
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      Eigen::Vector3d dir = world_from_pixel * k.pixel_ray(u, v);
      double row, col;
      pano_coords(pano.color, dir, &row, &col);
      for (int c = 0; c < 3; ++c) {
        color.at(u, v, c) = pano_bilinear(pano.color, row, col, c);
      }
      depth.at(u, v) = pano_nearest(pano.depth, row, col, 0);
    }
  }
  return {std::move(color), std::move(depth)};
}

std::pair<ImageBuffer, ImageBuffer> render_perspective(
    const SceneSpec& scene, const Eigen::Vector3d& center,
    const Rotation3& orientation, const Intrinsics& k) {
  ImageBuffer color(k.width, k.height, 3);
  ImageBuffer depth(k.width, k.height, 1);
  Eigen::Matrix3d world_from_pixel = orientation.matrix() * camera_flip();
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      Eigen::Vector3d dir = (world_from_pixel * k.pixel_ray(u, v)).normalized();
      BoxHit hit = intersect_box(scene, center, dir);
      Eigen::Vector3f col = shade_face(scene, hit.face, hit.point);
      color.at(u, v, 0) = col[0];
      color.at(u, v, 1) = col[1];
      color.at(u, v, 2) = col[2];
      depth.at(u, v) = static_cast<float>(hit.distance);
    }
  }
  return {std::move(color), std::move(depth)};
}

namespace {

// One directional co-visibility count: pixels of `a` that land inside `b`
// with consistent depth after moving through (rot, trans).
double covisible_fraction(const ImageBuffer& depth_a, const ImageBuffer& depth_b,
                          const Intrinsics& k, const Eigen::Matrix3d& rot,
                          const Eigen::Vector3d& trans) {
  long count = 0, valid = 0;
  for (int v = 0; v < depth_a.height; ++v) {
    for (int u = 0; u < depth_a.width; ++u) {
      double d = depth_a.at(u, v);
      if (!(d > 0.0)) continue;
      ++valid;
      Eigen::Vector3d x = d * k.pixel_ray(u, v).normalized();
      Eigen::Vector3d y = rot * x + trans;
      Eigen::Vector2d uv;
      if (!k.project(y, &uv)) continue;
      int pu = static_cast<int>(std::lround(uv.x()));
      int pv = static_cast<int>(std::lround(uv.y()));
      if (!depth_b.contains(pu, pv)) continue;
      double db = depth_b.at(pu, pv);
      if (!(db > 0.0)) continue;
      if (std::abs(y.norm() - db) / db <= 0.02) ++count;
    }
  }
  if (valid == 0) throw UsageError("compute_overlap: depth image is empty");
  return static_cast<double>(count) / static_cast<double>(valid);
}

}  // namespace

double compute_overlap(const PosePair& pair) {
  if (pair.depth0.data.empty() || pair.depth1.data.empty()) {
    throw UsageError("compute_overlap: depth images required");
  }
  Intrinsics k = intrinsics_from_fov(pair.fov_deg, pair.depth0.width,
                                     pair.depth0.height);
  const Eigen::Matrix3d r = pair.pose.rotation.matrix();
  const Eigen::Vector3d t = pair.baseline_m * pair.pose.translation.vec();
  double f01 = covisible_fraction(pair.depth0, pair.depth1, k, r, t);
  double f10 = covisible_fraction(pair.depth1, pair.depth0, k, r.transpose(),
                                  -(r.transpose() * t));
  return std::min(f01, f10);
}

namespace {

PairBundle make_pair(const SceneSpec& scene, const DatasetConfig& cfg,
                     std::uint64_t index) {
  Rng rng = substream(cfg.seed, "pair", index);
  const Eigen::Vector3d margin = 0.15 * scene.half_extents;
  const Eigen::Vector3d span = scene.half_extents - margin;
  const Eigen::Vector3d up(0.0, 0.0, 1.0);

  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::Vector3d c0;
    for (int a = 0; a < 3; ++a) c0[a] = uniform_in(rng, -span[a], span[a]);
    // Isotropic baseline direction.
    Eigen::Vector3d bdir;
    do {
      for (int a = 0; a < 3; ++a) bdir[a] = standard_normal(rng);
    } while (bdir.norm() < 1e-9);
    bdir.normalize();
    Eigen::Vector3d c1 = c0 + cfg.baseline_m * bdir;
    bool c1_ok = true;
    for (int a = 0; a < 3; ++a) {
      if (std::abs(c1[a]) >= span[a]) c1_ok = false;
    }
    if (!c1_ok) continue;

    auto [l1, l2] = sample_lookat_pair(cfg.cone_aperture_deg, rng);
    Rotation3 r0 = from_lookat(l1, up);
    Rotation3 r1 = from_lookat(l2, up);

    // Pixel-aligned world orientations; the relative pose composes there.
    Eigen::Matrix3d p0 = r0.matrix() * camera_flip();
    Eigen::Matrix3d p1 = r1.matrix() * camera_flip();
    Eigen::Matrix3d rel = p1.transpose() * p0;
    Eigen::Vector3d tvec = p1.transpose() * (c0 - c1);
    if (tvec.norm() <= 1e-12) continue;  // zero baseline after numerics

    Rotation3 rel_rot = Rotation3::from_matrix(rel);
    if (cfg.max_rotation_deg > 0.0 &&
        rel_rot.angle() * 180.0 / kPi > cfg.max_rotation_deg) {
      continue;
    }

    PairBundle bundle;
    bundle.pano0 = render_pano(scene, c0, cfg.pano_width, cfg.pano_width / 2);
    bundle.pano1 = render_pano(scene, c1, cfg.pano_width, cfg.pano_width / 2);
    Intrinsics k = intrinsics_from_fov(cfg.fov_deg, cfg.resolution,
                                       cfg.resolution);

    PosePair& pair = bundle.pair;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "pair_%06llu",
                  static_cast<unsigned long long>(index));
    pair.id = idbuf;
    pair.fov_deg = cfg.fov_deg;
    pair.baseline_m = cfg.baseline_m;
    pair.look0 = l1;
    pair.look1 = l2;
    pair.center0 = c0;
    pair.center1 = c1;
    pair.pose = RelativePose{rel_rot, normalize_direction(tvec)};

    auto [img0, sampled_depth0] = pano_to_perspective(bundle.pano0, r0, k);
    auto [img1, sampled_depth1] = pano_to_perspective(bundle.pano1, r1, k);
    pair.img0 = std::move(img0);
    pair.img1 = std::move(img1);
    // Depth channels come from exact ray casts rather than pano
    // resampling: the geometric oracles need sub-pixel-consistent depth.
    pair.depth0 = render_perspective(scene, c0, r0, k).second;
    pair.depth1 = render_perspective(scene, c1, r1, k).second;
    pair.overlap = compute_overlap(pair);
    return bundle;
  }
  throw UsageError(
      "generate_dataset: no feasible camera pair within the attempt budget "
      "(baseline or rotation bound too restrictive)");
}

}  // namespace

void for_each_pair(const SceneSpec& scene, const DatasetConfig& cfg,
                   const std::function<void(PairBundle&&)>& sink) {
  if (cfg.n_pairs < 1) throw UsageError("generate_dataset: n_pairs must be >= 1");
  if (!(cfg.baseline_m > 0.0)) {
    throw UsageError("generate_dataset: baseline must be positive");
  }
  const Eigen::Vector3d span = 0.85 * scene.half_extents;
  if (cfg.baseline_m >= 2.0 * span.norm()) {
    throw UsageError("generate_dataset: baseline does not fit inside the room");
  }
  if (cfg.resolution < 2) throw UsageError("generate_dataset: resolution too small");
  if (cfg.pano_width < 4) throw UsageError("generate_dataset: pano too small");

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (int i = 0; i < cfg.n_pairs; ++i) {
      sink(make_pair(scene, cfg, static_cast<std::uint64_t>(i)));
    }
    return;
  }
  // Windowed fan-out keeps memory bounded while emitting in index order.
  const int window = threads * 2;
  for (int base = 0; base < cfg.n_pairs; base += window) {
    int end = std::min(base + window, cfg.n_pairs);
    std::vector<std::future<PairBundle>> futs;
    for (int i = base; i < end; ++i) {
      futs.push_back(std::async(std::launch::async, [&scene, &cfg, i] {
        return make_pair(scene, cfg, static_cast<std::uint64_t>(i));
      }));
    }
    for (auto& f : futs) sink(f.get());
  }
}

std::vector<PosePair> generate_dataset(const SceneSpec& scene,
                                       const DatasetConfig& cfg) {
  std::vector<PosePair> pairs;
  pairs.reserve(static_cast<std::size_t>(cfg.n_pairs));
  for_each_pair(scene, cfg,
                [&](PairBundle&& b) { pairs.push_back(std::move(b.pair)); });
  return pairs;
}

}  // namespace dirpose
