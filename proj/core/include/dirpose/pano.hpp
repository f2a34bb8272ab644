#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dirpose/camera.hpp"
#include "dirpose/image.hpp"
#include "dirpose/random.hpp"

namespace dirpose {

// Procedural test scene: an axis-aligned box room with a checkerboard on
// each face. Analytic ray intersection makes rendered depth exact, which
// the geometric oracles rely on.
struct SceneSpec {
  Eigen::Vector3d half_extents{2.5, 2.5, 1.5};  // meters
  double checker_cell_m = 0.5;
  std::uint64_t seed = 0;
};

struct BoxHit {
  double distance = 0.0;        // meters along the unit ray
  int face = 0;                 // axis*2 + (positive side ? 1 : 0)
  Eigen::Vector3d point{0, 0, 0};
};

// Exit intersection of a ray cast from strictly inside the room.
BoxHit intersect_box(const SceneSpec& scene, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir);

// Checkerboard color of a scene surface point lying on `face`.
Eigen::Vector3f shade_face(const SceneSpec& scene, int face,
                           const Eigen::Vector3d& point);

// Equirectangular color + depth render. Pixel (i, j) follows the sphere
// grid convention: colatitude (2i+1)*pi/(2H) from world +Z, azimuth
// 2*pi*j/W from +X toward +Y, rays cast in the world frame from `center`.
struct Panorama {
  ImageBuffer color;  // RGB
  ImageBuffer depth;  // meters, exact ray hit distance
  Eigen::Vector3d center{0, 0, 0};
};

Panorama render_pano(const SceneSpec& scene, const Eigen::Vector3d& center,
                     int width, int height);

// Look-at pair for a camera couple: the first direction is area-uniform
// over the band within 45 degrees of the equator (keeps cameras off the
// floor/ceiling), the second area-uniform over the cone of half-angle
// cone_aperture_deg around the first.
std::pair<UnitVec3, UnitVec3> sample_lookat_pair(double cone_aperture_deg,
                                                 Rng& rng);

// Perspective crop of a panorama. orientation is the camera-to-world
// rotation (camera frame conventions in camera.hpp). Color is sampled
// bilinearly; depth nearest-neighbor, since interpolating across depth
// discontinuities would invent phantom surfaces.
std::pair<ImageBuffer, ImageBuffer> pano_to_perspective(
    const Panorama& pano, const Rotation3& orientation, const Intrinsics& k);

// Perspective render straight from the scene geometry (no panorama
// resampling). Depth is exact per pixel ray.
std::pair<ImageBuffer, ImageBuffer> render_perspective(
    const SceneSpec& scene, const Eigen::Vector3d& center,
    const Rotation3& orientation, const Intrinsics& k);

// One generated wide-baseline example with ground truth.
struct PosePair {
  std::string id;
  ImageBuffer img0, img1;      // RGB perspective views
  ImageBuffer depth0, depth1;  // meters
  RelativePose pose;           // X1 = R X0 + baseline_m * t
  double fov_deg = 90.0;
  double overlap = 0.0;
  double baseline_m = 0.0;
  UnitVec3 look0{0, 0, 1}, look1{0, 0, 1};
  Eigen::Vector3d center0{0, 0, 0}, center1{0, 0, 0};
};

// min(|I0 cap I1| / |I0|, |I0 cap I1| / |I1|) where a pixel is co-visible
// when its depth-unprojected point, moved through the ground-truth pose,
// lands inside the other image with depth agreement within 2% relative.
double compute_overlap(const PosePair& pair);

struct DatasetConfig {
  int n_pairs = 1;
  double cone_aperture_deg = 45.0;
  double baseline_m = 2.25;
  double fov_deg = 90.0;
  int resolution = 256;           // square perspective views
  int pano_width = 1024;          // pano height = pano_width / 2
  double max_rotation_deg = 0.0;  // reject pairs above this; 0 = unbounded
  std::uint64_t seed = 0;
  int threads = 1;
};

struct PairBundle {
  PosePair pair;
  Panorama pano0, pano1;
};

// Generates pairs: two pano centers baseline_m apart inside the room,
// look-at sampling, pano renders, perspective projection, ground-truth
// pose from the two world camera poses, and overlap. The sink receives
// bundles strictly in index order regardless of thread count; every pair
// is derived from substream(seed, "pair", index), so output is
// reproducible byte-for-byte.
void for_each_pair(const SceneSpec& scene, const DatasetConfig& cfg,
                   const std::function<void(PairBundle&&)>& sink);

// Convenience wrapper collecting the pairs (drops the panoramas). Meant
// for modest n_pairs; the streaming form above bounds memory.
std::vector<PosePair> generate_dataset(const SceneSpec& scene,
                                       const DatasetConfig& cfg);

}  // namespace dirpose
