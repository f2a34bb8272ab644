#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "dirpose/epipolar.hpp"
#include "dirpose/grid_fit.hpp"
#include "dirpose/pano.hpp"
#include "dirpose/pipeline.hpp"
#include "dirpose/sphere_grid.hpp"

namespace dirpose {

// 8-bit PNG, RGB for 3-channel buffers and grayscale for 1-channel;
// samples are scaled linearly between [0, 1] and [0, 255].
void write_png(const std::filesystem::path& path, const ImageBuffer& img);
ImageBuffer read_png(const std::filesystem::path& path);

// Raw little-endian float32 samples (row-major) with a JSON sidecar
// carrying the shape: <base>.f32 plus <base>.json {"w":..,"h":..,"unit":"m"}.
void write_depth(const std::filesystem::path& base, const ImageBuffer& depth);
ImageBuffer read_depth(const std::filesystem::path& base);

// Distribution serialization: <base>.f32 float32 row-major probabilities
// plus <base>.json {"h":H,"w":W}.
void write_distribution(const std::filesystem::path& base,
                        const SphericalDistribution& dist);
SphericalDistribution read_distribution(const std::filesystem::path& base);

// Distribution rendered through a dark-to-bright colormap for figures.
void write_heatmap_png(const std::filesystem::path& path,
                       const SphericalDistribution& dist);

// One dataset manifest line per pair (JSON-lines). Rotations are 9 floats
// row-major; file paths are relative to the manifest's directory.
struct ManifestRecord {
  std::string id;
  std::array<double, 9> rotation{};
  std::array<double, 3> translation{};
  double fov_deg = 0.0;
  double overlap = 0.0;
  double baseline_m = 0.0;
  std::string img0, img1, depth0, depth1;
};

ManifestRecord record_from_pair(const PosePair& pair);
RelativePose pose_from_record(const ManifestRecord& rec);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

// Loads the images referenced by a manifest record back into a PosePair.
PosePair load_pair(const std::filesystem::path& manifest_dir,
                   const ManifestRecord& rec);

// Renders the whole dataset to dir: panoramas, perspective pairs, depths,
// and manifest.jsonl. Returns the manifest records in index order.
std::vector<ManifestRecord> write_dataset(const std::filesystem::path& dir,
                                          const SceneSpec& scene,
                                          const DatasetConfig& cfg);

// Results table with one row per method:
// method,mean_rot,med_rot,rank_rot,mean_trans,med_trans,rank_trans.
struct MethodRow {
  std::string method;
  double mean_rot = 0.0, med_rot = 0.0, rank_rot = 0.0;
  double mean_trans = 0.0, med_trans = 0.0, rank_trans = 0.0;
};
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<MethodRow>& rows);

// Per-pair outcomes as JSON-lines.
void write_outcomes(const std::filesystem::path& path,
                    const std::string& method,
                    const std::vector<PairOutcome>& outcomes);
struct OutcomeRecord {
  std::string pair_id, method;
  double rot_err_deg = 0.0, trans_err_deg = 0.0;
  std::array<double, 9> rotation{};
  std::array<double, 3> translation{};
  bool skipped = false;
  bool trans_degenerate = false;
};
std::vector<OutcomeRecord> read_outcomes(const std::filesystem::path& path);

void write_fit_report_json(const std::filesystem::path& path,
                           const FitReport& report);
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& trace);

}  // namespace dirpose
