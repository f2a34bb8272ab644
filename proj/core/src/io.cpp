#include "dirpose/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include <nlohmann/json.hpp>

namespace dirpose {

namespace {

using nlohmann::json;

void fail(const std::filesystem::path& path, const std::string& what) {
  throw UsageError(what + ": " + path.string());
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const std::filesystem::path& path, const ImageBuffer& img) {
  if (img.data.empty()) fail(path, "write_png: empty image");
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "write_png: cannot open for writing");

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "write_png: libpng failure");
  }
  png_init_io(png, fp.get());
  int color_type =
      img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, img.width, img.height, 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<std::size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        float v = std::clamp(img.at(x, y, c), 0.0f, 1.0f);
        row[static_cast<std::size_t>(x) * img.channels + c] =
            static_cast<png_byte>(std::lround(v * 255.0f));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageBuffer read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(path, "read_png: cannot open");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "read_png: libpng failure");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  png_byte color_type = png_get_color_type(png, info);
  png_byte bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "read_png: unsupported channel count");
  }

  ImageBuffer img(static_cast<int>(width), static_cast<int>(height), channels);
  std::vector<png_byte> row(static_cast<std::size_t>(width) * channels);
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(static_cast<int>(x), static_cast<int>(y), c) =
            row[static_cast<std::size_t>(x) * channels + c] / 255.0f;
      }
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

namespace {

void write_f32(const std::filesystem::path& path,
               const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  static_assert(sizeof(float) == 4);
  // Little-endian hosts write the buffer directly.
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!out) fail(path, "short write");
}

std::vector<float> read_f32(const std::filesystem::path& path,
                            std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::vector<float> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!in) fail(path, "short read");
  return values;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  json j;
  in >> j;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << text;
}

}  // namespace

void write_depth(const std::filesystem::path& base, const ImageBuffer& depth) {
  if (depth.channels != 1) throw UsageError("write_depth: expects 1 channel");
  write_f32(base.string() + ".f32", depth.data);
  json j{{"w", depth.width}, {"h", depth.height}, {"unit", "m"}};
  write_text(base.string() + ".json", j.dump() + "\n");
}

ImageBuffer read_depth(const std::filesystem::path& base) {
  json j = read_json_file(base.string() + ".json");
  int w = j.at("w").get<int>();
  int h = j.at("h").get<int>();
  ImageBuffer img(w, h, 1);
  img.data = read_f32(base.string() + ".f32",
                      static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  return img;
}

void write_distribution(const std::filesystem::path& base,
                        const SphericalDistribution& dist) {
  std::vector<float> f(dist.probs.begin(), dist.probs.end());
  write_f32(base.string() + ".f32", f);
  json j{{"h", dist.spec.height}, {"w", dist.spec.width}};
  write_text(base.string() + ".json", j.dump() + "\n");
}

SphericalDistribution read_distribution(const std::filesystem::path& base) {
  json j = read_json_file(base.string() + ".json");
  GridSpec spec(j.at("h").get<int>(), j.at("w").get<int>());
  std::vector<float> f = read_f32(base.string() + ".f32",
                                  static_cast<std::size_t>(spec.size()));
  SphericalDistribution dist{spec, std::vector<double>(f.begin(), f.end())};
  return dist;
}

void write_heatmap_png(const std::filesystem::path& path,
                       const SphericalDistribution& dist) {
  double peak = *std::max_element(dist.probs.begin(), dist.probs.end());
  if (!(peak > 0.0)) peak = 1.0;
  // Compact dark-blue -> magenta -> yellow ramp.
  auto ramp = [](double t, int c) {
    static const double stops[5][3] = {{0.05, 0.03, 0.22},
                                       {0.35, 0.06, 0.48},
                                       {0.70, 0.21, 0.47},
                                       {0.95, 0.51, 0.24},
                                       {0.99, 0.91, 0.14}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    int k = std::min(static_cast<int>(t), 3);
    double f = t - k;
    return stops[k][c] * (1.0 - f) + stops[k + 1][c] * f;
  };
  ImageBuffer img(dist.spec.width, dist.spec.height, 3);
  for (int i = 0; i < dist.spec.height; ++i) {
    for (int j = 0; j < dist.spec.width; ++j) {
      double t = dist.at(i, j) / peak;
      for (int c = 0; c < 3; ++c) {
        img.at(j, i, c) = static_cast<float>(ramp(t, c));
      }
    }
  }
  write_png(path, img);
}

namespace {

json record_to_json(const ManifestRecord& rec) {
  return json{{"id", rec.id},
              {"R", rec.rotation},
              {"t", rec.translation},
              {"fov_deg", rec.fov_deg},
              {"overlap", rec.overlap},
              {"baseline_m", rec.baseline_m},
              {"img0", rec.img0},
              {"img1", rec.img1},
              {"depth0", rec.depth0},
              {"depth1", rec.depth1}};
}

ManifestRecord record_from_json(const json& j) {
  ManifestRecord rec;
  rec.id = j.at("id").get<std::string>();
  auto r = j.at("R");
  auto t = j.at("t");
  if (r.size() != 9 || t.size() != 3) {
    throw UsageError("manifest: R must have 9 entries and t 3");
  }
  for (int k = 0; k < 9; ++k) rec.rotation[k] = r[k].get<double>();
  for (int k = 0; k < 3; ++k) rec.translation[k] = t[k].get<double>();
  rec.fov_deg = j.at("fov_deg").get<double>();
  rec.overlap = j.at("overlap").get<double>();
  rec.baseline_m = j.value("baseline_m", 0.0);
  rec.img0 = j.at("img0").get<std::string>();
  rec.img1 = j.at("img1").get<std::string>();
  rec.depth0 = j.at("depth0").get<std::string>();
  rec.depth1 = j.at("depth1").get<std::string>();
  return rec;
}

}  // namespace

ManifestRecord record_from_pair(const PosePair& pair) {
  ManifestRecord rec;
  rec.id = pair.id;
  const Eigen::Matrix3d& m = pair.pose.rotation.matrix();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rec.rotation[3 * r + c] = m(r, c);
  }
  for (int k = 0; k < 3; ++k) rec.translation[k] = pair.pose.translation.vec()[k];
  rec.fov_deg = pair.fov_deg;
  rec.overlap = pair.overlap;
  rec.baseline_m = pair.baseline_m;
  return rec;
}

RelativePose pose_from_record(const ManifestRecord& rec) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = rec.rotation[3 * r + c];
  }
  Eigen::Vector3d t(rec.translation[0], rec.translation[1], rec.translation[2]);
  return RelativePose{Rotation3::from_matrix(m), normalize_direction(t)};
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "write_manifest: cannot open");
  for (const auto& rec : records) {
    out << record_to_json(rec).dump() << "\n";
  }
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "read_manifest: cannot open");
  std::vector<ManifestRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(json::parse(line)));
  }
  return records;
}

PosePair load_pair(const std::filesystem::path& manifest_dir,
                   const ManifestRecord& rec) {
  PosePair pair;
  pair.id = rec.id;
  pair.pose = pose_from_record(rec);
  pair.fov_deg = rec.fov_deg;
  pair.overlap = rec.overlap;
  pair.baseline_m = rec.baseline_m;
  pair.img0 = read_png(manifest_dir / rec.img0);
  pair.img1 = read_png(manifest_dir / rec.img1);
  pair.depth0 = read_depth(manifest_dir / rec.depth0);
  pair.depth1 = read_depth(manifest_dir / rec.depth1);
  return pair;
}

std::vector<ManifestRecord> write_dataset(const std::filesystem::path& dir,
                                          const SceneSpec& scene,
                                          const DatasetConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "pairs");
  fs::create_directories(dir / "panos");

  std::vector<ManifestRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.n_pairs));
  for_each_pair(scene, cfg, [&](PairBundle&& b) {
    const std::string& id = b.pair.id;
    ManifestRecord rec = record_from_pair(b.pair);
    rec.img0 = "pairs/" + id + "_img0.png";
    rec.img1 = "pairs/" + id + "_img1.png";
    rec.depth0 = "pairs/" + id + "_depth0";
    rec.depth1 = "pairs/" + id + "_depth1";
    write_png(dir / rec.img0, b.pair.img0);
    write_png(dir / rec.img1, b.pair.img1);
    write_depth(dir / rec.depth0, b.pair.depth0);
    write_depth(dir / rec.depth1, b.pair.depth1);
    write_png(dir / ("panos/" + id + "_0.png"), b.pano0.color);
    write_png(dir / ("panos/" + id + "_1.png"), b.pano1.color);
    records.push_back(std::move(rec));
  });
  write_manifest(dir / "manifest.jsonl", records);
  return records;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<MethodRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "write_results_csv: cannot open");
  out << "method,mean_rot,med_rot,rank_rot,mean_trans,med_trans,rank_trans\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.3f,%.6f,%.6f,%.3f\n",
                  r.method.c_str(), r.mean_rot, r.med_rot, r.rank_rot,
                  r.mean_trans, r.med_trans, r.rank_trans);
    out << buf;
  }
}

void write_outcomes(const std::filesystem::path& path,
                    const std::string& method,
                    const std::vector<PairOutcome>& outcomes) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(path, "write_outcomes: cannot open");
  for (const auto& o : outcomes) {
    std::array<double, 9> rot{};
    const Eigen::Matrix3d& m = o.estimate.rotation.matrix();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) rot[3 * r + c] = m(r, c);
    }
    json j{{"pair_id", o.pair_id},
           {"method", method},
           {"rot_err_deg", o.rot_err_deg},
           {"trans_err_deg", o.trans_err_deg},
           {"R_est", rot},
           {"t_est",
            std::array<double, 3>{o.estimate.translation.x(),
                                  o.estimate.translation.y(),
                                  o.estimate.translation.z()}},
           {"skipped", o.skipped},
           {"trans_degenerate", o.trans_degenerate}};
    out << j.dump() << "\n";
  }
}

std::vector<OutcomeRecord> read_outcomes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "read_outcomes: cannot open");
  std::vector<OutcomeRecord> recs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    OutcomeRecord rec;
    rec.pair_id = j.at("pair_id").get<std::string>();
    rec.method = j.at("method").get<std::string>();
    rec.rot_err_deg = j.at("rot_err_deg").get<double>();
    rec.trans_err_deg = j.at("trans_err_deg").get<double>();
    for (int k = 0; k < 9; ++k) rec.rotation[k] = j.at("R_est")[k].get<double>();
    for (int k = 0; k < 3; ++k) {
      rec.translation[k] = j.at("t_est")[k].get<double>();
    }
    rec.skipped = j.at("skipped").get<bool>();
    rec.trans_degenerate = j.at("trans_degenerate").get<bool>();
    recs.push_back(std::move(rec));
  }
  return recs;
}

void write_fit_report_json(const std::filesystem::path& path,
                           const FitReport& report) {
  json j{{"final_direction",
          std::array<double, 3>{report.final_direction.x(),
                                report.final_direction.y(),
                                report.final_direction.z()}},
         {"angular_error_deg", report.angular_error_deg},
         {"loss",
          {{"direction", report.final_loss.direction},
           {"distribution", report.final_loss.distribution},
           {"spread", report.final_loss.spread},
           {"total", report.final_loss.total}}},
         {"steps", report.loss_trace.size()}};
  write_text(path, j.dump(2) + "\n");
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "write_trace_csv: cannot open");
  out << "step,total\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, trace[i]);
    out << buf;
  }
}

}  // namespace dirpose
