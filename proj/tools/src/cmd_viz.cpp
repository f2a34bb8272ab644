#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "dirpose/io.hpp"

namespace dirpose::cli {

namespace {

struct VizOptions {
  std::string manifest;
  std::vector<std::string> pair_ids;
  std::string results;
  std::vector<std::string> methods;
  int points = 8;
  std::uint64_t seed = 0;
  std::string out = "viz_out";
};

void run_viz(const VizOptions& opt) {
  namespace fs = std::filesystem;
  if (!fs::exists(opt.manifest)) {
    throw UsageError("manifest not found: " + opt.manifest);
  }
  auto records = read_manifest(opt.manifest);
  fs::path manifest_dir = fs::path(opt.manifest).parent_path();

  std::vector<OutcomeRecord> outcomes;
  if (!opt.results.empty()) outcomes = read_outcomes(opt.results);

  nlohmann::json params{{"manifest", opt.manifest}, {"pairs", opt.pair_ids},
                        {"results", opt.results},   {"methods", opt.methods},
                        {"points", opt.points},     {"seed", opt.seed},
                        {"out", opt.out}};
  write_run_metadata(opt.out, "viz", params);
  append_log(opt.out, "viz start");

  for (const auto& id : opt.pair_ids) {
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const ManifestRecord& r) { return r.id == id; });
    if (it == records.end()) throw UsageError("unknown pair id: " + id);
    PosePair pair = load_pair(manifest_dir, *it);

    std::vector<std::pair<std::string, RelativePose>> poses;
    poses.emplace_back("truth", pair.pose);
    for (const auto& o : outcomes) {
      if (o.pair_id != id || o.skipped) continue;
      if (!opt.methods.empty() &&
          std::find(opt.methods.begin(), opt.methods.end(), o.method) ==
              opt.methods.end()) {
        continue;
      }
      ManifestRecord fake;
      fake.rotation = o.rotation;
      fake.translation = o.translation;
      poses.emplace_back(o.method, pose_from_record(fake));
    }

    // Deterministic pixel picks away from the borders.
    Rng rng = substream(opt.seed, "viz/points",
                        static_cast<std::uint64_t>(it - records.begin()));
    std::vector<Eigen::Vector2d> points;
    for (int k = 0; k < opt.points; ++k) {
      double margin = 4.0;
      points.emplace_back(
          uniform_in(rng, margin, pair.img1.width - 1 - margin),
          uniform_in(rng, margin, pair.img1.height - 1 - margin));
    }

    ImageBuffer canvas = render_epipolar_overlay(pair, poses, points);
    fs::path out_path = fs::path(opt.out) / ("overlay_" + id + ".png");
    write_png(out_path, canvas);
    std::printf("wrote %s (%zu poses, %d points)\n", out_path.string().c_str(),
                poses.size(), opt.points);
  }
  append_log(opt.out, "viz done");
}

}  // namespace

void register_viz(CLI::App& app) {
  auto opt = std::make_shared<VizOptions>();
  CLI::App* cmd = app.add_subcommand(
      "viz", "Render epipolar-line overlays for dataset pairs");
  cmd->add_option("--manifest", opt->manifest, "Dataset manifest")->required();
  cmd->add_option("--pair", opt->pair_ids, "Pair id(s) to render")
      ->required()
      ->delimiter(',');
  cmd->add_option("--results", opt->results,
                  "per_pair.jsonl from the pipeline command (optional; adds "
                  "estimated poses next to the ground truth)");
  cmd->add_option("--methods", opt->methods,
                  "Only overlay these methods from the results file")
      ->delimiter(',');
  cmd->add_option("--points", opt->points, "Number of query points")
      ->check(CLI::Range(0, 10000));
  cmd->add_option("--seed", opt->seed, "Master seed");
  cmd->add_option("--out", opt->out, "Output directory");
  cmd->callback([opt] { run_viz(*opt); });
}

}  // namespace dirpose::cli
