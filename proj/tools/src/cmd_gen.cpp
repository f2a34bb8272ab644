#include <cstdio>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "dirpose/io.hpp"

namespace dirpose::cli {

namespace {

struct GenOptions {
  std::string out = "dataset";
  int pairs = 100;
  double fov = 90.0;
  int res = 256;
  double cone = 45.0;
  double baseline = 2.25;
  std::uint64_t seed = 0;
  int pano_res = 1024;
  double max_rot = 0.0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::string room = "2.5,2.5,1.5";
  double checker = 0.5;
};

void run_gen(const GenOptions& opt) {
  SceneSpec scene;
  auto he = parse_vec3(opt.room);
  scene.half_extents = Eigen::Vector3d(he[0], he[1], he[2]);
  scene.checker_cell_m = opt.checker;
  scene.seed = opt.seed;

  DatasetConfig cfg;
  cfg.n_pairs = opt.pairs;
  cfg.cone_aperture_deg = opt.cone;
  cfg.baseline_m = opt.baseline;
  cfg.fov_deg = opt.fov;
  cfg.resolution = opt.res;
  cfg.pano_width = opt.pano_res;
  cfg.max_rotation_deg = opt.max_rot;
  cfg.seed = opt.seed;
  cfg.threads = std::max(1, opt.threads);

  nlohmann::json params{{"out", opt.out},         {"pairs", opt.pairs},
                        {"fov", opt.fov},         {"res", opt.res},
                        {"cone", opt.cone},       {"baseline", opt.baseline},
                        {"seed", opt.seed},       {"pano_res", opt.pano_res},
                        {"max_rot", opt.max_rot}, {"room", opt.room},
                        {"checker", opt.checker}};
  write_run_metadata(opt.out, "gen", params);
  append_log(opt.out, "gen start");

  auto records = write_dataset(opt.out, scene, cfg);

  // Overlap histogram, ten buckets across [0, 1].
  int buckets[10] = {};
  for (const auto& rec : records) {
    int b = std::min(9, static_cast<int>(rec.overlap * 10.0));
    ++buckets[std::max(0, b)];
  }
  std::printf("pairs: %zu\n", records.size());
  std::printf("overlap histogram:\n");
  for (int b = 0; b < 10; ++b) {
    std::printf("  [%.1f,%.1f%s %d\n", b / 10.0, (b + 1) / 10.0,
                b == 9 ? "]" : ")", buckets[b]);
  }
  append_log(opt.out, "gen done");
}

}  // namespace

void register_gen(CLI::App& app) {
  auto opt = std::make_shared<GenOptions>();
  CLI::App* cmd = app.add_subcommand(
      "gen", "Generate a synthetic wide-baseline dataset with ground truth");
  cmd->add_option("--out", opt->out, "Output directory");
  cmd->add_option("--pairs", opt->pairs, "Number of image pairs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fov", opt->fov, "Horizontal field of view, degrees")
      ->check(CLI::Range(1.0, 179.0));
  cmd->add_option("--res", opt->res, "Perspective image resolution (square)")
      ->check(CLI::Range(2, 4096));
  cmd->add_option("--cone", opt->cone,
                  "Look-at cone aperture between the two cameras, degrees")
      ->check(CLI::Range(1e-6, 180.0));
  cmd->add_option("--baseline", opt->baseline, "Camera separation, meters")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt->seed, "Master seed");
  cmd->add_option("--pano-res", opt->pano_res,
                  "Panorama width (height is half)")
      ->check(CLI::Range(8, 16384));
  cmd->add_option("--max-rot", opt->max_rot,
                  "Reject pairs with relative rotation above this bound, "
                  "degrees (0 = unbounded)");
  cmd->add_option("--threads", opt->threads, "Worker threads");
  cmd->add_option("--room", opt->room, "Room half-extents, meters (x,y,z)");
  cmd->add_option("--checker", opt->checker, "Checker cell size, meters")
      ->check(CLI::PositiveNumber);
  cmd->callback([opt] { run_gen(*opt); });
}

}  // namespace dirpose::cli
