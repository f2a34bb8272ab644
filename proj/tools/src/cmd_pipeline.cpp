#include <cstdio>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "dirpose/io.hpp"

namespace dirpose::cli {

namespace {

struct PipelineOptions {
  std::string manifest;
  std::vector<std::string> predictors{"oracle"};
  double perturb = -1.0;  // negative = per-predictor default
  std::string out = "pipeline_out";
  double out_fov = 105.0;
  int out_res = 344;
  int pairs_limit = 0;
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  int fit_steps = 2000;
  double fit_kappa = 10.0;
  int fit_grid = 64;
  double fit_lr = 1e-3;
};

struct MethodSetup {
  std::string name;
  std::unique_ptr<Predictor> rot;
  std::unique_ptr<Predictor> trans;
  double perturb_deg = 0.0;
};

MethodSetup make_method(const std::string& name, const PipelineOptions& opt) {
  MethodSetup m;
  m.name = name;
  FitConfig fit_cfg;
  fit_cfg.steps = opt.fit_steps;
  fit_cfg.learning_rate = opt.fit_lr;
  fit_cfg.seed = opt.seed;
  GridSpec spec(opt.fit_grid, opt.fit_grid);

  if (name == "oracle") {
    m.rot = std::make_unique<OraclePredictor>();
    m.trans = std::make_unique<OraclePredictor>();
    m.perturb_deg = 0.0;
  } else if (name == "perturbed") {
    m.rot = std::make_unique<OraclePredictor>();
    m.trans = std::make_unique<OraclePredictor>();
    m.perturb_deg = 15.0;
  } else if (name == "gridfit" || name == "gridfit9d" || name == "gridfit6d") {
    RotationFitVariant variant = name == "gridfit6d"
                                     ? RotationFitVariant::kGs6d
                                     : RotationFitVariant::kSvd9d;
    m.rot = std::make_unique<GridFitPredictor>(
        GridFitPredictor::Part::kRotation, spec, opt.fit_kappa, fit_cfg,
        variant);
    m.trans = std::make_unique<GridFitPredictor>(
        GridFitPredictor::Part::kTranslation, spec, opt.fit_kappa, fit_cfg,
        variant);
    m.perturb_deg = 0.0;
  } else {
    throw UsageError("unknown predictor: " + name);
  }
  if (opt.perturb >= 0.0) m.perturb_deg = opt.perturb;
  return m;
}

void run_pipeline(const PipelineOptions& opt) {
  namespace fs = std::filesystem;
  if (!fs::exists(opt.manifest)) {
    throw UsageError("manifest not found: " + opt.manifest);
  }

  nlohmann::json params{{"manifest", opt.manifest},
                        {"predictors", opt.predictors},
                        {"perturb", opt.perturb},
                        {"out", opt.out},
                        {"out_fov", opt.out_fov},
                        {"out_res", opt.out_res},
                        {"pairs_limit", opt.pairs_limit},
                        {"seed", opt.seed},
                        {"fit_steps", opt.fit_steps},
                        {"fit_kappa", opt.fit_kappa},
                        {"fit_grid", opt.fit_grid},
                        {"fit_lr", opt.fit_lr}};
  write_run_metadata(opt.out, "pipeline", params);
  append_log(opt.out, "pipeline start");

  auto records = read_manifest(opt.manifest);
  if (opt.pairs_limit > 0 &&
      records.size() > static_cast<std::size_t>(opt.pairs_limit)) {
    records.resize(static_cast<std::size_t>(opt.pairs_limit));
  }
  fs::path manifest_dir = fs::path(opt.manifest).parent_path();
  std::vector<PosePair> pairs;
  pairs.reserve(records.size());
  for (const auto& rec : records) pairs.push_back(load_pair(manifest_dir, rec));

  TwoStageConfig cfg;
  cfg.k_out = intrinsics_from_fov(opt.out_fov, opt.out_res, opt.out_res);
  cfg.seed = opt.seed;
  cfg.threads = std::max(1, opt.threads);

  fs::path per_pair_path = fs::path(opt.out) / "per_pair.jsonl";
  fs::remove(per_pair_path);

  std::vector<MethodRow> rows;
  std::vector<std::vector<double>> rot_errs, trans_errs;
  std::vector<std::string> names;
  for (const auto& pname : opt.predictors) {
    MethodSetup method = make_method(pname, opt);
    cfg.perturb_deg = method.perturb_deg;
    auto outcomes = run_two_stage(pairs, *method.rot, *method.trans, cfg);
    write_outcomes(per_pair_path, method.name, outcomes);

    std::vector<double> re, te;
    int skipped = 0;
    for (const auto& o : outcomes) {
      if (o.skipped) {
        ++skipped;
        std::printf("skipped %s (%s): %s\n", o.pair_id.c_str(),
                    method.name.c_str(), o.skip_reason.c_str());
        continue;
      }
      re.push_back(o.rot_err_deg);
      te.push_back(o.trans_err_deg);
    }
    ErrorStats rs = ErrorStats::from(re);
    ErrorStats ts = ErrorStats::from(te);
    MethodRow row;
    row.method = method.name;
    row.mean_rot = rs.mean_deg;
    row.med_rot = rs.median_deg;
    row.mean_trans = ts.mean_deg;
    row.med_trans = ts.median_deg;
    rows.push_back(row);
    rot_errs.push_back(std::move(re));
    trans_errs.push_back(std::move(te));
    names.push_back(method.name);
    std::printf("%s: rot mean %.4f deg med %.4f deg | trans mean %.4f deg "
                "med %.4f deg | skipped %d\n",
                method.name.c_str(), row.mean_rot, row.med_rot, row.mean_trans,
                row.med_trans, skipped);
  }

  // Ranks are defined only when every method covers the same pairs.
  bool rankable = rot_errs.size() > 0;
  for (const auto& e : rot_errs) {
    if (e.size() != rot_errs[0].size()) rankable = false;
  }
  if (rankable) {
    auto rot_rank = rank_methods(rot_errs);
    auto trans_rank = rank_methods(trans_errs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].rank_rot = rot_rank[i];
      rows[i].rank_trans = trans_rank[i];
    }
  }
  write_results_csv(fs::path(opt.out) / "results.csv", rows);
  append_log(opt.out, "pipeline done");
}

}  // namespace

void register_pipeline(CLI::App& app) {
  auto opt = std::make_shared<PipelineOptions>();
  CLI::App* cmd = app.add_subcommand(
      "pipeline",
      "Run the two-stage derotation pipeline over a dataset manifest");
  cmd->add_option("--manifest", opt->manifest, "Dataset manifest (JSON-lines)")
      ->required();
  cmd->add_option("--predictor", opt->predictors,
                  "oracle | perturbed | gridfit | gridfit9d | gridfit6d "
                  "(repeat or comma-separate for several)")
      ->delimiter(',');
  cmd->add_option("--perturb", opt->perturb,
                  "Rotation perturbation before derotation, degrees "
                  "(overrides the per-predictor default)");
  cmd->add_option("--out", opt->out, "Output directory");
  cmd->add_option("--out-fov", opt->out_fov,
                  "Derotated-frame field of view, degrees")
      ->check(CLI::Range(1.0, 179.0));
  cmd->add_option("--out-res", opt->out_res, "Derotated-frame resolution")
      ->check(CLI::Range(2, 4096));
  cmd->add_option("--pairs-limit", opt->pairs_limit,
                  "Process only the first N pairs (0 = all)");
  cmd->add_option("--seed", opt->seed, "Master seed");
  cmd->add_option("--threads", opt->threads, "Worker threads");
  cmd->add_option("--fit-steps", opt->fit_steps, "Grid-fit steps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fit-kappa", opt->fit_kappa, "Grid-fit vMF concentration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fit-grid", opt->fit_grid, "Grid-fit resolution")
      ->check(CLI::Range(2, 1024));
  cmd->add_option("--fit-lr", opt->fit_lr, "Grid-fit learning rate")
      ->check(CLI::PositiveNumber);
  cmd->callback([opt] { run_pipeline(*opt); });
}

}  // namespace dirpose::cli
