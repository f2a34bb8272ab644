#include "dirpose/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

namespace dirpose {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string GridFitPredictor::name() const {
  std::string base =
      variant_ == RotationFitVariant::kSvd9d ? "gridfit9d" : "gridfit6d";
  return part_ == Part::kRotation ? base + "/rot" : base + "/trans";
}

RelativePose GridFitPredictor::predict(const PosePair& pair) const {
  // Per-pair seeding keeps independent pairs independent but repeatable.
  FitConfig cfg = cfg_;
  cfg.seed = substream(cfg_.seed, "gridfit/pair-seed",
                       std::hash<std::string>{}(pair.id))();
  if (part_ == Part::kRotation) {
    Rotation3 rot =
        fit_rotation(pair.pose.rotation, kappa_, spec_, cfg, variant_).first;
    return RelativePose{rot, pair.pose.translation};
  }
  FitReport report = fit_direction(pair.pose.translation, kappa_, spec_, cfg);
  return RelativePose{pair.pose.rotation, report.final_direction};
}

std::vector<PairOutcome> run_two_stage(const std::vector<PosePair>& pairs,
                                       const Predictor& rot_predictor,
                                       const Predictor& trans_predictor,
                                       const TwoStageConfig& cfg) {
  if (cfg.k_out.width < 1 || cfg.k_out.height < 1 || !(cfg.k_out.fx > 0)) {
    throw UsageError("run_two_stage: invalid derotated-frame intrinsics");
  }

  auto process = [&](std::size_t idx) -> PairOutcome {
    const PosePair& pair = pairs[idx];
    PairOutcome out;
    out.pair_id = pair.id;

    Rotation3 r_est = rot_predictor.predict(pair).rotation;
    if (cfg.perturb_deg > 0.0) {
      Rng rng = substream(cfg.seed, "two_stage/perturb", idx);
      r_est = perturb_rotation(r_est, cfg.perturb_deg * kPi / 180.0, rng);
    }

    Intrinsics k_in =
        intrinsics_from_fov(pair.fov_deg, pair.img0.width, pair.img0.height);
    Rotation3 r;
    DerotatedPair derot;
    try {
      derot = derotate_pair(pair.img0, pair.img1, r_est, k_in, cfg.k_out);
      r = derot.half;
    } catch (const AmbiguousHalfRotation& e) {
      out.skipped = true;
      out.skip_reason = e.what();
      return out;
    }

    // The derotated pair carries the residual ground truth so that
    // translation predictors see the frame they must answer in.
    PosePair derotated = pair;
    derotated.img0 = derot.img0;
    derotated.img1 = derot.img1;
    derotated.fov_deg = 2.0 * std::atan((cfg.k_out.width / 2.0) / cfg.k_out.fx) *
                        180.0 / kPi;
    Rotation3 rt = r.transposed();
    derotated.pose = RelativePose{
        rt * pair.pose.rotation * rt,
        UnitVec3(Eigen::Vector3d(rt * pair.pose.translation.vec()))};

    UnitVec3 t_prime{0.0, 0.0, 1.0};
    try {
      t_prime = trans_predictor.predict(derotated).translation;
    } catch (const DegenerateDirection&) {
      // Too-diffuse predictions count as maximally wrong rather than
      // aborting the run.
      out.trans_degenerate = true;
    }

    out.estimate =
        RelativePose{r_est, UnitVec3(Eigen::Vector3d(r * t_prime.vec()))};
    auto [rot_err, trans_err] = angular_errors(out.estimate, pair.pose);
    out.rot_err_deg = rot_err;
    out.trans_err_deg = out.trans_degenerate ? 180.0 : trans_err;
    return out;
  };

  std::vector<PairOutcome> outcomes(pairs.size());
  const bool parallel = cfg.threads > 1 && rot_predictor.concurrent_safe() &&
                        trans_predictor.concurrent_safe();
  if (!parallel) {
    for (std::size_t i = 0; i < pairs.size(); ++i) outcomes[i] = process(i);
    return outcomes;
  }
  const std::size_t window = static_cast<std::size_t>(cfg.threads) * 2;
  for (std::size_t base = 0; base < pairs.size(); base += window) {
    std::size_t end = std::min(base + window, pairs.size());
    std::vector<std::future<PairOutcome>> futs;
    for (std::size_t i = base; i < end; ++i) {
      futs.push_back(
          std::async(std::launch::async, [&process, i] { return process(i); }));
    }
    for (std::size_t i = base; i < end; ++i) {
      outcomes[i] = futs[i - base].get();
    }
  }
  return outcomes;
}

}  // namespace dirpose
