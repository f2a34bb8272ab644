#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dirpose/epipolar.hpp"
#include "dirpose/grid_fit.hpp"
#include "dirpose/pano.hpp"

namespace dirpose {

// The slot a pose-estimation model plugs into. Implementations must
// return a valid RelativePose; the pipeline reads only the component it
// asked the predictor for (rotation in stage one, translation in stage
// two).
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual RelativePose predict(const PosePair& pair) const = 0;
  // Predictors that cannot run concurrently over pairs return false and
  // force the pipeline into serial execution.
  virtual bool concurrent_safe() const { return true; }
};

// Returns the pair's ground-truth pose unchanged.
class OraclePredictor : public Predictor {
 public:
  std::string name() const override { return "oracle"; }
  RelativePose predict(const PosePair& pair) const override {
    return pair.pose;
  }
};

// Recovers the requested pose component by fitting spherical grids
// against vMF targets built from the pair's ground truth, standing in for
// a trained model at desk scale. The component not being fit is passed
// through from the ground truth.
class GridFitPredictor : public Predictor {
 public:
  enum class Part { kRotation, kTranslation };

  GridFitPredictor(Part part, GridSpec spec, double kappa, FitConfig cfg,
                   RotationFitVariant variant = RotationFitVariant::kSvd9d)
      : part_(part), spec_(spec), kappa_(kappa), cfg_(cfg), variant_(variant) {}

  std::string name() const override;
  RelativePose predict(const PosePair& pair) const override;

 private:
  Part part_;
  GridSpec spec_;
  double kappa_;
  FitConfig cfg_;
  RotationFitVariant variant_;
};

struct PairOutcome {
  std::string pair_id;
  RelativePose estimate;
  double rot_err_deg = 0.0;
  double trans_err_deg = 0.0;
  bool skipped = false;            // half-rotation was ambiguous
  bool trans_degenerate = false;   // predictor direction was undefined
  std::string skip_reason;
};

struct TwoStageConfig {
  double perturb_deg = 0.0;  // rotation augmentation before derotation
  Intrinsics k_out;          // derotated-frame intrinsics
  std::uint64_t seed = 0;
  int threads = 1;
};

// Sequential two-stage estimation per pair: predict the rotation,
// optionally perturb it, derotate both images through the half-rotation,
// predict the translation in the derotated frame, and map it back with
// t = r t'. The translation predictor sees the pair's ground truth
// expressed in the derotated frame (R' = r^T R r^T, t' = r^T t), so an
// oracle closes the loop exactly. Pairs whose half-rotation is ambiguous
// are reported skipped, never dropped silently.
std::vector<PairOutcome> run_two_stage(const std::vector<PosePair>& pairs,
                                       const Predictor& rot_predictor,
                                       const Predictor& trans_predictor,
                                       const TwoStageConfig& cfg);

}  // namespace dirpose
