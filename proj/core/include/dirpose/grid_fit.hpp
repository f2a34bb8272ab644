#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dirpose/losses.hpp"
#include "dirpose/so3.hpp"

namespace dirpose {

enum class FitOptimizer {
  kAdam,     // beta1 = 0.9, beta2 = 0.999, eps = 1e-8
  kDescent,  // plain gradient steps
};

struct FitConfig {
  double learning_rate = 1e-3;
  int steps = 2000;
  Activation activation = Activation::kSoftplus;
  LossWeights weights;
  std::uint64_t seed = 0;
  double init_scale = 1e-3;
  FitOptimizer optimizer = FitOptimizer::kAdam;
};

struct FitReport {
  UnitVec3 final_direction{0.0, 0.0, 1.0};
  LossBreakdown final_loss;
  std::vector<double> loss_trace;  // one total per step, pre-update
  double angular_error_deg = 0.0;
};

enum class RotationFitVariant {
  kSvd9d,  // three grids, orthogonal Procrustes projection
  kGs6d,   // two grids, partial Gram-Schmidt projection
};

// Fits a raw grid by first-order descent on the combined loss against the
// vMF target built from target_dir, starting from small seeded-uniform
// values. The report carries the final expectation direction and its
// angle to target_dir. Throws DivergedFit (with the step index) when any
// value or the total goes non-finite.
FitReport fit_direction(const UnitVec3& target_dir, double kappa,
                        const GridSpec& spec, const FitConfig& cfg);

// Fits one grid per rotation column (three for kSvd9d, two for kGs6d)
// against vMF targets built from target's columns, then projects the
// recovered directions onto SO(3). The trace holds the per-step sum of
// the column losses; the report's angular error is the geodesic distance
// to target in degrees, and final_direction is the recovered first
// column.
std::pair<Rotation3, FitReport> fit_rotation(const Rotation3& target,
                                             double kappa,
                                             const GridSpec& spec,
                                             const FitConfig& cfg,
                                             RotationFitVariant variant);

}  // namespace dirpose
