#pragma once

#include <array>

#include <Eigen/Core>

#include "dirpose/sphere_grid.hpp"

namespace dirpose {

struct LossWeights {
  double lambda_d = 8e7;      // distribution-loss weight
  double lambda_sigma = 0.1;  // spread-loss weight
};

struct LossBreakdown {
  double direction = 0.0;
  double distribution = 0.0;
  double spread = 0.0;
  double total = 0.0;  // direction + lambda_d*distribution + lambda_sigma*spread
};

// Negative cosine similarity, in [-1, 1]. Throws DegenerateDirection when
// either vector has norm <= 1e-12.
double direction_loss(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2);

// Mean squared cell difference under the sphere measure:
// (1/(HW)) * sum (P1 - P2)^2 * sin(theta). Throws UsageError on
// mismatched specs.
double distribution_loss(const SphericalDistribution& p1,
                         const SphericalDistribution& p2);

// 1 - ||p|| for an expectation vector p, clamped to [0, 1].
double spread_loss(const Eigen::Vector3d& p);

// Normalizes raw, takes both expectations, and assembles the three terms.
// Throws DegenerateDirection when ||E[P]|| <= 1e-8, where the direction
// term is undefined (the fit drivers use the guarded evaluator below
// instead).
LossBreakdown combined_loss(const RawGrid& raw,
                            const SphericalDistribution& target,
                            const LossWeights& weights,
                            Activation activation = Activation::kSoftplus);

// d total / d u[i][j] for every cell, derived analytically through the
// activation, the normalization quotient, and the expectation sum.
// Same degenerate-direction behavior as combined_loss.
RawGrid combined_loss_grad(const RawGrid& raw,
                           const SphericalDistribution& target,
                           const LossWeights& weights,
                           Activation activation = Activation::kSoftplus);

// Sum of the three per-direction losses for a rotation's column grids.
double rotation_loss(const std::array<RawGrid, 3>& grids,
                     const std::array<SphericalDistribution, 3>& targets,
                     const LossWeights& weights,
                     Activation activation = Activation::kSoftplus);

// Shared evaluation core. Guarded mode replaces the undefined direction
// term with zero and reports spread = 1 when the expectation norm falls
// below the guard, so iterative fits can traverse the uniform cold start.
class LossEvaluator {
 public:
  LossEvaluator(const GridSpec& spec, SphericalDistribution target,
                LossWeights weights, Activation activation);

  struct Result {
    LossBreakdown breakdown;
    Eigen::Vector3d expectation;
    bool degenerate = false;
  };

  // grad, when non-null, receives d total / d u (resized to spec.size()).
  Result evaluate(const std::vector<double>& raw_values, bool guarded,
                  std::vector<double>* grad = nullptr) const;

  const GridSpec& spec() const { return spec_; }
  const SphericalDistribution& target() const { return target_; }
  const Eigen::Vector3d& target_expectation() const { return target_exp_; }

  static constexpr double kDirectionGuard = 1e-8;

 private:
  GridSpec spec_;
  SphericalDistribution target_;
  LossWeights weights_;
  Activation activation_;
  Eigen::Vector3d target_exp_;
  std::vector<double> sin_row_;   // sin(theta_i) per row
  std::vector<double> dir_x_, dir_y_, dir_z_;  // cell directions, flattened
};

}  // namespace dirpose
