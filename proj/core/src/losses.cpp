#include "dirpose/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dirpose/errors.hpp"

namespace dirpose {

double direction_loss(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2) {
  double n1 = p1.norm();
  double n2 = p2.norm();
  if (n1 <= kDegenerateDirectionEps || n2 <= kDegenerateDirectionEps) {
    throw DegenerateDirection("direction_loss: near-zero vector");
  }
  return std::clamp(-p1.dot(p2) / (n1 * n2), -1.0, 1.0);
}

double distribution_loss(const SphericalDistribution& p1,
                         const SphericalDistribution& p2) {
  if (!(p1.spec == p2.spec)) {
    throw UsageError("distribution_loss: mismatched grid specs");
  }
  const GridSpec& spec = p1.spec;
  double sum = 0.0;
  for (int i = 0; i < spec.height; ++i) {
    double s = std::sin(spec.theta(i));
    for (int j = 0; j < spec.width; ++j) {
      double d = p1.at(i, j) - p2.at(i, j);
      sum += d * d * s;
    }
  }
  return sum / (static_cast<double>(spec.height) * spec.width);
}

double spread_loss(const Eigen::Vector3d& p) {
  double n = p.norm();
  if (n > 1.0 + 1e-9) {
    throw UsageError("spread_loss: expectation norm exceeds 1");
  }
  return std::clamp(1.0 - n, 0.0, 1.0);
}

LossEvaluator::LossEvaluator(const GridSpec& spec, SphericalDistribution target,
                             LossWeights weights, Activation activation)
    : spec_(spec),
      target_(std::move(target)),
      weights_(weights),
      activation_(activation) {
  if (!(target_.spec == spec_)) {
    throw UsageError("LossEvaluator: target spec does not match");
  }
  if (!(weights_.lambda_d >= 0.0) || !(weights_.lambda_sigma >= 0.0) ||
      !std::isfinite(weights_.lambda_d) || !std::isfinite(weights_.lambda_sigma)) {
    throw UsageError("LossEvaluator: weights must be finite and non-negative");
  }
  target_exp_ = expectation(target_);
  sin_row_.resize(spec_.height);
  dir_x_.resize(spec_.size());
  dir_y_.resize(spec_.size());
  dir_z_.resize(spec_.size());
  for (int i = 0; i < spec_.height; ++i) {
    sin_row_[i] = std::sin(spec_.theta(i));
    for (int j = 0; j < spec_.width; ++j) {
      UnitVec3 d = cell_direction(spec_, i, j);
      int k = spec_.index(i, j);
      dir_x_[k] = d.x();
      dir_y_[k] = d.y();
      dir_z_[k] = d.z();
    }
  }
}

namespace {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

LossEvaluator::Result LossEvaluator::evaluate(
    const std::vector<double>& u, bool guarded,
    std::vector<double>* grad) const {
  const int n = spec_.size();
  if (static_cast<int>(u.size()) != n) {
    throw UsageError("LossEvaluator: raw grid size does not match spec");
  }

  // Activation values and derivatives.
  std::vector<double> f(n), fp(n);
  if (activation_ == Activation::kSoftplus) {
    for (int k = 0; k < n; ++k) {
      f[k] = softplus(u[k]);
      fp[k] = sigmoid(u[k]);
    }
  } else {
    double m = *std::max_element(u.begin(), u.end());
    for (int k = 0; k < n; ++k) {
      f[k] = std::exp(u[k] - m);
      fp[k] = f[k];
    }
  }

  // Normalization, probabilities, and expectation in one pass.
  double z = 0.0;
  for (int i = 0; i < spec_.height; ++i) {
    const double s = sin_row_[i];
    const int row = i * spec_.width;
    for (int j = 0; j < spec_.width; ++j) z += f[row + j] * s;
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw UsageError("LossEvaluator: normalization sum is not positive finite");
  }

  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  double dist = 0.0;
  double cross = 0.0;  // sum (P - P*) P sin(theta), reused by the gradient
  std::vector<double> p(n);
  for (int i = 0; i < spec_.height; ++i) {
    const double s = sin_row_[i];
    const int row = i * spec_.width;
    for (int j = 0; j < spec_.width; ++j) {
      const int k = row + j;
      p[k] = f[k] / z;
      const double ws = p[k] * s;
      v.x() += dir_x_[k] * ws;
      v.y() += dir_y_[k] * ws;
      v.z() += dir_z_[k] * ws;
      const double d = p[k] - target_.probs[k];
      dist += d * d * s;
      cross += d * ws;
    }
  }
  dist /= static_cast<double>(n);

  const double vn = v.norm();
  const bool degenerate = vn <= kDirectionGuard;
  if (degenerate && !guarded) {
    throw DegenerateDirection(
        "combined loss: expectation norm below 1e-8, direction undefined");
  }

  Result res;
  res.expectation = v;
  res.degenerate = degenerate;

  Eigen::Vector3d w = Eigen::Vector3d::Zero();  // d(direction+spread)/dv
  if (!degenerate) {
    const Eigen::Vector3d q = target_exp_;
    const double qn = q.norm();
    if (qn <= kDegenerateDirectionEps) {
      throw DegenerateDirection("combined loss: target expectation is zero");
    }
    const Eigen::Vector3d vh = v / vn;
    const Eigen::Vector3d qh = q / qn;
    res.breakdown.direction = std::clamp(-vh.dot(qh), -1.0, 1.0);
    res.breakdown.spread = std::clamp(1.0 - vn, 0.0, 1.0);
    w = (-qh + vh.dot(qh) * vh) / vn - weights_.lambda_sigma * vh;
  } else {
    res.breakdown.direction = 0.0;
    res.breakdown.spread = 1.0;
  }
  res.breakdown.distribution = dist;
  res.breakdown.total = res.breakdown.direction +
                        weights_.lambda_d * dist +
                        weights_.lambda_sigma * res.breakdown.spread;

  if (grad != nullptr) {
    grad->assign(n, 0.0);
    const double dscale = weights_.lambda_d * 2.0 / static_cast<double>(n);
    const double vw = v.dot(w);
    for (int i = 0; i < spec_.height; ++i) {
      const double s = sin_row_[i];
      const int row = i * spec_.width;
      for (int j = 0; j < spec_.width; ++j) {
        const int k = row + j;
        const double rho_w =
            dir_x_[k] * w.x() + dir_y_[k] * w.y() + dir_z_[k] * w.z();
        const double dd = p[k] - target_.probs[k];
        (*grad)[k] = fp[k] * s / z * (rho_w - vw + dscale * (dd - cross));
      }
    }
  }
  return res;
}

LossBreakdown combined_loss(const RawGrid& raw,
                            const SphericalDistribution& target,
                            const LossWeights& weights, Activation activation) {
  LossEvaluator eval(raw.spec, target, weights, activation);
  return eval.evaluate(raw.values, /*guarded=*/false).breakdown;
}

RawGrid combined_loss_grad(const RawGrid& raw,
                           const SphericalDistribution& target,
                           const LossWeights& weights, Activation activation) {
  LossEvaluator eval(raw.spec, target, weights, activation);
  RawGrid grad(raw.spec);
  eval.evaluate(raw.values, /*guarded=*/false, &grad.values);
  return grad;
}

double rotation_loss(const std::array<RawGrid, 3>& grids,
                     const std::array<SphericalDistribution, 3>& targets,
                     const LossWeights& weights, Activation activation) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    total += combined_loss(grids[i], targets[i], weights, activation).total;
  }
  return total;
}

}  // namespace dirpose
