#include "dirpose/grid_fit.hpp"

#include <cmath>

#include "dirpose/errors.hpp"
#include "dirpose/random.hpp"

namespace dirpose {

namespace {

void validate(const FitConfig& cfg) {
  if (cfg.steps < 1) throw UsageError("fit: steps must be >= 1");
  if (!std::isfinite(cfg.learning_rate) || cfg.learning_rate <= 0.0) {
    throw UsageError("fit: learning rate must be positive finite");
  }
  if (!(cfg.init_scale >= 0.0)) {
    throw UsageError("fit: init_scale must be non-negative");
  }
}

std::vector<double> seeded_init(const GridSpec& spec, const FitConfig& cfg,
                                std::uint64_t grid_index) {
  Rng rng = substream(cfg.seed, "grid_fit/init", grid_index);
  std::vector<double> u(static_cast<std::size_t>(spec.size()));
  for (double& x : u) x = uniform_in(rng, -cfg.init_scale, cfg.init_scale);
  return u;
}

// One optimizer over a set of independent grids sharing the step count.
class MultiGridFit {
 public:
  MultiGridFit(const GridSpec& spec, std::vector<SphericalDistribution> targets,
               const FitConfig& cfg)
      : spec_(spec), cfg_(cfg) {
    for (auto& t : targets) {
      evals_.emplace_back(spec, std::move(t), cfg.weights, cfg.activation);
    }
    const std::size_t n = static_cast<std::size_t>(spec.size());
    for (std::size_t g = 0; g < evals_.size(); ++g) {
      grids_.push_back(seeded_init(spec, cfg, g));
      m_.emplace_back(n, 0.0);
      v_.emplace_back(n, 0.0);
    }
  }

  std::vector<double> run() {
    std::vector<double> trace;
    trace.reserve(cfg_.steps);
    std::vector<double> grad;
    for (int step = 0; step < cfg_.steps; ++step) {
      double total = 0.0;
      for (std::size_t g = 0; g < grids_.size(); ++g) {
        auto res = evals_[g].evaluate(grids_[g], /*guarded=*/true, &grad);
        total += res.breakdown.total;
        apply_update(g, grad, step);
      }
      if (!std::isfinite(total)) {
        throw DivergedFit("fit: non-finite loss", step);
      }
      trace.push_back(total);
    }
    return trace;
  }

  LossEvaluator::Result final_result(std::size_t g) const {
    return evals_[g].evaluate(grids_[g], /*guarded=*/true);
  }

 private:
  void apply_update(std::size_t g, const std::vector<double>& grad, int step) {
    std::vector<double>& u = grids_[g];
    if (cfg_.optimizer == FitOptimizer::kDescent) {
      for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] -= cfg_.learning_rate * grad[k];
        if (!std::isfinite(u[k])) throw DivergedFit("fit: non-finite value", step);
      }
      return;
    }
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double t = step + 1;
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);
    std::vector<double>& m = m_[g];
    std::vector<double>& v = v_[g];
    for (std::size_t k = 0; k < u.size(); ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * grad[k];
      v[k] = b2 * v[k] + (1.0 - b2) * grad[k] * grad[k];
      u[k] -= cfg_.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
      if (!std::isfinite(u[k])) throw DivergedFit("fit: non-finite value", step);
    }
  }

  GridSpec spec_;
  FitConfig cfg_;
  std::vector<LossEvaluator> evals_;
  std::vector<std::vector<double>> grids_;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace

FitReport fit_direction(const UnitVec3& target_dir, double kappa,
                        const GridSpec& spec, const FitConfig& cfg) {
  validate(cfg);
  MultiGridFit fit(spec, {vmf_target(spec, target_dir, kappa)}, cfg);
  FitReport report;
  report.loss_trace = fit.run();
  auto res = fit.final_result(0);
  report.final_loss = res.breakdown;
  report.final_direction = normalize_direction(res.expectation);
  report.angular_error_deg =
      report.final_direction.angle_to(target_dir) * 180.0 / GridSpec::kPi;
  return report;
}

std::pair<Rotation3, FitReport> fit_rotation(const Rotation3& target,
                                             double kappa, const GridSpec& spec,
                                             const FitConfig& cfg,
                                             RotationFitVariant variant) {
  validate(cfg);
  const int n_grids = variant == RotationFitVariant::kSvd9d ? 3 : 2;
  std::vector<SphericalDistribution> targets;
  for (int c = 0; c < n_grids; ++c) {
    targets.push_back(vmf_target(spec, UnitVec3(target.col(c)), kappa));
  }
  MultiGridFit fit(spec, std::move(targets), cfg);

  FitReport report;
  report.loss_trace = fit.run();

  std::vector<Eigen::Vector3d> dirs;
  report.final_loss = LossBreakdown{};
  for (int c = 0; c < n_grids; ++c) {
    auto res = fit.final_result(c);
    dirs.push_back(normalize_direction(res.expectation).vec());
    report.final_loss.direction += res.breakdown.direction;
    report.final_loss.distribution += res.breakdown.distribution;
    report.final_loss.spread += res.breakdown.spread;
    report.final_loss.total += res.breakdown.total;
  }

  Rotation3 recovered =
      variant == RotationFitVariant::kSvd9d
          ? procrustes_project(
                (Eigen::Matrix3d() << dirs[0], dirs[1], dirs[2]).finished())
          : gram_schmidt_project(dirs[0], dirs[1]);
  report.final_direction = UnitVec3(recovered.col(0));
  report.angular_error_deg =
      geodesic_distance(recovered, target) * 180.0 / GridSpec::kPi;
  return {recovered, report};
}

}  // namespace dirpose
