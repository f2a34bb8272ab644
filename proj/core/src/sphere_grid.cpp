#include "dirpose/sphere_grid.hpp"

#include <algorithm>
#include <cmath>

namespace dirpose {

UnitVec3 normalize_direction(const Eigen::Vector3d& v) {
  double n = v.norm();
  if (n <= kDegenerateDirectionEps) {
    throw DegenerateDirection("normalize_direction: vector norm " +
                              std::to_string(n) + " is below 1e-12");
  }
  return UnitVec3(Eigen::Vector3d(v / n));
}

bool SphericalDistribution::valid(double tol) const {
  if (static_cast<int>(probs.size()) != spec.size()) return false;
  double sum = 0.0;
  for (int i = 0; i < spec.height; ++i) {
    double s = std::sin(spec.theta(i));
    for (int j = 0; j < spec.width; ++j) {
      double p = at(i, j);
      if (!(p >= 0.0)) return false;
      sum += p * s;
    }
  }
  return std::abs(sum - 1.0) <= tol;
}

UnitVec3 cell_direction(const GridSpec& spec, int i, int j) {
  if (i < 0 || i >= spec.height || j < 0 || j >= spec.width) {
    throw UsageError("cell_direction: index out of range");
  }
  double theta = spec.theta(i);
  double phi = spec.phi(j);
  double st = std::sin(theta);
  return UnitVec3(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

SphericalDistribution normalize(const RawGrid& raw, Activation activation) {
  const GridSpec& spec = raw.spec;
  if (static_cast<int>(raw.values.size()) != spec.size()) {
    throw UsageError("normalize: grid size does not match spec");
  }
  for (double v : raw.values) {
    if (!std::isfinite(v)) throw UsageError("normalize: non-finite raw value");
  }

  std::vector<double> f(raw.values.size());
  if (activation == Activation::kSoftplus) {
    for (std::size_t k = 0; k < raw.values.size(); ++k) {
      f[k] = softplus(raw.values[k]);
    }
  } else {
    double m = *std::max_element(raw.values.begin(), raw.values.end());
    for (std::size_t k = 0; k < raw.values.size(); ++k) {
      f[k] = std::exp(raw.values[k] - m);
    }
  }

  double z = 0.0;
  for (int i = 0; i < spec.height; ++i) {
    double s = std::sin(spec.theta(i));
    for (int j = 0; j < spec.width; ++j) {
      z += f[spec.index(i, j)] * s;
    }
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw UsageError("normalize: normalization sum is not positive finite");
  }
  for (double& v : f) v /= z;
  return SphericalDistribution{spec, std::move(f)};
}

Eigen::Vector3d expectation(const SphericalDistribution& dist) {
  const GridSpec& spec = dist.spec;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int i = 0; i < spec.height; ++i) {
    double theta = spec.theta(i);
    double st = std::sin(theta);
    double ct = std::cos(theta);
    double wx = 0.0, wy = 0.0, wz = 0.0;
    for (int j = 0; j < spec.width; ++j) {
      double w = dist.at(i, j) * st;
      double phi = spec.phi(j);
      wx += w * st * std::cos(phi);
      wy += w * st * std::sin(phi);
      wz += w * ct;
    }
    v += Eigen::Vector3d(wx, wy, wz);
  }
  return v;
}

SphericalDistribution vmf_target(const GridSpec& spec, const UnitVec3& mean,
                                 double kappa) {
  if (!(kappa > 0.0)) throw UsageError("vmf_target: kappa must be positive");
  // exp(kappa*(mu.rho - 1)) equals exp(kappa*mu.rho) up to the constant
  // the normalization divides out, and cannot overflow.
  std::vector<double> g(static_cast<std::size_t>(spec.size()));
  for (int i = 0; i < spec.height; ++i) {
    for (int j = 0; j < spec.width; ++j) {
      double c = mean.vec().dot(cell_direction(spec, i, j).vec());
      g[spec.index(i, j)] = std::exp(kappa * (c - 1.0));
    }
  }
  double z = 0.0;
  for (int i = 0; i < spec.height; ++i) {
    double s = std::sin(spec.theta(i));
    for (int j = 0; j < spec.width; ++j) z += g[spec.index(i, j)] * s;
  }
  for (double& v : g) v /= z;
  return SphericalDistribution{spec, std::move(g)};
}

RawGrid spherical_pad(const RawGrid& grid, int pad) {
  const int h = grid.spec.height;
  const int w = grid.spec.width;
  if (pad < 1) throw UsageError("spherical_pad: pad must be positive");
  if (w % 2 != 0) {
    throw UsageError("spherical_pad: width must be even for the pole shift");
  }
  if (2 * pad >= w) throw UsageError("spherical_pad: pad must be < W/2");
  if (pad > h) throw UsageError("spherical_pad: pad must be <= H");

  RawGrid out(GridSpec(h + 2 * pad, w + 2 * pad));
  for (int r = -pad; r < h + pad; ++r) {
    int src_row = r;
    int shift = 0;
    if (r < 0) {
      src_row = -r - 1;  // rows above the north pole reflect back
      shift = w / 2;
    } else if (r >= h) {
      src_row = 2 * h - 1 - r;  // and symmetrically below the south pole
      shift = w / 2;
    }
    for (int c = -pad; c < w + pad; ++c) {
      int src_col = ((c + shift) % w + w) % w;
      out.at(r + pad, c + pad) = grid.at(src_row, src_col);
    }
  }
  return out;
}

}  // namespace dirpose
