#pragma once

#include <vector>

#include <Eigen/Core>

#include "dirpose/errors.hpp"
#include "dirpose/unit_vec.hpp"

namespace dirpose {

// Equirectangular discretization of the unit sphere.
//
// Cell (i, j) is centered at colatitude theta_i = (2i+1)*pi/(2H), measured
// from +Z, and azimuth phi_j = 2*pi*j/W, measured from +X toward +Y. Grids
// are stored row-major, row = colatitude, column = azimuth. This axis
// convention is shared by every module in the library.
struct GridSpec {
  int height = 64;
  int width = 64;

  GridSpec() = default;
  GridSpec(int h, int w) : height(h), width(w) {
    if (h < 2 || w < 2) throw UsageError("GridSpec: H and W must be >= 2");
  }

  double theta(int i) const { return (2 * i + 1) * kPi / (2.0 * height); }
  double phi(int j) const { return 2.0 * kPi * j / width; }
  int size() const { return height * width; }
  int index(int i, int j) const { return i * width + j; }

  bool operator==(const GridSpec&) const = default;

  static constexpr double kPi = 3.14159265358979323846;
};

// Unnormalized grid values, the optimization variable of the fit drivers.
struct RawGrid {
  GridSpec spec;
  std::vector<double> values;  // spec.size(), row-major

  RawGrid() : values(static_cast<std::size_t>(spec.size()), 0.0) {}
  explicit RawGrid(GridSpec s, double fill = 0.0)
      : spec(s), values(static_cast<std::size_t>(s.size()), fill) {}

  double& at(int i, int j) { return values[spec.index(i, j)]; }
  double at(int i, int j) const { return values[spec.index(i, j)]; }
};

// A discrete probability distribution on the sphere: probs >= 0 and
// sum_ij probs[i][j] * sin(theta_i) = 1 (within 1e-9).
struct SphericalDistribution {
  GridSpec spec;
  std::vector<double> probs;

  double at(int i, int j) const { return probs[spec.index(i, j)]; }

  // Verifies the non-negativity and unit-measure invariants.
  bool valid(double tol = 1e-9) const;
};

enum class Activation {
  kSoftplus,  // f(x) = ln(1 + e^x)
  kExp,       // f(x) = e^x, the soft-argmax reading of the grid
};

// Unit direction of cell (i, j):
// (sin(theta_i) cos(phi_j), sin(theta_i) sin(phi_j), cos(theta_i)).
UnitVec3 cell_direction(const GridSpec& spec, int i, int j);

// Maps raw values to a distribution: probs = f(u) / sum f(u) sin(theta).
// The exp activation subtracts the grid maximum before exponentiating,
// which leaves the normalized result unchanged.
SphericalDistribution normalize(const RawGrid& raw,
                                Activation activation = Activation::kSoftplus);

// sum_ij rho(theta_i, phi_j) * probs[i][j] * sin(theta_i). The result lies
// inside the unit ball; its norm measures how concentrated the
// distribution is.
Eigen::Vector3d expectation(const SphericalDistribution& dist);

// von Mises-Fisher target: probs proportional to exp(kappa * (mean . rho)),
// normalized on the discrete grid measure so that targets and predictions
// live under the identical measure.
SphericalDistribution vmf_target(const GridSpec& spec, const UnitVec3& mean,
                                 double kappa);

// Pads an equirectangular grid so every out-of-grid neighbor is the true
// spherical neighbor: columns wrap in azimuth; rows crossing a pole map
// back into the grid with their columns shifted by half a period. Corners
// compose the pole rule with the wrap. Requires even W (the half-period
// shift must be a whole number of cells), pad < W/2, and pad <= H. The
// returned grid is a plain (H+2*pad) x (W+2*pad) array.
RawGrid spherical_pad(const RawGrid& grid, int pad);

}  // namespace dirpose
