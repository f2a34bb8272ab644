#pragma once

#include <stdexcept>
#include <string>

namespace dirpose {

// Bad arguments, mismatched shapes, out-of-range configuration. CLI maps
// this family to exit code 2, numerical failures below to exit code 3.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A vector too short to define a direction on the sphere.
class DegenerateDirection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Rank-deficient input to the rotation projection.
class SingularInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (Near-)parallel vectors where an orthonormal frame is required.
class DegenerateFrame : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Half-rotation of a turn within tolerance of 180 degrees: the axis sign
// is ambiguous, so the half is not well defined.
class AmbiguousHalfRotation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Grid optimization produced a non-finite value.
class DivergedFit : public std::runtime_error {
 public:
  DivergedFit(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace dirpose
