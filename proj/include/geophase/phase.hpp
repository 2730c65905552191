#pragma once

#include <cmath>
#include <numbers>

#include "geophase/types.hpp"

namespace geophase {

enum class PhaseStatus { Defined, NearCritical };

/// Argument of a complex trace, with the magnitude that decides whether the
/// argument means anything.
struct PhaseResult {
  double phase = 0.0;  // (-pi, pi]
  Complex trace{0.0, 0.0};
  double magnitude = 0.0;
  PhaseStatus status = PhaseStatus::NearCritical;

  bool defined() const { return status == PhaseStatus::Defined; }
};

/// Principal argument in (-pi, pi]; -pi is folded onto +pi.
inline double principal_arg(Complex z) {
  const double a = std::arg(z);
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

inline PhaseResult make_phase(Complex trace, double mag_floor = kMagFloor) {
  PhaseResult r;
  r.trace = trace;
  r.magnitude = std::abs(trace);
  r.phase = principal_arg(trace);
  r.status = r.magnitude >= mag_floor ? PhaseStatus::Defined : PhaseStatus::NearCritical;
  return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

}  // namespace geophase
