#pragma once

#include <cmath>

namespace qrad {

// exp(-1/y) for y > 0, else 0.
inline double smooth_ramp(double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; }

// Smooth step: 0 for y <= 0, 1 for y >= 1, and Sm(y) + Sm(1 - y) = 1.
inline double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = smooth_ramp(y), b = smooth_ramp(1.0 - y);
  return a / (a + b);
}

// Plateau bump: 1 on [-1/2, 1/2], 0 outside (-1, 1).
inline double plateau_bump(double x) { return smooth_step(2.0 - 2.0 * std::fabs(x)); }

// exp(1 - 1/(1 - x^2)) on (-1, 1): Phi(0) = 1, |Phi| <= 1, support [-1, 1].
inline double mother_bump(double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

}  // namespace qrad
