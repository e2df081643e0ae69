#pragma once

#include <cmath>

namespace zklab {

// C-infinity step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u).
inline double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace zklab
