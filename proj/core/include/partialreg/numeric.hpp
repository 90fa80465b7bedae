#pragma once

#include <algorithm>
#include <cmath>

namespace partialreg {

/// Default comparison tolerance for coefficient agreement checks.
inline constexpr double kDefaultTolerance = 1e-8;

/// |a - b| / max(|a|, |b|), and 0 when both are exactly zero.
inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

inline bool agrees(double a, double b, double tolerance = kDefaultTolerance) {
  return relative_difference(a, b) <= tolerance;
}

/// Relative agreement measured against max(|a|, |b|, scale), so values that
/// are zero up to rounding compare equal when `scale` is the size of the
/// quantities they sit among (e.g. the largest coefficient of the fit).
inline bool agrees_on_scale(double a, double b, double scale,
                            double tolerance = kDefaultTolerance) {
  const double ref = std::max({std::abs(a), std::abs(b), std::abs(scale)});
  return std::abs(a - b) <= tolerance * ref;
}

}  // namespace partialreg
