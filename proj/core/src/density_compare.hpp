#pragma once

// Density comparisons treat values within a small relative distance of a
// threshold as lying on it, so thresholds such as ln(ML) - gamma that
// coincide with a density in exact arithmetic are not split by rounding.

#include <algorithm>
#include <cmath>

namespace mutualcover::detail {

inline constexpr double kDensityTol = 1e-12;

inline double tol_at(double t) {
  return std::isfinite(t) ? kDensityTol * std::max(1.0, std::abs(t)) : 0.0;
}

inline bool at_least(double d, double t) { return d >= t - tol_at(t); }
inline bool at_most(double d, double t) { return d <= t + tol_at(t); }
inline bool above(double d, double t) { return d > t + tol_at(t); }
inline bool below(double d, double t) { return d < t - tol_at(t); }

}  // namespace mutualcover::detail
