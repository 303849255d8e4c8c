#pragma once

#include <cmath>
#include <limits>

namespace thinlim {

// Values live in [0, +inf]. +inf is stored as IEEE infinity and is the only
// non-finite value allowed; kernels test for it with is_inf() before doing
// arithmetic.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double v) { return v == kInf; }
inline bool is_finite_value(double v) { return std::isfinite(v); }

/// a + b with the convention a + inf = inf.
inline double ext_add(double a, double b) {
  if (is_inf(a) || is_inf(b)) return kInf;
  return a + b;
}

inline double ext_min(double a, double b) {
  if (is_inf(a)) return b;
  if (is_inf(b)) return a;
  return a < b ? a : b;
}

inline double ext_max(double a, double b) {
  if (is_inf(a) || is_inf(b)) return kInf;
  return a > b ? a : b;
}

}  // namespace thinlim
