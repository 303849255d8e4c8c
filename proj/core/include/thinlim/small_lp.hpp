#pragma once

#include <array>
#include <vector>

namespace thinlim {

/// Lower convex hull of a finite point cloud {(y_j, c_j)} in R^d x R,
/// evaluated pointwise:
///
///   co(x) = min sum_j l_j c_j  s.t.  sum_j l_j y_j = x, sum_j l_j = 1, l >= 0
///
/// solved with a dense revised simplex on d+1 rows (phase 1 with
/// artificials, Dantzig pricing, Bland's rule after a run of degenerate
/// pivots). Returns +inf when x is outside the hull of the y_j.
class LowerHullLp {
 public:
  LowerHullLp(int dim, std::vector<std::array<double, 3>> points, std::vector<double> costs);

  double evaluate(const std::array<double, 3>& x) const { return evaluate(x, nullptr); }
  /// Also writes an optimal dual (s_0, .., s_{d-1}, c): s.y_j + c <= c_j for
  /// every column and s.x + c equals the returned value.
  double evaluate(const std::array<double, 3>& x, std::array<double, 4>* support) const;
  /// Pivot count of the last evaluate() call on this thread's instance.
  int last_pivots() const { return last_pivots_; }

 private:
  int dim_;
  std::vector<std::array<double, 3>> points_;
  std::vector<double> costs_;
  double cost_scale_ = 1.0;
  mutable int last_pivots_ = 0;
};

}  // namespace thinlim
