#include "thinlim/small_lp.hpp"

#include <algorithm>
#include <cmath>

#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"

namespace thinlim {

LowerHullLp::LowerHullLp(int dim, std::vector<std::array<double, 3>> points, std::vector<double> costs)
    : dim_(dim), points_(std::move(points)), costs_(std::move(costs)) {
  if (points_.size() != costs_.size()) throw ValidationError("lower hull LP: size mismatch");
  for (double c : costs_) cost_scale_ = std::max(cost_scale_, std::abs(c));
}

double LowerHullLp::evaluate(const std::array<double, 3>& x, std::array<double, 4>* support) const {
  const int r = dim_ + 1;
  const int m = static_cast<int>(points_.size());
  last_pivots_ = 0;
  if (m == 0) return kInf;
  auto column = [&](int j, double* a) {
    if (j < m) {
      for (int i = 0; i < dim_; ++i) a[i] = points_[j][i];
      a[dim_] = 1.0;
    } else {
      for (int i = 0; i < r; ++i) a[i] = i == j - m ? 1.0 : 0.0;
    }
  };
  double b[4];
  for (int i = 0; i < dim_; ++i) b[i] = x[i];
  b[dim_] = 1.0;
  // artificial rows need b >= 0: flip rows with negative rhs
  double sign[4];
  for (int i = 0; i < r; ++i) sign[i] = b[i] < 0.0 ? -1.0 : 1.0;

  int basis[4];
  double binv[4][4] = {};
  double xb[4];
  for (int i = 0; i < r; ++i) {
    basis[i] = m + i;
    binv[i][i] = sign[i];
    xb[i] = std::abs(b[i]);
  }
  std::vector<char> in_basis(m + r, 0);
  for (int i = 0; i < r; ++i) in_basis[m + i] = 1;

  constexpr double kTol = 1e-10;
  auto cost = [&](int j, int phase) {
    if (phase == 1) return j >= m ? 1.0 : 0.0;
    return j >= m ? 0.0 : costs_[j] / cost_scale_;
  };

  for (int phase = 1; phase <= 2; ++phase) {
    int degenerate_run = 0;
    for (int iter = 0; iter < 50 * (m + r) + 1000; ++iter) {
      double pi[4] = {};
      for (int k = 0; k < r; ++k) {
        const double cb = cost(basis[k], phase);
        if (cb == 0.0) continue;
        for (int i = 0; i < r; ++i) pi[i] += cb * binv[k][i];
      }
      const bool bland = degenerate_run > 30;
      int enter = -1;
      double best = -kTol;
      double a[4];
      for (int j = 0; j < m; ++j) {
        if (in_basis[j]) continue;
        column(j, a);
        double d = cost(j, phase);
        for (int i = 0; i < r; ++i) d -= pi[i] * a[i];
        if (d < best) {
          best = d;
          enter = j;
          if (bland) break;
        }
      }
      if (enter < 0) break;
      column(enter, a);
      double w[4] = {};
      for (int k = 0; k < r; ++k)
        for (int i = 0; i < r; ++i) w[k] += binv[k][i] * a[i];
      int leave = -1;
      double theta = kInf;
      for (int k = 0; k < r; ++k) {
        // zero-level artificials leave on any nonzero pivot in phase 2
        const bool art = basis[k] >= m && phase == 2;
        if (art ? std::abs(w[k]) <= kTol : w[k] <= kTol) continue;
        const double ratio = art ? 0.0 : xb[k] / w[k];
        if (ratio < theta - 1e-14 || (ratio <= theta + 1e-14 && leave >= 0 && basis[k] < basis[leave])) {
          theta = ratio;
          leave = k;
        }
      }
      if (leave < 0) break;  // unbounded direction; cannot happen with sum l = 1
      degenerate_run = theta <= 1e-14 ? degenerate_run + 1 : 0;
      ++last_pivots_;
      const double piv = w[leave];
      for (int i = 0; i < r; ++i) binv[leave][i] /= piv;
      xb[leave] = theta;
      for (int k = 0; k < r; ++k) {
        if (k == leave) continue;
        const double f = w[k];
        if (f == 0.0) continue;
        for (int i = 0; i < r; ++i) binv[k][i] -= f * binv[leave][i];
        xb[k] -= f * theta;
        if (xb[k] < 0.0 && xb[k] > -1e-12) xb[k] = 0.0;
      }
      in_basis[basis[leave]] = 0;
      basis[leave] = enter;
      in_basis[enter] = 1;
    }
    if (phase == 1) {
      double infeas = 0.0;
      for (int k = 0; k < r; ++k)
        if (basis[k] >= m) infeas += xb[k];
      if (infeas > 1e-9) return kInf;
    }
  }
  double value = 0.0;
  for (int k = 0; k < r; ++k)
    if (basis[k] < m) value += costs_[basis[k]] * xb[k];
  if (support) {
    support->fill(0.0);
    for (int k = 0; k < r; ++k) {
      if (basis[k] >= m) continue;
      for (int i = 0; i < r; ++i) (*support)[i] += costs_[basis[k]] * binv[k][i];
    }
  }
  return value;
}

}  // namespace thinlim
