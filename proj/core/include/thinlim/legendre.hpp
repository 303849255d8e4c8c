#pragma once

#include <span>
#include <vector>

#include "thinlim/grid.hpp"

namespace thinlim {

/// Values on a product point set: one sorted coordinate list per axis.
/// Storage is row-major with the last axis fastest, matching Grid.
struct ProductSamples {
  std::vector<std::vector<double>> axes;
  std::vector<double> values;

  std::size_t size() const;
};

/// Discrete sup-transform w(s) = max_y (s.y + v(y)) from `in` (coordinates
/// y, values v with -inf allowed) to the coordinate lists `out_axes`.
/// Computed axis by axis; each 1D pass takes the lower hull of -v and walks it
/// against the sorted output slopes, so the cost is linear per line.
ProductSamples sup_transform(const ProductSamples& in, const std::vector<std::vector<double>>& out_axes);

/// 1D conjugate f*(s) = max_i (s x_i - f_i) over finite f_i; -inf when none.
/// `x` and `s` sorted ascending.
std::vector<double> conjugate_1d(std::span<const double> x, std::span<const double> f, std::span<const double> s);

/// Slopes of the lower convex hull of the finite samples (ascending).
std::vector<double> lower_hull_slopes(std::span<const double> x, std::span<const double> f);

}  // namespace thinlim
