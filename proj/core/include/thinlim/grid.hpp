#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "thinlim/extended_real.hpp"

namespace thinlim {

using Index3 = std::array<std::size_t, 3>;
using Point3 = std::array<double, 3>;

/// Uniform axis-aligned lattice in 1, 2 or 3 dimensions.
///
/// Node (i, j, k) sits at origin + (i*hx, j*hy, k*hz). Storage order is
/// row-major with the last axis fastest, so for a 3D grid the third (zeta)
/// axis is contiguous.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, Point3 origin, Point3 spacing, Index3 counts);

  /// Grid covering [lo, hi] on every axis with `n` nodes per axis.
  static Grid cube(int dim, double lo, double hi, std::size_t n);
  /// Grid covering the box [lo[a], hi[a]] with counts[a] nodes per axis.
  static Grid box(int dim, Point3 lo, Point3 hi, Index3 counts);

  int dim() const { return dim_; }
  const Point3& origin() const { return origin_; }
  const Point3& spacing() const { return spacing_; }
  const Index3& counts() const { return counts_; }
  std::size_t size() const;
  double min_spacing() const;

  std::size_t flat(const Index3& idx) const;
  Index3 unflat(std::size_t flat_index) const;
  double coord(int axis, std::size_t i) const { return origin_[axis] + static_cast<double>(i) * spacing_[axis]; }
  Point3 point(std::size_t flat_index) const;
  Point3 upper() const;

  /// The grid obtained by dropping the last axis.
  Grid drop_last_axis() const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_ = 1;
  Point3 origin_{0.0, 0.0, 0.0};
  Point3 spacing_{1.0, 1.0, 1.0};
  Index3 counts_{2, 1, 1};
};

/// Extended-real density sampled on a Grid. Values are in [0, +inf].
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values);
  GridFunction(Grid grid, double fill);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(const Index3& idx) const { return values_[grid_.flat(idx)]; }
  std::size_t size() const { return values_.size(); }

  bool any_finite() const;
  double max_finite() const;
  double min_value() const;

  /// Multilinear interpolation; +inf if any supporting node is +inf or the
  /// point lies outside the grid box.
  double interpolate(std::span<const double> x) const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Text format: header `dim nx [ny [nz]] ox [oy [oz]] hx [hy [hz]]` then one
/// value per line in row-major order, `inf` for +inf.
void write_grid_function(std::ostream& os, const GridFunction& g);
GridFunction read_grid_function(std::istream& is);
void save_grid_function(const std::filesystem::path& path, const GridFunction& g);
GridFunction load_grid_function(const std::filesystem::path& path);

}  // namespace thinlim
