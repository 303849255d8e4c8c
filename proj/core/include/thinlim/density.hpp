#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thinlim/grid.hpp"

namespace thinlim {

/// Analytic extended-real density on R^dim with values in [0, +inf].
class Density {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Density(int dim, Fn fn, std::string descriptor);

  double operator()(std::span<const double> xi) const { return fn_(xi); }
  int dim() const { return dim_; }
  /// Canonical JSON descriptor this density was built from.
  const std::string& descriptor() const { return descriptor_; }

  /// A point where the density attains its minimum, when known analytically.
  std::optional<std::vector<double>> argmin;

 private:
  int dim_;
  Fn fn_;
  std::string descriptor_;
};

/// Build a density from a JSON descriptor. Families:
///   {"family":"norm","dim":3,"scale":1,"offset":0,"center":[..]}
///   {"family":"power_norm","dim":2,"p":2,"scale":1,"center":[..]}
///   {"family":"double_well","dim":1,"radius":1,"axis":-1}      (|.|^2-r^2)^2, axis>=0 uses one coordinate
///   {"family":"indicator_ball","dim":3,"radius":1,"center":[..]}
///   {"family":"indicator_box","lo":[..],"hi":[..]}
///   {"family":"indicator_cylinder","radius":1,"half_height":1}  3D, |z|<=r and |zeta|<=h
///   {"family":"indicator_points","dim":1,"points":[[-1],[1]],"tol":1e-9}
///   {"family":"sum","terms":[...]}
///   {"family":"expr","dim":3,"expr":"sqrt((z1-1)^2+z2^2)+abs(zeta^2-1)"}
///   {"family":"grid","path":"g.grid"}                            multilinear interpolation
/// Throws ValidationError for malformed descriptors.
Density parse_density(const std::string& json_text);

/// Pointwise evaluation at grid nodes. Density and grid dimensions must agree.
GridFunction sample_density(const Density& density, const Grid& grid);

/// Density backed by a sampled grid function (multilinear, +inf off-grid).
Density grid_density(const GridFunction& g);

}  // namespace thinlim
