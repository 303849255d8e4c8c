#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "thinlim/geometry.hpp"
#include "thinlim/pa_function.hpp"

namespace thinlim {

/// max_i min_{j in groups[i]} affines[j](x); groups hold 0-based indices.
struct MaxMinForm {
  std::vector<AffineFunction> affines;
  std::vector<std::vector<std::size_t>> groups;

  /// Every group nonempty and every index in range.
  void validate() const;
};

/// Union of convex parts; `convex` is true only for a single part.
struct PolygonDomain {
  std::vector<ConvexPolygon> parts;
  bool convex = true;

  static PolygonDomain from(const ConvexPolygon& omega);
  static PolygonDomain from_parts(std::vector<ConvexPolygon> parts);
  /// [0,2]^2 minus (1,2]^2.
  static PolygonDomain l_shape();

  bool contains(Vec2 p, double tol = 1e-12) const;
  void bounding_box(Vec2& lo, Vec2& hi) const;
};

/// Pieces whose cell meets omega with nonempty interior are kept. Each
/// P_i cap omega is split along the lines a_j = a_i crossing it; every
/// sub-cell C gives the group {j : a_j >= a_i at every vertex of C}.
/// Duplicate groups and supersets of kept groups are dropped.
/// Throws ValidationError on a discontinuous input.
MaxMinForm maxmin_representation(const PAFunction& pa, const ConvexPolygon& omega);
/// As above on a union of convex parts; a non-convex domain throws
/// ValidationError unless `allow_nonconvex`.
MaxMinForm maxmin_representation(const PAFunction& pa, const PolygonDomain& omega, bool allow_nonconvex = false);

double eval_maxmin(const MaxMinForm& form, Vec2 x);

struct MaxMinVerification {
  double max_deviation = 0.0;
  Vec2 witness;
  std::size_t points_checked = 0;
  bool convex_domain = true;
  bool pass = false;
  std::string label;
};

/// Compares at every clipped piece vertex, edge midpoint and `n_samples`
/// stratified random points of omega; pass iff max deviation <= 1e-12.
MaxMinVerification verify_representation(const PAFunction& pa, const MaxMinForm& form, const PolygonDomain& omega,
                                         std::size_t n_samples, std::uint64_t seed = 20240601);
MaxMinVerification verify_representation(const PAFunction& pa, const MaxMinForm& form, const ConvexPolygon& omega,
                                         std::size_t n_samples, std::uint64_t seed = 20240601);

/// `zx zy s` per affine, a blank line, then one index line per group.
void write_maxmin(std::ostream& os, const MaxMinForm& form);
MaxMinForm read_maxmin(std::istream& is);
void save_maxmin(const std::filesystem::path& path, const MaxMinForm& form);
MaxMinForm load_maxmin(const std::filesystem::path& path);

}  // namespace thinlim
