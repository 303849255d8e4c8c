#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "thinlim/grid.hpp"

namespace thinlim {

enum class EnvelopeKind { InfProjection, Convex, Biconjugate, LevelConvex };

std::string to_string(EnvelopeKind kind);
/// Accepts "inf_projection", "convex", "biconjugate", "level_convex".
EnvelopeKind parse_envelope_kind(const std::string& name);

struct EnvelopeReport {
  GridFunction input;
  GridFunction output;
  EnvelopeKind kind = EnvelopeKind::Convex;
  /// Largest failure of output <= input, and of midpoint convexity
  /// (convex kinds) or axis quasi-convexity (level convex).
  double max_violation = 0.0;
  std::vector<double> violation;
};

/// z -> min over the sampled zeta column of f(z, .). The zeta axis is the last one.
GridFunction project_inf(const GridFunction& f);

/// Convex lsc envelope via two discrete Legendre-Fenchel transforms.
/// Outside the lattice hull of dom g the result is +inf.
GridFunction biconjugate(const GridFunction& g);

/// Exact lower convex hull of the finite samples.
GridFunction convex_envelope(const GridFunction& g);

/// Smallest sample level t such that the node lies in the hull of {g <= t}.
GridFunction level_convex_envelope(const GridFunction& g);

EnvelopeReport envelope_report(const GridFunction& g, EnvelopeKind kind);
GridFunction compute_envelope(const GridFunction& g, EnvelopeKind kind);

/// CSV: node,input,output,violation
void write_envelope_csv(std::ostream& os, const EnvelopeReport& report);

/// Nodes with g <= t and the vertices of their convex hull.
struct SublevelSet {
  double level = 0.0;
  int dim = 1;
  std::vector<std::size_t> points;
  /// 1D: {lo, hi}; 2D: CCW polygon; 3D: hull vertex nodes (unordered).
  std::vector<Point3> hull;
  bool empty() const { return points.empty(); }
};

SublevelSet sublevel_hull(const GridFunction& g, double t);

/// 0 on {W <= M}, +inf elsewhere. Throws EmptyDomainError when M < min W.
GridFunction indicator_of_sublevel(const GridFunction& W, double M);

/// Mask of grid nodes inside the (closed) lattice hull of `nodes`.
std::vector<std::uint8_t> hull_mask(const Grid& grid, const std::vector<std::size_t>& nodes);

/// Number of nodes outside `nodes` that lie in their hull (0 = convex position).
std::size_t convex_position_defect(const Grid& grid, const std::vector<std::size_t>& nodes);

/// Nodes that enter the hull of {g <= t} while g > t + tol (1 + t), summed
/// over the distinct levels t. Zero means every sublevel node set is in
/// convex position.
std::size_t level_convexity_defect(const GridFunction& g, double tol = 0.0);

struct Coercivity {
  double constant = 0.0;
  /// Ratio keeps shrinking toward the origin (e.g. |xi|^2).
  bool fails_near_origin = false;
  /// min of W / |xi| over nodes at least half the box radius from the origin.
  double far_constant = 0.0;
};

/// min over nonzero nodes of W / |xi|; +inf nodes satisfy any constant.
Coercivity validate_coercivity(const GridFunction& W);

/// Nodes whose envelope value t could be affected by truncating the box:
/// the ball of radius t/C around the origin leaves the grid box.
std::vector<std::uint8_t> guard_band(const GridFunction& envelope, double coercivity);

}  // namespace thinlim
