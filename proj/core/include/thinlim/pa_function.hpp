#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "thinlim/geometry.hpp"

namespace thinlim {

/// u(x) = z.x + s
struct AffineFunction {
  Vec2 gradient;
  double offset = 0.0;

  double operator()(Vec2 x) const { return dot(gradient, x) + offset; }
};

struct PAPiece {
  AffineFunction affine;
  ConvexPolygon cell;
};

/// Continuous piecewise-affine function: pieces (z_j, s_j, P_j).
class PAFunction {
 public:
  explicit PAFunction(std::vector<PAPiece> pieces);

  const std::vector<PAPiece>& pieces() const { return pieces_; }

  /// Largest trace mismatch between neighbouring pieces, sampled at the
  /// endpoints and midpoint of every edge that another piece contains.
  double continuity_defect() const;

  /// Roof max(a_1, ..., a_m) restricted to `domain`, one piece per active
  /// affine; pieces are the clipped regions where each affine is maximal.
  static PAFunction upper_envelope(const std::vector<AffineFunction>& affines, const ConvexPolygon& domain);
  /// min(a_1, ..., a_m) on `domain`.
  static PAFunction lower_envelope(const std::vector<AffineFunction>& affines, const ConvexPolygon& domain);

 private:
  std::vector<PAPiece> pieces_;
};

/// Throws ValidationError("point outside domain") if no piece contains x.
double eval_pa(const PAFunction& pa, Vec2 x);

/// u_t(x) = u(x0 + (x - x0)/t); the domain dilates to x0 + t(dom - x0).
PAFunction dilate_function(const PAFunction& u, Vec2 x0, double t);

/// PA file: one piece per block; `piece zx zy s` then polygon vertex lines
/// `x y`, blocks separated by a blank line or the next `piece` line.
void write_pa(std::ostream& os, const PAFunction& pa);
PAFunction read_pa(std::istream& is);
PAFunction load_pa(const std::filesystem::path& path);

}  // namespace thinlim
