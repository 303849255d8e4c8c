#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace thinlim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
/// Twice the signed area of (a, b, c); positive for a counter-clockwise turn.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }
double norm(Vec2 a);

/// Closed half-plane {x : dot(normal, x) <= offset}.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
};

/// Counter-clockwise convex polygon with positive area.
///
/// Construction validates orientation, convexity (all turns >= 0 up to a
/// relative tolerance) and non-degeneracy; collinear vertices are dropped.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  static ConvexPolygon box(Vec2 lo, Vec2 hi);
  static ConvexPolygon unit_square() { return box({0.0, 0.0}, {1.0, 1.0}); }
  static ConvexPolygon regular(int sides, Vec2 center, double circumradius);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Vec2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double area() const;
  Vec2 centroid() const;
  double diameter() const;
  /// Closed membership; points within `tol` of the boundary count as inside.
  bool contains(Vec2 p, double tol = 1e-12) const;
  double distance_to_boundary(Vec2 p) const;
  double inradius() const;
  std::vector<HalfPlane> half_planes() const;
  void bounding_box(Vec2& lo, Vec2& hi) const;

 private:
  std::vector<Vec2> vertices_;
};

/// Clip a convex vertex loop by a closed half-plane. The result may be
/// degenerate or empty.
std::vector<Vec2> clip_half_plane(std::span<const Vec2> poly, const HalfPlane& hp);

/// Intersection of two convex polygons; nullopt if it has no interior.
std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Inner parallel polygon {x in omega : dist(x, boundary) >= eta}; throws
/// EmptyDomainError when eta >= inradius.
ConvexPolygon erode_domain(const ConvexPolygon& omega, double eta);

/// Counter-clockwise convex hull (monotone chain); collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);
/// Closed membership in a counter-clockwise hull of any size (0, 1, 2, ... vertices).
bool hull_contains(std::span<const Vec2> hull, Vec2 p, double tol = 1e-12);

/// One `x y` pair per line, counter-clockwise.
void write_polygon(std::ostream& os, const ConvexPolygon& poly);
ConvexPolygon read_polygon(std::istream& is);
void save_polygon(const std::filesystem::path& path, const ConvexPolygon& poly);
ConvexPolygon load_polygon(const std::filesystem::path& path);

}  // namespace thinlim
