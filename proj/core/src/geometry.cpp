#include "thinlim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "thinlim/error.hpp"

namespace thinlim {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

double loop_scale(std::span<const Vec2> pts) {
  double s = 0.0;
  for (Vec2 p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return std::max(s, 1.0);
}

double signed_area(std::span<const Vec2> v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

// Removes vertices with turn <= tol one at a time, so a cluster of
// near-duplicates collapses to a single corner.
void drop_flat_vertices(std::vector<Vec2>& v, double tol) {
  for (bool changed = true; changed && v.size() >= 3;) {
    changed = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (orient(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) <= tol) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  const double scale = loop_scale(vertices);
  const double tol = 1e-12 * scale * scale;
  if (signed_area(vertices) <= tol) throw ValidationError("polygon must be counter-clockwise with positive area");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    if (orient(vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]) < -tol)
      throw ValidationError("polygon is not convex");
  drop_flat_vertices(vertices, tol);
  if (vertices.size() < 3) throw ValidationError("polygon is degenerate");
  vertices_ = std::move(vertices);
  // a convex loop winds once: total turning must stay below a full turn
  double winding = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2 a = vertices_[i], b = vertices_[(i + 1) % vertices_.size()], c = vertices_[(i + 2) % vertices_.size()];
    winding += std::atan2(cross(b - a, c - b), dot(b - a, c - b));
  }
  if (winding > 2.0 * std::numbers::pi + 1e-6) throw ValidationError("polygon is self-intersecting");
}

ConvexPolygon ConvexPolygon::box(Vec2 lo, Vec2 hi) {
  return ConvexPolygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

ConvexPolygon ConvexPolygon::regular(int sides, Vec2 center, double r) {
  std::vector<Vec2> v;
  for (int k = 0; k < sides; ++k) {
    const double th = 2.0 * std::numbers::pi * k / sides;
    v.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
  }
  return ConvexPolygon(std::move(v));
}

double ConvexPolygon::area() const { return signed_area(vertices_); }

Vec2 ConvexPolygon::centroid() const {
  double a = 0.0;
  Vec2 c{};
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2 p = vertices_[i], q = vertices_[(i + 1) % vertices_.size()];
    const double w = cross(p, q);
    a += w;
    c = c + w * (p + q);
  }
  return c / (3.0 * a);
}

double ConvexPolygon::diameter() const {
  double d = 0.0;
  for (Vec2 p : vertices_)
    for (Vec2 q : vertices_) d = std::max(d, norm(p - q));
  return d;
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
    const double len = norm(b - a);
    if (cross(b - a, p - a) < -tol * len) return false;
  }
  return true;
}

double ConvexPolygon::distance_to_boundary(Vec2 p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const HalfPlane& hp : half_planes()) d = std::min(d, hp.offset - dot(hp.normal, p));
  return d;
}

double ConvexPolygon::inradius() const {
  // largest inscribed disk: maximize r s.t. offset_i - n_i.c >= r. A small 2D
  // LP; solved by checking all vertex-candidate triples of edge lines.
  const auto hps = half_planes();
  double best = 0.0;
  const std::size_t m = hps.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        // solve n_l.c + r = offset_l for l in {i,j,k}
        const HalfPlane* h[3] = {&hps[i], &hps[j], &hps[k]};
        double A[3][4];
        for (int r = 0; r < 3; ++r) {
          A[r][0] = h[r]->normal.x;
          A[r][1] = h[r]->normal.y;
          A[r][2] = 1.0;
          A[r][3] = h[r]->offset;
        }
        bool singular = false;
        for (int c = 0; c < 3 && !singular; ++c) {
          int piv = c;
          for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
          if (std::abs(A[piv][c]) < 1e-14) {
            singular = true;
            break;
          }
          for (int q = 0; q < 4; ++q) std::swap(A[c][q], A[piv][q]);
          for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (int q = 0; q < 4; ++q) A[r][q] -= f * A[c][q];
          }
        }
        if (singular) continue;
        const Vec2 c{A[0][3] / A[0][0], A[1][3] / A[1][1]};
        const double r = A[2][3] / A[2][2];
        if (r <= best) continue;
        bool ok = true;
        for (const HalfPlane& hp : hps)
          if (hp.offset - dot(hp.normal, c) < r - 1e-12) ok = false;
        if (ok) best = r;
      }
  return best;
}

std::vector<HalfPlane> ConvexPolygon::half_planes() const {
  std::vector<HalfPlane> out;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = norm(e);
    const Vec2 outward{e.y / len, -e.x / len};
    out.push_back({outward, dot(outward, a)});
  }
  return out;
}

void ConvexPolygon::bounding_box(Vec2& lo, Vec2& hi) const {
  lo = hi = vertices_.front();
  for (Vec2 p : vertices_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
}

std::vector<Vec2> clip_half_plane(std::span<const Vec2> poly, const HalfPlane& hp) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % n];
    const double dp = dot(hp.normal, p) - hp.offset;
    const double dq = dot(hp.normal, q) - hp.offset;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  std::vector<Vec2> cur(a.vertices().begin(), a.vertices().end());
  for (const HalfPlane& hp : b.half_planes()) {
    cur = clip_half_plane(cur, hp);
    if (cur.size() < 3) return std::nullopt;
  }
  // drop near-duplicate points introduced by clipping through vertices
  std::vector<Vec2> hull = convex_hull(cur);
  if (hull.size() < 3) return std::nullopt;
  const double scale = loop_scale(hull);
  const double tol = 1e-12 * scale * scale;
  if (signed_area(hull) <= tol) return std::nullopt;
  drop_flat_vertices(hull, tol);
  if (hull.size() < 3) return std::nullopt;
  return ConvexPolygon(std::move(hull));
}

ConvexPolygon erode_domain(const ConvexPolygon& omega, double eta) {
  if (!(eta > 0.0)) throw ValidationError("erosion distance must be positive");
  if (eta >= omega.inradius() - 1e-12) throw EmptyDomainError("eroded domain is empty");
  std::vector<Vec2> cur(omega.vertices().begin(), omega.vertices().end());
  for (HalfPlane hp : omega.half_planes()) {
    hp.offset -= eta;
    cur = clip_half_plane(cur, hp);
    if (cur.size() < 3) throw EmptyDomainError("eroded domain is empty");
  }
  std::vector<Vec2> hull = convex_hull(cur);
  const double scale = loop_scale(hull);
  if (hull.size() < 3 || signed_area(hull) <= 1e-12 * scale * scale) throw EmptyDomainError("eroded domain is empty");
  return ConvexPolygon(std::move(hull));
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool hull_contains(std::span<const Vec2> hull, Vec2 p, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return norm(p - hull[0]) <= tol;
  if (hull.size() == 2) {
    const Vec2 a = hull[0], b = hull[1];
    const double len = norm(b - a);
    if (std::abs(cross(b - a, p - a)) > tol * len) return false;
    const double t = dot(p - a, b - a) / (len * len);
    return t >= -tol / len && t <= 1.0 + tol / len;
  }
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = hull[i], b = hull[(i + 1) % n];
    if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
  }
  return true;
}

void write_polygon(std::ostream& os, const ConvexPolygon& poly) {
  os << std::setprecision(17);
  for (Vec2 v : poly.vertices()) os << v.x << ' ' << v.y << '\n';
}

ConvexPolygon read_polygon(std::istream& is) {
  std::vector<Vec2> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Vec2 p;
    if (!(ls >> p.x >> p.y)) throw IoError("polygon file: expected `x y` per line");
    v.push_back(p);
  }
  try {
    return ConvexPolygon(std::move(v));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("polygon file: ") + e.what());
  }
}

void save_polygon(const std::filesystem::path& path, const ConvexPolygon& poly) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_polygon(os, poly);
}

ConvexPolygon load_polygon(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_polygon(is);
}

}  // namespace thinlim
