#include "thinlim/lattice_hull.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>
#include <numeric>

namespace thinlim {

namespace {

using P = LatticeHull::P;
using i64 = std::int64_t;

P sub(const P& a, const P& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
P crossp(const P& u, const P& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}
i64 dotp(const P& u, const P& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
bool is_zero(const P& u) { return u[0] == 0 && u[1] == 0 && u[2] == 0; }

i64 orient3d(const P& a, const P& b, const P& c, const P& d) { return dotp(crossp(sub(b, a), sub(c, a)), sub(d, a)); }

// 2D orientation of (a, b, c) after dropping `axis`
i64 orient2d(const P& a, const P& b, const P& c, int axis) {
  const int u = axis == 0 ? 1 : 0;
  const int v = axis == 2 ? 1 : 2;
  return (b[u] - a[u]) * (c[v] - a[v]) - (b[v] - a[v]) * (c[u] - a[u]);
}

int dominant_axis(const P& n) {
  int ax = 0;
  for (int a = 1; a < 3; ++a)
    if (std::llabs(n[a]) > std::llabs(n[ax])) ax = a;
  return ax;
}

}  // namespace

LatticeHull::LatticeHull(const Grid& grid) : grid_(grid), covered_(grid.size(), 0) {
  for (int a = 0; a < 3; ++a) counts_[a] = static_cast<i64>(grid.counts()[a]);
}

std::size_t LatticeHull::flat(const P& p) const {
  return grid_.flat({static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1]), static_cast<std::size_t>(p[2])});
}

LatticeHull::P LatticeHull::point_of(std::size_t node) const {
  const Index3 i = grid_.unflat(node);
  return {static_cast<i64>(i[0]), static_cast<i64>(i[1]), static_cast<i64>(i[2])};
}

void LatticeHull::cover(const P& p, std::vector<std::size_t>& out) {
  const std::size_t f = flat(p);
  if (!covered_[f]) {
    covered_[f] = 1;
    out.push_back(f);
  }
}

void LatticeHull::cover_segment(const P& a, const P& b, std::vector<std::size_t>& out) {
  const P d = sub(b, a);
  const i64 g = std::gcd(std::gcd(std::llabs(d[0]), std::llabs(d[1])), std::llabs(d[2]));
  if (g == 0) {
    cover(a, out);
    return;
  }
  const P step{d[0] / g, d[1] / g, d[2] / g};
  for (i64 k = 0; k <= g; ++k) cover({a[0] + k * step[0], a[1] + k * step[1], a[2] + k * step[2]}, out);
}

void LatticeHull::cover_triangle(const P& a, const P& b, const P& c, std::vector<std::size_t>& out) {
  const P n = crossp(sub(b, a), sub(c, a));
  if (is_zero(n)) {
    // degenerate: cover the longest edge
    cover_segment(a, b, out);
    cover_segment(b, c, out);
    cover_segment(a, c, out);
    return;
  }
  const int ax = dominant_axis(n);
  const i64 o = orient2d(a, b, c, ax);
  P lo, hi;
  for (int k = 0; k < 3; ++k) {
    lo[k] = std::min({a[k], b[k], c[k]});
    hi[k] = std::max({a[k], b[k], c[k]});
  }
  const i64 rhs = dotp(n, a);
  P p;
  for (p[0] = lo[0]; p[0] <= hi[0]; ++p[0])
    for (p[1] = lo[1]; p[1] <= hi[1]; ++p[1]) {
      if (ax == 2) {
        // solve the plane for the third coordinate
        const i64 num = rhs - n[0] * p[0] - n[1] * p[1];
        if (num % n[2] != 0) continue;
        p[2] = num / n[2];
        if (p[2] < lo[2] || p[2] > hi[2]) continue;
        const i64 s1 = orient2d(a, b, p, ax), s2 = orient2d(b, c, p, ax), s3 = orient2d(c, a, p, ax);
        const bool in = o > 0 ? (s1 >= 0 && s2 >= 0 && s3 >= 0) : (s1 <= 0 && s2 <= 0 && s3 <= 0);
        if (in) cover(p, out);
        continue;
      }
      for (p[2] = lo[2]; p[2] <= hi[2]; ++p[2]) {
        if (dotp(n, p) != rhs) continue;
        const i64 s1 = orient2d(a, b, p, ax), s2 = orient2d(b, c, p, ax), s3 = orient2d(c, a, p, ax);
        const bool in = o > 0 ? (s1 >= 0 && s2 >= 0 && s3 >= 0) : (s1 <= 0 && s2 <= 0 && s3 <= 0);
        if (in) cover(p, out);
      }
    }
}

void LatticeHull::cover_tetra(const P& a, const P& b, const P& c, const P& d, std::vector<std::size_t>& out) {
  const i64 o = orient3d(a, b, c, d);
  if (o == 0) {
    cover_triangle(a, b, c, out);
    cover_triangle(a, b, d, out);
    cover_triangle(a, c, d, out);
    cover_triangle(b, c, d, out);
    return;
  }
  P lo, hi;
  for (int k = 0; k < 3; ++k) {
    lo[k] = std::min({a[k], b[k], c[k], d[k]});
    hi[k] = std::max({a[k], b[k], c[k], d[k]});
  }
  const int sgn = o > 0 ? 1 : -1;
  P p;
  for (p[0] = lo[0]; p[0] <= hi[0]; ++p[0])
    for (p[1] = lo[1]; p[1] <= hi[1]; ++p[1])
      for (p[2] = lo[2]; p[2] <= hi[2]; ++p[2]) {
        if (covered_[flat(p)]) continue;
        // p inside iff replacing each vertex by p keeps the orientation sign (or zero)
        if (sgn * orient3d(p, b, c, d) < 0) continue;
        if (sgn * orient3d(a, p, c, d) < 0) continue;
        if (sgn * orient3d(a, b, p, d) < 0) continue;
        if (sgn * orient3d(a, b, c, p) < 0) continue;
        cover(p, out);
      }
}

std::vector<std::size_t> LatticeHull::insert(std::size_t node) {
  std::vector<std::size_t> out;
  if (covered_[node]) return out;
  const P q = point_of(node);
  switch (phase_) {
    case -1:
      pts_ = {q};
      phase_ = 0;
      cover(q, out);
      break;
    case 0:
      pts_ = {pts_[0], q};
      phase_ = 1;
      cover_segment(pts_[0], q, out);
      break;
    case 1:
      insert_collinear(q, out);
      break;
    case 2:
      insert_planar(q, out);
      break;
    default:
      insert_3d(q, out);
      break;
  }
  return out;
}

void LatticeHull::insert_collinear(const P& q, std::vector<std::size_t>& out) {
  const P a = pts_[0];
  const P b = pts_[1];
  if (!is_zero(crossp(sub(b, a), sub(q, a)))) {
    // becomes a triangle
    normal_ = crossp(sub(b, a), sub(q, a));
    drop_axis_ = dominant_axis(normal_);
    std::vector<P> poly{a, b, q};
    if (orient2d(a, b, q, drop_axis_) < 0) std::swap(poly[1], poly[2]);
    pts_ = poly;
    phase_ = 2;
    cover_triangle(a, b, q, out);
    return;
  }
  const i64 t = dotp(sub(q, a), sub(b, a));
  const i64 len = dotp(sub(b, a), sub(b, a));
  if (t < 0) {
    cover_segment(q, a, out);
    pts_[0] = q;
  } else if (t > len) {
    cover_segment(b, q, out);
    pts_[1] = q;
  }
}

void LatticeHull::insert_planar(const P& q, std::vector<std::size_t>& out) {
  if (dotp(normal_, sub(q, pts_[0])) != 0) {
    lift_to_3d(q, out);
    return;
  }
  // CCW polygon in the projected plane; visible edges have q strictly right
  const std::size_t n = pts_.size();
  std::vector<char> vis(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (orient2d(pts_[i], pts_[(i + 1) % n], q, drop_axis_) < 0) {
      vis[i] = 1;
      any = true;
    }
  }
  if (!any) return;
  for (std::size_t i = 0; i < n; ++i)
    if (vis[i]) cover_triangle(pts_[i], pts_[(i + 1) % n], q, out);
  // visible edges form one contiguous chain [first, last]
  std::size_t first = 0;
  while (!(vis[first] && !vis[(first + n - 1) % n])) first = (first + 1) % n;
  std::size_t last = first;
  while (vis[(last + 1) % n]) last = (last + 1) % n;
  std::vector<P> poly;
  // keep vertices from end of chain (last+1) around to start (first), then q
  for (std::size_t i = (last + 1) % n;; i = (i + 1) % n) {
    poly.push_back(pts_[i]);
    if (i == first) break;
  }
  poly.push_back(q);
  pts_ = std::move(poly);
}

void LatticeHull::lift_to_3d(const P& q, std::vector<std::size_t>& out) {
  std::vector<P> base;
  const std::size_t m = pts_.size();
  for (std::size_t i = 0; i < m; ++i)
    if (orient2d(pts_[(i + m - 1) % m], pts_[i], pts_[(i + 1) % m], drop_axis_) != 0) base.push_back(pts_[i]);
  pts_ = base;
  pts_.push_back(q);
  const int apex = static_cast<int>(pts_.size()) - 1;
  const int nb = static_cast<int>(base.size());
  faces_.clear();
  edge_owner_.clear();
  live_.clear();
  auto oriented_face = [&](int a, int b, int c, const P& inside) {
    if (orient3d(pts_[a], pts_[b], pts_[c], inside) > 0) std::swap(b, c);
    add_face(a, b, c);
  };
  // base fan, oriented away from the apex
  for (int i = 1; i + 1 < nb; ++i) {
    oriented_face(0, i, i + 1, q);
    cover_tetra(base[0], base[i], base[i + 1], q, out);
  }
  // an interior reference for the side faces: a base vertex off the edge
  for (int i = 0; i < nb; ++i) {
    const int j = (i + 1) % nb;
    const int k = (i + 2) % nb;
    oriented_face(i, j, apex, base[k]);
  }
  phase_ = 3;
}

void LatticeHull::add_face(int a, int b, int c) {
  const int f = static_cast<int>(faces_.size());
  faces_.push_back({a, b, c, true});
  edge_owner_[edge_key(a, b)] = f;
  edge_owner_[edge_key(b, c)] = f;
  edge_owner_[edge_key(c, a)] = f;
  live_.push_back(f);
}

void LatticeHull::insert_3d(const P& q, std::vector<std::size_t>& out) {
  std::vector<int> visible;
  std::vector<int> still_live;
  still_live.reserve(live_.size());
  for (int f : live_) {
    const Face& F = faces_[f];
    if (!F.alive) continue;
    still_live.push_back(f);
    if (orient3d(pts_[F.a], pts_[F.b], pts_[F.c], q) > 0) visible.push_back(f);
  }
  live_ = std::move(still_live);
  if (visible.empty()) return;
  for (int f : visible) faces_[f].alive = false;
  pts_.push_back(q);
  const int qi = static_cast<int>(pts_.size()) - 1;
  std::vector<std::array<int, 2>> horizon;
  for (int f : visible) {
    const Face F = faces_[f];
    cover_tetra(pts_[F.a], pts_[F.b], pts_[F.c], q, out);
    const int e[3][2] = {{F.a, F.b}, {F.b, F.c}, {F.c, F.a}};
    for (const auto& ed : e) {
      auto it = edge_owner_.find(edge_key(ed[1], ed[0]));
      if (it != edge_owner_.end() && faces_[it->second].alive) horizon.push_back({ed[0], ed[1]});
    }
  }
  for (int f : visible) {
    const Face& F = faces_[f];
    for (auto key : {edge_key(F.a, F.b), edge_key(F.b, F.c), edge_key(F.c, F.a)}) {
      auto it = edge_owner_.find(key);
      if (it != edge_owner_.end() && it->second == f) edge_owner_.erase(it);
    }
  }
  for (const auto& h : horizon) add_face(h[0], h[1], qi);
}

std::vector<std::size_t> LatticeHull::vertex_nodes() const {
  std::vector<std::size_t> out;
  if (phase_ < 3) {
    for (const P& p : pts_) out.push_back(flat(p));
  } else {
    std::vector<char> used(pts_.size(), 0);
    for (const Face& F : faces_)
      if (F.alive) used[F.a] = used[F.b] = used[F.c] = 1;
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (used[i]) out.push_back(flat(pts_[i]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace thinlim
