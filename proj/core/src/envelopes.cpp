#include "thinlim/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "thinlim/error.hpp"
#include "thinlim/geometry.hpp"
#include "thinlim/lattice_hull.hpp"
#include "thinlim/legendre.hpp"
#include "thinlim/small_lp.hpp"

namespace thinlim {

std::string to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::InfProjection: return "inf_projection";
    case EnvelopeKind::Convex: return "convex";
    case EnvelopeKind::Biconjugate: return "biconjugate";
    case EnvelopeKind::LevelConvex: return "level_convex";
  }
  return "convex";
}

EnvelopeKind parse_envelope_kind(const std::string& name) {
  if (name == "inf_projection") return EnvelopeKind::InfProjection;
  if (name == "convex") return EnvelopeKind::Convex;
  if (name == "biconjugate") return EnvelopeKind::Biconjugate;
  if (name == "level_convex") return EnvelopeKind::LevelConvex;
  throw ValidationError("unknown envelope kind: " + name);
}

namespace {

std::vector<double> axis_coords(const Grid& g, int a) {
  std::vector<double> c(g.counts()[a]);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g.coord(a, i);
  return c;
}

// Finite nodes that have a missing (out of box or +inf) axis neighbour. The
// remaining finite nodes are midpoints of set members, so never extreme.
std::vector<std::size_t> rim_nodes(const Grid& grid, const std::vector<std::uint8_t>& in_set) {
  std::vector<std::size_t> out;
  const auto n = grid.counts();
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (!in_set[f]) continue;
    const Index3 idx = grid.unflat(f);
    bool rim = false;
    for (int a = 0; a < grid.dim() && !rim; ++a) {
      if (idx[a] == 0 || idx[a] + 1 == n[a]) {
        rim = true;
        break;
      }
      Index3 lo = idx, hi = idx;
      --lo[a];
      ++hi[a];
      rim = !in_set[grid.flat(lo)] || !in_set[grid.flat(hi)];
    }
    if (rim) out.push_back(f);
  }
  return out;
}

std::vector<std::uint8_t> finite_mask(const GridFunction& g) {
  std::vector<std::uint8_t> m(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = is_inf(g[i]) ? 0 : 1;
  return m;
}

std::vector<std::uint8_t> mask_hull(const Grid& grid, const std::vector<std::uint8_t>& in_set) {
  if (std::all_of(in_set.begin(), in_set.end(), [](std::uint8_t v) { return v != 0; })) return in_set;
  LatticeHull hull(grid);
  for (std::size_t f : rim_nodes(grid, in_set)) hull.insert(f);
  return hull.covered_mask();
}

void require_finite_somewhere(const GridFunction& g) {
  if (!g.any_finite()) throw ValidationError("envelope of an all-infinite grid function");
}

// Lower convex hull of 1D samples by monotone chain; returns hull point indices.
std::vector<std::size_t> lower_chain(const std::vector<double>& x, const std::vector<double>& f,
                                     const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> h;
  for (std::size_t i : ids) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      const double cr = (x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a]);
      if (cr <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  return h;
}

LowerHullLp hull_lp(const GridFunction& g) {
  const Grid& grid = g.grid();
  const int d = grid.dim();
  // Columns: finite samples that are not above the midpoint of two finite
  // axis neighbours (those are never extreme points of the epigraph).
  const auto fin = finite_mask(g);
  std::vector<std::array<double, 3>> pts;
  std::vector<double> costs;
  for (std::size_t f = 0; f < g.size(); ++f) {
    if (!fin[f]) continue;
    const Index3 idx = grid.unflat(f);
    bool dominated = false;
    for (int a = 0; a < d && !dominated; ++a) {
      if (idx[a] == 0 || idx[a] + 1 == grid.counts()[a]) continue;
      Index3 l = idx, r = idx;
      --l[a];
      ++r[a];
      const double gl = g[grid.flat(l)], gr = g[grid.flat(r)];
      if (!is_inf(gl) && !is_inf(gr) && g[f] >= 0.5 * (gl + gr)) dominated = true;
    }
    if (dominated) continue;
    pts.push_back({static_cast<double>(idx[0]), static_cast<double>(idx[1]), static_cast<double>(idx[2])});
    costs.push_back(g[f]);
  }
  return LowerHullLp(d, std::move(pts), std::move(costs));
}

}  // namespace

GridFunction project_inf(const GridFunction& f) {
  const Grid& g = f.grid();
  if (g.dim() < 2) throw ValidationError("project_inf needs a grid of dimension >= 2");
  const Grid out = g.drop_last_axis();
  const std::size_t nz = g.counts()[g.dim() - 1];
  std::vector<double> v(out.size(), kInf);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double m = kInf;
    for (std::size_t k = 0; k < nz; ++k) m = std::min(m, f[c * nz + k]);
    v[c] = m;
  }
  return GridFunction(out, std::move(v));
}

GridFunction biconjugate(const GridFunction& g) {
  require_finite_somewhere(g);
  const Grid& grid = g.grid();
  const int d = grid.dim();
  double lo = kInf, hi = 0.0;
  for (double v : g.values())
    if (!is_inf(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double range = hi > lo ? hi - lo : 1.0;
  ProductSamples primal;
  primal.values.resize(g.size());
  for (int a = 0; a < d; ++a) primal.axes.push_back(axis_coords(grid, a));
  for (std::size_t i = 0; i < g.size(); ++i) primal.values[i] = is_inf(g[i]) ? -kInf : -g[i];

  // Log-spaced slopes: `steps` per octave from about range/diam/256 up to
  // 2^ceil(log2(range/h)), plus 0. Inputs whose range falls in the same
  // octave share the same dual set.
  const int steps = d == 1 ? 32 : d == 2 ? 16 : 6;
  std::vector<std::vector<double>> dual(d);
  for (int a = 0; a < d; ++a) {
    const int emax = static_cast<int>(std::ceil(std::log2(range / grid.spacing()[a])));
    const int octaves = static_cast<int>(std::ceil(std::log2(static_cast<double>(grid.counts()[a])))) + 8;
    std::vector<double> pos;
    for (int e = emax - octaves; e < emax; ++e)
      for (int j = 0; j < steps; ++j) pos.push_back(std::ldexp(1.0 + static_cast<double>(j) / steps, e));
    pos.push_back(std::ldexp(1.0, emax));
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) dual[a].push_back(-*it);
    dual[a].push_back(0.0);
    dual[a].insert(dual[a].end(), pos.begin(), pos.end());
  }
  if (d == 1) {
    std::vector<double> f(g.values().begin(), g.values().end());
    auto extra = lower_hull_slopes(primal.axes[0], f);
    dual[0].insert(dual[0].end(), extra.begin(), extra.end());
    std::sort(dual[0].begin(), dual[0].end());
    dual[0].erase(std::unique(dual[0].begin(), dual[0].end()), dual[0].end());
  }

  ProductSamples gstar = sup_transform(primal, dual);
  for (double& v : gstar.values) v = -v;
  ProductSamples gss = sup_transform(gstar, primal.axes);

  const auto fin = finite_mask(g);
  const auto dom = mask_hull(grid, fin);
  if (d == 2) {
    // Exact dual points: the supporting slopes of the lower hull at every
    // domain node, with g*(s) taken over all finite nodes.
    const LowerHullLp lp = hull_lp(g);
    std::vector<std::array<double, 2>> slopes;
    for (std::size_t f = 0; f < g.size(); ++f) {
      if (!dom[f]) continue;
      const Index3 idx = grid.unflat(f);
      std::array<double, 4> sup;
      if (is_inf(lp.evaluate({static_cast<double>(idx[0]), static_cast<double>(idx[1]), 0.0}, &sup))) continue;
      slopes.push_back({sup[0], sup[1]});
    }
    std::sort(slopes.begin(), slopes.end());
    slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());
    std::vector<std::array<double, 3>> nodes;
    for (std::size_t f = 0; f < g.size(); ++f) {
      if (!fin[f]) continue;
      const Index3 idx = grid.unflat(f);
      nodes.push_back({static_cast<double>(idx[0]), static_cast<double>(idx[1]), g[f]});
    }
    for (const auto& s : slopes) {
      double conj = -kInf;
      for (const auto& n : nodes) conj = std::max(conj, s[0] * n[0] + s[1] * n[1] - n[2]);
      for (std::size_t f = 0; f < g.size(); ++f) {
        if (!dom[f]) continue;
        const Index3 idx = grid.unflat(f);
        gss.values[f] = std::max(gss.values[f], s[0] * static_cast<double>(idx[0]) + s[1] * static_cast<double>(idx[1]) - conj);
      }
    }
  }
  std::vector<double> out(g.size(), kInf);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!dom[i]) continue;
    out[i] = std::clamp(gss.values[i], 0.0, g[i]);
  }
  return GridFunction(grid, std::move(out));
}

GridFunction convex_envelope(const GridFunction& g) {
  require_finite_somewhere(g);
  const Grid& grid = g.grid();
  const int d = grid.dim();
  std::vector<double> out(g.size(), kInf);
  if (d == 1) {
    const auto x = axis_coords(grid, 0);
    std::vector<double> f(g.values().begin(), g.values().end());
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!is_inf(f[i])) ids.push_back(i);
    const auto h = lower_chain(x, f, ids);
    std::size_t k = 0;
    for (std::size_t i = h.front(); i <= h.back(); ++i) {
      while (k + 2 < h.size() && h[k + 1] <= i) ++k;
      if (h.size() == 1 || i == h[k] || i == h[k + 1]) {
        out[i] = f[i];
        continue;
      }
      const std::size_t a = h[k], b = h[k + 1];
      const double t = (x[i] - x[a]) / (x[b] - x[a]);
      out[i] = std::clamp((1.0 - t) * f[a] + t * f[b], 0.0, f[i]);
    }
    return GridFunction(grid, std::move(out));
  }

  const auto fin = finite_mask(g);
  const LowerHullLp lp = hull_lp(g);
  const auto dom = mask_hull(grid, fin);
  for (std::size_t f = 0; f < g.size(); ++f) {
    if (!dom[f]) continue;
    const Index3 idx = grid.unflat(f);
    const double v = lp.evaluate({static_cast<double>(idx[0]), static_cast<double>(idx[1]), static_cast<double>(idx[2])});
    out[f] = is_inf(v) ? g[f] : std::clamp(v, 0.0, g[f]);
  }
  return GridFunction(grid, std::move(out));
}

GridFunction level_convex_envelope(const GridFunction& g) {
  require_finite_somewhere(g);
  const Grid& grid = g.grid();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!is_inf(g[i])) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
  std::vector<double> out(g.size(), kInf);
  LatticeHull hull(grid);
  for (std::size_t node : order) {
    for (std::size_t c : hull.insert(node)) out[c] = g[node];
  }
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::min(out[i], g[i]);
  return GridFunction(grid, std::move(out));
}

GridFunction compute_envelope(const GridFunction& g, EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::InfProjection: return project_inf(g);
    case EnvelopeKind::Convex: return convex_envelope(g);
    case EnvelopeKind::Biconjugate: return biconjugate(g);
    case EnvelopeKind::LevelConvex: return level_convex_envelope(g);
  }
  return g;
}

EnvelopeReport envelope_report(const GridFunction& g, EnvelopeKind kind) {
  EnvelopeReport r;
  r.input = g;
  r.kind = kind;
  r.output = compute_envelope(g, kind);
  const Grid& grid = r.output.grid();
  const auto& out = r.output;
  r.violation.assign(out.size(), 0.0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    double viol = 0.0;
    if (kind == EnvelopeKind::InfProjection) {
      const std::size_t nz = g.grid().counts()[g.grid().dim() - 1];
      double m = kInf;
      for (std::size_t k = 0; k < nz; ++k) m = std::min(m, g[f * nz + k]);
      if (out[f] != m) viol = is_inf(out[f]) || is_inf(m) ? kInf : std::abs(out[f] - m);
    } else {
      if (!is_inf(g[f]) && out[f] > g[f]) viol = out[f] - g[f];
      const Index3 idx = grid.unflat(f);
      for (int a = 0; a < grid.dim(); ++a) {
        if (idx[a] == 0 || idx[a] + 1 == grid.counts()[a]) continue;
        Index3 l = idx, rr = idx;
        --l[a];
        ++rr[a];
        const double ol = out[grid.flat(l)], orr = out[grid.flat(rr)];
        if (is_inf(ol) || is_inf(orr)) continue;
        const double bound = kind == EnvelopeKind::LevelConvex ? std::max(ol, orr) : 0.5 * (ol + orr);
        if (out[f] > bound) viol = std::max(viol, out[f] - bound);
      }
    }
    r.violation[f] = viol;
    r.max_violation = std::max(r.max_violation, viol);
  }
  return r;
}

void write_envelope_csv(std::ostream& os, const EnvelopeReport& report) {
  os << "node,input,output,violation\n";
  os.precision(17);
  const bool proj = report.kind == EnvelopeKind::InfProjection;
  for (std::size_t f = 0; f < report.output.size(); ++f) {
    const double in = proj ? report.output[f] : report.input[f];
    os << f << ',' << in << ',' << report.output[f] << ',' << report.violation[f] << '\n';
  }
}

SublevelSet sublevel_hull(const GridFunction& g, double t) {
  SublevelSet s;
  s.level = t;
  const Grid& grid = g.grid();
  s.dim = grid.dim();
  for (std::size_t f = 0; f < g.size(); ++f)
    if (g[f] <= t) s.points.push_back(f);
  if (s.points.empty()) return s;
  if (s.dim == 1) {
    s.hull = {grid.point(s.points.front()), grid.point(s.points.back())};
  } else if (s.dim == 2) {
    std::vector<Vec2> p;
    for (std::size_t f : s.points) {
      const Point3 q = grid.point(f);
      p.push_back({q[0], q[1]});
    }
    for (const Vec2& v : convex_hull(std::move(p))) s.hull.push_back({v.x, v.y, 0.0});
  } else {
    LatticeHull hull(grid);
    std::vector<std::uint8_t> in(g.size(), 0);
    for (std::size_t f : s.points) in[f] = 1;
    for (std::size_t f : rim_nodes(grid, in)) hull.insert(f);
    for (std::size_t f : hull.vertex_nodes()) s.hull.push_back(grid.point(f));
  }
  return s;
}

GridFunction indicator_of_sublevel(const GridFunction& W, double M) {
  if (std::isnan(M)) throw ValidationError("sublevel bound is NaN");
  if (M < W.min_value()) throw EmptyDomainError("sublevel set is empty (M below min W)");
  std::vector<double> v(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) v[i] = (is_inf(M) || W[i] <= M) ? 0.0 : kInf;
  return GridFunction(W.grid(), std::move(v));
}

std::vector<std::uint8_t> hull_mask(const Grid& grid, const std::vector<std::size_t>& nodes) {
  std::vector<std::uint8_t> in(grid.size(), 0);
  for (std::size_t f : nodes) in[f] = 1;
  if (nodes.empty()) return in;
  return mask_hull(grid, in);
}

std::size_t convex_position_defect(const Grid& grid, const std::vector<std::size_t>& nodes) {
  const auto m = hull_mask(grid, nodes);
  std::vector<std::uint8_t> in(grid.size(), 0);
  for (std::size_t f : nodes) in[f] = 1;
  std::size_t n = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] && !in[i]) ++n;
  return n;
}

std::size_t level_convexity_defect(const GridFunction& g, double tol) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!is_inf(g[i])) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
  LatticeHull hull(g.grid());
  std::size_t defects = 0;
  for (std::size_t node : order) {
    const double t = g[node];
    for (std::size_t c : hull.insert(node))
      if (g[c] > t + tol * (1.0 + t)) ++defects;
  }
  return defects;
}

Coercivity validate_coercivity(const GridFunction& W) {
  const Grid& grid = W.grid();
  struct Sample {
    double r, ratio;
  };
  std::vector<Sample> s;
  for (std::size_t f = 0; f < W.size(); ++f) {
    if (is_inf(W[f])) continue;
    const Point3 p = grid.point(f);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += p[a] * p[a];
    if (r2 <= 0.0) continue;
    const double r = std::sqrt(r2);
    s.push_back({r, W[f] / r});
  }
  Coercivity c;
  if (s.empty()) {
    c.constant = kInf;
    return c;
  }
  double r0 = kInf, all = kInf;
  for (const auto& q : s) {
    r0 = std::min(r0, q.r);
    all = std::min(all, q.ratio);
  }
  c.constant = all;
  double inner = kInf, outer = kInf;
  for (const auto& q : s) {
    if (q.r <= 1.5 * r0) inner = std::min(inner, q.ratio);
    if (q.r >= 4.0 * r0) outer = std::min(outer, q.ratio);
  }
  c.fails_near_origin = inner == all && !is_inf(outer) && inner < 0.5 * outer;
  double R = kInf;
  const Point3 up = grid.upper();
  for (int a = 0; a < grid.dim(); ++a) R = std::min({R, up[a], -grid.origin()[a]});
  c.far_constant = kInf;
  for (const auto& q : s)
    if (q.r >= 0.5 * R) c.far_constant = std::min(c.far_constant, q.ratio);
  return c;
}

std::vector<std::uint8_t> guard_band(const GridFunction& envelope, double coercivity) {
  const Grid& grid = envelope.grid();
  double R = kInf;
  const Point3 up = grid.upper();
  for (int a = 0; a < grid.dim(); ++a) R = std::min({R, up[a], -grid.origin()[a]});
  R = std::max(R, 0.0);
  auto outside = [&](double t) { return coercivity > 0.0 ? t / coercivity > R : t > 0.0; };
  const bool inf_flag = envelope.any_finite() && outside(envelope.max_finite());
  std::vector<std::uint8_t> band(envelope.size(), 0);
  for (std::size_t f = 0; f < envelope.size(); ++f)
    band[f] = is_inf(envelope[f]) ? inf_flag : outside(envelope[f]);
  return band;
}

}  // namespace thinlim
