#include "thinlim/identity_checks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "thinlim/envelopes.hpp"
#include "thinlim/error.hpp"

namespace thinlim {

namespace {

constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();

// Chebyshev (king-move) index distance to the nearest node of `mask`.
std::vector<std::size_t> chebyshev_distance(const Grid& grid, const std::vector<std::uint8_t>& mask) {
  std::vector<std::size_t> dist(grid.size(), kFar);
  std::deque<std::size_t> queue;
  for (std::size_t f = 0; f < grid.size(); ++f)
    if (mask[f]) {
      dist[f] = 0;
      queue.push_back(f);
    }
  const int d = grid.dim();
  const auto n = grid.counts();
  while (!queue.empty()) {
    const std::size_t f = queue.front();
    queue.pop_front();
    const Index3 idx = grid.unflat(f);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = d > 1 ? -1 : 0; dy <= (d > 1 ? 1 : 0); ++dy)
        for (int dz = d > 2 ? -1 : 0; dz <= (d > 2 ? 1 : 0); ++dz) {
          const long q[3] = {static_cast<long>(idx[0]) + dx, static_cast<long>(idx[1]) + dy,
                             static_cast<long>(idx[2]) + dz};
          bool inside = true;
          for (int a = 0; a < 3; ++a) inside = inside && q[a] >= 0 && q[a] < static_cast<long>(n[a]);
          if (!inside) continue;
          const std::size_t g = grid.flat({static_cast<std::size_t>(q[0]), static_cast<std::size_t>(q[1]),
                                           static_cast<std::size_t>(q[2])});
          if (dist[g] != kFar) continue;
          dist[g] = dist[f] + 1;
          queue.push_back(g);
        }
  }
  return dist;
}

double deviation(double a, double b) {
  if (is_inf(a) && is_inf(b)) return 0.0;
  if (is_inf(a) || is_inf(b)) return kInf;
  return std::abs(a - b);
}

}  // namespace

SetComparison compare_node_sets(const Grid& grid, const std::vector<std::uint8_t>& lhs,
                                const std::vector<std::uint8_t>& rhs) {
  SetComparison c;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    c.lhs_count += lhs[f] ? 1 : 0;
    c.rhs_count += rhs[f] ? 1 : 0;
    c.symmetric_difference += (lhs[f] != 0) != (rhs[f] != 0) ? 1 : 0;
  }
  if (c.symmetric_difference == 0) return c;
  const auto to_lhs = chebyshev_distance(grid, lhs);
  const auto to_rhs = chebyshev_distance(grid, rhs);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (lhs[f] && !rhs[f]) c.max_layer = std::max(c.max_layer, to_rhs[f]);
    if (rhs[f] && !lhs[f]) c.max_layer = std::max(c.max_layer, to_lhs[f]);
  }
  return c;
}

IndicatorIdentityReport check_indicator_identity(const GridFunction& W, double M) {
  if (W.grid().dim() != 3) throw ValidationError("indicator identity needs a 3D density");
  IndicatorIdentityReport r;
  const Coercivity c = validate_coercivity(W);
  if (!(c.constant > 0.0)) throw ValidationError("coercivity validation failed (W >= C|xi| needs C > 0)");
  r.coercivity = c.constant;
  r.lhs = level_convex_envelope(project_inf(W));
  r.rhs = biconjugate(project_inf(indicator_of_sublevel(W, M)));
  std::vector<std::uint8_t> a(r.lhs.size()), b(r.rhs.size());
  for (std::size_t f = 0; f < a.size(); ++f) {
    a[f] = r.lhs[f] <= M ? 1 : 0;
    b[f] = r.rhs[f] == 0.0 ? 1 : 0;
  }
  r.sets = compare_node_sets(r.lhs.grid(), a, b);
  r.pass = r.sets.max_layer <= 1;
  return r;
}

CommutationReport check_commutation(const GridFunction& W) {
  if (W.grid().dim() != 3) throw ValidationError("commutation check needs a 3D density");
  CommutationReport r;
  r.lhs = level_convex_envelope(project_inf(W));
  r.rhs = project_inf(level_convex_envelope(W));
  r.h = W.grid().min_spacing();
  const Coercivity c = validate_coercivity(W);
  const auto band = guard_band(r.lhs, c.constant);
  for (std::size_t f = 0; f < r.lhs.size(); ++f) {
    const double dv = deviation(r.lhs[f], r.rhs[f]);
    r.max_deviation = std::max(r.max_deviation, dv);
    if (!band[f]) r.interior_deviation = std::max(r.interior_deviation, dv);
  }
  return r;
}

EqualityRegionReport check_envelope_equality_region(const GridFunction& g) {
  EqualityRegionReport r;
  const Grid& grid = g.grid();
  const GridFunction co = convex_envelope(g);
  const GridFunction bb = biconjugate(g);
  std::vector<std::size_t> dom;
  for (std::size_t f = 0; f < g.size(); ++f)
    if (!is_inf(g[f])) dom.push_back(f);
  const auto hull = hull_mask(grid, dom);
  // outside-of-hull distance; box-boundary nodes count as touching the outside
  std::vector<std::uint8_t> outside(grid.size());
  for (std::size_t f = 0; f < grid.size(); ++f) outside[f] = hull[f] ? 0 : 1;
  const auto to_out = chebyshev_distance(grid, outside);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const double dv = deviation(co[f], bb[f]);
    if (!hull[f]) {
      ++r.exterior_nodes;
      r.exterior_deviation = std::max(r.exterior_deviation, dv);
      continue;
    }
    const Index3 idx = grid.unflat(f);
    bool on_box = false;
    for (int a = 0; a < grid.dim(); ++a) on_box = on_box || idx[a] == 0 || idx[a] + 1 == grid.counts()[a];
    if (!on_box && to_out[f] >= 2) {
      ++r.interior_nodes;
      r.interior_deviation = std::max(r.interior_deviation, dv);
    } else {
      r.boundary_deviation = std::max(r.boundary_deviation, dv);
    }
  }
  return r;
}

DomainIdentityReport check_domain_identities(const GridFunction& f) {
  if (f.grid().dim() < 2) throw ValidationError("domain identities need a grid of dimension >= 2");
  DomainIdentityReport r;
  const Grid& grid = f.grid();
  const GridFunction f0 = project_inf(f);
  const Grid& base = f0.grid();
  const std::size_t nz = grid.counts()[grid.dim() - 1];

  std::vector<std::uint8_t> proj(base.size(), 0);
  std::vector<std::size_t> dom;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!is_inf(f[k])) {
      proj[k / nz] = 1;
      dom.push_back(k);
    }
  r.projection_exact = true;
  for (std::size_t c = 0; c < base.size(); ++c)
    if ((proj[c] != 0) == is_inf(f0[c])) r.projection_exact = false;

  const auto hull = hull_mask(grid, dom);
  std::vector<std::uint8_t> proj_hull(base.size(), 0);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (hull[k]) proj_hull[k / nz] = 1;
  const GridFunction bb = biconjugate(f0);
  const auto dist = chebyshev_distance(base, proj_hull);
  for (std::size_t c = 0; c < base.size(); ++c) {
    if (proj_hull[c] && is_inf(bb[c])) ++r.missing_from_biconjugate;
    if (!is_inf(bb[c]) && dist[c] > 1) ++r.beyond_one_layer;
  }
  return r;
}

}  // namespace thinlim
