#include "thinlim/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"
#include "thinlim/grid.hpp"

namespace thinlim {

void LaminateSpec::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("laminate weight must lie in [0, 1]");
  if (layers < 1) throw ValidationError("laminate needs at least one layer");
  const Vec2 mean = lambda * z1 + (1.0 - lambda) * z2;
  if (std::abs(mean.x - z.x) > 1e-12 || std::abs(mean.y - z.y) > 1e-12)
    throw ValidationError("laminate phases do not average to the target gradient");
  for (double v : {z.x, z.y, z1.x, z1.y, z2.x, z2.y, zeta1, zeta2})
    if (!std::isfinite(v)) throw ValidationError("laminate data must be finite");
}

NodalField vertical_recovery(const SimplicialMesh& mesh, Vec2 z, double zeta, double epsilon) {
  if (mesh.dim() != 3) throw ValidationError("vertical recovery needs a 3D mesh");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  std::vector<double> u(mesh.num_vertices());
  for (std::size_t v = 0; v < u.size(); ++v) {
    const auto& x = mesh.vertices()[v];
    u[v] = z.x * x[0] + z.y * x[1] + epsilon * zeta * x[2];
  }
  return NodalField(std::move(u));
}

LaminateField laminate_recovery(const LaminateSpec& spec, double epsilon, const SimplicialMesh& mesh) {
  spec.validate();
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const bool three = mesh.dim() == 3;
  const auto& verts = mesh.vertices();
  LaminateField out;
  out.phase.assign(mesh.num_cells(), 1);
  std::vector<double> u(mesh.num_vertices());

  const Vec2 D = spec.z1 - spec.z2;
  const double dn = norm(D);
  if (dn == 0.0 || spec.lambda == 0.0 || spec.lambda == 1.0) {
    const bool first = spec.lambda > 0.0;
    const Vec2 g = first ? spec.z1 : spec.z2;
    const double zeta = first ? spec.zeta1 : spec.zeta2;
    for (std::size_t v = 0; v < u.size(); ++v)
      u[v] = g.x * verts[v][0] + g.y * verts[v][1] + (three ? epsilon * zeta * verts[v][2] : 0.0);
    out.u = NodalField(std::move(u));
    if (!first) std::fill(out.phase.begin(), out.phase.end(), 2);
    out.phase1_fraction = first ? 1.0 : 0.0;
    return out;
  }

  const Vec2 nu{D.x / dn, D.y / dn};
  double smin = kInf, smax = -kInf;
  for (const auto& x : verts) {
    const double s = nu.x * x[0] + nu.y * x[1];
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  const double P = (smax - smin) / static_cast<double>(spec.layers);
  const double lam = spec.lambda;
  double width = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double lo = kInf, hi = -kInf;
    for (int v : mesh.cell(c)) {
      const double s = nu.x * verts[v][0] + nu.y * verts[v][1];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    width = std::max(width, hi - lo);
  }
  const double thin = std::min(lam, 1.0 - lam) * P;
  if (thin < 2.0 * width * (1.0 - 1e-9)) throw ValidationError("layer width too small for mesh resolution");

  // position in periods; psi rises with slope (1-lam)|D| on [0, lam) and
  // falls with slope lam|D| on the rest of each period
  auto period_pos = [&](double s) { return (s - smin) / P; };
  const double tol = 1e-9;
  std::vector<double> tpos(u.size());
  for (std::size_t v = 0; v < u.size(); ++v) {
    const auto& x = verts[v];
    const double t = period_pos(nu.x * x[0] + nu.y * x[1]);
    tpos[v] = t;
    double k = std::floor(t + tol);
    double r = std::max(0.0, t - k);
    const double psi = r <= lam ? (1.0 - lam) * dn * r * P : (1.0 - lam) * dn * lam * P - lam * dn * (r - lam) * P;
    double zeta = spec.zeta2;
    if (std::abs(r - lam) <= tol || r <= tol || r >= 1.0 - tol)
      zeta = 0.5 * (spec.zeta1 + spec.zeta2);
    else if (r < lam)
      zeta = spec.zeta1;
    u[v] = spec.z.x * x[0] + spec.z.y * x[1] + psi + (three ? epsilon * zeta * x[2] : 0.0);
  }
  out.u = NodalField(std::move(u));

  double vol1 = 0.0, vol = 0.0;
  const bool same_zeta = spec.zeta1 == spec.zeta2;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double lo = kInf, hi = -kInf, centre = 0.0;
    const auto cell = mesh.cell(c);
    for (int v : cell) {
      lo = std::min(lo, tpos[v]);
      hi = std::max(hi, tpos[v]);
      centre += tpos[v];
    }
    centre /= static_cast<double>(cell.size());
    bool crosses = false;
    for (double k = std::floor(lo); k <= hi + 1.0 && !crosses; k += 1.0)
      for (double iface : {k, k + lam})
        if (iface > lo + tol && iface < hi - tol) crosses = true;
    const double frac = centre - std::floor(centre);
    const std::uint8_t ph = frac < lam ? 1 : 2;
    bool touches_interface = false;
    if (!same_zeta)
      for (int v : cell) {
        const double r = tpos[v] - std::floor(tpos[v] + tol);
        if (std::abs(r - lam) <= tol || std::abs(r) <= tol) touches_interface = true;
      }
    out.phase[c] = crosses || touches_interface ? 0 : ph;
    vol += mesh.volume(c);
    if (ph == 1) vol1 += mesh.volume(c);
  }
  out.phase1_fraction = vol1 / vol;
  return out;
}

double phase_energy(const Density& W, const SimplicialMesh& mesh, const LaminateField& lam, double epsilon) {
  if (W.dim() != mesh.dim()) throw ValidationError("density dimension does not match the mesh");
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (lam.phase[c] == 0) continue;
    auto g = cell_gradient(mesh, c, lam.u.values());
    if (mesh.dim() == 3) g[2] /= epsilon;
    e = std::max(e, W(std::span<const double>(g.data(), mesh.dim())));
  }
  return e;
}

double max_deviation(const SimplicialMesh& mesh, const NodalField& u, Vec2 z) {
  double m = 0.0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    const auto& x = mesh.vertices()[v];
    m = std::max(m, std::abs(u[v] - (z.x * x[0] + z.y * x[1])));
  }
  return m;
}

MollifiedField mollify(const SimplicialMesh& mesh, const NodalField& u, double eta) {
  if (mesh.dim() != 2 || !mesh.lattice || mesh.lattice->pattern != DiagonalPattern::Uniform)
    throw ValidationError("mollify needs a structured rectangle mesh with the uniform diagonal pattern");
  if (u.size() != mesh.num_vertices()) throw ValidationError("nodal field size does not match the mesh");
  const Lattice& L = *mesh.lattice;
  if (!(eta >= 2.0 * std::max(L.hx, L.hy) * (1.0 - 1e-12)))
    throw ValidationError("mollification radius must span at least two cells");
  const Vec2 hi{L.origin.x + L.hx * static_cast<double>(L.nx), L.origin.y + L.hy * static_cast<double>(L.ny)};
  MollifiedField out{u, erode_domain(ConvexPolygon::box(L.origin, hi), eta), {}, {}, {}};

  struct Tap {
    long di, dj;
  };
  std::vector<Tap> taps;
  const long kx = static_cast<long>(std::ceil(eta / L.hx)), ky = static_cast<long>(std::ceil(eta / L.hy));
  double total = 0.0;
  for (long j = -ky; j <= ky; ++j)
    for (long i = -kx; i <= kx; ++i) {
      const double rx = static_cast<double>(i) * L.hx, ry = static_cast<double>(j) * L.hy;
      const double q = (rx * rx + ry * ry) / (eta * eta);
      if (q >= 1.0) continue;
      taps.push_back({i, j});
      out.weights.push_back((1.0 - q) * (1.0 - q));
      total += out.weights.back();
    }
  for (double& w : out.weights) w /= total;

  const std::size_t stride = L.nx + 1;
  std::vector<double> v(u.values().begin(), u.values().end());
  out.active_vertex.assign(mesh.num_vertices(), 0);
  const double scale = std::max({1.0, std::abs(L.origin.x), std::abs(L.origin.y), std::abs(hi.x), std::abs(hi.y)});
  for (std::size_t j = 0; j <= L.ny; ++j)
    for (std::size_t i = 0; i <= L.nx; ++i) {
      const std::size_t id = j * stride + i;
      const auto& x = mesh.vertices()[id];
      if (!out.domain.contains({x[0], x[1]}, 1e-12 * scale)) continue;
      double acc = 0.0;
      bool inside = true;
      for (std::size_t k = 0; k < taps.size() && inside; ++k) {
        const long ii = static_cast<long>(i) + taps[k].di, jj = static_cast<long>(j) + taps[k].dj;
        if (ii < 0 || jj < 0 || ii > static_cast<long>(L.nx) || jj > static_cast<long>(L.ny)) {
          inside = false;
          break;
        }
        acc += out.weights[k] * u[static_cast<std::size_t>(jj) * stride + static_cast<std::size_t>(ii)];
      }
      if (!inside) continue;
      v[id] = acc;
      out.active_vertex[id] = 1;
    }
  out.u = NodalField(std::move(v));
  out.active_cell.assign(mesh.num_cells(), 0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    bool all = true;
    for (int id : mesh.cell(c)) all = all && out.active_vertex[id];
    out.active_cell[c] = all ? 1 : 0;
  }
  return out;
}

bool density_is_convex(const Density& g, double radius) {
  const int d = g.dim();
  const std::size_t n = d == 1 ? 201 : d == 2 ? 33 : 13;
  const GridFunction s = sample_density(g, Grid::cube(d, -radius, radius, n));
  const Grid& grid = s.grid();
  std::vector<std::array<int, 3>> dirs;
  for (int a = -1; a <= 1; ++a)
    for (int b = d > 1 ? -1 : 0; b <= (d > 1 ? 1 : 0); ++b)
      for (int c = d > 2 ? -1 : 0; c <= (d > 2 ? 1 : 0); ++c) {
        const std::array<int, 3> dir{a, b, c};
        // one representative per +-pair
        const auto first = std::find_if(dir.begin(), dir.end(), [](int v) { return v != 0; });
        if (first != dir.end() && *first > 0) dirs.push_back(dir);
      }
  for (std::size_t f = 0; f < s.size(); ++f) {
    const Index3 idx = grid.unflat(f);
    for (const auto& dir : dirs) {
      Index3 lo = idx, hi = idx;
      bool ok = true;
      for (int a = 0; a < 3 && ok; ++a) {
        const long l = static_cast<long>(idx[a]) - dir[a], h = static_cast<long>(idx[a]) + dir[a];
        ok = l >= 0 && h >= 0 && l < static_cast<long>(grid.counts()[a]) && h < static_cast<long>(grid.counts()[a]);
        lo[a] = static_cast<std::size_t>(l);
        hi[a] = static_cast<std::size_t>(h);
      }
      if (!ok) continue;
      const double gl = s.at(lo), gh = s.at(hi);
      if (is_inf(gl) || is_inf(gh)) continue;
      const double mid = 0.5 * (gl + gh);
      if (s[f] > mid + 1e-9 * (1.0 + std::abs(mid))) return false;
    }
  }
  return true;
}

MollifyEnergyReport mollify_energy_check(const Density& g, const SimplicialMesh& mesh, const NodalField& u, double eta,
                                         double tol) {
  if (g.dim() != 2) throw ValidationError("mollification energy check needs a 2D density");
  if (!density_is_convex(g)) throw ValidationError("density failed the convexity screen");
  const MollifiedField m = mollify(mesh, u, eta);
  MollifyEnergyReport r;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto g0 = cell_gradient(mesh, c, u.values());
    const double e0 = mesh.volume(c) * g(std::span<const double>(g0.data(), 2));
    r.energy_original += e0;
    if (!m.active_cell[c]) continue;
    r.energy_on_eroded += e0;
    const auto g1 = cell_gradient(mesh, c, m.u.values());
    r.energy_mollified += mesh.volume(c) * g(std::span<const double>(g1.data(), 2));
  }
  if (is_inf(r.energy_original)) {
    r.pass = true;
    return r;
  }
  const double base = std::max(r.energy_original, 1e-300);
  r.relative_gap = (r.energy_mollified - r.energy_original) / base;
  r.pass = r.energy_mollified <= r.energy_original + tol * base;
  return r;
}

}  // namespace thinlim
