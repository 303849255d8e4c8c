#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thinlim/envelopes.hpp"
#include "thinlim/experiment.hpp"
#include "thinlim/extended_real.hpp"
#include "thinlim/identity_checks.hpp"
#include "thinlim/maxmin.hpp"
#include "thinlim/recovery.hpp"
#include "thinlim/solver.hpp"

namespace fs = std::filesystem;
using namespace thinlim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridFunction grid_sample(int dim, double lo, double hi, std::size_t n, const std::function<double(const Point3&)>& fn) {
  const Grid grid = Grid::cube(dim, lo, hi, n);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
  return GridFunction(grid, std::move(v));
}

double tol_for(double v) { return 1e-9 * (1.0 + (is_inf(v) ? 0.0 : std::abs(v))); }

bool below(const GridFunction& a, const GridFunction& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_inf(b[i])) continue;
    if (is_inf(a[i]) || a[i] > b[i] + tol_for(b[i])) return false;
  }
  return true;
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_inf(a[i]) && is_inf(b[i])) continue;
    if (is_inf(a[i]) || is_inf(b[i])) return kInf;
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

// lower convex hull of (x_i, f_i) by monotone chain, evaluated at the nodes
std::vector<double> hull_oracle(const std::vector<double>& x, const std::vector<double>& f) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      if ((x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a]) <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (k + 1 < h.size() && h[k + 1] < i) ++k;
    if (k + 1 >= h.size()) {
      out[i] = f[h[k]];
      continue;
    }
    const std::size_t a = h[k], b = h[k + 1];
    const double t = (x[i] - x[a]) / (x[b] - x[a]);
    out[i] = (1.0 - t) * f[a] + t * f[b];
  }
  return out;
}

Outcome envelope_battery() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a1 = U(rng), a2 = U(rng), a3 = U(rng), p1 = U(rng), p2 = U(rng);
  auto smooth = [=](const Point3& x, int d) {
    double s = 1.5;
    for (int k = 0; k < d; ++k) s += 0.4 * a1 * std::sin((1.3 + a2) * x[k] + p1) + 0.3 * a3 * std::cos(2.1 * x[k] + p2);
    return s + 0.2 * x[0] * x[0];
  };
  auto r2 = [](const Point3& x, int d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += x[k] * x[k];
    return s;
  };
  struct Case {
    std::string name;
    GridFunction g;
  };
  std::vector<Case> battery;
  for (int d : {1, 2}) {
    const std::size_t n = d == 1 ? 201 : 21;
    battery.push_back({fmt("convex-%dd", d), grid_sample(d, -2, 2, n, [&](const Point3& x) { return r2(x, d); })});
    battery.push_back({fmt("double-well-%dd", d), grid_sample(d, -2, 2, n, [&](const Point3& x) {
                         const double w = r2(x, d) - 1.0;
                         return w * w;
                       })});
    battery.push_back({fmt("indicator-%dd", d), grid_sample(d, -2, 2, n, [&](const Point3& x) {
                         return std::abs(x[0]) <= 1.0 + 1e-12 && (d == 1 || std::abs(x[1]) <= 0.5 + 1e-12) ? 0.0 : kInf;
                       })});
    battery.push_back({fmt("level-convex-%dd", d), grid_sample(d, -2, 2, n, [&](const Point3& x) { return std::pow(r2(x, d), 0.25); })});
    battery.push_back({fmt("random-smooth-%dd", d), grid_sample(d, -2, 2, n, [&](const Point3& x) { return smooth(x, d); })});
  }
  battery.push_back({"norm-3d", grid_sample(3, -2, 2, 9, [&](const Point3& x) { return std::sqrt(r2(x, 3)); })});
  battery.push_back({"random-smooth-3d", grid_sample(3, -2, 2, 9, [&](const Point3& x) { return smooth(x, 3); })});

  std::string failures;
  for (const Case& c : battery) {
    const GridFunction bb = biconjugate(c.g), co = convex_envelope(c.g), lc = level_convex_envelope(c.g);
    if (!below(bb, co) || !below(co, c.g) || !below(bb, lc) || !below(lc, c.g)) failures += " order:" + c.name;
    if (max_diff(biconjugate(bb), bb) > 1e-9) failures += " idempotence:" + c.name;
    std::vector<double> hv(c.g.size());
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = ext_add(c.g[i], 0.25 * (1.0 + std::sin(3.0 * c.g.grid().point(i)[0])));
    const GridFunction h(c.g.grid(), hv);
    if (!below(bb, biconjugate(h)) || !below(co, convex_envelope(h)) || !below(lc, level_convex_envelope(h)))
      failures += " monotonicity:" + c.name;
  }

  const GridFunction dw = grid_sample(1, -2, 2, 401, [](const Point3& x) { return (x[0] * x[0] - 1) * (x[0] * x[0] - 1); });
  const double h = dw.grid().spacing()[0];
  std::vector<double> xs, fs;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    xs.push_back(dw.grid().point(i)[0]);
    fs.push_back(dw[i]);
  }
  const auto oracle = hull_oracle(xs, fs);
  const GridFunction dwbb = biconjugate(dw);
  double err_analytic = 0.0, err_oracle = 0.0, oracle_vs_analytic = 0.0;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    const double analytic = std::abs(xs[i]) <= 1.0 ? 0.0 : fs[i];
    err_analytic = std::max(err_analytic, std::abs(dwbb[i] - analytic));
    err_oracle = std::max(err_oracle, std::abs(dwbb[i] - oracle[i]));
    oracle_vs_analytic = std::max(oracle_vs_analytic, std::abs(oracle[i] - analytic));
  }
  const bool dw_ok = err_analytic <= 2 * h && err_oracle <= 1e-9 && oracle_vs_analytic <= 2 * h;
  return {failures.empty() && dw_ok,
          fmt("%zu densities%s; double-well |g**-env|=%.2e (2h=%.2e) |g**-hull|=%.2e", battery.size(),
              failures.empty() ? " ordered/idempotent/monotone" : failures.c_str(), err_analytic, 2 * h, err_oracle)};
}

Outcome equality_region() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::pair<std::string, GridFunction>> cases;
  cases.push_back({"two-points-1d", grid_sample(1, -2, 2, 41, [](const Point3& x) {
                     return std::abs(std::abs(x[0]) - 1.0) < 1e-9 ? 0.0 : kInf;
                   })});
  cases.push_back({"two-points-2d", grid_sample(2, -2, 2, 21, [](const Point3& x) {
                     return std::abs(std::abs(x[0]) - 1.0) < 1e-9 && std::abs(x[1]) < 1e-9 ? 0.0 : kInf;
                   })});
  cases.push_back({"random-1d", grid_sample(1, -2, 2, 81, [&](const Point3& x) {
                     const double u = U(rng);
                     return std::abs(x[0]) <= 1.5 && u < 0.6 ? 3.0 * U(rng) : kInf;
                   })});
  cases.push_back({"random-2d", grid_sample(2, -2, 2, 25, [&](const Point3& x) {
                     const double u = U(rng);
                     return x[0] * x[0] + x[1] * x[1] <= 2.5 && u < 0.6 ? 3.0 * U(rng) : kInf;
                   })});
  bool ok = true;
  double worst_in = 0.0, worst_out = 0.0, worst_boundary = 0.0;
  std::size_t interior = 0;
  for (const auto& [name, g] : cases) {
    const EqualityRegionReport r = check_envelope_equality_region(g);
    ok &= r.interior_deviation <= 1e-9 && r.exterior_deviation <= 1e-9;
    worst_in = std::max(worst_in, r.interior_deviation);
    worst_out = std::max(worst_out, r.exterior_deviation);
    worst_boundary = std::max(worst_boundary, r.boundary_deviation);
    interior += r.interior_nodes;
  }
  return {ok, fmt("%zu cases, %zu interior nodes: interior dev %.2e, exterior dev %.2e, boundary layer dev %.2e",
                  cases.size(), interior, worst_in, worst_out, worst_boundary)};
}

Outcome commutation() {
  auto norm = [](const Point3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
  auto wells = [](const Point3& x) { return std::hypot(x[0] - 1.0, x[1]) + std::abs(x[2] * x[2] - 1.0); };
  auto inplane = [](const Point3& x) {
    const double w = x[0] * x[0] + x[1] * x[1] - 1.0;
    return w * w + std::abs(x[2]);
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, fn] : std::vector<std::pair<std::string, std::function<double(const Point3&)>>>{
           {"norm", norm}, {"two-well", wells}, {"in-plane-well", inplane}}) {
    const CommutationReport a = check_commutation(grid_sample(3, -2, 2, 33, fn));
    const CommutationReport b = check_commutation(grid_sample(3, -2, 2, 65, fn));
    const bool pass = a.interior_deviation <= 3 * a.h && b.interior_deviation <= 3 * b.h &&
                      b.interior_deviation <= a.interior_deviation + 1e-12;
    ok &= pass;
    detail += fmt(" %s %.2e->%.2e", name.c_str(), a.interior_deviation, b.interior_deviation);
  }
  return {ok, "interior deviation 33^3->65^3:" + detail};
}

Outcome indicator_identity() {
  const GridFunction norm = grid_sample(3, -2, 2, 33, [](const Point3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); });
  const GridFunction split = grid_sample(3, -2, 2, 33, [](const Point3& x) { return std::hypot(x[0], x[1]) + std::abs(x[2]); });
  const GridFunction segment = grid_sample(3, -2, 2, 33, [](const Point3& x) {
    return std::abs(x[0]) < 1e-9 && std::abs(x[1]) < 1e-9 && std::abs(x[2]) <= 1.0 ? std::abs(x[2]) : kInf;
  });
  bool ok = true;
  std::string detail;
  for (const auto& [name, W] : std::vector<std::pair<std::string, GridFunction>>{
           {"norm", norm}, {"split", split}, {"vertical-segment", segment}}) {
    const IndicatorIdentityReport r = check_indicator_identity(W, 1.0);
    ok &= r.pass;
    detail += fmt(" %s symdiff=%zu layer=%zu", name.c_str(), r.sets.symmetric_difference, r.sets.max_layer);
  }
  return {ok, detail.substr(1)};
}

ExperimentConfig supremal_config() {
  ExperimentConfig c;
  c.pipeline = Pipeline::Supremal;
  c.density = R"J({"dim":3,"expr":"sqrt((z1-1)^2+z2^2)+abs(zeta^2-1)","family":"expr"})J";
  c.epsilons = {0.25, 0.125, 0.0625, 0.03125, 0.015625};
  c.n_xy = 32;
  c.n3 = 8;
  c.heuristic = true;
  c.record_runtime = false;
  return c;
}

ExperimentConfig integral_config(const std::string& density) {
  ExperimentConfig c;
  c.pipeline = Pipeline::Integral;
  c.density = density;
  c.epsilons = {0.25, 0.125, 0.0625, 0.03125, 0.015625};
  c.n_xy = 8;
  c.n3 = 4;
  c.record_runtime = false;
  return c;
}

const char* kCylinder =
    R"J({"family":"sum","terms":[{"center":[0,0,1],"dim":3,"family":"power_norm","p":2},{"family":"indicator_cylinder","half_height":0.5,"radius":2}]})J";

Outcome supremal_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepTable t = run_sweep(supremal_config(), 4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool monotone = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) monotone &= t.rows[i].m3d <= t.rows[i - 1].m3d + 1e-9;
  const double last = t.rows.back().m3d;
  const bool ok = std::abs(last - 0.0) <= 0.05 && monotone && secs <= 300.0;
  std::string ms;
  for (const SweepRow& r : t.rows) ms += fmt(" %.3g", r.m3d);
  return {ok, fmt("m(eps):%s; limit %.3g; non-increasing=%d; %.1fs", ms.c_str(), t.mlimit, monotone ? 1 : 0, secs)};
}

Outcome integral_sweep() {
  const SweepTable quad = run_sweep(integral_config(R"J({"dim":3,"family":"power_norm","p":2})J"), 4);
  double worst_rel = 0.0;
  for (const SweepRow& r : quad.rows) worst_rel = std::max(worst_rel, std::abs(r.m3d - 2.0) / 2.0);
  const SweepTable cyl = run_sweep(integral_config(kCylinder), 4);
  const double gap = std::abs(cyl.rows.back().m3d - cyl.mlimit);
  const bool ok = worst_rel <= 1e-3 && gap <= 0.05 && cyl.lower_bound_pass;
  return {ok, fmt("|x|^2: max rel err %.2e; cylinder: m(2^-6)=%.6f limit=%.6f gap=%.2e lower bound %s", worst_rel,
                  cyl.rows.back().m3d, cyl.mlimit, gap, cyl.lower_bound_pass ? "holds" : "violated")};
}

Outcome recovery() {
  const Density W = parse_density(R"J({"dim":3,"expr":"sqrt((z1-1)^2+z2^2)+abs(zeta^2-1)+0.5*z2^2","family":"expr"})J");
  const SimplicialMesh mesh = extrude(mesh_rectangle({0, 0}, {1, 1}, 6, 6), 4);
  double worst = 0.0;
  const std::vector<std::pair<Vec2, double>> points{{{0.3, -0.7}, 0.8}, {{1.0, 0.0}, 1.0}, {{-1.2, 0.4}, -0.3}};
  for (const auto& [z, zeta] : points)
    for (double eps : {0.5, 0.125, 1.0 / 64}) {
      const NodalField u = vertical_recovery(mesh, z, zeta, eps);
      const double xi[3] = {z.x, z.y, zeta};
      const double target = W(xi);
      worst = std::max(worst, std::abs(assemble_sup_energy_3d(W, mesh, u, eps) - target) / std::max(1.0, target));
    }
  const Density wells = parse_density(R"J({"dim":2,"expr":"min(sqrt((z1-1)^2+z2^2),sqrt((z1+1)^2+z2^2))","family":"expr"})J");
  const SimplicialMesh m2 = mesh_rectangle({0, 0}, {1, 1}, 128, 128);
  LaminateSpec spec{{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}, 0.5, 0.0, 0.0, 16};
  const LaminateField l16 = laminate_recovery(spec, 1.0, m2);
  spec.layers = 32;
  const LaminateField l32 = laminate_recovery(spec, 1.0, m2);
  const double e32 = phase_energy(wells, m2, l32, 1.0);
  const double d16 = max_deviation(m2, l16.u, spec.z), d32 = max_deviation(m2, l32.u, spec.z);
  const double ratio = d32 / d16;
  const bool ok = worst <= 1e-13 && e32 <= 0.05 && ratio >= 0.4 && ratio <= 0.6;
  return {ok, fmt("vertical rel err %.1e; laminate n=32 energy %.2e; deviation %.4f->%.4f ratio %.3f", worst, e32, d16,
                  d32, ratio)};
}

Outcome mollification() {
  const SimplicialMesh mesh = mesh_rectangle({0, 0}, {1, 1}, 32, 32, DiagonalPattern::Uniform);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  std::vector<double> affine, roof, noise;
  for (const Point3& x : mesh.vertices()) {
    affine.push_back(0.7 * x[0] - 0.4 * x[1] + 0.1);
    roof.push_back(std::max(0.9 * x[0] + 0.2 * x[1], -0.5 * x[0] + 1.1 * x[1] + 0.3));
    noise.push_back(0.5 * x[0] + U(rng));
  }
  const std::vector<std::pair<std::string, NodalField>> fields{
      {"affine", NodalField(affine)}, {"roof", NodalField(roof)}, {"random", NodalField(noise)}};
  bool ok = true;
  double worst_gap = -kInf, affine_eq = 0.0;
  std::size_t runs = 0;
  for (const char* desc : {R"J({"dim":2,"family":"power_norm","p":2})J", R"J({"dim":2,"family":"power_norm","p":4})J"}) {
    const Density g = parse_density(desc);
    for (const auto& [name, u] : fields)
      for (double eta : {0.08, 0.12, 0.16, 0.2}) {
        const MollifyEnergyReport r = mollify_energy_check(g, mesh, u, eta);
        ok &= r.pass;
        ++runs;
        worst_gap = std::max(worst_gap, r.relative_gap);
        if (name == "affine") {
          const double rel = std::abs(r.energy_mollified - r.energy_on_eroded) / std::max(1e-300, r.energy_on_eroded);
          affine_eq = std::max(affine_eq, rel);
        }
      }
  }
  ok &= affine_eq <= 1e-9;
  return {ok, fmt("%zu runs; max (F(u_eta)-F(u))/F(u) = %.2e; affine equality rel err %.1e", runs, worst_gap, affine_eq)};
}

PAFunction triangulated(const ConvexPolygon& omega, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const SimplicialMesh mesh = mesh_polygon(omega, n);
  std::vector<double> vals;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) vals.push_back(U(rng));
  std::vector<PAPiece> pieces;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = mesh.cell(c);
    Vec2 p[3];
    double f[3];
    for (int k = 0; k < 3; ++k) {
      p[k] = {mesh.vertices()[cell[k]][0], mesh.vertices()[cell[k]][1]};
      f[k] = vals[cell[k]];
    }
    const double det = orient(p[0], p[1], p[2]);
    const Vec2 e1 = p[1] - p[0], e2 = p[2] - p[0];
    const double d1 = f[1] - f[0], d2 = f[2] - f[0];
    const Vec2 grad{(d1 * e2.y - d2 * e1.y) / det, (e1.x * d2 - e2.x * d1) / det};
    const AffineFunction a{grad, f[0] - dot(grad, p[0])};
    std::vector<Vec2> vs{p[0], p[1], p[2]};
    if (det < 0) std::swap(vs[1], vs[2]);
    pieces.push_back({a, ConvexPolygon(vs)});
  }
  return PAFunction(std::move(pieces));
}

std::vector<AffineFunction> random_affines(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<AffineFunction> a;
  for (std::size_t i = 0; i < k; ++i) a.push_back({{U(rng), U(rng)}, U(rng)});
  return a;
}

Outcome maxmin() {
  std::mt19937_64 rng(3);
  const std::vector<std::pair<std::string, ConvexPolygon>> domains{
      {"square", ConvexPolygon::unit_square()},
      {"hexagon", ConvexPolygon::regular(6, {0.5, 0.5}, 0.6)},
      {"triangle", ConvexPolygon({{0.0, 0.0}, {1.0, 0.1}, {0.3, 0.9}})}};
  bool ok = true;
  double worst = 0.0;
  std::size_t forms = 0;
  for (const auto& [dname, omega] : domains) {
    std::vector<PAFunction> library{PAFunction::upper_envelope(random_affines(3, rng), omega),
                                    PAFunction::upper_envelope(random_affines(6, rng), omega),
                                    PAFunction::lower_envelope(random_affines(3, rng), omega),
                                    PAFunction::lower_envelope(random_affines(5, rng), omega),
                                    triangulated(omega, 2, rng),
                                    triangulated(omega, 3, rng),
                                    triangulated(omega, 4, rng),
                                    triangulated(omega, 6, rng)};
    for (const PAFunction& pa : library) {
      const MaxMinForm form = maxmin_representation(pa, omega);
      const MaxMinVerification v = verify_representation(pa, form, omega, 10000);
      ok &= v.pass;
      worst = std::max(worst, v.max_deviation);
      ++forms;
    }
  }
  const auto sq = [](double a, double b, double c, double d) { return ConvexPolygon::box({a, b}, {c, d}); };
  const PAFunction l_fn({{{{0, 0}, 0}, sq(0, 0, 1, 1)}, {{{0, 1}, -1}, sq(0, 1, 1, 2)}, {{{-1, 0}, 1}, sq(1, 0, 2, 1)}});
  const PolygonDomain L = PolygonDomain::l_shape();
  const MaxMinVerification lv = verify_representation(l_fn, maxmin_representation(l_fn, L, true), L, 10000);
  return {ok, fmt("%zu forms on 3 convex polygons, max deviation %.1e; L-domain: deviation %.2f, \"%s\"", forms, worst,
                  lv.max_deviation, lv.label.c_str())};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / fmt("thinlim-determinism-%d", static_cast<int>(std::random_device{}() % 100000));
  fs::create_directories(root);
  ExperimentConfig sup = supremal_config();
  sup.n_xy = 12;
  sup.n3 = 4;
  const std::vector<std::pair<std::string, ExperimentConfig>> configs{{"supremal", sup},
                                                                      {"integral", integral_config(kCylinder)}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, cfg] : configs) {
    std::string csv[2];
    int w = 0;
    for (int workers : {1, 4}) {
      const fs::path out = root / fmt("%s-w%d", name.c_str(), workers);
      if (!cli.empty()) {
        save_config(root / (name + ".json"), cfg);
        const std::string cmd = fmt("\"%s\" sweep --config \"%s\" --workers %d --out \"%s\" > /dev/null", cli.c_str(),
                                    (root / (name + ".json")).c_str(), workers, out.c_str());
        if (std::system(cmd.c_str()) != 0) ok = false;
      } else {
        fs::create_directories(out);
        emit_csv(run_sweep(cfg, static_cast<std::size_t>(workers)), out / "sweep.csv");
      }
      csv[w++] = slurp(out / "sweep.csv");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    ok &= same;
    detail += fmt(" %s:%s", name.c_str(), same ? "identical" : "DIFFERENT");
  }
  fs::remove_all(root);
  return {ok, (cli.empty() ? "in-process sweeps, workers 1 vs 4:" : "cli sweeps, workers 1 vs 4:") + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc)
      cli = argv[++i];
    else
      only.push_back(std::atoi(argv[i]));
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"envelope battery", envelope_battery},
      {"co/biconjugate equality region", equality_region},
      {"commutation", commutation},
      {"indicator identity", indicator_identity},
      {"supremal sweep", supremal_sweep},
      {"integral sweep", integral_sweep},
      {"recovery constructions", recovery},
      {"mollification", mollification},
      {"max-min representation", maxmin},
      {"determinism", [&] { return determinism(cli); }}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu %-32s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
