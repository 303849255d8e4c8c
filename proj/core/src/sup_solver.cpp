#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "field_model.hpp"
#include "thinlim/envelopes.hpp"
#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"
#include "thinlim/solver.hpp"

namespace thinlim {

using detail::FieldModel;
using detail::Vec3;

namespace {

std::array<double, 3> rescaled_gradient(const SimplicialMesh& mesh, std::size_t c, const NodalField& u, double eps) {
  auto g = cell_gradient(mesh, c, u.values());
  if (mesh.dim() == 3) g[2] /= eps;
  return g;
}

void require_dims(const Density& W, const SimplicialMesh& mesh) {
  if (W.dim() != mesh.dim()) throw ValidationError("density dimension does not match the mesh");
}

double sup_energy(const FieldModel& model, const Density& W, const std::vector<double>& p) {
  double e = 0.0;
  for (std::size_t c = 0; c < model.num_cells(); ++c) {
    e = std::max(e, detail::eval_density(W, model.gradient(c, p), model.dim()));
    if (is_inf(e)) break;
  }
  return e;
}

struct Feasibility {
  bool ok = false;
  double residual = kInf;
  std::size_t sweeps = 0;
};

// Cyclic projections onto the per-cell sets {W(grad) <= t}: subgradient
// (Polyak) steps where W is finite, star projection toward an anchor
// otherwise or when the subgradient vanishes.
double cell_violation(const FieldModel& model, const Density& W, double t, std::size_t c, const std::vector<double>& p) {
  const double w = detail::eval_density(W, model.gradient(c, p), model.dim());
  return w <= t ? 0.0 : is_inf(w) ? 1e300 : w - t;
}

// One coordinate-descent pass over single-vertex dofs: each value moves to
// the best point of a local scan of the summed violation of its cells.
void coordinate_sweep(const FieldModel& model, const Density& W, double t, std::vector<double>& p,
                      std::vector<double>& step) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!model.vertex_dof()[j]) continue;
    const auto& cells = model.dof_cells()[j];
    auto local = [&](double x) {
      const double keep = p[j];
      p[j] = x;
      double v = 0.0;
      for (std::size_t c : cells) v += cell_violation(model, W, t, c, p);
      p[j] = keep;
      return v;
    };
    const double x0 = p[j];
    double best = local(x0);
    if (best == 0.0) continue;
    double arg = x0;
    for (int k = -8; k <= 8; ++k) {
      if (k == 0) continue;
      const double x = x0 + k * step[j];
      const double v = local(x);
      if (v < best) {
        best = v;
        arg = x;
      }
    }
    double h = step[j];
    for (int it = 0; it < 12; ++it) {
      h *= 0.5;
      for (double x : {arg - h, arg + h}) {
        const double v = local(x);
        if (v < best) {
          best = v;
          arg = x;
        }
      }
    }
    step[j] = arg == x0 ? std::max(step[j] * 0.5, 1e-12) : std::min(2.0 * std::abs(arg - x0) + 1e-12, 4.0 * step[j]);
    p[j] = arg;
  }
}

Feasibility project_to_level(const FieldModel& model, const Density& W, double t, std::vector<double>& p,
                             const std::vector<Vec3>& anchors, const SolverOptions& opts, bool heuristic,
                             double cd_step) {
  Feasibility f;
  const int d = model.dim();
  double best = kInf;
  std::size_t last_gain = 0;
  std::vector<double> step(p.size(), cd_step);
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (heuristic) coordinate_sweep(model, W, t, p, step);
    double residual = 0.0;
    for (std::size_t c = 0; c < model.num_cells(); ++c) {
      const Vec3 xi = model.gradient(c, p);
      const double w = detail::eval_density(W, xi, d);
      if (w <= t) continue;
      residual = std::max(residual, is_inf(w) ? 1e300 : w - t);
      if (heuristic && !is_inf(w)) continue;
      Vec3 target = xi;
      bool done = false;
      if (!is_inf(w)) {
        const Vec3 g = detail::numeric_gradient(W, xi, d, w);
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) g2 += g[a] * g[a];
        if (g2 > 1e-24) {
          for (int a = 0; a < d; ++a) target[a] = xi[a] - (w - t) / g2 * g[a];
          done = !is_inf(detail::eval_density(W, target, d));
        }
      }
      if (!done) target = detail::star_projection(W, xi, d, t, anchors);
      Vec3 dxi{};
      for (int a = 0; a < d; ++a) dxi[a] = target[a] - xi[a];
      model.apply(c, dxi, p);
    }
    f.sweeps = sweep + 1;
    if (residual <= opts.tol_f) break;
    if (residual < best * (1.0 - 1e-3)) {
      best = residual;
      last_gain = sweep;
    } else if (sweep - last_gain > opts.stagnation_sweeps) {
      break;
    }
  }
  double residual = 0.0;
  for (std::size_t c = 0; c < model.num_cells(); ++c) {
    const double w = detail::eval_density(W, model.gradient(c, p), d);
    if (w > t) residual = std::max(residual, is_inf(w) ? kInf : w - t);
  }
  f.residual = residual;
  f.ok = residual <= opts.tol_f;
  return f;
}

struct SupProblem {
  const Density& W;
  const SimplicialMesh& mesh;
  const BoundaryData& bc;
  SolverOptions opts;
  std::vector<NodalField> seeds;
  double t_floor = 0.0;
  bool heuristic = false;
};

SolveReport bisect(const SupProblem& prob) {
  const FieldModel model(prob.mesh, prob.bc, prob.opts.epsilon);
  const int d = model.dim();
  const double zn = std::hypot(prob.bc.affine.gradient.x, prob.bc.affine.gradient.y);
  const auto anchors = detail::density_anchors(prob.W, d, 2.0 + 2.0 * zn);

  SolveReport r;
  r.epsilon = prob.opts.epsilon;
  r.heuristic = prob.heuristic;
  std::vector<double> best_p;
  double t_hi = kInf;
  for (const NodalField& s : prob.seeds) {
    auto p = model.to_dofs(s);
    const double e = sup_energy(model, prob.W, p);
    if (e < t_hi || best_p.empty()) {
      if (e < t_hi) t_hi = e;
      best_p = std::move(p);
    }
  }
  std::size_t sweeps = 0;
  if (is_inf(t_hi)) {
    auto p = best_p;
    const double probe = 1e6;
    const Feasibility f = project_to_level(model, prob.W, probe, p, anchors, prob.opts, false, 0.0);
    sweeps += f.sweeps;
    if (!f.ok) throw SolverError("infeasible boundary data: no admissible field found");
    best_p = p;
    t_hi = sup_energy(model, prob.W, p);
  }
  double t_lo = std::min(prob.t_floor, t_hi);

  double hmin = kInf;
  for (std::size_t c = 0; c < prob.mesh.num_cells(); ++c)
    hmin = std::min(hmin, std::pow(prob.mesh.volume(c), 1.0 / d));
  const double cd_step = 0.25 * hmin * (1.0 + zn);
  std::mt19937_64 rng(prob.opts.seed);
  std::size_t level = 0;
  while (t_hi - t_lo > std::max(prob.opts.tol_t, 4.0 * prob.opts.tol_f)) {
    const double t = 0.5 * (t_lo + t_hi);
    bool ok = false;
    const std::size_t attempts = prob.heuristic ? prob.opts.restarts + 1 : 1;
    for (std::size_t k = 0; k < attempts && !ok; ++k) {
      auto p = best_p;
      if (k > 0) {
        // perturbed restart on single-vertex dofs
        std::normal_distribution<double> noise(0.0, 0.05 * (1.0 + zn));
        for (std::size_t j = 0; j < p.size(); ++j)
          if (model.vertex_dof()[j]) p[j] += noise(rng);
      }
      const Feasibility f = project_to_level(model, prob.W, t, p, anchors, prob.opts, prob.heuristic, cd_step);
      sweeps += f.sweeps;
      if (f.ok) {
        const double e = sup_energy(model, prob.W, p);
        if (e < t_hi) {
          t_hi = e;
          best_p = std::move(p);
        }
        ok = true;
      }
    }
    if (!ok) t_lo = t;
    if (++level > 200) break;
  }
  r.minimizer = model.to_field(best_p);
  r.value = d == 2 ? assemble_sup_energy_2d(prob.W, prob.mesh, r.minimizer)
                   : assemble_sup_energy_3d(prob.W, prob.mesh, r.minimizer, prob.opts.epsilon);
  r.t_lo = std::min(t_lo, r.value);
  r.t_hi = std::max(t_hi, r.value);
  r.iterations = sweeps;
  r.residual = std::max(0.0, r.value - r.t_hi);
  return r;
}

}  // namespace

std::string solve_report_header() { return "epsilon,value,iterations,residual,t_lo,t_hi"; }

std::string solve_report_row(const SolveReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g,%.17g", r.epsilon, r.value, r.iterations, r.residual,
                r.t_lo, r.t_hi);
  return buf;
}

double assemble_sup_energy_2d(const Density& g, const SimplicialMesh& mesh, const NodalField& u) {
  if (mesh.dim() != 2) throw ValidationError("assemble_sup_energy_2d needs a 2D mesh");
  require_dims(g, mesh);
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto xi = rescaled_gradient(mesh, c, u, 1.0);
    e = std::max(e, g(std::span<const double>(xi.data(), 2)));
  }
  return e;
}

double assemble_sup_energy_3d(const Density& W, const SimplicialMesh& mesh, const NodalField& u, double epsilon) {
  if (mesh.dim() != 3) throw ValidationError("assemble_sup_energy_3d needs a 3D mesh");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  require_dims(W, mesh);
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto xi = rescaled_gradient(mesh, c, u, epsilon);
    e = std::max(e, W(std::span<const double>(xi.data(), 3)));
  }
  return e;
}

double assemble_integral_energy_3d(const Density& f, const SimplicialMesh& mesh, const NodalField& u, double epsilon) {
  if (mesh.dim() != 3) throw ValidationError("assemble_integral_energy_3d needs a 3D mesh");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  require_dims(f, mesh);
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto xi = rescaled_gradient(mesh, c, u, epsilon);
    e += mesh.volume(c) * f(std::span<const double>(xi.data(), 3));
  }
  return e;
}

double assemble_integral_energy_2d(const Density& g, const SimplicialMesh& mesh, const NodalField& u, double scale) {
  if (mesh.dim() != 2) throw ValidationError("assemble_integral_energy_2d needs a 2D mesh");
  require_dims(g, mesh);
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto xi = rescaled_gradient(mesh, c, u, 1.0);
    e += mesh.volume(c) * g(std::span<const double>(xi.data(), 2));
  }
  return scale * e;
}

NodalField affine_extension(const SimplicialMesh& mesh, const BoundaryData& bc) {
  std::vector<double> u(mesh.num_vertices());
  for (std::size_t v = 0; v < u.size(); ++v) {
    const auto& x = mesh.vertices()[v];
    u[v] = bc.affine(Vec2{x[0], x[1]});
  }
  return NodalField(std::move(u));
}

NodalField vertical_competitor(const SimplicialMesh& mesh, const BoundaryData& bc, double epsilon, double zeta) {
  if (mesh.dim() != 3) throw ValidationError("vertical competitor needs a 3D mesh");
  std::vector<double> u(mesh.num_vertices());
  for (std::size_t v = 0; v < u.size(); ++v) {
    const auto& x = mesh.vertices()[v];
    u[v] = bc.affine(Vec2{x[0], x[1]}) + epsilon * zeta * x[2];
  }
  return NodalField(std::move(u));
}

double best_zeta(const Density& W, Vec2 z, double radius) {
  if (W.dim() != 3) throw ValidationError("best_zeta needs a 3D density");
  auto f = [&](double zeta) {
    const double xi[3] = {z.x, z.y, zeta};
    return W(std::span<const double>(xi, 3));
  };
  const int n = 4000;
  const double h = 2.0 * radius / n;
  double best = kInf, arg = 0.0;
  for (int i = n; i >= 0; --i) {  // descending so ties keep the larger zeta
    const double zeta = -radius + i * h;
    const double v = f(zeta);
    if (v < best) {
      best = v;
      arg = zeta;
    }
  }
  if (is_inf(best)) return 0.0;
  double a = arg - h, b = arg + h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + std::abs(arg)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double cand = 0.5 * (a + b);
  double zeta = f(cand) < best ? cand : arg;
  // keep a margin from the edge of dom W(z, .) so mesh rounding stays inside
  const double step = 1e-9 * (1.0 + std::abs(zeta));
  if (is_inf(f(zeta + step)) && !is_inf(f(zeta - step)))
    zeta -= step;
  else if (is_inf(f(zeta - step)) && !is_inf(f(zeta + step)))
    zeta += step;
  return zeta;
}

bool density_is_level_convex(const Density& W, double radius) {
  const std::size_t n = W.dim() == 1 ? 201 : W.dim() == 2 ? 41 : 17;
  const GridFunction g = sample_density(W, Grid::cube(W.dim(), -radius, radius, n));
  return level_convexity_defect(g, 1e-9) == 0;
}

SolveReport minimize_sup_2d(const Density& g, const SimplicialMesh& mesh, const BoundaryData& bc,
                            const SolverOptions& opts) {
  if (mesh.dim() != 2) throw ValidationError("minimize_sup_2d needs a 2D mesh");
  require_dims(g, mesh);
  const bool lc = density_is_level_convex(g);
  if (!lc && !opts.heuristic) throw ValidationError("density is not level convex; enable the heuristic fallback");
  SupProblem prob{g, mesh, bc, opts, {}, 0.0, !lc};
  prob.opts.epsilon = 1.0;
  if (opts.default_seeds || opts.extra_seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  for (const auto& s : opts.extra_seeds) prob.seeds.push_back(s);
  if (prob.seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  if (lc) {
    const double zx[2] = {bc.affine.gradient.x, bc.affine.gradient.y};
    prob.t_floor = g(std::span<const double>(zx, 2));
  }
  return bisect(prob);
}

SolveReport minimize_sup_3d(const Density& W, const SimplicialMesh& mesh, const BoundaryData& bc,
                            const SolverOptions& opts) {
  if (mesh.dim() != 3) throw ValidationError("minimize_sup_3d needs a 3D mesh");
  if (!(opts.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  require_dims(W, mesh);
  const bool lc = density_is_level_convex(W);
  if (!lc && !opts.heuristic) throw ValidationError("density is not level convex; enable the heuristic fallback");
  SupProblem prob{W, mesh, bc, opts, {}, 0.0, !lc};
  const double zeta = best_zeta(W, bc.affine.gradient);
  if (opts.default_seeds) {
    prob.seeds.push_back(affine_extension(mesh, bc));
    prob.seeds.push_back(vertical_competitor(mesh, bc, opts.epsilon, zeta));
  }
  for (const auto& s : opts.extra_seeds) prob.seeds.push_back(s);
  if (prob.seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  if (lc) {
    const double xi[3] = {bc.affine.gradient.x, bc.affine.gradient.y, zeta};
    prob.t_floor = std::max(0.0, W(std::span<const double>(xi, 3)) * (1.0 - 1e-12));
  }
  return bisect(prob);
}

}  // namespace thinlim
