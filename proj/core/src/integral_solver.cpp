#include <algorithm>
#include <cmath>

#include "field_model.hpp"
#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"
#include "thinlim/solver.hpp"

namespace thinlim {

using detail::FieldModel;
using detail::Vec3;

namespace {

// Assembled from the nodal field so accepted iterates match the reported energy.
double integral_energy(const FieldModel& model, const SimplicialMesh& mesh, const Density& f,
                       const std::vector<double>& p, double scale, double epsilon) {
  const NodalField u = model.to_field(p);
  return mesh.dim() == 3 ? scale * assemble_integral_energy_3d(f, mesh, u, epsilon)
                         : assemble_integral_energy_2d(f, mesh, u, scale);
}

std::vector<double> integral_gradient(const FieldModel& model, const Density& f, const std::vector<double>& p,
                                      double scale) {
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t c = 0; c < model.num_cells(); ++c) {
    const Vec3 xi = model.gradient(c, p);
    const double v = detail::eval_density(f, xi, model.dim());
    const Vec3 gx = detail::numeric_gradient(f, xi, model.dim(), v);
    model.adjoint(c, gx, scale * model.volume(c), g);
  }
  return g;
}

// Cyclic star projections of out-of-domain cell gradients back into dom f.
bool restore_domain(const FieldModel& model, const Density& f, std::vector<double>& p,
                    const std::vector<Vec3>& anchors, std::size_t max_sweeps) {
  const int d = model.dim();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool clean = true;
    for (std::size_t c = 0; c < model.num_cells(); ++c) {
      const Vec3 xi = model.gradient(c, p);
      if (!is_inf(detail::eval_density(f, xi, d))) continue;
      clean = false;
      const Vec3 target = detail::star_projection(f, xi, d, 1e300, anchors);
      Vec3 dxi{};
      for (int a = 0; a < d; ++a) dxi[a] = target[a] - xi[a];
      model.apply(c, dxi, p);
    }
    if (clean) return true;
  }
  for (std::size_t c = 0; c < model.num_cells(); ++c)
    if (is_inf(detail::eval_density(f, model.gradient(c, p), d))) return false;
  return true;
}

struct IntegralProblem {
  const Density& f;
  const SimplicialMesh& mesh;
  const BoundaryData& bc;
  SolverOptions opts;
  double scale = 1.0;
  std::vector<NodalField> seeds;
};

SolveReport descend(const IntegralProblem& prob) {
  const FieldModel model(prob.mesh, prob.bc, prob.opts.epsilon);
  const int d = model.dim();
  const double zn = std::hypot(prob.bc.affine.gradient.x, prob.bc.affine.gradient.y);
  SolveReport r;
  r.epsilon = prob.opts.epsilon;

  std::vector<double> p;
  double e = kInf;
  for (const NodalField& s : prob.seeds) {
    auto q = model.to_dofs(s);
    const double v = integral_energy(model, prob.mesh, prob.f, q, prob.scale, prob.opts.epsilon);
    if (p.empty() || v < e) {
      e = v;
      p = std::move(q);
    }
  }
  std::vector<Vec3> anchors;
  if (is_inf(e)) {
    anchors = detail::density_anchors(prob.f, d, 2.0 + 2.0 * zn);
    if (!restore_domain(model, prob.f, p, anchors, 2000)) {
      r.minimizer = model.to_field(p);
      r.value = kInf;
      r.t_lo = r.t_hi = kInf;
      r.feasible = false;
      return r;
    }
    e = integral_energy(model, prob.mesh, prob.f, p, prob.scale, prob.opts.epsilon);
  }

  // Barzilai-Borwein steps with backtracking; infeasible trials are pulled
  // back into dom f before they are compared.
  auto g = integral_gradient(model, prob.f, p, prob.scale);
  double alpha = 1.0 / std::max(1e-300, 2.0 * prob.scale * model.stiffness_scale());
  std::size_t it = 0, quiet = 0;
  for (; it < prob.opts.max_iterations; ++it) {
    double gn = 0.0;
    for (double v : g) gn = std::max(gn, std::abs(v));
    if (gn == 0.0) break;
    std::vector<double> q;
    double eq = kInf;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      q = p;
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha * g[j];
      eq = integral_energy(model, prob.mesh, prob.f, q, prob.scale, prob.opts.epsilon);
      if (is_inf(eq) && bt < 3) {
        if (anchors.empty()) anchors = detail::density_anchors(prob.f, d, 2.0 + 2.0 * zn);
        if (restore_domain(model, prob.f, q, anchors, 50)) eq = integral_energy(model, prob.mesh, prob.f, q, prob.scale, prob.opts.epsilon);
      }
      if (eq < e) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    auto gq = integral_gradient(model, prob.f, q, prob.scale);
    double sy = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double s = q[j] - p[j], y = gq[j] - g[j];
      sy += s * y;
      ss += s * s;
    }
    alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;
    const double drop = e - eq;
    p = std::move(q);
    g = std::move(gq);
    e = eq;
    quiet = drop <= 1e-13 * (1.0 + std::abs(e)) ? quiet + 1 : 0;
    if (quiet >= 5) break;
  }
  r.minimizer = model.to_field(p);
  r.value = d == 3 ? assemble_integral_energy_3d(prob.f, prob.mesh, r.minimizer, prob.opts.epsilon)
                   : assemble_integral_energy_2d(prob.f, prob.mesh, r.minimizer, prob.scale);
  r.t_lo = r.t_hi = r.value;
  r.feasible = !is_inf(r.value);
  r.iterations = it;
  double gn = 0.0;
  for (double v : g) gn = std::max(gn, std::abs(v));
  r.residual = gn;
  return r;
}

}  // namespace

SolveReport minimize_integral_3d(const Density& f, const SimplicialMesh& mesh, const BoundaryData& bc,
                                 const SolverOptions& opts) {
  if (mesh.dim() != 3) throw ValidationError("minimize_integral_3d needs a 3D mesh");
  if (f.dim() != 3) throw ValidationError("density dimension does not match the mesh");
  if (!(opts.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  IntegralProblem prob{f, mesh, bc, opts, 1.0, {}};
  if (opts.default_seeds) {
    prob.seeds.push_back(affine_extension(mesh, bc));
    prob.seeds.push_back(vertical_competitor(mesh, bc, opts.epsilon, best_zeta(f, bc.affine.gradient)));
  }
  for (const auto& s : opts.extra_seeds) prob.seeds.push_back(s);
  if (prob.seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  return descend(prob);
}

SolveReport limit_integral_2d(const GridFunction& f0ss, const SimplicialMesh& mesh, const BoundaryData& bc,
                              const SolverOptions& opts) {
  if (mesh.dim() != 2) throw ValidationError("limit_integral_2d needs a 2D mesh");
  if (f0ss.grid().dim() != 2) throw ValidationError("limit density must be a 2D grid function");
  const Density g = grid_density(f0ss);
  IntegralProblem prob{g, mesh, bc, opts, 2.0, {}};
  prob.opts.epsilon = 1.0;
  if (opts.default_seeds || opts.extra_seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  for (const auto& s : opts.extra_seeds) prob.seeds.push_back(s);
  if (prob.seeds.empty()) prob.seeds.push_back(affine_extension(mesh, bc));
  return descend(prob);
}

LowerBoundReport lower_bound_check(const GridFunction& f0ss, const SimplicialMesh& mesh2d, const NodalField& u_limit,
                                   const std::vector<SolveReport>& sweep, double tol) {
  LowerBoundReport r;
  r.bound = assemble_integral_energy_2d(grid_density(f0ss), mesh2d, u_limit, 2.0);
  for (const SolveReport& s : sweep) {
    const double slack = s.value - r.bound;
    r.slack.push_back(slack);
    if (slack < -tol) r.pass = false;
  }
  return r;
}

}  // namespace thinlim
