#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thinlim/density.hpp"
#include "thinlim/grid.hpp"
#include "thinlim/mesh.hpp"
#include "thinlim/pa_function.hpp"

namespace thinlim {

/// Affine boundary trace u_z(x) + s. On 2D meshes it is imposed at every
/// Lateral vertex. On 3D meshes Lateral vertices carry u_z(x_alpha) + s +
/// phi(x3), with one free value phi per x3 level (phi = 0 on the middle level)
/// and top/bottom faces free.
struct BoundaryData {
  AffineFunction affine;
};

struct SolverOptions {
  double epsilon = 1.0;
  double tol_t = 1e-4;       ///< bisection bracket width
  double tol_f = 1e-7;       ///< feasibility residual
  std::size_t max_sweeps = 100000;
  std::size_t stagnation_sweeps = 200;
  /// Accept densities that fail the level-convexity test; results are flagged.
  bool heuristic = false;
  std::size_t restarts = 4;  ///< heuristic mode: perturbed restarts per level
  std::uint64_t seed = 20240601;
  std::vector<NodalField> extra_seeds;
  /// Start from the affine extension (and the vertical competitor in 3D).
  bool default_seeds = true;
  /// Integral solver iteration cap.
  std::size_t max_iterations = 5000;
};

struct SolveReport {
  NodalField minimizer;
  double value = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  double epsilon = 1.0;
  bool heuristic = false;
  bool feasible = true;
};

/// CSV row: epsilon,value,iterations,residual,t_lo,t_hi
std::string solve_report_header();
std::string solve_report_row(const SolveReport& r);

/// max over cells of g(cell gradient); +inf if any gradient leaves dom g.
double assemble_sup_energy_2d(const Density& g, const SimplicialMesh& mesh, const NodalField& u);
/// max over cells of W(grad_alpha u, grad_3 u / epsilon).
double assemble_sup_energy_3d(const Density& W, const SimplicialMesh& mesh, const NodalField& u, double epsilon);
/// sum over cells of volume * f(grad_alpha u, grad_3 u / epsilon).
double assemble_integral_energy_3d(const Density& f, const SimplicialMesh& mesh, const NodalField& u, double epsilon);
/// scale * sum over cells of area * g(grad u).
double assemble_integral_energy_2d(const Density& g, const SimplicialMesh& mesh, const NodalField& u, double scale);

/// Boundary-data extension: u_z + s at every vertex.
NodalField affine_extension(const SimplicialMesh& mesh, const BoundaryData& bc);
/// u_z + s + epsilon * zeta * x3 on a 3D mesh.
NodalField vertical_competitor(const SimplicialMesh& mesh, const BoundaryData& bc, double epsilon, double zeta);

/// Minimizer of zeta -> W(z, zeta) by scan plus golden refinement; ties go
/// to the larger zeta.
double best_zeta(const Density& W, Vec2 z, double radius = 4.0);

/// Sampled level-convexity test of a density on [-radius, radius]^dim.
bool density_is_level_convex(const Density& W, double radius = 3.0);

SolveReport minimize_sup_2d(const Density& g, const SimplicialMesh& mesh, const BoundaryData& bc,
                            const SolverOptions& opts = {});
SolveReport minimize_sup_3d(const Density& W, const SimplicialMesh& mesh, const BoundaryData& bc,
                            const SolverOptions& opts);

/// Projected descent for sum vol * f(grad_alpha u, grad_3 u / eps) with the
/// constraint that every cell gradient stays in dom f. Infeasible data gives
/// value +inf and feasible = false.
SolveReport minimize_integral_3d(const Density& f, const SimplicialMesh& mesh, const BoundaryData& bc,
                                 const SolverOptions& opts);

/// min 2 * sum area * f0ss(grad u) with Dirichlet data on a 2D mesh.
SolveReport limit_integral_2d(const GridFunction& f0ss, const SimplicialMesh& mesh, const BoundaryData& bc,
                              const SolverOptions& opts = {});

struct LowerBoundReport {
  double bound = 0.0;               ///< 2 * sum area * f0ss(grad u_limit)
  std::vector<double> slack;        ///< m(eps) - bound
  bool pass = true;
};

/// m(eps) >= 2 * int f0ss(grad u_limit) - tol for every sweep entry.
LowerBoundReport lower_bound_check(const GridFunction& f0ss, const SimplicialMesh& mesh2d,
                                   const NodalField& u_limit, const std::vector<SolveReport>& sweep,
                                   double tol = 1e-6);

}  // namespace thinlim
