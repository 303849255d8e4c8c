#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "thinlim/density.hpp"
#include "thinlim/error.hpp"
#include "thinlim/mesh.hpp"
#include "thinlim/solver.hpp"

using namespace thinlim;

namespace {
BoundaryData bc_for(Vec2 z) { return BoundaryData{AffineFunction{z, 0.0}}; }

std::size_t commas(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), ',')); }
}  // namespace

TEST_CASE("energies of affine fields are pointwise values") {
  auto g = parse_density(R"({"family":"norm","dim":2,"center":[1,0]})");
  auto m = mesh_rectangle({0, 0}, {1, 1}, 4, 4);
  Vec2 z{0.5, 0.25};
  auto u = affine_extension(m, bc_for(z));
  double gz = std::hypot(0.5, 0.25);
  CHECK(assemble_sup_energy_2d(g, m, u) == doctest::Approx(gz));
  CHECK(assemble_integral_energy_2d(g, m, u, 2.0) == doctest::Approx(2.0 * gz));
  auto W = parse_density(R"({"family":"power_norm","dim":3,"p":2})");
  auto m3 = extrude(m, 2);
  auto v = vertical_competitor(m3, bc_for(z), 0.5, 0.4);
  double w = 0.25 + 0.0625 + 0.16;
  CHECK(assemble_sup_energy_3d(W, m3, v, 0.5) == doctest::Approx(w));
  CHECK(assemble_integral_energy_3d(W, m3, v, 0.5) == doctest::Approx(2.0 * w));
}

TEST_CASE("energies leaving the domain are infinite") {
  auto g = parse_density(R"({"family":"indicator_ball","dim":2,"radius":0.5})");
  auto m = mesh_rectangle({0, 0}, {1, 1}, 2, 2);
  auto u = affine_extension(m, bc_for({1.0, 0.0}));
  CHECK(std::isinf(assemble_sup_energy_2d(g, m, u)));
  CHECK(std::isinf(assemble_integral_energy_2d(g, m, u, 1.0)));
}

TEST_CASE("best zeta finds the vertical minimiser") {
  auto W = parse_density(R"({"family":"expr","dim":3,"expr":"abs(zeta-0.3)+z1^2"})");
  CHECK(best_zeta(W, {0.0, 0.0}) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("level convexity screen") {
  CHECK(density_is_level_convex(parse_density(R"({"family":"norm","dim":3})")));
  CHECK_FALSE(density_is_level_convex(parse_density(R"({"family":"double_well","dim":3,"radius":1})")));
}

TEST_CASE("2D supremal minimum of a convex density is the boundary value") {
  auto g = parse_density(R"({"family":"norm","dim":2,"center":[1,0]})");
  auto m = mesh_rectangle({0, 0}, {1, 1}, 3, 3);
  SolverOptions o;
  o.tol_t = 1e-5;
  auto r = minimize_sup_2d(g, m, bc_for({0.5, 0.25}), o);
  CHECK(r.feasible);
  CHECK(r.value == doctest::Approx(std::hypot(0.5, 0.25)).epsilon(1e-4));
  CHECK(r.t_lo <= r.t_hi);
  CHECK(assemble_sup_energy_2d(g, m, r.minimizer) <= r.t_hi + 1e-9);
}

TEST_CASE("3D supremal minimum of the norm is the in-plane norm") {
  auto W = parse_density(R"({"family":"norm","dim":3})");
  auto m = extrude(mesh_rectangle({0, 0}, {1, 1}, 2, 2), 2);
  SolverOptions o;
  o.epsilon = 0.5;
  auto r = minimize_sup_3d(W, m, bc_for({1.0, 0.0}), o);
  CHECK(r.feasible);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("3D supremal solver rejects non level convex densities without heuristic mode") {
  auto W = parse_density(R"({"family":"double_well","dim":3,"radius":1})");
  auto m = extrude(mesh_rectangle({0, 0}, {1, 1}, 2, 2), 1);
  SolverOptions o;
  o.epsilon = 0.5;
  CHECK_THROWS_AS(minimize_sup_3d(W, m, bc_for({0.0, 0.0}), o), ValidationError);
}

TEST_CASE("integral minimum of the squared norm is the affine energy") {
  auto f = parse_density(R"({"family":"power_norm","dim":3,"p":2})");
  auto m = extrude(mesh_rectangle({0, 0}, {1, 1}, 2, 2), 2);
  SolverOptions o;
  o.epsilon = 0.25;
  auto r = minimize_integral_3d(f, m, bc_for({1.0, 0.5}), o);
  CHECK(r.feasible);
  CHECK(r.value == doctest::Approx(2.0 * 1.25).epsilon(1e-6));
}

TEST_CASE("integral solver reports infeasible boundary data") {
  auto f = parse_density(R"({"family":"indicator_ball","dim":3,"radius":0.5})");
  auto m = extrude(mesh_rectangle({0, 0}, {1, 1}, 2, 2), 1);
  SolverOptions o;
  o.epsilon = 0.5;
  auto r = minimize_integral_3d(f, m, bc_for({1.0, 0.0}), o);
  CHECK_FALSE(r.feasible);
  CHECK(std::isinf(r.value));
}

TEST_CASE("limit problem and lower bound check") {
  auto grid = Grid::cube(2, -3.0, 3.0, 25);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto p = grid.point(i);
    v[i] = p[0] * p[0] + p[1] * p[1];
  }
  GridFunction f0(grid, v);
  auto m = mesh_rectangle({0, 0}, {1, 1}, 3, 3);
  auto lim = limit_integral_2d(f0, m, bc_for({1.0, 0.5}));
  CHECK(lim.value == doctest::Approx(2.5).epsilon(1e-6));
  SolveReport above;
  above.value = 2.6;
  SolveReport below;
  below.value = 2.0;
  auto ok = lower_bound_check(f0, m, lim.minimizer, {above});
  CHECK(ok.pass);
  CHECK(ok.bound == doctest::Approx(2.5).epsilon(1e-6));
  CHECK_FALSE(lower_bound_check(f0, m, lim.minimizer, {above, below}).pass);
}

TEST_CASE("solve report rows match the header") {
  SolveReport r;
  r.value = 1.5;
  auto header = solve_report_header();
  CHECK(header.rfind("epsilon,", 0) == 0);
  CHECK(commas(solve_report_row(r)) == commas(header));
}
