#include <benchmark/benchmark.h>

#include <cmath>

#include "thinlim/envelopes.hpp"
#include "thinlim/maxmin.hpp"
#include "thinlim/solver.hpp"

using namespace thinlim;

namespace {

GridFunction double_well(int dim, std::size_t n) {
  const Grid grid = Grid::cube(dim, -2.0, 2.0, n);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point3 x = grid.point(i);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    v[i] = (r2 - 1.0) * (r2 - 1.0);
  }
  return GridFunction(grid, std::move(v));
}

void BM_Biconjugate1D(benchmark::State& state) {
  const GridFunction g = double_well(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(biconjugate(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Biconjugate1D)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Biconjugate2D(benchmark::State& state) {
  const GridFunction g = double_well(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(biconjugate(g));
}
BENCHMARK(BM_Biconjugate2D)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_ConvexEnvelope2D(benchmark::State& state) {
  const GridFunction g = double_well(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_envelope(g));
}
BENCHMARK(BM_ConvexEnvelope2D)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_LevelConvex3D(benchmark::State& state) {
  const GridFunction g = double_well(3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(level_convex_envelope(g));
}
BENCHMARK(BM_LevelConvex3D)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_SupSolve2D(benchmark::State& state) {
  const Density g = parse_density(R"J({"dim":2,"family":"norm","center":[1,0]})J");
  const auto n = static_cast<std::size_t>(state.range(0));
  const SimplicialMesh mesh = mesh_rectangle({0, 0}, {1, 1}, n, n);
  const BoundaryData bc{{{0.5, 0.25}, 0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(minimize_sup_2d(g, mesh, bc));
}
BENCHMARK(BM_SupSolve2D)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_MaxMinVerify(benchmark::State& state) {
  std::vector<AffineFunction> a;
  for (int i = 0; i < 8; ++i) a.push_back({{std::cos(i * 0.8), std::sin(i * 0.8)}, 0.1 * i});
  const ConvexPolygon omega = ConvexPolygon::unit_square();
  const PAFunction pa = PAFunction::upper_envelope(a, omega);
  const MaxMinForm form = maxmin_representation(pa, omega);
  for (auto _ : state) benchmark::DoNotOptimize(verify_representation(pa, form, omega, 10000));
}
BENCHMARK(BM_MaxMinVerify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
