#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "thinlim/error.hpp"
#include "thinlim/mesh.hpp"

using namespace thinlim;

namespace {
double volume_sum(const SimplicialMesh& m) {
  double s = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    CHECK(m.volume(c) > 0.0);
    s += m.volume(c);
  }
  return s;
}
}  // namespace

TEST_CASE("rectangle mesh covers the rectangle") {
  for (auto pat : {DiagonalPattern::UnionJack, DiagonalPattern::Uniform}) {
    auto m = mesh_rectangle({-1, 0}, {2, 1}, 6, 4, pat);
    CHECK(m.dim() == 2);
    CHECK(m.num_vertices() == 35);
    CHECK(m.num_cells() == 48);
    CHECK(volume_sum(m) == doctest::Approx(3.0));
    CHECK(m.total_volume() == doctest::Approx(3.0));
    REQUIRE(m.lattice.has_value());
    CHECK(m.lattice->pattern == pat);
    std::size_t lateral = 0;
    for (auto t : m.tags()) lateral += t == VertexTag::Lateral;
    CHECK(lateral == 20);
  }
}

TEST_CASE("polygon mesh area matches the polygon") {
  auto hex = ConvexPolygon::regular(6, {0.2, 0.1}, 1.0);
  auto m = mesh_polygon(hex, 8);
  CHECK(volume_sum(m) == doctest::Approx(hex.area()).epsilon(1e-12));
  for (const auto& v : m.vertices()) CHECK(hex.contains({v[0], v[1]}, 1e-9));
}

TEST_CASE("extrusion has twice the base area as volume") {
  auto base = mesh_rectangle({0, 0}, {1, 1}, 3, 3);
  auto m = extrude(base, 4);
  CHECK(m.dim() == 3);
  CHECK(m.num_vertices() == base.num_vertices() * 5);
  CHECK(m.num_cells() == base.num_cells() * 12);
  CHECK(volume_sum(m) == doctest::Approx(2.0));
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const auto& x = m.vertices()[v];
    if (std::abs(std::abs(x[2]) - 1.0) < 1e-12) CHECK(m.tags()[v] != VertexTag::Interior);
  }
}

TEST_CASE("affine traces have exact cell gradients") {
  auto m2 = mesh_polygon(ConvexPolygon({{0, 0}, {2, 0}, {1, 1.5}}), 6);
  std::vector<double> g2{0.7, -1.3};
  auto u2 = affine_trace(m2, g2, 0.4);
  for (const auto& cg : gradient_field(m2, u2.values())) {
    CHECK(cg[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(cg[1] == doctest::Approx(-1.3).epsilon(1e-12));
  }
  auto m3 = extrude(mesh_rectangle({0, 0}, {1, 1}, 2, 2), 2);
  std::vector<double> g3{1.0, 2.0, -0.5};
  auto u3 = affine_trace(m3, g3, 0.0);
  for (std::size_t c = 0; c < m3.num_cells(); ++c) {
    auto cg = cell_gradient(m3, c, u3.values());
    for (int k = 0; k < 3; ++k) CHECK(cg[k] == doctest::Approx(g3[k]).epsilon(1e-12));
  }
}

TEST_CASE("dilation scales areas by t squared") {
  auto m = mesh_rectangle({0, 0}, {1, 1}, 4, 4);
  auto d = dilate_mesh(m, {0.5, 0.5}, 0.25);
  CHECK(d.total_volume() == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("mesh text round trip") {
  auto m = extrude(mesh_rectangle({0, 0}, {1, 2}, 2, 3), 2);
  std::stringstream ss;
  write_mesh(ss, m);
  auto r = read_mesh(ss);
  CHECK(r.dim() == 3);
  CHECK(r.vertices() == m.vertices());
  CHECK(r.cells() == m.cells());
  CHECK(r.tags() == m.tags());
  std::stringstream bad("v 0 0\nc 0 1 7\n");
  CHECK_THROWS(read_mesh(bad));
}
