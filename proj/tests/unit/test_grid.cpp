#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "thinlim/error.hpp"
#include "thinlim/grid.hpp"

using namespace thinlim;

TEST_CASE("grid flat and unflat are inverse") {
  Grid g(3, {-1.0, 0.0, 2.0}, {0.5, 0.25, 1.0}, {4, 3, 5});
  CHECK(g.size() == 60);
  for (std::size_t f = 0; f < g.size(); ++f) CHECK(g.flat(g.unflat(f)) == f);
  CHECK(g.flat({0, 0, 1}) == 1);
  CHECK(g.flat({0, 1, 0}) == 5);
  auto p = g.point(g.flat({3, 2, 4}));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(6.0));
  CHECK(g.upper()[2] == doctest::Approx(6.0));
}

TEST_CASE("grid cube spans the requested interval") {
  auto g = Grid::cube(2, -2.0, 2.0, 9);
  CHECK(g.dim() == 2);
  CHECK(g.size() == 81);
  CHECK(g.spacing()[0] == doctest::Approx(0.5));
  CHECK(g.upper()[1] == doctest::Approx(2.0));
  CHECK(g.drop_last_axis().dim() == 1);
}

TEST_CASE("multilinear interpolation reproduces affine functions") {
  auto g = Grid::cube(3, -1.0, 1.0, 5);
  std::vector<double> v(g.size());
  auto affine = [](double x, double y, double z) { return 0.3 * x - 1.7 * y + 2.0 * z + 5.0; };
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    v[i] = affine(p[0], p[1], p[2]);
  }
  GridFunction f(g, v);
  for (double x : {-0.9, -0.33, 0.1, 0.77}) {
    for (double y : {-0.6, 0.05, 0.99}) {
      double z = 0.5 * x - 0.2;
      std::vector<double> q{x, y, z};
      CHECK(f.interpolate(q) == doctest::Approx(affine(x, y, z)).epsilon(1e-12));
    }
  }
  std::vector<double> outside{1.5, 0.0, 0.0};
  CHECK(std::isinf(f.interpolate(outside)));
}

TEST_CASE("interpolation touching an infinite node is infinite") {
  auto g = Grid::cube(1, 0.0, 1.0, 3);
  GridFunction f(g, {0.0, 1.0, kInf});
  std::vector<double> a{0.25}, b{0.75};
  CHECK(f.interpolate(a) == doctest::Approx(0.5));
  CHECK(std::isinf(f.interpolate(b)));
  CHECK(f.max_finite() == doctest::Approx(1.0));
  CHECK(f.min_value() == doctest::Approx(0.0));
  CHECK(f.any_finite());
  CHECK_FALSE(GridFunction(g, kInf).any_finite());
}

TEST_CASE("grid function text round trip keeps values and infinities") {
  auto g = Grid::cube(2, -1.0, 1.0, 4);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 5 == 0 ? kInf : 1.0 + std::sin(0.37 * static_cast<double>(i));
  GridFunction f(g, v);
  std::stringstream ss;
  write_grid_function(ss, f);
  auto r = read_grid_function(ss);
  CHECK(r.grid() == g);
  REQUIRE(r.size() == f.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(r[i] == v[i]);
}

TEST_CASE("malformed grid text is an io error") {
  std::stringstream bad("2 3 3 0 0 1 1\n1\n2\n");
  CHECK_THROWS_AS(read_grid_function(bad), IoError);
  std::stringstream junk("two");
  CHECK_THROWS_AS(read_grid_function(junk), IoError);
  CHECK_THROWS_AS(load_grid_function("/nonexistent/dir/g.grid"), IoError);
}

TEST_CASE("negative grid values are rejected") {
  auto g = Grid::cube(1, 0.0, 1.0, 2);
  CHECK_THROWS_AS(GridFunction(g, std::vector<double>{0.0, -1.0}), ValidationError);
}
