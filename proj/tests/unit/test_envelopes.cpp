#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "thinlim/envelopes.hpp"
#include "thinlim/error.hpp"
#include "thinlim/geometry.hpp"

using namespace thinlim;

namespace {
GridFunction random_function(const Grid& g, std::uint64_t seed, double inf_rate) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto p = g.point(i);
    double r2 = p[0] * p[0] + (g.dim() > 1 ? p[1] * p[1] : 0.0);
    v[i] = u(rng) < inf_rate ? kInf : r2 + u(rng);
  }
  return {g, v};
}

// Lower hull by monotone chain, evaluated at every node.
std::vector<double> chain_oracle(const GridFunction& f) {
  const auto& g = f.grid();
  std::vector<std::pair<double, double>> hull;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) continue;
    std::pair<double, double> p{g.coord(0, i), f[i]};
    while (hull.size() >= 2) {
      auto a = hull[hull.size() - 2], b = hull.back();
      if ((b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first) <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::vector<double> out(f.size(), kInf);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = g.coord(0, i);
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
      if (x >= hull[k].first && x <= hull[k + 1].first) {
        double t = (x - hull[k].first) / (hull[k + 1].first - hull[k].first);
        out[i] = (1 - t) * hull[k].second + t * hull[k + 1].second;
      }
    }
    if (hull.size() == 1 && x == hull[0].first) out[i] = hull[0].second;
  }
  return out;
}

// Minimum over all triangles and segments of finite nodes containing x.
std::vector<double> triangle_oracle(const GridFunction& f) {
  const auto& g = f.grid();
  std::vector<std::size_t> fin;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::isfinite(f[i])) fin.push_back(i);
  }
  auto pt = [&](std::size_t i) {
    auto p = g.point(i);
    return Vec2{p[0], p[1]};
  };
  std::vector<double> out(f.size(), kInf);
  for (std::size_t x = 0; x < f.size(); ++x) {
    Vec2 q = pt(x);
    double best = std::isfinite(f[x]) ? f[x] : kInf;
    for (std::size_t a = 0; a < fin.size(); ++a) {
      for (std::size_t b = a + 1; b < fin.size(); ++b) {
        Vec2 pa = pt(fin[a]), pb = pt(fin[b]);
        if (std::abs(orient(pa, pb, q)) < 1e-12) {
          double len2 = dot(pb - pa, pb - pa), t = dot(q - pa, pb - pa) / len2;
          if (t >= -1e-12 && t <= 1 + 1e-12) best = std::min(best, (1 - t) * f[fin[a]] + t * f[fin[b]]);
        }
        for (std::size_t c = b + 1; c < fin.size(); ++c) {
          Vec2 pc = pt(fin[c]);
          double area = orient(pa, pb, pc);
          if (std::abs(area) < 1e-12) continue;
          double la = orient(q, pb, pc) / area, lb = orient(pa, q, pc) / area, lc = orient(pa, pb, q) / area;
          if (la < -1e-12 || lb < -1e-12 || lc < -1e-12) continue;
          best = std::min(best, la * f[fin[a]] + lb * f[fin[b]] + lc * f[fin[c]]);
        }
      }
    }
    out[x] = best;
  }
  return out;
}

// Smallest level whose sublevel hull contains the node.
std::vector<double> level_oracle(const GridFunction& f) {
  const auto& g = f.grid();
  std::vector<double> levels;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::isfinite(f[i])) levels.push_back(f[i]);
  }
  std::sort(levels.begin(), levels.end());
  std::vector<double> out(f.size(), kInf);
  for (double t : levels) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] <= t) pts.push_back({g.point(i)[0], g.point(i)[1]});
    }
    auto h = convex_hull(pts);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (out[i] == kInf && hull_contains(h, {g.point(i)[0], g.point(i)[1]}, 1e-12)) out[i] = t;
    }
  }
  return out;
}

void check_equal(const GridFunction& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (std::isinf(want[i])) {
      CHECK(std::isinf(got[i]));
    } else {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol));
    }
  }
}
}  // namespace

TEST_CASE("1D convex envelope and biconjugate match the monotone chain") {
  auto g = Grid::cube(1, -2.0, 2.0, 41);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto f = random_function(g, seed, 0.1);
    auto want = chain_oracle(f);
    check_equal(convex_envelope(f), want, 1e-12);
    check_equal(biconjugate(f), want, 1e-10);
  }
}

TEST_CASE("2D convex envelope and biconjugate match the triangle oracle") {
  auto g = Grid::cube(2, -1.0, 1.0, 6);
  for (std::uint64_t seed : {4u, 5u}) {
    auto f = random_function(g, seed, 0.15);
    auto want = triangle_oracle(f);
    check_equal(convex_envelope(f), want, 1e-10);
    check_equal(biconjugate(f), want, 1e-9);
  }
}

TEST_CASE("2D level convex envelope matches sublevel hulls") {
  auto g = Grid::cube(2, -1.0, 1.0, 7);
  for (std::uint64_t seed : {6u, 7u}) {
    auto f = random_function(g, seed, 0.1);
    check_equal(level_convex_envelope(f), level_oracle(f), 1e-15);
  }
}

TEST_CASE("envelope ordering co <= lc <= f") {
  auto g = Grid::cube(2, -1.0, 1.0, 9);
  auto f = random_function(g, 8, 0.0);
  auto co = convex_envelope(f);
  auto lc = level_convex_envelope(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(co[i] <= lc[i] + 1e-12);
    CHECK(lc[i] <= f[i]);
  }
}

TEST_CASE("projection takes the column minimum over the last axis") {
  auto g = Grid::cube(3, -1.0, 1.0, 5);
  auto f = random_function(g, 9, 0.2);
  auto p = project_inf(f);
  CHECK(p.grid().dim() == 2);
  REQUIRE(p.size() == 25);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double m = kInf;
      for (std::size_t k = 0; k < 5; ++k) m = std::min(m, f.at({i, j, k}));
      CHECK(p.at({i, j, 0}) == m);
    }
  }
}

TEST_CASE("indicator of sublevel") {
  auto g = Grid::cube(1, -1.0, 1.0, 5);
  GridFunction w(g, {1.0, 0.25, 0.0, 0.25, 1.0});
  auto ind = indicator_of_sublevel(w, 0.5);
  CHECK(std::isinf(ind[0]));
  CHECK(ind[1] == 0.0);
  CHECK(ind[2] == 0.0);
  CHECK(std::isinf(ind[4]));
  CHECK_THROWS_AS(indicator_of_sublevel(w, -1.0), EmptyDomainError);
}

TEST_CASE("sublevel hull in 1D is an interval") {
  auto g = Grid::cube(1, -1.0, 1.0, 5);
  GridFunction w(g, {0.0, 3.0, 3.0, 0.5, 2.0});
  auto s = sublevel_hull(w, 1.0);
  CHECK(s.points.size() == 2);
  REQUIRE(s.hull.size() == 2);
  CHECK(s.hull[0][0] == doctest::Approx(-1.0));
  CHECK(s.hull[1][0] == doctest::Approx(0.5));
  CHECK(sublevel_hull(w, -1.0).empty());
}

TEST_CASE("convex position and level convexity defects") {
  auto g = Grid::cube(1, 0.0, 1.0, 5);
  CHECK(convex_position_defect(g, {0, 1, 2}) == 0);
  CHECK(convex_position_defect(g, {0, 4}) == 3);
  auto mask = hull_mask(g, {1, 3});
  CHECK(mask == std::vector<std::uint8_t>{0, 1, 1, 1, 0});
  GridFunction bowl(g, {4.0, 1.0, 0.0, 1.0, 4.0});
  CHECK(level_convexity_defect(bowl) == 0);
  GridFunction wells(g, {1.0, 0.0, 1.0, 0.0, 1.0});
  CHECK(level_convexity_defect(wells) > 0);
}

TEST_CASE("coercivity of norm and squared norm") {
  auto g = Grid::cube(2, -2.0, 2.0, 17);
  std::vector<double> n1(g.size()), n2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    double r = std::hypot(p[0], p[1]);
    n1[i] = 2.0 * r;
    n2[i] = r * r;
  }
  auto c1 = validate_coercivity(GridFunction(g, n1));
  CHECK(c1.constant == doctest::Approx(2.0));
  CHECK_FALSE(c1.fails_near_origin);
  auto c2 = validate_coercivity(GridFunction(g, n2));
  CHECK(c2.fails_near_origin);
  CHECK(c2.far_constant >= 1.0 - 1e-12);
}

TEST_CASE("envelope kind names round trip") {
  for (auto k : {EnvelopeKind::InfProjection, EnvelopeKind::Convex, EnvelopeKind::Biconjugate, EnvelopeKind::LevelConvex}) {
    CHECK(parse_envelope_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_envelope_kind("concave"), ValidationError);
}

TEST_CASE("envelope report has no violation for a convex input") {
  auto g = Grid::cube(2, -1.0, 1.0, 9);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    v[i] = p[0] * p[0] + std::abs(p[1]);
  }
  auto rep = envelope_report(GridFunction(g, v), EnvelopeKind::Biconjugate);
  CHECK(rep.max_violation <= 1e-9);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(rep.output[i] == doctest::Approx(v[i]).epsilon(1e-9));
  std::stringstream ss;
  write_envelope_csv(ss, rep);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "node,input,output,violation");
}
