#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "thinlim/error.hpp"
#include "thinlim/maxmin.hpp"

using namespace thinlim;

namespace {
double grid_deviation(const PAFunction& pa, const MaxMinForm& form, const ConvexPolygon& omega, int n) {
  Vec2 lo, hi;
  omega.bounding_box(lo, hi);
  double dev = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      Vec2 p{lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n};
      if (omega.contains(p)) dev = std::max(dev, std::abs(eval_pa(pa, p) - eval_maxmin(form, p)));
    }
  }
  return dev;
}

// min(|x - 0.5|, 0.3) on the unit square: neither convex nor concave.
PAFunction capped_vee() {
  return PAFunction({
      {{{0.0, 0.0}, 0.3}, ConvexPolygon::box({0.0, 0.0}, {0.2, 1.0})},
      {{{-1.0, 0.0}, 0.5}, ConvexPolygon::box({0.2, 0.0}, {0.5, 1.0})},
      {{{1.0, 0.0}, -0.5}, ConvexPolygon::box({0.5, 0.0}, {0.8, 1.0})},
      {{{0.0, 0.0}, 0.3}, ConvexPolygon::box({0.8, 0.0}, {1.0, 1.0})},
  });
}
}  // namespace

TEST_CASE("roof function gives singleton groups") {
  auto sq = ConvexPolygon::unit_square();
  auto pa = PAFunction::upper_envelope({{{1.0, 0.0}, 0.0}, {{-1.0, 0.5}, 1.0}}, sq);
  auto form = maxmin_representation(pa, sq);
  REQUIRE(form.groups.size() == 2);
  for (const auto& g : form.groups) CHECK(g.size() == 1);
  CHECK(grid_deviation(pa, form, sq, 40) <= 1e-12);
  auto v = verify_representation(pa, form, sq, 500);
  CHECK(v.pass);
  CHECK(v.label == "valid");
  CHECK(v.points_checked >= 500);
}

TEST_CASE("concave function gives one group") {
  auto sq = ConvexPolygon::unit_square();
  auto pa = PAFunction::lower_envelope({{{1.0, 0.0}, 0.0}, {{-1.0, 0.0}, 1.0}, {{0.0, 1.0}, 0.2}}, sq);
  auto form = maxmin_representation(pa, sq);
  REQUIRE(form.groups.size() == 1);
  CHECK(form.groups[0].size() == 3);
  CHECK(grid_deviation(pa, form, sq, 40) <= 1e-12);
}

TEST_CASE("mixed function matches on a dense grid") {
  auto sq = ConvexPolygon::unit_square();
  auto pa = capped_vee();
  auto form = maxmin_representation(pa, sq);
  CHECK_NOTHROW(form.validate());
  CHECK(grid_deviation(pa, form, sq, 100) <= 1e-12);
  CHECK(verify_representation(pa, form, sq, 1000).pass);
  auto hex = ConvexPolygon::regular(6, {0.5, 0.5}, 0.45);
  auto on_hex = maxmin_representation(pa, hex);
  CHECK(grid_deviation(pa, on_hex, hex, 100) <= 1e-12);
}

TEST_CASE("deleting a group is detected with a witness") {
  auto sq = ConvexPolygon::unit_square();
  auto pa = capped_vee();
  auto form = maxmin_representation(pa, sq);
  REQUIRE(form.groups.size() >= 2);
  form.groups.erase(form.groups.begin());
  auto v = verify_representation(pa, form, sq, 500);
  CHECK_FALSE(v.pass);
  CHECK(v.label == "invalid");
  CHECK(v.max_deviation > 1e-6);
  CHECK(std::abs(eval_pa(pa, v.witness) - eval_maxmin(form, v.witness)) == doctest::Approx(v.max_deviation));
}

TEST_CASE("discontinuous input is rejected") {
  auto sq = ConvexPolygon::unit_square();
  PAFunction jump({{{{0.0, 0.0}, 0.0}, ConvexPolygon::box({0.0, 0.0}, {0.5, 1.0})},
                   {{{0.0, 0.0}, 1.0}, ConvexPolygon::box({0.5, 0.0}, {1.0, 1.0})}});
  CHECK_THROWS_AS(maxmin_representation(jump, sq), ValidationError);
}

TEST_CASE("non-convex domain needs an explicit opt in") {
  auto L = PolygonDomain::l_shape();
  CHECK_FALSE(L.convex);
  CHECK(L.contains({0.5, 1.5}));
  CHECK_FALSE(L.contains({1.5, 1.5}));
  auto pa = PAFunction::upper_envelope({{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}}, ConvexPolygon::box({0, 0}, {2, 2}));
  CHECK_THROWS_AS(maxmin_representation(pa, L), ValidationError);
  auto form = maxmin_representation(pa, L, true);
  auto v = verify_representation(pa, form, L, 200);
  CHECK_FALSE(v.convex_domain);
  CHECK(v.label.find("not guaranteed") != std::string::npos);
}

TEST_CASE("form validation") {
  MaxMinForm f{{{{1.0, 0.0}, 0.0}}, {{0}}};
  CHECK_NOTHROW(f.validate());
  f.groups.push_back({});
  CHECK_THROWS_AS(f.validate(), ValidationError);
  f.groups.back() = {3};
  CHECK_THROWS_AS(f.validate(), ValidationError);
}

TEST_CASE("max-min text round trip") {
  auto sq = ConvexPolygon::unit_square();
  auto form = maxmin_representation(capped_vee(), sq);
  std::stringstream ss;
  write_maxmin(ss, form);
  auto r = read_maxmin(ss);
  CHECK(r.groups == form.groups);
  REQUIRE(r.affines.size() == form.affines.size());
  for (std::size_t i = 0; i < r.affines.size(); ++i) {
    CHECK(r.affines[i].gradient == form.affines[i].gradient);
    CHECK(r.affines[i].offset == form.affines[i].offset);
  }
  std::stringstream bad("1 0 0\n\n0 x\n");
  CHECK_THROWS_AS(read_maxmin(bad), IoError);
}
