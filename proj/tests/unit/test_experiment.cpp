#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "thinlim/error.hpp"
#include "thinlim/experiment.hpp"

using namespace thinlim;

namespace {
std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

SweepTable one_row() {
  SweepTable t;
  t.mlimit = 1.0;
  t.rows.push_back({0.5, 1.25, 1.0, 0.25, 0.0, 12, "ok"});
  return t;
}
}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.pipeline = Pipeline::Integral;
  c.z = {0.5, -0.25};
  c.epsilons = {0.5, 0.1};
  c.n_xy = 5;
  c.heuristic = true;
  c.record_runtime = false;
  auto back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(parse_config("{}") == ExperimentConfig{});
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(parse_config(R"({"bogus":1})"), ValidationError);
  CHECK_THROWS_AS(parse_config("not json"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"n_xy":"many"})"), ValidationError);
  CHECK_THROWS_AS(parse_pipeline("both"), ValidationError);
  ExperimentConfig c;
  c.epsilons = {0.1, 0.2};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.n3 = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.density = R"({"family":"norm","dim":2})";
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("csv has a header and one line per row") {
  auto csv = sweep_csv(one_row());
  CHECK(line_count(csv) == 2);
  CHECK(csv.rfind("epsilon,m3d,mlimit,gap,runtime_s,iterations,status\n", 0) == 0);
  CHECK(csv.find(",ok") != std::string::npos);
  CHECK_THROWS_AS(emit_csv(SweepTable{}, "unused.csv"), ValidationError);
}

TEST_CASE("svg plot has the fixed canvas") {
  auto svg = sweep_svg(one_row());
  CHECK(svg.find("width=\"640\"") != std::string::npos);
  CHECK(svg.find("height=\"480\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("gap consistency") {
  auto t = one_row();
  CHECK(t.gap_consistency() == doctest::Approx(0.0));
  t.rows[0].gap = 0.5;
  CHECK(t.gap_consistency() == doctest::Approx(0.25));
}

TEST_CASE("emit to an unwritable path is an io error") {
  CHECK_THROWS_AS(emit_csv(one_row(), "/nonexistent/dir/sweep.csv"), IoError);
  CHECK_THROWS_AS(emit_svg_plot(one_row(), "/nonexistent/dir/sweep.svg"), IoError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/c.json"), IoError);
}

TEST_CASE("small supremal sweep of the norm is flat") {
  ExperimentConfig c;
  c.epsilons = {0.5, 0.25};
  c.n_xy = 3;
  c.n3 = 2;
  c.envelope_n = 17;
  c.record_runtime = false;
  auto t = run_sweep(c, 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.mlimit == doctest::Approx(1.0).epsilon(1e-3));
  for (const auto& r : t.rows) {
    CHECK(r.status == "ok");
    CHECK(r.m3d == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.runtime_s == 0.0);
  }
  CHECK(t.gap_consistency() <= 1e-12);
  CHECK(sweep_csv(t) == sweep_csv(run_sweep(c, 1)));
}
