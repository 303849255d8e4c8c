#include "thinlim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "thinlim/envelopes.hpp"
#include "thinlim/error.hpp"

namespace thinlim {

using nlohmann::json;

std::string to_string(Pipeline p) { return p == Pipeline::Supremal ? "supremal" : "integral"; }

Pipeline parse_pipeline(const std::string& name) {
  if (name == "supremal") return Pipeline::Supremal;
  if (name == "integral") return Pipeline::Integral;
  throw ValidationError("unknown pipeline '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (epsilons.empty()) throw ValidationError("epsilon list is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) throw ValidationError("epsilon values must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ValidationError("epsilon values must be strictly decreasing");
  }
  if (n_xy < 2 || n3 < 2) throw ValidationError("mesh resolutions must be >= 2");
  if (!(tol_t > 0.0) || !(tol_f > 0.0)) throw ValidationError("tolerances must be positive");
  if (max_iterations < 1) throw ValidationError("iteration cap must be >= 1");
  if (!(envelope_radius > 0.0) || envelope_n < 3) throw ValidationError("envelope grid needs radius > 0 and >= 3 nodes");
  if (!std::isfinite(z.x) || !std::isfinite(z.y) || !std::isfinite(offset))
    throw ValidationError("boundary data must be finite");
  ConvexPolygon{polygon};
  if (parse_density(density).dim() != 3) throw ValidationError("sweep density must be 3D");
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["pipeline"] = to_string(cfg.pipeline);
  j["density"] = json::parse(cfg.density);
  json poly = json::array();
  for (Vec2 v : cfg.polygon) poly.push_back({v.x, v.y});
  j["polygon"] = poly;
  j["z"] = {cfg.z.x, cfg.z.y};
  j["offset"] = cfg.offset;
  j["epsilons"] = cfg.epsilons;
  j["n_xy"] = cfg.n_xy;
  j["n3"] = cfg.n3;
  j["tol_t"] = cfg.tol_t;
  j["tol_f"] = cfg.tol_f;
  j["max_iterations"] = cfg.max_iterations;
  j["output_dir"] = cfg.output_dir;
  j["heuristic"] = cfg.heuristic;
  j["envelope_radius"] = cfg.envelope_radius;
  j["envelope_n"] = cfg.envelope_n;
  j["record_runtime"] = cfg.record_runtime;
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "pipeline")
        c.pipeline = parse_pipeline(v.get<std::string>());
      else if (key == "density")
        c.density = v.is_string() ? json::parse(v.get<std::string>()).dump() : v.dump();
      else if (key == "polygon") {
        c.polygon.clear();
        for (const auto& p : v) {
          if (p.size() != 2) throw ValidationError("polygon vertices need 2 coordinates");
          c.polygon.push_back({p[0].get<double>(), p[1].get<double>()});
        }
      } else if (key == "z") {
        if (v.size() != 2) throw ValidationError("z needs 2 components");
        c.z = {v[0].get<double>(), v[1].get<double>()};
      } else if (key == "offset")
        c.offset = v.get<double>();
      else if (key == "epsilons")
        c.epsilons = v.get<std::vector<double>>();
      else if (key == "n_xy")
        c.n_xy = v.get<std::size_t>();
      else if (key == "n3")
        c.n3 = v.get<std::size_t>();
      else if (key == "tol_t")
        c.tol_t = v.get<double>();
      else if (key == "tol_f")
        c.tol_f = v.get<double>();
      else if (key == "max_iterations")
        c.max_iterations = v.get<std::size_t>();
      else if (key == "output_dir")
        c.output_dir = v.get<std::string>();
      else if (key == "heuristic")
        c.heuristic = v.get<bool>();
      else if (key == "envelope_radius")
        c.envelope_radius = v.get<double>();
      else if (key == "envelope_n")
        c.envelope_n = v.get<std::size_t>();
      else if (key == "record_runtime")
        c.record_runtime = v.get<bool>();
      else
        throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config value: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << serialize_config(cfg);
}

double SweepTable::gap_consistency() const {
  double worst = 0.0;
  for (const SweepRow& r : rows) {
    if (!std::isfinite(r.m3d) || !std::isfinite(r.mlimit)) continue;
    worst = std::max(worst, std::abs(r.gap - (r.m3d - r.mlimit)));
  }
  return worst;
}

namespace {

struct RowResult {
  SweepRow row;
  SolveReport report;
  bool solved = false;
  std::exception_ptr error;
};

template <class Fn>
void run_pool(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

}  // namespace

SweepTable run_sweep(const ExperimentConfig& cfg, std::size_t workers) {
  cfg.validate();
  if (workers < 1) throw ValidationError("workers must be >= 1");
  const Density W = parse_density(cfg.density);
  const ConvexPolygon omega(cfg.polygon);
  const SimplicialMesh mesh2d = mesh_polygon(omega, cfg.n_xy);
  const SimplicialMesh mesh3d = extrude(mesh2d, cfg.n3);
  const BoundaryData bc{{cfg.z, cfg.offset}};
  SolverOptions base;
  base.tol_t = cfg.tol_t;
  base.tol_f = cfg.tol_f;
  base.max_iterations = cfg.max_iterations;
  base.heuristic = cfg.heuristic;

  const GridFunction sampled = sample_density(W, Grid::cube(3, -cfg.envelope_radius, cfg.envelope_radius, cfg.envelope_n));
  GridFunction limit_density;
  SolveReport limit;
  if (cfg.pipeline == Pipeline::Supremal) {
    const Coercivity c = validate_coercivity(sampled);
    if (!(c.far_constant > 0.0)) throw ValidationError("density fails the coercivity check");
    limit_density = level_convex_envelope(project_inf(sampled));
    limit = minimize_sup_2d(grid_density(limit_density), mesh2d, bc, base);
  } else {
    limit_density = biconjugate(project_inf(sampled));
    limit = limit_integral_2d(limit_density, mesh2d, bc, base);
  }

  std::vector<RowResult> results(cfg.epsilons.size());
  run_pool(results.size(), workers, [&](std::size_t i) {
    RowResult& r = results[i];
    const auto start = std::chrono::steady_clock::now();
    SolverOptions opts = base;
    opts.epsilon = cfg.epsilons[i];
    r.row.epsilon = opts.epsilon;
    r.row.mlimit = limit.value;
    try {
      r.report = cfg.pipeline == Pipeline::Supremal ? minimize_sup_3d(W, mesh3d, bc, opts)
                                                    : minimize_integral_3d(W, mesh3d, bc, opts);
      r.solved = true;
      r.row.m3d = r.report.value;
      r.row.iterations = r.report.iterations;
      r.row.status = !r.report.feasible ? "infeasible" : r.report.heuristic ? "heuristic" : "ok";
    } catch (const SolverError&) {
      r.row.m3d = std::nan("");
      r.row.status = "solver_error";
    } catch (...) {
      r.error = std::current_exception();
    }
    r.row.gap = r.row.m3d - r.row.mlimit;
    if (cfg.record_runtime)
      r.row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  SweepTable table;
  table.mlimit = limit.value;
  for (const RowResult& r : results)
    if (r.error) std::rethrow_exception(r.error);
  if (cfg.pipeline == Pipeline::Integral) {
    std::vector<SolveReport> solved;
    for (const RowResult& r : results)
      if (r.solved) solved.push_back(r.report);
    const LowerBoundReport lb = lower_bound_check(limit_density, mesh2d, limit.minimizer, solved);
    table.lower_bound_pass = lb.pass;
    std::size_t k = 0;
    for (RowResult& r : results)
      if (r.solved && lb.slack[k++] < -1e-6 && r.row.status == "ok") r.row.status = "below_bound";
  }
  for (RowResult& r : results) table.rows.push_back(std::move(r.row));
  return table;
}

}  // namespace thinlim
