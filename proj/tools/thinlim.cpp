#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "thinlim/envelopes.hpp"
#include "thinlim/error.hpp"
#include "thinlim/experiment.hpp"
#include "thinlim/identity_checks.hpp"
#include "thinlim/maxmin.hpp"
#include "thinlim/recovery.hpp"
#include "thinlim/solver.hpp"

namespace fs = std::filesystem;
using namespace thinlim;

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct Flags {
  std::string config;
  std::string in;
  std::string out;
  std::string kind;
  std::optional<double> epsilon;
  std::string mesh;
  std::size_t workers = 1;
  std::size_t verify = 0;
  std::optional<double> tol_t;
  std::optional<double> tol_f;
  std::string pa;
  std::string omega;
  double level = 1.0;
};

ExperimentConfig config_from(const Flags& f) {
  if (f.config.empty()) throw ValidationError("--config is required");
  ExperimentConfig cfg = load_config(f.config);
  if (f.tol_t) cfg.tol_t = *f.tol_t;
  if (f.tol_f) cfg.tol_f = *f.tol_f;
  cfg.validate();
  return cfg;
}

fs::path output_dir(const Flags& f, const ExperimentConfig& cfg) {
  fs::path dir = cfg.output_dir;
  if (const char* env = std::getenv("THINLIM_OUT"); env && *env) dir = env;
  if (!f.out.empty()) dir = f.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

SolverOptions options_from(const ExperimentConfig& cfg, double epsilon) {
  SolverOptions o;
  o.epsilon = epsilon;
  o.tol_t = cfg.tol_t;
  o.tol_f = cfg.tol_f;
  o.max_iterations = cfg.max_iterations;
  o.heuristic = cfg.heuristic;
  return o;
}

SimplicialMesh mesh_from(const Flags& f, const ExperimentConfig& cfg) {
  if (!f.mesh.empty()) return load_mesh(f.mesh);
  return extrude(mesh_polygon(ConvexPolygon(cfg.polygon), cfg.n_xy), cfg.n3);
}

double epsilon_from(const Flags& f, const ExperimentConfig& cfg) {
  const double e = f.epsilon.value_or(cfg.epsilons.back());
  if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("--epsilon must be positive");
  return e;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw IoError("cannot write " + path.string());
}

int cmd_envelope(const Flags& f) {
  if (f.in.empty() || f.out.empty()) throw ValidationError("envelope needs --in and --out");
  const EnvelopeKind kind = parse_envelope_kind(f.kind.empty() ? "biconjugate" : f.kind);
  const GridFunction g = load_grid_function(f.in);
  const EnvelopeReport r = envelope_report(g, kind);
  save_grid_function(f.out, r.output);
  std::printf("kind=%s nodes=%zu max_violation=%.3e\n", to_string(kind).c_str(), g.size(), r.max_violation);
  return kOk;
}

int cmd_solve(const Flags& f) {
  const ExperimentConfig cfg = config_from(f);
  const double eps = epsilon_from(f, cfg);
  const Density W = parse_density(cfg.density);
  const SimplicialMesh mesh = mesh_from(f, cfg);
  if (mesh.dim() != 3) throw ValidationError("solve needs a 3D mesh");
  const BoundaryData bc{{cfg.z, cfg.offset}};
  const SolverOptions opts = options_from(cfg, eps);
  const SolveReport r = cfg.pipeline == Pipeline::Supremal ? minimize_sup_3d(W, mesh, bc, opts)
                                                           : minimize_integral_3d(W, mesh, bc, opts);
  const fs::path dir = output_dir(f, cfg);
  write_file(dir / "solve.csv", solve_report_header() + "\n" + solve_report_row(r) + "\n");
  save_nodal_field(dir / "solution.field", r.minimizer);
  std::printf("epsilon=%.17g value=%.17g iterations=%zu%s\n", eps, r.value, r.iterations,
              r.heuristic ? " heuristic" : "");
  if (!r.feasible) {
    std::fprintf(stderr, "error: boundary data is infeasible\n");
    return kSolver;
  }
  return kOk;
}

int cmd_sweep(const Flags& f) {
  const ExperimentConfig cfg = config_from(f);
  if (f.workers < 1) throw ValidationError("--workers must be >= 1");
  const SweepTable t = run_sweep(cfg, f.workers);
  const fs::path dir = output_dir(f, cfg);
  emit_csv(t, dir / "sweep.csv");
  emit_svg_plot(t, dir / "sweep.svg");
  std::fputs(sweep_csv(t).c_str(), stdout);
  if (cfg.pipeline == Pipeline::Integral && !t.lower_bound_pass) std::fprintf(stderr, "warning: lower bound violated\n");
  for (const SweepRow& r : t.rows)
    if (r.status == "solver_error") return kSolver;
  return kOk;
}

LaminateSpec laminate_from(const fs::path& path, Vec2 z) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
    LaminateSpec s;
    s.z = z;
    s.z1 = {j.at("z1").at(0).get<double>(), j.at("z1").at(1).get<double>()};
    s.z2 = {j.at("z2").at(0).get<double>(), j.at("z2").at(1).get<double>()};
    s.lambda = j.at("lambda").get<double>();
    s.zeta1 = j.value("zeta1", 0.0);
    s.zeta2 = j.value("zeta2", 0.0);
    s.layers = j.at("layers").get<std::size_t>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed laminate file " + path.string() + ": " + e.what());
  }
}

int cmd_recover(const Flags& f) {
  const ExperimentConfig cfg = config_from(f);
  const double eps = epsilon_from(f, cfg);
  const Density W = parse_density(cfg.density);
  const SimplicialMesh mesh = mesh_from(f, cfg);
  const std::string kind = f.kind.empty() ? "vertical" : f.kind;
  const fs::path dir = output_dir(f, cfg);
  if (kind == "vertical") {
    if (mesh.dim() != 3) throw ValidationError("vertical recovery needs a 3D mesh");
    const double zeta = best_zeta(W, cfg.z);
    const NodalField u = vertical_recovery(mesh, cfg.z, zeta, eps);
    const double energy = cfg.pipeline == Pipeline::Supremal ? assemble_sup_energy_3d(W, mesh, u, eps)
                                                             : assemble_integral_energy_3d(W, mesh, u, eps);
    save_nodal_field(dir / "recovery.field", u);
    std::printf("kind=vertical zeta=%.17g energy=%.17g\n", zeta, energy);
  } else if (kind == "laminate") {
    if (f.in.empty()) throw ValidationError("laminate recovery needs --in with the laminate description");
    const LaminateSpec spec = laminate_from(f.in, cfg.z);
    const LaminateField lam = laminate_recovery(spec, eps, mesh);
    save_nodal_field(dir / "recovery.field", lam.u);
    std::printf("kind=laminate layers=%zu phase_energy=%.17g max_deviation=%.17g\n", spec.layers,
                phase_energy(W, mesh, lam, eps), max_deviation(mesh, lam.u, cfg.z));
  } else {
    throw ValidationError("unknown recovery kind '" + kind + "' (vertical|laminate)");
  }
  return kOk;
}

int cmd_maxmin(const Flags& f) {
  if (f.pa.empty() || f.omega.empty()) throw ValidationError("maxmin needs --pa and --omega");
  const PAFunction pa = load_pa(f.pa);
  const ConvexPolygon omega = load_polygon(f.omega);
  const MaxMinForm form = maxmin_representation(pa, omega);
  if (!f.out.empty()) save_maxmin(f.out, form);
  std::printf("affines=%zu groups=%zu\n", form.affines.size(), form.groups.size());
  if (f.verify > 0) {
    const MaxMinVerification v = verify_representation(pa, form, omega, f.verify);
    std::printf("verify points=%zu max_deviation=%.3e witness=(%.17g, %.17g) %s\n", v.points_checked,
                v.max_deviation, v.witness.x, v.witness.y, v.label.c_str());
    if (!v.pass) return kSolver;
  }
  return kOk;
}

int cmd_check(const Flags& f) {
  GridFunction W;
  if (!f.in.empty()) {
    W = load_grid_function(f.in);
  } else {
    const ExperimentConfig cfg = config_from(f);
    W = sample_density(parse_density(cfg.density),
                       Grid::cube(3, -cfg.envelope_radius, cfg.envelope_radius, cfg.envelope_n));
  }
  if (W.grid().dim() != 3) throw ValidationError("check needs a 3D density");
  bool ok = true;
  const CommutationReport com = check_commutation(W);
  const bool com_ok = com.interior_deviation <= 3.0 * com.h;
  std::printf("commutation        %s interior_deviation=%.3e max_deviation=%.3e h=%.3e\n", com_ok ? "PASS" : "FAIL",
              com.interior_deviation, com.max_deviation, com.h);
  ok &= com_ok;
  try {
    const IndicatorIdentityReport ind = check_indicator_identity(W, f.level);
    std::printf("indicator_identity %s level=%g symmetric_difference=%zu max_layer=%zu\n", ind.pass ? "PASS" : "FAIL",
                f.level, ind.sets.symmetric_difference, ind.sets.max_layer);
    ok &= ind.pass;
  } catch (const ValidationError& e) {
    std::printf("indicator_identity SKIP %s\n", e.what());
  }
  const EqualityRegionReport eq = check_envelope_equality_region(project_inf(W));
  const bool eq_ok = eq.interior_deviation <= 1e-9 && eq.exterior_deviation <= 1e-9;
  std::printf("equality_region    %s interior=%.3e exterior=%.3e boundary=%.3e\n", eq_ok ? "PASS" : "FAIL",
              eq.interior_deviation, eq.exterior_deviation, eq.boundary_deviation);
  ok &= eq_ok;
  const DomainIdentityReport dom = check_domain_identities(W);
  const bool dom_ok = dom.projection_exact && dom.beyond_one_layer == 0;
  std::printf("domain_identities  %s projection_exact=%d missing=%zu beyond_one_layer=%zu\n", dom_ok ? "PASS" : "FAIL",
              dom.projection_exact ? 1 : 0, dom.missing_from_biconjugate, dom.beyond_one_layer);
  ok &= dom_ok;
  return ok ? kOk : kSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin-domain limit laboratory"};
  app.require_subcommand(1);
  Flags f;

  auto* env = app.add_subcommand("envelope", "convex, biconjugate, level-convex or inf-projection envelope of a grid");
  env->add_option("--in", f.in, "input grid file")->required();
  env->add_option("--out", f.out, "output grid file")->required();
  env->add_option("--kind", f.kind, "inf_projection|convex|biconjugate|level_convex");

  auto common = [&](CLI::App* s) {
    s->add_option("--config", f.config, "experiment config (JSON)")->required();
    s->add_option("--out", f.out, "output directory");
    s->add_option("--tol-t", f.tol_t, "bisection tolerance");
    s->add_option("--tol-f", f.tol_f, "feasibility tolerance");
  };
  auto* solve = app.add_subcommand("solve", "minimize the 3D energy at one epsilon");
  common(solve);
  solve->add_option("--epsilon", f.epsilon, "thickness parameter");
  solve->add_option("--mesh", f.mesh, "3D mesh file (default: from config)");

  auto* sweep = app.add_subcommand("sweep", "epsilon sweep against the 2D limit");
  common(sweep);
  sweep->add_option("--workers", f.workers, "worker threads")->default_val(1);

  auto* recover = app.add_subcommand("recover", "vertical or laminate recovery field");
  common(recover);
  recover->add_option("--epsilon", f.epsilon, "thickness parameter");
  recover->add_option("--mesh", f.mesh, "mesh file (default: from config)");
  recover->add_option("--kind", f.kind, "vertical|laminate");
  recover->add_option("--in", f.in, "laminate description (JSON)");

  auto* maxmin = app.add_subcommand("maxmin", "max-min representation of a piecewise-affine function");
  maxmin->add_option("--pa", f.pa, "piecewise-affine function file")->required();
  maxmin->add_option("--omega", f.omega, "convex polygon file")->required();
  maxmin->add_option("--out", f.out, "output form file");
  maxmin->add_option("--verify", f.verify, "number of random samples to verify with");

  auto* check = app.add_subcommand("check", "identity suite on a 3D density");
  check->add_option("--config", f.config, "experiment config (JSON)");
  check->add_option("--in", f.in, "3D grid file instead of a config density");
  check->add_option("--level", f.level, "sublevel for the indicator identity")->default_val(1.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*env) return cmd_envelope(f);
    if (*solve) return cmd_solve(f);
    if (*sweep) return cmd_sweep(f);
    if (*recover) return cmd_recover(f);
    if (*maxmin) return cmd_maxmin(f);
    if (*check) return cmd_check(f);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolver;
  }
  return kValidation;
}
