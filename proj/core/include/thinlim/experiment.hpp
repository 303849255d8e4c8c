#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thinlim/geometry.hpp"
#include "thinlim/solver.hpp"

namespace thinlim {

enum class Pipeline { Supremal, Integral };

std::string to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);

/// Flat JSON document; `density` is a density descriptor object.
struct ExperimentConfig {
  Pipeline pipeline = Pipeline::Supremal;
  std::string density = R"({"dim":3,"family":"norm"})";
  std::vector<Vec2> polygon{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  Vec2 z{1.0, 0.0};
  double offset = 0.0;
  std::vector<double> epsilons{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::size_t n_xy = 8;
  std::size_t n3 = 4;
  double tol_t = 1e-4;
  double tol_f = 1e-7;
  std::size_t max_iterations = 5000;
  std::string output_dir = "out";
  bool heuristic = false;
  /// Half-width and nodes per axis of the envelope sampling grid.
  double envelope_radius = 4.0;
  std::size_t envelope_n = 33;
  /// When false the runtime_s column is written as 0.
  bool record_runtime = true;

  /// Epsilons strictly decreasing and positive, resolutions >= 2, density
  /// descriptor parses as a 3D density, polygon convex.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

std::string serialize_config(const ExperimentConfig& cfg);
/// Unknown keys and malformed values throw ValidationError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

struct SweepRow {
  double epsilon = 0.0;
  double m3d = 0.0;
  double mlimit = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  std::size_t iterations = 0;
  std::string status;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double mlimit = 0.0;
  /// Integral pipeline: m(eps) >= limit lower bound for every row.
  bool lower_bound_pass = true;

  /// Largest |gap - (m3d - mlimit)| over rows.
  double gap_consistency() const;
};

/// Limit value, then one row per epsilon on `workers` threads, merged in
/// epsilon order. Row failures are reported in the status column.
SweepTable run_sweep(const ExperimentConfig& cfg, std::size_t workers = 1);

/// epsilon,m3d,mlimit,gap,runtime_s,iterations,status
std::string sweep_csv(const SweepTable& table);
/// 640x480 log-log plot of gap against epsilon.
std::string sweep_svg(const SweepTable& table);
/// Throws IoError when the path is unwritable, ValidationError on an empty table.
void emit_csv(const SweepTable& table, const std::filesystem::path& path);
void emit_svg_plot(const SweepTable& table, const std::filesystem::path& path);

}  // namespace thinlim
