#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geopart/mesh.hpp"

namespace geopart {

/// Flat key=value configuration. Keys match the member names.
struct PipelineConfig {
  std::string surface = "sphere";  // sphere | torus | double-torus | banchoff-chmutov | path to .off
  int phases = 4;
  int levels = 0;      // 0: 3 for the sphere, 2 otherwise
  int resolution = 0;  // icosphere subdivisions or grid cells per axis; 0: 4 / 16
  std::uint64_t seed = 1;
  int seeds = 1;  // runs with seed, seed + 1, ...
  std::string refine = "auto";  // auto | mesh | sphere | none
  std::vector<int> level_max_iterations{2000, 300, 150};
  double gradient_tolerance = 1e-6;
  // sphere-arc stage
  double eps_penalty_target = 1e-12;  // smallest penalty eps tried
  double arc_area_tolerance = 5e-7 * 4.0 * 3.14159265358979323846;
  int directions = 8;
  double initial_step = 0.05;
  // mesh-based stage
  int max_restarts = 50;
  double mesh_area_tolerance = 1e-9;  // relative to the surface area
  std::string out;     // artifact directory; empty writes nothing
  bool deterministic = false;  // report zero wall time

  /// Throws std::invalid_argument on an unknown key or a bad value.
  void set(const std::string& key, const std::string& value);
  /// Normalised key=value text, one key per line.
  std::string to_text() const;
  /// Fills automatic fields and checks invariants.
  PipelineConfig resolved() const;
  bool is_sphere() const { return surface == "sphere"; }
};

PipelineConfig read_config(const std::string& path);

/// Level-0 mesh for the configured surface.
SurfaceMesh build_surface(const PipelineConfig& config);

struct RunResult {
  int phases = 0;
  std::string surface;
  std::uint64_t seed = 0;
  double single_count_length = 0.0;
  double double_count_length = 0.0;
  double max_area_residual = 0.0;
  int restarts = 0;
  double wall_time_s = 0.0;
  bool ok = false;
  std::string stage;  // refinement stage used, or the stage that failed
  std::string error;
  std::vector<std::array<double, 3>> triple_angles;  // sphere-arc stage only
};

/// One seed end to end. Artifacts go to run_dir when it is not empty.
RunResult run_single(const PipelineConfig& config, std::uint64_t seed, const std::string& run_dir);

struct PipelineResult {
  std::vector<RunResult> runs;
  int best = -1;  // index of the shortest successful run
  bool all_ok() const;
};

PipelineResult run_pipeline(const PipelineConfig& config);

std::string csv_header();
std::string csv_row(const RunResult& r);
void write_csv(const std::vector<RunResult>& runs, const std::string& path);
std::vector<RunResult> read_csv(const std::string& path);

/// Best successful row per (surface, n), ordered by surface then n.
std::vector<RunResult> best_per_case(const std::vector<RunResult>& runs);
std::string summary_text(const std::vector<RunResult>& runs);

}  // namespace geopart
