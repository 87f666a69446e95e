#pragma once

#include <map>
#include <string>
#include <vector>

#include "andrews/radial_profile.hpp"

namespace andrews {

/// Batch experiment configuration (schema v1, unknown keys rejected).
struct ExperimentConfig {
  // manifold
  std::string preset = "round_sphere";  // round_sphere | hemisphere | cap |
                                        // football | perturbed_sphere
  std::string profile_file;             // alternative to preset
  int dim = 3;
  double beta = -0.5;
  double epsilon = 0.05;
  int bump_index = 1;
  double colatitude = 1.0471975511965976;  // pi/3, cap preset only

  // run
  std::vector<int> grids = {250, 500, 1000};
  int lmax = 8;
  std::vector<std::string> tasks = {"curvature", "eigen", "bochner",
                                    "regularity", "rigidity"};
  std::string converge_target = "eigen";  // eigen | poisson_mms
  std::string out_dir;
  bool quiet = false;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct TaskResult {
  std::string task;
  int grid = 0;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double residual = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<TaskResult> results;
  bool all_passed = false;
  std::string csv;           // deterministic, byte-stable for a fixed config
  std::string summary_json;  // includes wall-clock timings
};

/// Builds the configured manifold, executes the requested tasks on every
/// grid size, and (when out_dir is set) persists results.csv and
/// summary.json. Each requested task yields a row per grid size or an
/// explicit error row.
RunReport run(const ExperimentConfig& cfg);

struct ConvergenceRow {
  int grid = 0;
  double value = 0.0;
  double error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double order = 0.0;
  bool monotone = true;
  bool order_ok = false;  // >= 1.5 for the documented 2nd-order schemes
  std::string target;
};

ConvergenceStudy convergence_study(const ExperimentConfig& cfg);

/// Writes profile/eigenfunction/regularity plot files (CSV + SVG) for a
/// completed run. An empty report writes nothing and succeeds.
void emit_plot_data(const RunReport& report, const std::string& out_dir);

WarpedManifold manifold_from_config(const ExperimentConfig& cfg);

}  // namespace andrews
