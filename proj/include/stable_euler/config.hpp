#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stable_euler/drift.hpp"
#include "stable_euler/duhamel.hpp"

namespace stable_euler {

enum class ExperimentKind {
  sampler_check,
  kernel_check,
  solver_check,
  convergence,
  regularity,
  randomization_ablation,
};

std::string to_string(ExperimentKind kind);

struct DriftConfig {
  SpaceProfile profile = SpaceProfile::capped_power;
  double amplitude = 1.0;
  TimeKind time = TimeKind::constant;
  double frequency = 0.0;
  double period = 0.0;
  double period_steps = 0.0;
};

// Experiment description read from a flat `key = value` file. Keys may carry
// dotted section prefixes (drift.amplitude, grid.points ...); `#` starts a
// comment. The full schema lives in docs/config.md.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::convergence;
  double alpha = 1.5;
  double beta = 0.5;
  int dim = 1;
  double horizon = 1.0;
  double x0 = 0.0;
  std::vector<std::size_t> ladder;
  DriftConfig drift;
  bool randomized = true;
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  std::size_t grid_points = 0;  // 0: choose_grid
  double grid_radius = 0.0;     // 0: choose_grid
  PicardOptions picard;

  // pass bands
  double slope_below = 0.15;
  double slope_above = 0.20;
  double spread_max = 3.0;
  double cf_tolerance = 0.01;
  double histogram_tolerance = 0.01;
  double exact_tolerance = 1e-4;
  double stability_tolerance = 0.25;
  double divergence_growth = 1.25;
  double sandwich_max = 100.0;
  double sandwich_stability = 0.20;
  double moment_tolerance = 0.02;
  double ck_tolerance = 5e-3;

  // sampler-check
  std::vector<double> cf_lambdas{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  std::size_t histogram_bins = 200;
  double histogram_radius = 5.0;

  // kernel-check
  std::vector<double> kernel_times{0.25, 1.0, 4.0};
  double kernel_x_max = 10.0;
  std::size_t kernel_points = 201;
  std::vector<double> moment_deltas{0.5, 1.0};
  bool kernel_holder = true;

  // solver-check
  double ck_mid_time = 0.5;
  std::size_t ck_points = 17;
  double ck_radius = 4.0;

  // convergence
  bool weak_error = true;
  double test_delta = 0.5;
  double test_cap = 2.0;
  std::size_t cross_check_steps = 4096;
  std::size_t cross_check_refine = 4;

  // regularity
  std::vector<std::size_t> regularity_grids{8192, 16384, 32768};
  std::vector<double> regularity_times{0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
  double time_exponent = 0.0;  // 0: gamma / alpha
  double space_exponent = 0.9;
  double control_exponent = 1.3;

  // Keys as written, in file order, for the manifest echo.
  std::vector<std::pair<std::string, std::string>> entries;

  double gamma() const { return gap_to_singularity(alpha, beta); }
  double target_rate() const { return gamma() / alpha; }
  DriftSpec make_drift() const;
};

// Throws ConfigError naming the offending key (unknown key, malformed value,
// gamma <= 0, ladder not strictly increasing powers of two ...).
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

// Cross-field checks, also run by parse_config.
void validate(const ExperimentConfig& cfg);

// One line per recognised key: "key  description".
std::vector<std::pair<std::string, std::string>> config_schema();

}  // namespace stable_euler
