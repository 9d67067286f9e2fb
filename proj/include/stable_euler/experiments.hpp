#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stable_euler/config.hpp"
#include "stable_euler/plot.hpp"

namespace stable_euler {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Everything a run produces. `csv` is the complete results.csv text and is
// a pure function of the config: neither the worker count nor the clock
// enters it.
struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::convergence;
  std::string csv;
  std::vector<std::pair<std::string, double>> values;  // fitted constants and diagnostics
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  Plot plot;

  bool passed() const;
  // Value recorded under `key`; throws std::out_of_range if absent.
  double value(const std::string& key) const;
  const CheckResult& check(const std::string& name) const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

// Output directory: $STABLE_EULER_OUTPUT_DIR when set and non-empty, else cfg.output_dir.
std::string resolve_output_dir(const ExperimentConfig& cfg);

// Structured `key = value` manifest: config echo, version, seed policy, values,
// checks, status, wall time and a UTC timestamp (the only clock-dependent lines).
std::string render_manifest(const ExperimentConfig& cfg, const ExperimentReport& report, double wall_seconds);

// Writes results.csv, plot.svg and manifest.txt into `dir` (created if needed).
void write_artifacts(const ExperimentConfig& cfg, const ExperimentReport& report, const std::string& dir,
                     double wall_seconds);

}  // namespace stable_euler
