#include <chrono>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stable_euler/config.hpp"
#include "stable_euler/drift.hpp"
#include "stable_euler/errors.hpp"
#include "stable_euler/experiments.hpp"

namespace se = stable_euler;

namespace {

void print_checks(const se::ExperimentReport& report) {
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  for (const auto& n : report.notes) std::cout << "note: " << n << '\n';
}

int list_drifts() {
  std::cout << "space profiles (drift.profile):\n";
  for (const auto& entry : se::drift_catalog()) {
    std::cout << "  " << entry.name << std::string(14 - entry.name.size(), ' ') << entry.formula << '\n';
  }
  std::cout << "time profiles tau(t) (drift.time):\n"
            << "  constant      1\n"
            << "  oscillating   cos(drift.frequency * t)\n"
            << "  square_wave   +1 where cos(2 pi t / P) >= 0, else -1; P = drift.period or drift.period_steps * h\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler scheme for stable-driven SDEs with Holder drift"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers = 1;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-j,--workers", workers, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and validate a config file without running it");
  validate->add_option("config", validate_path, "config file")->required()->check(CLI::ExistingFile);

  auto* drifts = app.add_subcommand("list-drifts", "list the available drift profiles");
  auto* version = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*version) {
      std::cout << "stable_euler " << STABLE_EULER_VERSION << '\n';
      return 0;
    }
    if (*drifts) return list_drifts();
    if (*validate) {
      const se::ExperimentConfig cfg = se::load_config(validate_path);
      std::cout << "ok: " << se::to_string(cfg.kind) << " (" << cfg.entries.size() << " keys)\n";
      return 0;
    }
    const se::ExperimentConfig cfg = se::load_config(config_path);
    const auto start = std::chrono::steady_clock::now();
    const se::ExperimentReport report = se::run_experiment(cfg, workers);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string dir = se::resolve_output_dir(cfg);
    se::write_artifacts(cfg, report, dir, wall);
    print_checks(report);
    std::cout << (report.passed() ? "status: pass" : "status: fail") << " (" << dir << ")\n";
    return report.passed() ? 0 : 1;
  } catch (const se::ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
