#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stable_euler/experiments.hpp"

using namespace stable_euler;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("sampler check passes and is worker-independent") {
  const ExperimentConfig cfg = parse("experiment = sampler-check\nalpha = 1.5\npaths = 400000\nsampler.histogram_bins = 50\nseed = 4\n");
  const ExperimentReport one = run_experiment(cfg, 1);
  const ExperimentReport three = run_experiment(cfg, 3);
  CHECK(one.passed());
  CHECK(one.csv == three.csv);
  CHECK(one.check("characteristic_function").passed);
  CHECK(one.value("cf_max_error") < 0.01);
  CHECK_THROWS_AS(one.value("missing"), std::out_of_range);
}

TEST_CASE("zero drift convergence is flagged as degenerate") {
  const ExperimentConfig cfg =
      parse("experiment = convergence\nladder = 8, 16, 32, 64\ndrift.profile = zero\ngrid.points = 1024\ncross_check.steps = 0\n");
  const ExperimentReport r = run_experiment(cfg);
  CHECK(r.passed());
  REQUIRE(r.notes.size() == 1);
  CHECK(r.notes[0] == "degenerate: exact scheme");
  CHECK(r.csv.rfind("n,h,weighted_error", 0) == 0);
}

TEST_CASE("artifacts and manifest") {
  const ExperimentConfig cfg = parse("experiment = sampler-check\nalpha = 1.8\ndim = 2\npaths = 200000\n");
  const ExperimentReport r = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "stable_euler_artifacts_test";
  std::filesystem::remove_all(dir);
  write_artifacts(cfg, r, dir.string(), 0.5);
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "plot.svg"));
  std::ifstream manifest(dir / "manifest.txt");
  std::stringstream text;
  text << manifest.rdbuf();
  CHECK(text.str().find("experiment = sampler-check") != std::string::npos);
  CHECK(text.str().find("config.alpha = 1.8") != std::string::npos);
  CHECK(text.str().find("check.characteristic_function = pass") != std::string::npos);
  CHECK(text.str().find("wall_time_seconds = 0.500") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("output directory honours the environment") {
  ExperimentConfig cfg = parse("experiment = sampler-check\noutput.dir = from_config\n");
  unsetenv("STABLE_EULER_OUTPUT_DIR");
  CHECK(resolve_output_dir(cfg) == "from_config");
  setenv("STABLE_EULER_OUTPUT_DIR", "/tmp/from_env", 1);
  CHECK(resolve_output_dir(cfg) == "/tmp/from_env");
  unsetenv("STABLE_EULER_OUTPUT_DIR");
}
