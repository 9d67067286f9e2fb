#include <doctest.h>

#include <sstream>
#include <string>

#include "stable_euler/config.hpp"
#include "stable_euler/errors.hpp"

using namespace stable_euler;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string failing_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("a convergence config parses") {
  const ExperimentConfig cfg = parse(
      "# comment\n"
      "experiment = convergence\n"
      "alpha = 1.5   # trailing comment\n"
      "beta = 0.5\n"
      "ladder = 8, 16, 32, 64\n"
      "drift.amplitude = 0.05\n"
      "scheme.randomized = false\n"
      "grid.points = 4096\n");
  CHECK(cfg.kind == ExperimentKind::convergence);
  CHECK(cfg.ladder == std::vector<std::size_t>{8, 16, 32, 64});
  CHECK(cfg.drift.amplitude == doctest::Approx(0.05));
  CHECK_FALSE(cfg.randomized);
  CHECK(cfg.grid_points == 4096);
  CHECK(cfg.gamma() == doctest::Approx(1.0));
  CHECK(cfg.target_rate() == doctest::Approx(2.0 / 3.0));
  CHECK(cfg.entries.size() == 7);
  CHECK(cfg.make_drift().space_profile() == SpaceProfile::capped_power);
}

TEST_CASE("config errors name the offending key") {
  CHECK(failing_key("alpha = 1.5\n") == "experiment");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nbogus = 1\n") == "bogus");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nalpha = 1.5\nalpha = 1.6\n") == "alpha");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nalpha = fast\n") == "alpha");
  CHECK(failing_key("experiment = convergence\nladder = 8,12,32,64\n") == "ladder");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32\n") == "ladder");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nalpha = 2.5\n") == "alpha");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nbeta = 1.2\n") == "beta");
  CHECK(failing_key("experiment = nonsense\n") == "experiment");
  CHECK(failing_key("experiment = randomization-ablation\nladder = 8,16,32,64\n") == "drift.time");
  CHECK(failing_key("experiment = regularity\nregularity.grids = 1024, 2048\n") == "regularity.grids");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\ndim = 2\n") == "dim");
  CHECK(failing_key("experiment = convergence\nladder = 8,16,32,64\nalpha\n").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("schema lists every key once") {
  const auto schema = config_schema();
  CHECK(schema.size() > 40);
  std::size_t experiment = 0;
  for (const auto& [key, doc] : schema) {
    if (key == "experiment") ++experiment;
    CHECK_FALSE(doc.empty());
  }
  CHECK(experiment == 1);
  CHECK(to_string(ExperimentKind::randomization_ablation) == "randomization-ablation");
}
