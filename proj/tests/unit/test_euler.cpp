#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "stable_euler/drift.hpp"
#include "stable_euler/euler.hpp"
#include "stable_euler/sampling.hpp"
#include "stable_euler/stable_kernel.hpp"

using namespace stable_euler;

namespace {

const DriftSpec kCapped = make_holder_drift(0.5, 1.0, SpaceProfile::capped_power, TimeProfile::constant());

}  // namespace

TEST_CASE("frozen terminals") {
  const StableSpec spec(1.5, 1);
  const double x0 = 0.0;
  const auto term = batch_terminals(kCapped, spec, SchemeConfig{1.0, 8, true, 3}, std::span<const double>(&x0, 1), 4);
  REQUIRE(term.size() == 4);
  CHECK(term[0] == doctest::Approx(0.83683709787463723).epsilon(1e-13));
  CHECK(term[3] == doctest::Approx(0.4137206244977033).epsilon(1e-13));
}

TEST_CASE("terminals do not depend on the worker count") {
  const StableSpec spec(1.5, 2);
  const DriftSpec d = make_holder_drift(0.5, 1.0, SpaceProfile::abs_sin, TimeProfile::oscillating(5.0), 2);
  const std::vector<double> x0{0.1, -0.2};
  const SchemeConfig cfg{1.0, 16, true, 99};
  const auto one = batch_terminals(d, spec, cfg, x0, 1001, 1);
  const auto four = batch_terminals(d, spec, cfg, x0, 1001, 4);
  CHECK(one == four);
}

TEST_CASE("randomized and left-point schemes share the noise") {
  const StableSpec spec(1.5, 1);
  const DriftSpec zero = make_holder_drift(0.5, 1.0, SpaceProfile::zero, TimeProfile::constant());
  const double x0 = 0.0;
  const auto a = batch_terminals(zero, spec, SchemeConfig{1.0, 8, true, 5}, std::span<const double>(&x0, 1), 50);
  const auto b = batch_terminals(zero, spec, SchemeConfig{1.0, 8, false, 5}, std::span<const double>(&x0, 1), 50);
  CHECK(a == b);
}

TEST_CASE("single path bookkeeping") {
  const StableSpec spec(2.0, 1);
  const double x0 = 1.0;
  Rng noise = make_stream(1, StreamKind::noise, 0);
  Rng time = make_stream(1, StreamKind::time, 0);
  const SchemePath path = simulate_path(kCapped, spec, SchemeConfig{1.0, 4, true, 1}, std::span<const double>(&x0, 1), noise, time);
  CHECK(path.times.size() == 5);
  CHECK(path.states.size() == 5);
  CHECK(path.u_draws.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(path.u_draws[k] >= path.times[k]);
    CHECK(path.u_draws[k] < path.times[k + 1]);
  }
  CHECK(path.state(0)[0] == doctest::Approx(1.0));
}

TEST_CASE("step time rules integrate to one") {
  const DriftSpec sq = make_holder_drift(0.5, 1.0, SpaceProfile::constant, TimeProfile::square_wave(0.3));
  const auto nodes = step_time_rule(sq, 0.1, 0.2, true);
  double total = 0.0;
  for (const auto& n : nodes) total += n.weight;
  CHECK(total == doctest::Approx(1.0));
  CHECK(nodes.size() == 2);
  CHECK(step_time_rule(sq, 0.1, 0.2, false).size() == 1);
  const DriftSpec osc = make_holder_drift(0.5, 1.0, SpaceProfile::constant, TimeProfile::oscillating(4.0));
  double mean = 0.0;
  for (const auto& n : step_time_rule(osc, 0.0, 0.5, true)) mean += n.weight * std::cos(4.0 * n.u);
  CHECK(mean == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("step density is the shifted kernel for constant drift") {
  const StableSpec spec(1.5, 1);
  const DriftSpec c = make_holder_drift(0.5, 0.7, SpaceProfile::constant, TimeProfile::constant());
  CHECK(step_density(c, spec, 0.25, 0.0, 0.1, 0.4) == doctest::Approx(density(spec, 0.25, 0.4 - 0.1 - 0.25 * 0.7)));
  CHECK_THROWS_AS(step_density(c, spec, 0.0, 0.0, 0.1, 0.4), std::invalid_argument);
}

TEST_CASE("terminal export round trip") {
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  const auto path = (std::filesystem::temp_directory_path() / "stable_euler_terminals.bin").string();
  write_terminals_binary(path, values, 2);
  int dim = 0;
  CHECK(read_terminals_binary(path, dim) == values);
  CHECK(dim == 2);
  std::filesystem::remove(path);
  std::ostringstream os;
  write_terminals_csv(os, values, 2);
  CHECK(os.str().rfind("path_index,x_1,x_2\n", 0) == 0);
  CHECK_THROWS_AS(write_terminals_csv(os, values, 3), std::invalid_argument);
}

TEST_CASE("scheme config validation") {
  CHECK_THROWS_AS(SchemeConfig({1.0, 0, true, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SchemeConfig({0.0, 4, true, 0}).validate(), std::invalid_argument);
  CHECK(SchemeConfig{1.0, 8, true, 0}.grid_floor(0.3) == doctest::Approx(0.25));
  const StableSpec spec(1.5, 2);
  const double x0 = 0.0;
  CHECK_THROWS_AS(batch_terminals(kCapped, spec, SchemeConfig{}, std::span<const double>(&x0, 1), 4), std::invalid_argument);
}
