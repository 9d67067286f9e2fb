#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stable_euler/drift.hpp"
#include "stable_euler/errors.hpp"

using namespace stable_euler;

TEST_CASE("capped power profile and metadata") {
  const DriftSpec d = make_holder_drift(0.5, 1.0, SpaceProfile::capped_power, TimeProfile::constant());
  CHECK(d(0.0, 0.25) == doctest::Approx(0.5));
  CHECK(d(0.3, -4.0) == doctest::Approx(-1.0));
  CHECK(d.sup_norm() == doctest::Approx(1.0));
  CHECK(d.holder_seminorm() == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.time_homogeneous());
  CHECK(d.resolved());
}

TEST_CASE("seminorm metadata scales with dimension") {
  const DriftSpec d = make_holder_drift(0.5, 2.0, SpaceProfile::abs_sin, TimeProfile::constant(), 3);
  CHECK(d.sup_norm() == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(d.holder_seminorm() == doctest::Approx(2.0 * std::pow(3.0, 0.25)));
  const std::vector<double> x{0.0, 1.0, -1.0};
  const auto b = d.evaluate(0.0, x);
  CHECK(b[0] == doctest::Approx(0.0));
  CHECK(b[1] == doctest::Approx(2.0 * std::sqrt(std::sin(1.0))));
  CHECK(b[2] == doctest::Approx(b[1]));
}

TEST_CASE("time profiles") {
  const DriftSpec osc = make_holder_drift(0.5, 1.0, SpaceProfile::constant, TimeProfile::oscillating(3.0));
  CHECK(osc(0.5, 7.0) == doctest::Approx(std::cos(1.5)));
  CHECK_FALSE(osc.time_homogeneous());

  const DriftSpec steps = make_holder_drift(0.5, 1.0, SpaceProfile::constant, TimeProfile::square_wave_in_steps(2.0));
  CHECK_FALSE(steps.resolved());
  CHECK_THROWS_AS(steps(0.1, 0.0), std::logic_error);
  const DriftSpec sq = steps.with_step(0.125);
  REQUIRE(sq.resolved());
  CHECK(sq.time_profile().period == doctest::Approx(0.25));
  CHECK(sq(0.01, 0.0) == doctest::Approx(1.0));
  CHECK(sq(0.1, 0.0) == doctest::Approx(-1.0));
  const auto breaks = sq.time_breakpoints(0.0, 0.5);
  REQUIRE(breaks.size() == 4);
  CHECK(breaks[0] == doctest::Approx(0.0625));
  CHECK(breaks[3] == doctest::Approx(0.4375));
}

TEST_CASE("certification confirms the declared metadata") {
  Rng rng = make_stream(1, StreamKind::aux, 0);
  const DriftSpec d = make_holder_drift(0.3, 1.5, SpaceProfile::capped_power, TimeProfile::oscillating(2.0));
  const CertificationReport rep = certify(d, 20000, rng);
  CHECK(rep.max_ratio_beta <= d.holder_seminorm() + 1e-9);
  CHECK(rep.max_ratio_beta > 0.9 * d.holder_seminorm());
  CHECK(rep.max_abs <= d.sup_norm() + 1e-9);
  CHECK_THROWS_AS(certify(d, 10, rng), std::invalid_argument);
}

TEST_CASE("parsing and catalog") {
  CHECK(parse_space_profile("capped_power") == SpaceProfile::capped_power);
  CHECK_FALSE(parse_space_profile("cubic").has_value());
  CHECK(parse_time_kind("square_wave") == TimeKind::square_wave);
  CHECK(to_string(SpaceProfile::abs_sin) == "abs_sin");
  CHECK(drift_catalog().size() == 4);
}

TEST_CASE("invalid drifts") {
  CHECK_THROWS_AS(make_holder_drift(1.0, 1.0, SpaceProfile::zero, TimeProfile::constant()), std::invalid_argument);
  CHECK_THROWS_AS(make_holder_drift(0.5, 0.0, SpaceProfile::zero, TimeProfile::constant()), std::invalid_argument);
  CHECK_THROWS_AS(make_holder_drift(0.5, 1.0, SpaceProfile::zero, TimeProfile::oscillating(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(make_holder_drift(0.5, 1.0, SpaceProfile::zero, TimeProfile::square_wave(-1.0)), std::invalid_argument);
}
