#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stable_euler/stable_kernel.hpp"

using namespace stable_euler;

TEST_CASE("density at the origin matches Gamma(1 + 1/alpha) / pi") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    const StableSpec spec(alpha, 1);
    CHECK(density(spec, 1.0, 0.0) == doctest::Approx(std::tgamma(1.0 + 1.0 / alpha) / std::numbers::pi).epsilon(1e-10));
  }
  CHECK(density(StableSpec(1.5, 1), 1.0, 0.0) == doctest::Approx(0.28735275145216443).epsilon(1e-12));
}

TEST_CASE("radial densities at the origin in two and three dimensions") {
  const double alpha = 1.5;
  const std::vector<double> o2{0.0, 0.0};
  const std::vector<double> o3{0.0, 0.0, 0.0};
  CHECK(density(StableSpec(alpha, 2), 1.0, o2) ==
        doctest::Approx(std::tgamma(2.0 / alpha) / (2.0 * std::numbers::pi * alpha)).epsilon(1e-10));
  CHECK(density(StableSpec(alpha, 3), 1.0, o3) ==
        doctest::Approx(std::tgamma(3.0 / alpha) / (2.0 * std::numbers::pi * std::numbers::pi * alpha)).epsilon(1e-10));
}

TEST_CASE("frozen kernel values") {
  const StableSpec spec(1.5, 1);
  CHECK(density(spec, 1.0, 1.0) == doctest::Approx(0.20203815960784016).epsilon(1e-10));
  CHECK(density(spec, 1.0, 3.0) == doctest::Approx(0.031509423616324951).epsilon(1e-10));
  CHECK(density(spec, 1.0, 10.0) == doctest::Approx(0.001047776024929439).epsilon(1e-10));
  CHECK(density(StableSpec(1.3, 1), 2.0, 0.5) == doctest::Approx(0.16545752465531663).epsilon(1e-10));
  CHECK(grad_density(spec, 1.0, 1.0) == doctest::Approx(-0.13561040351563619).epsilon(1e-9));
  const std::vector<double> x{0.3, 0.4};
  CHECK(density(StableSpec(1.5, 2), 1.0, x) == doctest::Approx(0.085364425709449729).epsilon(1e-10));
}

TEST_CASE("self-similarity and symmetry") {
  const StableSpec spec(1.5, 1);
  const double t = 0.3;
  const double s = spec.scale(t);
  for (double x : {0.0, 0.2, 1.7, 12.0}) {
    CHECK(density(spec, t, x) == doctest::Approx(density(spec, 1.0, x / s) / s).epsilon(1e-10));
    CHECK(density(spec, t, -x) == doctest::Approx(density(spec, t, x)).epsilon(1e-14));
  }
}

TEST_CASE("tail expansion and quadrature agree across the switch radius") {
  for (double alpha : {1.3, 1.5, 1.8}) {
    const StableSpec spec(alpha, 1);
    const double below = unit_radial_profile(spec, 7.999).value;
    const double above = unit_radial_profile(spec, 8.001).value;
    CHECK(above == doctest::Approx(below).epsilon(2e-3));
    const double far = density(spec, 1.0, 500.0);
    CHECK(far == doctest::Approx(stable_tail_constant(alpha) * std::pow(500.0, -1.0 - alpha)).epsilon(1e-3));
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const StableSpec spec(1.5, 1);
  const double h = 1e-5;
  for (double x : {0.3, 2.0, 9.0, 15.0}) {
    const double fd = (density(spec, 1.0, x + h) - density(spec, 1.0, x - h)) / (2.0 * h);
    CHECK(grad_density(spec, 1.0, x) == doctest::Approx(fd).epsilon(1e-5));
    const double ft = (density(spec, 1.0 + h, x) - density(spec, 1.0 - h, x)) / (2.0 * h);
    CHECK(time_deriv_density(spec, 1.0, x) == doctest::Approx(ft).epsilon(1e-5));
  }
}

TEST_CASE("gaussian case is closed form") {
  const StableSpec spec(2.0, 1);
  CHECK(density(spec, 2.0, 1.0) == doctest::Approx(std::exp(-0.25) / std::sqrt(4.0 * std::numbers::pi)));
  CHECK(grad_density(spec, 1.0, 1.0) == doctest::Approx(-std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("tail constants") {
  CHECK(stable_tail_constant(1.5) == doctest::Approx(0.29920671030107454).epsilon(1e-12));
  CHECK(stable_tail_mass(1.5, 10.0) == doctest::Approx(0.013279879144427978).epsilon(1e-9));
  CHECK_THROWS_AS(stable_tail_mass(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(stable_tail_mass(1.5, -1.0), std::invalid_argument);
}

TEST_CASE("argument checks") {
  const StableSpec spec(1.5, 1);
  CHECK_THROWS_AS(density(spec, 0.0, 1.0), std::invalid_argument);
  const std::vector<double> wrong{1.0, 2.0};
  CHECK_THROWS_AS(density(spec, 1.0, wrong), std::invalid_argument);
  const std::vector<double> x4(4, 0.0);
  CHECK_THROWS_AS(density(StableSpec(1.5, 4), 1.0, x4), std::invalid_argument);
}
