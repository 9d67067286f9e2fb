#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stable_euler/proxy_kernel.hpp"

using namespace stable_euler;

TEST_CASE("normalizer makes the proxy a probability density") {
  CHECK(proxy_normalizer(1.5, 1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(proxy_normalizer(1.5, 2) == doctest::Approx(0.59683103659460757).epsilon(1e-12));
  // int (1 + |z|)^{-(1 + alpha)} dz over the line = 2 / alpha
  for (double alpha : {1.2, 1.7}) CHECK(proxy_normalizer(alpha, 1) == doctest::Approx(alpha / 2.0));
  CHECK_THROWS_AS(proxy_normalizer(1.5, 0), std::invalid_argument);
}

TEST_CASE("frozen proxy values") {
  const ProxyKernel pk(StableSpec(1.5, 1));
  CHECK(pk.radial(1.0, 0.0) == doctest::Approx(0.75));
  CHECK(pk.radial(1.0, 2.0) == doctest::Approx(0.048112522432468822).epsilon(1e-12));
  const ProxyKernel gauss(StableSpec(2.0, 1));
  CHECK(gauss.c_gauss() == doctest::Approx(kGaussianInflation));
  CHECK(gauss.radial(1.0, 1.0) == doctest::Approx(0.21969564473386119).epsilon(1e-12));
  const std::vector<double> z{-2.0};
  CHECK(pk(1.0, z) == doctest::Approx(pk.radial(1.0, 2.0)));
}

TEST_CASE("proxy scaling in v") {
  const ProxyKernel pk(StableSpec(1.5, 1));
  const double v = 3.0;
  const double s = std::pow(v, 1.0 / 1.5);
  CHECK(pk.radial(v, 2.0) == doctest::Approx(pk.radial(1.0, 2.0 / s) / s));
  CHECK_THROWS_AS(pk.radial(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProxyKernel(StableSpec(2.0, 1), 0.5), std::invalid_argument);
}

TEST_CASE("convolution constant") {
  const ConvolutionCheck gauss = check_convolution(ProxyKernel(StableSpec(2.0, 1)), 1.0, 1.0, 101);
  CHECK(gauss.constant == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gauss.min_ratio == doctest::Approx(1.0).epsilon(1e-8));

  const ProxyKernel pk(StableSpec(1.5, 1));
  const ConvolutionCheck coarse = check_convolution(pk, 1.0, 1.0, 101);
  const ConvolutionCheck fine = check_convolution(pk, 1.0, 1.0, 201);
  CHECK(coarse.constant == doctest::Approx(1.2253205173575135).epsilon(1e-9));
  CHECK(fine.constant == doctest::Approx(coarse.constant).epsilon(0.01));
  CHECK(coarse.min_ratio > 0.5);
  CHECK_THROWS_AS(check_convolution(pk, 1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_convolution(ProxyKernel(StableSpec(1.5, 2)), 1.0, 1.0, 11), std::invalid_argument);
}

TEST_CASE("moment slopes equal delta / alpha") {
  const std::vector<double> vs{0.5, 1.0, 2.0, 4.0};
  for (double alpha : {1.5, 2.0}) {
    const ProxyKernel pk(StableSpec(alpha, 1));
    for (double delta : {0.5, 1.0}) {
      CHECK(check_moments(pk, delta, vs).slope == doctest::Approx(delta / alpha).epsilon(1e-6));
    }
  }
  const ProxyKernel pk(StableSpec(1.5, 1));
  CHECK_THROWS_AS(check_moments(pk, 1.6, vs), std::invalid_argument);
  CHECK_THROWS_AS(check_moments(pk, 0.5, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}
