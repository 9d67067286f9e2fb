#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stable_euler/error_analysis.hpp"
#include "stable_euler/errors.hpp"
#include "stable_euler/stable_kernel.hpp"

using namespace stable_euler;

namespace {

GridDensity exact_kernel(const StableSpec& spec, const Grid1D& grid, double x0 = 0.0) {
  GridDensity g(grid, 0.0, x0);
  for (std::size_t i = 0; i < g.n_times(); ++i) {
    auto row = g.row(i);
    for (std::size_t j = 0; j < grid.n_x(); ++j) row[j] = density(spec, grid.times()[i], grid.x(j) - x0);
    g.finalize_row(i, 0.0);
  }
  return g;
}

}  // namespace

TEST_CASE("rate fit on an exact power law") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double v : h) e.push_back(3.0 * std::pow(v, 0.75));
  const RateEstimate fit = fit_rate(h, e, 0.75);
  CHECK(fit.slope == doctest::Approx(0.75));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
  CHECK(fit.half_width_95 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.normalized_spread() == doctest::Approx(1.0));
}

TEST_CASE("rate fit rejects degenerate ladders") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  CHECK_THROWS_AS(fit_rate(std::vector<double>{0.5, 0.25, 0.125}, std::vector<double>{1.0, 0.5, 0.25}, 1.0), DegenerateInput);
  CHECK_THROWS_AS(fit_rate(h, std::vector<double>{1.0, 0.5, 0.0, 0.1}, 1.0), DegenerateInput);
  CHECK_THROWS_AS(fit_rate(std::vector<double>{0.5, 0.5, 0.25, 0.125}, std::vector<double>{1.0, 0.9, 0.5, 0.2}, 1.0),
                  DegenerateInput);
}

TEST_CASE("weighted error of a density against itself vanishes") {
  const StableSpec spec(2.0, 1);
  const ProxyKernel pk(spec);
  const Grid1D grid = Grid1D::centered(0.0, 20.0, 1024, {1.0});
  const GridDensity g = exact_kernel(spec, grid);
  const DensityError e = weighted_density_error(g, g, pk, 1.0, 0.0);
  CHECK(e.weighted == 0.0);
  CHECK(e.l1 == 0.0);
  CHECK(e.nodes > 0);
}

TEST_CASE("weighted error scales a uniform perturbation by the proxy") {
  const StableSpec spec(1.5, 1);
  const ProxyKernel pk(spec);
  const Grid1D grid = Grid1D::centered(0.0, 20.0, 1024, {1.0});
  const GridDensity ref = exact_kernel(spec, grid);
  GridDensity approx = ref;
  for (double& v : approx.row(0)) v += 1e-6;
  const DensityError e = weighted_density_error(ref, approx, pk, 1.0, 0.0);
  CHECK(e.unweighted == doctest::Approx(1e-6));
  // The window ends at |y| = 10 t^{1/alpha}, where the proxy is smallest.
  CHECK(e.weighted == doctest::Approx(1e-6 / pk.radial(1.0, 10.0)).epsilon(0.02));
  CHECK(std::abs(e.argmax) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("mismatched densities are rejected") {
  const StableSpec spec(1.5, 1);
  const ProxyKernel pk(spec);
  const GridDensity a = exact_kernel(spec, Grid1D::centered(0.0, 20.0, 1024, {1.0}));
  const GridDensity b = exact_kernel(spec, Grid1D::centered(0.0, 20.0, 512, {1.0}));
  const GridDensity c = exact_kernel(spec, Grid1D::centered(0.0, 20.0, 1024, {0.5}));
  CHECK_THROWS_AS(weighted_density_error(a, b, pk, 1.0, 0.0), GridMismatch);
  CHECK_THROWS_AS(weighted_density_error(a, c, pk, 1.0, 0.0), GridMismatch);
  CHECK_THROWS_AS(weak_error(capped_root(), a, b, 1.0), GridMismatch);
}

TEST_CASE("test functions and weak errors") {
  const TestFunction f = capped_root(0.5, 2.0);
  CHECK(f.f(-1.0) == doctest::Approx(1.0));
  CHECK(f.f(9.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(f.name == "min(|y|, 2)^0.5");
  CHECK_THROWS_AS(capped_root(1.5, 2.0), std::invalid_argument);

  const StableSpec spec(2.0, 1);
  const Grid1D grid = Grid1D::centered(0.0, 20.0, 1024, {1.0});
  const GridDensity ref = exact_kernel(spec, grid);
  CHECK(weak_error(f, ref, ref, 1.0) == 0.0);
  std::vector<double> terminals;
  for (int i = -2000; i <= 2000; ++i) terminals.push_back(0.001 * i);
  const MonteCarloWeakError mc = weak_error_monte_carlo(constant_function(1.0), ref, 1.0, terminals);
  CHECK(mc.error < 1e-8);
  CHECK(mc.paths == terminals.size());
}

TEST_CASE("Holder quotients of the free kernel") {
  const StableSpec spec(1.5, 1);
  const ProxyKernel pk(spec);
  std::vector<GridDensity> family;
  for (std::size_t n : {1024, 2048, 4096}) {
    family.push_back(exact_kernel(spec, Grid1D::centered(0.0, 20.0, n, {0.25, 0.5, 0.75, 1.0})));
  }
  const RegularityReport space = regularity_report(family, QuotientKind::forward_space, 0.9, pk);
  CHECK(space.trace.size() == 3);
  CHECK(space.variation() < 1.1);
  const RegularityReport time = regularity_report(family, QuotientKind::forward_time, 2.0 / 3.0, pk);
  CHECK(time.variation() < 1.1);
  CHECK(to_string(QuotientKind::forward_space_scheme) == "forward-space-scheme");
  CHECK_THROWS_AS(holder_quotient(family[0], QuotientKind::forward_space_scheme, 0.9, pk), std::invalid_argument);
  CHECK_THROWS_AS(regularity_report({}, QuotientKind::forward_space, 0.9, pk), DegenerateInput);
}
