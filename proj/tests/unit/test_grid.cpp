#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "stable_euler/errors.hpp"
#include "stable_euler/grid.hpp"
#include "stable_euler/stable_spec.hpp"

using namespace stable_euler;

namespace {

GridDensity gaussian_bump(const Grid1D& grid) {
  GridDensity g(grid, 0.0, 0.0);
  for (std::size_t i = 0; i < g.n_times(); ++i) {
    const double t = grid.times()[i];
    auto row = g.row(i);
    for (std::size_t j = 0; j < grid.n_x(); ++j) {
      const double x = grid.x(j);
      row[j] = std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
    }
    g.finalize_row(i, 0.0);
  }
  return g;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid1D g = Grid1D::centered(1.0, 4.0, 256, {0.5, 1.0});
  CHECK(g.x_min() == doctest::Approx(-3.0));
  CHECK(g.dx() == doctest::Approx(8.0 / 256.0));
  CHECK(g.x(128) == doctest::Approx(1.0));
  CHECK(g.time_index(1.0) == 1);
  CHECK(g.has_time(0.5));
  CHECK_FALSE(g.has_time(0.75));
  CHECK_THROWS_AS(g.time_index(0.75), std::out_of_range);
  CHECK(g.refined(4).n_x() == 1024);
  CHECK(g.same_space(g.with_times({2.0})));
  CHECK_FALSE(g.same_space(g.refined(2)));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 128, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(1.0, 0.0, 256, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 256, {}), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 256, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("default grid resolves the finest step") {
  const Grid1D g = choose_grid(StableSpec(1.5, 1), 0.0, 1.0, 1.0 / 256.0, {1.0});
  CHECK(g.n_x() == 32768);
  CHECK(g.dx() == doctest::Approx(0.00244140625));
  CHECK(8.0 * g.dx() <= std::pow(1.0 / 256.0, 1.0 / 1.5));
  const Grid1D gauss = choose_grid(StableSpec(2.0, 1), 0.0, 4.0, 0.01, {4.0});
  CHECK(gauss.x_max() == doctest::Approx(40.0));
}

TEST_CASE("mass bookkeeping and coarsening") {
  const Grid1D grid = Grid1D::centered(0.0, 12.0, 1024, {0.5, 1.0});
  const GridDensity g = gaussian_bump(grid);
  CHECK(std::abs(g.mass_defect(0)) < 1e-12);
  CHECK_NOTHROW(g.check_mass(1e-9));
  const GridDensity c = g.coarsened(4);
  CHECK(c.grid().n_x() == 256);
  CHECK(c.row(1)[128] == doctest::Approx(g.row(1)[512]));
  CHECK(std::abs(c.mass_defect(1)) < 1e-9);
  CHECK_THROWS_AS(g.coarsened(3), std::invalid_argument);
  GridDensity broken = g;
  broken.row(0)[512] += 10.0;
  broken.finalize_row(0, 0.0);
  CHECK_THROWS_AS(broken.check_mass(), MassDefectBreach);
}

TEST_CASE("periodic interpolation") {
  const Grid1D grid(0.0, 256.0, 256, {1.0});
  std::vector<double> row(256);
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = static_cast<double>(j);
  CHECK(interpolate_periodic(grid, row, 10.25) == doctest::Approx(10.25));
  CHECK(interpolate_periodic(grid, row, 256.0 + 3.5) == doctest::Approx(3.5));
  CHECK(interpolate_periodic(grid, row, 255.5) == doctest::Approx(127.5));
  CHECK_THROWS_AS(interpolate_periodic(grid, std::vector<double>(10), 1.0), GridMismatch);
}

TEST_CASE("binary round trip keeps values and metadata") {
  const Grid1D grid = Grid1D::centered(0.5, 10.0, 256, {0.25, 1.0});
  GridDensity g = gaussian_bump(grid);
  g.metadata()["drift"] = "capped_power";
  std::stringstream ss;
  g.write_binary(ss);
  const GridDensity back = GridDensity::read_binary(ss);
  CHECK(back.grid().n_x() == 256);
  CHECK(back.grid().times() == grid.times());
  CHECK(back.metadata().at("drift") == "capped_power");
  for (std::size_t j = 0; j < 256; ++j) REQUIRE(back.row(1)[j] == g.row(1)[j]);
  std::stringstream bad("not a density");
  CHECK_THROWS_AS(GridDensity::read_binary(bad), std::runtime_error);
}
