#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stable_euler/drift.hpp"
#include "stable_euler/duhamel.hpp"
#include "stable_euler/euler.hpp"
#include "stable_euler/stable_kernel.hpp"

using namespace stable_euler;

namespace {

const StableSpec kSpec(1.5, 1);
const Grid1D kGrid = Grid1D::centered(0.0, 40.0, 4096, {0.5, 1.0});

double sup_error(const GridDensity& g, double shift_rate, double x0 = 0.0) {
  double err = 0.0;
  for (std::size_t i = 0; i < g.n_times(); ++i) {
    const double t = kGrid.times()[i];
    for (std::size_t j = 1800; j < 2300; ++j) {
      err = std::max(err, std::abs(g.row(i)[j] - density(kSpec, t, kGrid.x(j) - x0 - shift_rate * t)));
    }
  }
  return err;
}

}  // namespace

TEST_CASE("zero drift reproduces the stable kernel") {
  const DriftSpec zero = make_holder_drift(0.5, 1.0, SpaceProfile::zero, TimeProfile::constant());
  CHECK(sup_error(solve_sde_density(zero, kSpec, 0.0, kGrid), 0.0) < 1e-4);
  CHECK(sup_error(propagate_scheme_density(zero, kSpec, 0.0, SchemeConfig{1.0, 8, true, 0}, kGrid), 0.0) < 1e-4);
}

TEST_CASE("constant drift translates the kernel") {
  const DriftSpec c = make_holder_drift(0.5, 0.8, SpaceProfile::constant, TimeProfile::constant());
  CHECK(sup_error(solve_sde_density(c, kSpec, 0.3, kGrid), 0.8, 0.3) < 1e-4);
  CHECK(sup_error(propagate_scheme_density(c, kSpec, 0.3, SchemeConfig{1.0, 8, true, 0}, kGrid), 0.8, 0.3) < 1e-4);
}

TEST_CASE("Holder drift: Picard contracts, mass is kept, Chapman-Kolmogorov holds") {
  const DriftSpec d = make_holder_drift(0.5, 1.0, SpaceProfile::capped_power, TimeProfile::constant());
  SolverDiagnostics diag;
  const GridDensity g = solve_sde_density(d, kSpec, 0.0, kGrid, {}, &diag);
  CHECK(diag.max_contraction < 1.0);
  CHECK(diag.windows > 0);
  CHECK(diag.records.size() == diag.windows);
  CHECK_NOTHROW(g.check_mass(1e-6));
  CHECK(g.min_value() > -1e-8);
  const ChapmanKolmogorovResult ck = chapman_kolmogorov_check(g, d, kSpec, 0.5, 1.0);
  CHECK(ck.defect < 5e-3);
  CHECK(ck.subgrid_points == 17);
}

TEST_CASE("scheme density and solver density are close for small steps") {
  const DriftSpec d = make_holder_drift(0.5, 0.2, SpaceProfile::capped_power, TimeProfile::constant());
  const GridDensity ref = solve_sde_density(d, kSpec, 0.0, kGrid);
  const GridDensity coarse = propagate_scheme_density(d, kSpec, 0.0, SchemeConfig{1.0, 4, true, 0}, kGrid);
  const GridDensity fine = propagate_scheme_density(d, kSpec, 0.0, SchemeConfig{1.0, 32, true, 0}, kGrid);
  double e_coarse = 0.0;
  double e_fine = 0.0;
  for (std::size_t j = 0; j < kGrid.n_x(); ++j) {
    e_coarse = std::max(e_coarse, std::abs(coarse.row(1)[j] - ref.row(1)[j]));
    e_fine = std::max(e_fine, std::abs(fine.row(1)[j] - ref.row(1)[j]));
  }
  CHECK(e_fine < e_coarse);
  CHECK(e_fine < 0.5 * e_coarse);
}

TEST_CASE("wrap mass estimate shrinks with the window") {
  const Grid1D narrow = Grid1D::centered(0.0, 10.0, 1024, {1.0});
  const Grid1D wide = Grid1D::centered(0.0, 40.0, 4096, {1.0});
  const double a = wrap_mass_estimate(kSpec, narrow, 0.0, 1.0, 1.0);
  const double b = wrap_mass_estimate(kSpec, wide, 0.0, 1.0, 1.0);
  CHECK(a > b);
  CHECK(b > 0.0);
}
