#pragma once

#include <cstddef>
#include <vector>

#include "stable_euler/drift.hpp"
#include "stable_euler/euler.hpp"
#include "stable_euler/grid.hpp"
#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Reference densities in dimension 1 on a periodic spectral grid.
//
// The SDE density solves the mild equation
//   Gamma(t) = P_{t-a} Gamma(a) - int_a^t d/dy P_{t-r} (b(r) Gamma(r)) dr,
// with P the free stable semigroup. In Fourier variables P_t is multiplication
// by exp(-t psi(k)) and the gradient by i k, so the singular time kernel is
// integrated exactly against a polynomial-in-time interpolant of b Gamma.
// Time is marched over windows [a, a + dt]; inside each window the unknowns
// at Chebyshev-Lobatto nodes are found by Picard iteration.
struct PicardOptions {
  double tol = 1e-6;               // stop when sup-change <= tol * max(1, sup Gamma)
  std::size_t max_iter = 50;
  double window_cap = 0.02;        // initial longest window; halved on non-convergence
  double graded_fraction = 0.1;    // window <= graded_fraction * (t - start)
  int collocation_order = 6;       // Chebyshev-Lobatto nodes per window minus one
  unsigned workers = 1;
};

struct WindowRecord {
  double start = 0.0;
  double length = 0.0;
  std::size_t iterations = 0;
  double final_change = 0.0;
  std::vector<double> changes;  // sup-change after each sweep
};

struct SolverDiagnostics {
  double initial_layer = 0.0;       // epsilon of the one-step start
  double certified_horizon = 0.0;   // window cap in force at the end (T*)
  std::size_t windows = 0;
  std::size_t total_iterations = 0;
  std::size_t window_halvings = 0;
  // Largest ratio of successive sup-changes over all windows, counted while
  // the change is above 100 x machine precision relative to sup Gamma.
  double max_contraction = 0.0;
  std::vector<WindowRecord> records;
};

// Density of X_t started from x0 at start_time, at every time of grid.times().
// The first epsilon = min((8 dx)^alpha, half the first output gap) of time is
// covered by one averaged Euler step, applied exactly in Fourier space.
// Throws NonConvergence when a window below 1e-9 still fails to contract and
// MassDefectBreach when |mass_defect| > 1e-3.
GridDensity solve_sde_density(const DriftSpec& drift, const StableSpec& spec, double x0, const Grid1D& grid,
                              const PicardOptions& options = {}, SolverDiagnostics* diagnostics = nullptr,
                              double start_time = 0.0);

// Scheme density Gamma^h on the grid: each step pushes the mass at every node
// z to z + h b(u, z) for the drift-time nodes of step_time_rule (six-point
// Lagrange deposition) and then applies exp(-h psi(k)). The first step from the
// point mass is exact in Fourier space. Output times off the step grid use the
// interpolated scheme X_t = X_{t_k} + (t - t_k) b(U_k, X_{t_k}) + Z_t - Z_{t_k}.
// grid.horizon() must not exceed cfg.horizon.
GridDensity propagate_scheme_density(const DriftSpec& drift, const StableSpec& spec, double x0, const SchemeConfig& cfg,
                                     const Grid1D& grid, unsigned workers = 1);

struct ChapmanKolmogorovResult {
  double defect = 0.0;          // sup_y |Gamma(s,x,t,y) - int Gamma(s,x,r,z) Gamma(r,z,t,y) dz|
  double s = 0.0;
  double r = 0.0;
  double t = 0.0;
  std::size_t subgrid_points = 0;
  double subgrid_radius = 0.0;
};

// The inner transitions K(z, .) = Gamma(r, z, t, .) are split as q(z, .) + R(z, .)
// with q(z, y) = p(t - r, y - z - (t - r) b(r, z)) the frozen-drift transition.
// The q part is integrated against Gamma(s, x, r, .) exactly; R is recomputed by
// the solver at n_sub points z_i = x + radius sign(u) u^2 (u equispaced in
// [-1, 1]) and integrated with hat weights, constant beyond the end points.
ChapmanKolmogorovResult chapman_kolmogorov_check(const GridDensity& gamma, const DriftSpec& drift, const StableSpec& spec,
                                                 double r, double t, const PicardOptions& options = {},
                                                 std::size_t n_sub = 17, double radius = 4.0);

// Estimated mass that the periodic window folds back by time t (see GridDensity).
double wrap_mass_estimate(const StableSpec& spec, const Grid1D& grid, double x0, double elapsed, double drift_sup);

}  // namespace stable_euler
