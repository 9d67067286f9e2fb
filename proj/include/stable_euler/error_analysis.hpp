#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stable_euler/grid.hpp"
#include "stable_euler/proxy_kernel.hpp"

namespace stable_euler {

// Nodes that enter the weighted error: |y - x0| <= radius_scales * (t - s)^{1/alpha}
// and pbar(t - s, y - x0) >= proxy_floor * pbar(t - s, 0). The second
// condition keeps the comparison where both densities are resolved above the
// round-off level of the spectral grid; it only binds in the Gaussian case.
struct ErrorWindow {
  double radius_scales = 10.0;
  double proxy_floor = 1e-6;
};

struct DensityError {
  double weighted = 0.0;    // max |approx - ref| / pbar(t - s, y - x0) over the window
  double unweighted = 0.0;  // max |approx - ref| over the window
  double l1 = 0.0;          // dx sum |approx - ref| over the whole grid
  double argmax = 0.0;      // node attaining the weighted maximum
  std::size_t nodes = 0;    // nodes inside the window
};

// Both densities must share the spatial grid and store t; throws GridMismatch otherwise.
DensityError weighted_density_error(const GridDensity& ref, const GridDensity& approx, const ProxyKernel& pk, double t,
                                    double x0, const ErrorWindow& window = {});

struct RateEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double half_width_95 = 0.0;  // Student-t 97.5% quantile times the slope standard error
  double target = 0.0;
  std::vector<double> h_values;
  std::vector<double> errors;

  // max / min of error / h^target over the ladder
  double normalized_spread() const;
};

// Least-squares slope of log(error) against log(h). Needs at least four
// pairs, strictly decreasing h and positive errors; throws DegenerateInput.
RateEstimate fit_rate(std::span<const double> h, std::span<const double> errors, double target);

// Test function with declared Holder exponent delta.
struct TestFunction {
  std::string name;
  double delta = 1.0;
  std::function<double(double)> f;
};

// min(|y|, cap)^delta
TestFunction capped_root(double delta = 0.5, double cap = 2.0);
TestFunction constant_function(double value = 1.0);

// |int f (approx - ref)(t, y) dy| by the grid rule.
double weak_error(const TestFunction& f, const GridDensity& ref, const GridDensity& approx, double t);

struct MonteCarloWeakError {
  double error = 0.0;        // |mean f(X) - int f ref|
  double half_width = 0.0;   // 1.96 sample standard deviation / sqrt(N)
  std::size_t paths = 0;
};
MonteCarloWeakError weak_error_monte_carlo(const TestFunction& f, const GridDensity& ref, double t,
                                           std::span<const double> terminals);

enum class QuotientKind { forward_time, forward_space, forward_space_scheme };
std::string to_string(QuotientKind kind);

struct RegularityPoint {
  double grid_scale = 0.0;  // dx of the density
  double max_quotient = 0.0;
  std::size_t pairs = 0;
};

struct RegularityReport {
  QuotientKind kind = QuotientKind::forward_space;
  double exponent = 0.0;
  double max_quotient = 0.0;  // at the finest scale
  std::vector<RegularityPoint> trace;  // coarse to fine

  double variation() const;  // max / min over the trace
  double growth() const;     // finest / coarsest
};

// Max Holder quotient of one density (started at s = start_time, x = origin):
//   forward_time        |G(t, y) - G(t', y)| (t - s)^e / ((t' - t)^e pbar(t' - s, y - x)),
//                       stored t < t' with t' - t <= t - s
//   forward_space       |G(t, y) - G(t, w)| / ((|y - w| / (t - s)^{1/alpha})^e pbar(t - s, w - x)),
//                       0 < |y - w| <= (t - s)^{1/alpha}, separations from one grid step upwards
//   forward_space_scheme as forward_space with |y - w| replaced by |y - w| + step^{1/alpha}
// Only nodes inside `window` around x at both times (resp. at w) are used.
// Throws DegenerateInput if no admissible pair exists.
RegularityPoint holder_quotient(const GridDensity& density, QuotientKind kind, double exponent, const ProxyKernel& pk,
                                double step = 0.0, const ErrorWindow& window = {});

// holder_quotient over densities ordered coarse to fine.
RegularityReport regularity_report(std::span<const GridDensity> densities, QuotientKind kind, double exponent,
                                   const ProxyKernel& pk, double step = 0.0, const ErrorWindow& window = {});

}  // namespace stable_euler
