#include "stable_euler/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stable_euler/errors.hpp"
#include "stable_euler/statistics.hpp"

namespace stable_euler {
namespace {

// Signed distance on the periodic window, folded into [-L/2, L/2).
double periodic_offset(const Grid1D& grid, double y, double x0) {
  const double length = grid.x_max() - grid.x_min();
  double d = std::fmod(y - x0, length);
  if (d >= 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

bool in_window(const ProxyKernel& pk, double elapsed, double offset, const ErrorWindow& window, double peak) {
  if (std::abs(offset) > window.radius_scales * pk.spec().scale(elapsed)) return false;
  return pk.radial(elapsed, std::abs(offset)) >= window.proxy_floor * peak;
}

// Separations in grid steps: 1..8, then growing by a quarter, up to max_steps.
std::vector<std::size_t> separation_steps(std::size_t max_steps) {
  std::vector<std::size_t> out;
  for (std::size_t m = 1; m <= max_steps;) {
    out.push_back(m);
    m = m < 8 ? m + 1 : static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(m)));
  }
  return out;
}

}  // namespace

DensityError weighted_density_error(const GridDensity& ref, const GridDensity& approx, const ProxyKernel& pk, double t,
                                    double x0, const ErrorWindow& window) {
  const Grid1D& grid = ref.grid();
  if (!grid.same_space(approx.grid())) throw GridMismatch("weighted_density_error: spatial grids differ");
  if (!grid.has_time(t) || !approx.grid().has_time(t)) {
    throw GridMismatch("weighted_density_error: time not stored in both densities");
  }
  if (ref.start_time() != approx.start_time()) throw GridMismatch("weighted_density_error: start times differ");
  const double elapsed = t - ref.start_time();
  const auto a = ref.at_time(t);
  const auto b = approx.at_time(t);
  const double peak = pk.radial(elapsed, 0.0);

  DensityError out;
  for (std::size_t j = 0; j < grid.n_x(); ++j) {
    const double diff = std::abs(b[j] - a[j]);
    out.l1 += diff * grid.dx();
    const double offset = periodic_offset(grid, grid.x(j), x0);
    if (!in_window(pk, elapsed, offset, window, peak)) continue;
    ++out.nodes;
    out.unweighted = std::max(out.unweighted, diff);
    const double w = diff / pk.radial(elapsed, std::abs(offset));
    if (w > out.weighted) {
      out.weighted = w;
      out.argmax = grid.x(j);
    }
  }
  return out;
}

double RateEstimate::normalized_spread() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    const double r = errors[i] / std::pow(h_values[i], target);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi / lo;
}

RateEstimate fit_rate(std::span<const double> h, std::span<const double> errors, double target) {
  if (h.size() != errors.size()) throw DegenerateInput("fit_rate: h and error lists differ in length");
  if (h.size() < 4) throw DegenerateInput("fit_rate: need at least four (h, error) pairs");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) throw DegenerateInput("fit_rate: step sizes must be positive");
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) throw DegenerateInput("fit_rate: errors must be positive");
    if (i > 0 && !(h[i] < h[i - 1])) throw DegenerateInput("fit_rate: step sizes must be strictly decreasing");
  }
  std::vector<double> lx(h.size());
  std::vector<double> ly(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    lx[i] = std::log(h[i]);
    ly[i] = std::log(errors[i]);
  }
  const LineFit fit = fit_line(lx, ly);
  RateEstimate out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.residual_rms = fit.residual_rms;
  out.half_width_95 = student_t_975(h.size() - 2) * fit.slope_stderr;
  out.target = target;
  out.h_values.assign(h.begin(), h.end());
  out.errors.assign(errors.begin(), errors.end());
  return out;
}

TestFunction capped_root(double delta, double cap) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("capped_root: delta must lie in (0, 1]");
  if (!(cap > 0.0)) throw std::invalid_argument("capped_root: cap must be positive");
  std::ostringstream name;
  name << "min(|y|, " << cap << ")^" << delta;
  return {name.str(), delta,
          [delta, cap](double y) { return std::pow(std::min(std::abs(y), cap), delta); }};
}

TestFunction constant_function(double value) {
  return {"constant", 1.0, [value](double) { return value; }};
}

double weak_error(const TestFunction& f, const GridDensity& ref, const GridDensity& approx, double t) {
  const Grid1D& grid = ref.grid();
  if (!grid.same_space(approx.grid())) throw GridMismatch("weak_error: spatial grids differ");
  if (!grid.has_time(t) || !approx.grid().has_time(t)) throw GridMismatch("weak_error: time not stored in both densities");
  const auto a = ref.at_time(t);
  const auto b = approx.at_time(t);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.n_x(); ++j) sum += f.f(grid.x(j)) * (b[j] - a[j]);
  return std::abs(sum * grid.dx());
}

MonteCarloWeakError weak_error_monte_carlo(const TestFunction& f, const GridDensity& ref, double t,
                                           std::span<const double> terminals) {
  if (terminals.size() < 2) throw std::invalid_argument("weak_error_monte_carlo: need at least two terminals");
  const Grid1D& grid = ref.grid();
  const auto a = ref.at_time(t);
  double exact = 0.0;
  for (std::size_t j = 0; j < grid.n_x(); ++j) exact += f.f(grid.x(j)) * a[j];
  exact *= grid.dx();
  // Welford running moments
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : terminals) {
    const double v = f.f(x);
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {std::abs(mean - exact), 1.96 * std::sqrt(var / static_cast<double>(n)), n};
}

std::string to_string(QuotientKind kind) {
  switch (kind) {
    case QuotientKind::forward_time: return "forward-time";
    case QuotientKind::forward_space: return "forward-space";
    case QuotientKind::forward_space_scheme: return "forward-space-scheme";
  }
  return "unknown";
}

RegularityPoint holder_quotient(const GridDensity& density, QuotientKind kind, double exponent, const ProxyKernel& pk,
                                double step, const ErrorWindow& window) {
  if (!(exponent > 0.0)) throw std::invalid_argument("holder_quotient: exponent must be positive");
  if (kind == QuotientKind::forward_space_scheme && !(step > 0.0)) {
    throw std::invalid_argument("holder_quotient: the scheme quotient needs the step size");
  }
  const Grid1D& grid = density.grid();
  const double s = density.start_time();
  const double x = density.origin();
  const auto& times = grid.times();
  const std::size_t n = grid.n_x();
  const double alpha = pk.spec().alpha();

  RegularityPoint out;
  out.grid_scale = grid.dx();

  if (kind == QuotientKind::forward_time) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const auto gi = density.row(i);
      for (std::size_t k = i + 1; k < times.size(); ++k) {
        const double t2 = times[k];
        if (t2 - t > t - s) break;
        const auto gk = density.row(k);
        const double peak = pk.radial(t2 - s, 0.0);
        const double factor = std::pow(t - s, exponent) / std::pow(t2 - t, exponent);
        for (std::size_t j = 0; j < n; ++j) {
          const double off = periodic_offset(grid, grid.x(j), x);
          if (!in_window(pk, t - s, off, window, pk.radial(t - s, 0.0)) || !in_window(pk, t2 - s, off, window, peak)) {
            continue;
          }
          const double q = std::abs(gi[j] - gk[j]) * factor / pk.radial(t2 - s, std::abs(off));
          out.max_quotient = std::max(out.max_quotient, q);
          ++out.pairs;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double elapsed = times[i] - s;
      const double scale = std::pow(elapsed, 1.0 / alpha);
      const auto g = density.row(i);
      const double peak = pk.radial(elapsed, 0.0);
      const auto max_steps = static_cast<std::size_t>(std::floor(scale / grid.dx() * (1.0 + 1e-12)));
      if (max_steps == 0) continue;
      const std::vector<std::size_t> seps = separation_steps(std::min(max_steps, n / 2));
      const double floor_term = kind == QuotientKind::forward_space_scheme ? std::pow(step, 1.0 / alpha) : 0.0;
      for (std::size_t jw = 0; jw < n; ++jw) {
        const double off_w = periodic_offset(grid, grid.x(jw), x);
        if (!in_window(pk, elapsed, off_w, window, peak)) continue;
        const double weight = pk.radial(elapsed, std::abs(off_w));
        for (std::size_t m : seps) {
          const double gap = static_cast<double>(m) * grid.dx();
          const double denom = std::pow((gap + floor_term) / scale, exponent) * weight;
          for (std::size_t jy : {(jw + m) % n, (jw + n - m) % n}) {
            const double q = std::abs(g[jy] - g[jw]) / denom;
            out.max_quotient = std::max(out.max_quotient, q);
            ++out.pairs;
          }
        }
      }
    }
  }
  if (out.pairs == 0) throw DegenerateInput("holder_quotient: no admissible pairs on the grid");
  return out;
}

double RegularityReport::variation() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : trace) {
    lo = std::min(lo, p.max_quotient);
    hi = std::max(hi, p.max_quotient);
  }
  return hi / lo;
}

double RegularityReport::growth() const { return trace.back().max_quotient / trace.front().max_quotient; }

RegularityReport regularity_report(std::span<const GridDensity> densities, QuotientKind kind, double exponent,
                                   const ProxyKernel& pk, double step, const ErrorWindow& window) {
  if (densities.empty()) throw DegenerateInput("regularity_report: no densities");
  RegularityReport out;
  out.kind = kind;
  out.exponent = exponent;
  for (const auto& d : densities) out.trace.push_back(holder_quotient(d, kind, exponent, pk, step, window));
  out.max_quotient = out.trace.back().max_quotient;
  return out;
}

}  // namespace stable_euler
