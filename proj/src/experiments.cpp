#include "stable_euler/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gauss_rule.hpp"
#include "stable_euler/errors.hpp"
#include "stable_euler/duhamel.hpp"
#include "stable_euler/error_analysis.hpp"
#include "stable_euler/euler.hpp"
#include "stable_euler/kernel_checks.hpp"
#include "stable_euler/parallel.hpp"
#include "stable_euler/proxy_kernel.hpp"
#include "stable_euler/sampling.hpp"
#include "stable_euler/stable_kernel.hpp"
#include "stable_euler/statistics.hpp"

namespace stable_euler {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Accumulates results.csv rows.
class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ostringstream os_;
};

void add_check(ExperimentReport& r, std::string name, bool passed, std::string detail) {
  r.checks.push_back({std::move(name), passed, std::move(detail)});
}

double default_radius(const StableSpec& spec, double horizon) {
  return spec.gaussian() ? 20.0 * std::sqrt(horizon) : 40.0 * spec.scale(horizon);
}

Grid1D reference_grid(const ExperimentConfig& cfg, const StableSpec& spec, double finest_step, std::vector<double> times) {
  if (cfg.grid_points == 0 && cfg.grid_radius == 0.0) return choose_grid(spec, cfg.x0, cfg.horizon, finest_step, std::move(times));
  const double radius = cfg.grid_radius > 0.0 ? cfg.grid_radius : default_radius(spec, cfg.horizon);
  std::size_t points = cfg.grid_points;
  if (points == 0) {
    const double max_dx = spec.scale(finest_step) / 8.0;
    points = std::bit_ceil(static_cast<std::size_t>(std::ceil(2.0 * radius / max_dx)));
    points = std::max<std::size_t>(points, 256);
  }
  return Grid1D::centered(cfg.x0, radius, points, std::move(times));
}

PicardOptions picard_options(const ExperimentConfig& cfg, unsigned workers) {
  PicardOptions o = cfg.picard;
  o.workers = workers;
  return o;
}

// Mass of the linear interpolant of a grid row over [a, b] (a < b inside the window).
double interval_mass(const Grid1D& grid, std::span<const double> row, double a, double b) {
  const double dx = grid.dx();
  auto value = [&](double x) { return interpolate_periodic(grid, row, x); };
  const double first_node = grid.x_min() + std::ceil((a - grid.x_min()) / dx) * dx;
  double mass = 0.0;
  double left = a;
  double f_left = value(a);
  for (double node = first_node; node < b; node += dx) {
    if (node <= left) continue;
    const double f_node = value(node);
    mass += 0.5 * (f_left + f_node) * (node - left);
    left = node;
    f_left = f_node;
  }
  mass += 0.5 * (f_left + value(b)) * (b - left);
  return mass;
}

std::vector<double> draw_increments(const StableSpec& spec, double dt, std::size_t n, std::uint64_t seed,
                                    unsigned workers) {
  constexpr std::size_t kBlock = 4096;
  const auto d = static_cast<std::size_t>(spec.dim());
  std::vector<double> out(n * d);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      Rng rng = make_stream(seed, StreamKind::aux, b);
      for (std::size_t p = b * kBlock; p < std::min(n, (b + 1) * kBlock); ++p) {
        sample_isotropic_increment(spec, dt, rng, std::span<double>(out.data() + p * d, d));
      }
    }
  });
  return out;
}

PlotSeries guide_line(const RateEstimate& fit, const std::string& label) {
  // Slope `target` through the geometric mean of the data.
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < fit.h_values.size(); ++i) {
    mx += std::log(fit.h_values[i]);
    my += std::log(fit.errors[i]);
  }
  mx /= static_cast<double>(fit.h_values.size());
  my /= static_cast<double>(fit.h_values.size());
  PlotSeries s{label, {}, {}, false, true};
  for (double h : {fit.h_values.front(), fit.h_values.back()}) {
    s.x.push_back(h);
    s.y.push_back(std::exp(my + fit.target * (std::log(h) - mx)));
  }
  return s;
}

// ---------------------------------------------------------------- sampler

ExperimentReport sampler_check(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, cfg.dim);
  const auto d = static_cast<std::size_t>(cfg.dim);
  const std::size_t n = cfg.paths;
  const std::vector<double> z = draw_increments(spec, cfg.horizon, n, cfg.seed, workers);
  Csv csv({"check", "index", "point", "empirical", "exact", "abs_error"});

  // Frequencies lambda_i e(theta_i) with theta_i = pi i / m (first two axes).
  const std::size_t m = cfg.cf_lambdas.size();
  double cf_max = 0.0;
  PlotSeries emp{"empirical", {}, {}, true, false};
  PlotSeries exact_series{"exp(-T psi)", {}, {}, false, true};
  for (std::size_t i = 0; i < m; ++i) {
    const double lam = cfg.cf_lambdas[i];
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    const double c1 = d == 1 ? 1.0 : std::cos(theta);
    const double c2 = d == 1 ? 0.0 : std::sin(theta);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      double proj = c1 * z[p * d];
      if (d > 1) proj += c2 * z[p * d + 1];
      re += std::cos(lam * proj);
      im += std::sin(lam * proj);
    }
    const std::complex<double> cf(re / static_cast<double>(n), im / static_cast<double>(n));
    const double exact = std::exp(-cfg.horizon * spec.psi(std::abs(lam)));
    const double err = std::abs(cf - exact);
    cf_max = std::max(cf_max, err);
    csv.row("cf", i, lam, cf.real(), exact, err);
    emp.x.push_back(lam);
    emp.y.push_back(cf.real());
    exact_series.x.push_back(lam);
    exact_series.y.push_back(exact);
  }
  r.values.emplace_back("cf_max_error", cf_max);
  add_check(r, "characteristic_function", cf_max <= cfg.cf_tolerance,
            "max |empirical - exact| = " + short_fmt(cf_max) + " (tolerance " + short_fmt(cfg.cf_tolerance) + ")");

  if (d == 1) {
    const std::size_t bins = cfg.histogram_bins;
    const double lo = -cfg.histogram_radius;
    const double width = 2.0 * cfg.histogram_radius / static_cast<double>(bins);
    std::vector<double> counts(bins, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const double u = (z[p] - lo) / width;
      if (u >= 0.0 && u < static_cast<double>(bins)) counts[static_cast<std::size_t>(u)] += 1.0;
    }
    double sup = 0.0;
    PlotSeries hist{"histogram", {}, {}, false, false};
    PlotSeries dens{"density", {}, {}, false, true};
    for (std::size_t b = 0; b < bins; ++b) {
      const double a = lo + width * static_cast<double>(b);
      const double exact = detail::gauss_integrate([&](double x) { return density(spec, cfg.horizon, x); }, a, a + width, 8) / width;
      const double empirical = counts[b] / (static_cast<double>(n) * width);
      sup = std::max(sup, std::abs(empirical - exact));
      csv.row("histogram", b, a + 0.5 * width, empirical, exact, std::abs(empirical - exact));
      hist.x.push_back(a + 0.5 * width);
      hist.y.push_back(empirical);
      dens.x.push_back(a + 0.5 * width);
      dens.y.push_back(exact);
    }
    r.values.emplace_back("histogram_sup_error", sup);
    add_check(r, "histogram", sup <= cfg.histogram_tolerance,
              "sup |histogram - density| = " + short_fmt(sup) + " (tolerance " + short_fmt(cfg.histogram_tolerance) + ")");
    r.plot = {"Increment histogram, alpha = " + short_fmt(cfg.alpha), "x", "density", false, false, {hist, dens}};
  } else {
    r.plot = {"Characteristic function, alpha = " + short_fmt(cfg.alpha) + ", d = " + std::to_string(cfg.dim), "lambda",
              "Re CF", false, false, {emp, exact_series}};
  }
  r.csv = csv.str();
  return r;
}

// ---------------------------------------------------------------- kernel

ExperimentReport kernel_check(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, 1);
  const ProxyKernel pk(spec);
  Csv csv({"check", "parameter", "value", "refined_value", "relative_change"});

  const double oracle = spec.gaussian() ? 1.0 / std::sqrt(2.0 * std::numbers::pi)
                                        : std::tgamma(1.0 + 1.0 / cfg.alpha) / std::numbers::pi;
  const double at_zero = density(spec, 1.0, 0.0);
  csv.row("density_at_zero", "t=1", at_zero, oracle, std::abs(at_zero - oracle));
  r.values.emplace_back("density_at_zero", at_zero);
  add_check(r, "density_at_zero", std::abs(at_zero - oracle) <= 1e-6,
            "|p(1, 0) - oracle| = " + short_fmt(std::abs(at_zero - oracle)));

  if (!spec.gaussian()) {
    const SandwichCheck s = aronson_sandwich(pk, cfg.kernel_times, cfg.kernel_x_max, cfg.kernel_points, workers);
    csv.row("aronson_constant", "x_max=" + short_fmt(cfg.kernel_x_max), s.constant, s.refined_constant, s.refinement_change);
    csv.row("aronson_min_ratio", "", s.min_ratio, 0.0, 0.0);
    csv.row("aronson_max_ratio", "", s.max_ratio, 0.0, 0.0);
    r.values.emplace_back("aronson_constant", s.constant);
    r.values.emplace_back("aronson_refined_constant", s.refined_constant);
    add_check(r, "aronson_sandwich", s.constant <= cfg.sandwich_max && s.refinement_change <= cfg.sandwich_stability,
              "C = " + short_fmt(s.constant) + ", refined " + short_fmt(s.refined_constant));
  } else {
    r.notes.push_back("aronson sandwich skipped: the Gaussian proxy bounds the kernel from above only");
  }

  const ConvolutionCheck conv = check_convolution(pk, 1.0, 1.0, 101);
  const ConvolutionCheck conv_fine = check_convolution(pk, 1.0, 1.0, 201);
  const double conv_change = std::abs(conv_fine.constant / conv.constant - 1.0);
  csv.row("convolution_constant", "u=1 v=1", conv.constant, conv_fine.constant, conv_change);
  r.values.emplace_back("convolution_constant", conv.constant);
  if (spec.gaussian()) {
    const bool exact = std::abs(conv.constant - 1.0) <= 1e-8 && std::abs(conv.min_ratio - 1.0) <= 1e-8;
    add_check(r, "convolution_exact", exact, "constant = " + fmt(conv.constant) + ", min ratio = " + fmt(conv.min_ratio));
  } else {
    add_check(r, "convolution_stable", std::isfinite(conv.constant) && conv_change <= 0.01,
              "constant = " + short_fmt(conv.constant) + ", refined " + short_fmt(conv_fine.constant));
  }

  const std::vector<double> vs{0.5, 1.0, 2.0, 4.0};
  PlotSeries moment_plot{"moments", {}, {}, true, false};
  for (double delta : cfg.moment_deltas) {
    if (!spec.gaussian() && delta >= cfg.alpha) continue;
    const MomentCheck mc = check_moments(pk, delta, vs);
    const double expected = delta / cfg.alpha;
    csv.row("moment_slope", "delta=" + short_fmt(delta), mc.slope, expected, std::abs(mc.slope - expected));
    r.values.emplace_back("moment_slope_delta_" + short_fmt(delta), mc.slope);
    add_check(r, "moment_slope_delta_" + short_fmt(delta), std::abs(mc.slope - expected) <= cfg.moment_tolerance,
              "slope " + short_fmt(mc.slope) + " vs " + short_fmt(expected));
  }

  if (cfg.kernel_holder) {
    for (auto kind : {KernelHolderKind::time, KernelHolderKind::space}) {
      for (int order : {0, 1}) {
        const KernelHolderCheck h = kernel_holder_constant(pk, kind, order, 1.0, {}, workers);
        const std::string name = std::string("kernel_holder_") + (kind == KernelHolderKind::time ? "time" : "space") +
                                 "_order" + std::to_string(order);
        csv.row(name, "theta=1", h.constant, h.refined_constant, h.refinement_change);
        r.values.emplace_back(name, h.constant);
        add_check(r, name, std::isfinite(h.constant) && h.refinement_change <= 0.20,
                  "C = " + short_fmt(h.constant) + ", refined " + short_fmt(h.refined_constant));
      }
    }
    const SmoothingCheck sm = drift_smoothing_constant(pk, cfg.beta, cfg.kernel_times, cfg.kernel_x_max, cfg.kernel_points, workers);
    csv.row("drift_smoothing", "beta=" + short_fmt(cfg.beta), sm.constant, sm.refined_constant, sm.refinement_change);
    r.values.emplace_back("drift_smoothing_constant", sm.constant);
    add_check(r, "drift_smoothing", std::isfinite(sm.constant) && sm.refinement_change <= 0.20,
              "C = " + short_fmt(sm.constant) + ", refined " + short_fmt(sm.refined_constant));
  }

  // Plot: p / pbar along x for each time.
  r.plot = {"Kernel over proxy, alpha = " + short_fmt(cfg.alpha), "x", "p / pbar", false, false, {}};
  for (double t : cfg.kernel_times) {
    PlotSeries s{"t = " + short_fmt(t), {}, {}, false, false};
    for (std::size_t i = 0; i < 81; ++i) {
      const double x = -cfg.kernel_x_max + 2.0 * cfg.kernel_x_max * static_cast<double>(i) / 80.0;
      s.x.push_back(x);
      s.y.push_back(density(spec, t, x) / pk.radial(t, std::abs(x)));
    }
    r.plot.series.push_back(std::move(s));
  }
  r.csv = csv.str();
  return r;
}

// ---------------------------------------------------------------- solver

ExperimentReport solver_check(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, 1);
  const ProxyKernel pk(spec);
  const double T = cfg.horizon;
  const std::size_t n_scheme = cfg.ladder.empty() ? 16 : cfg.ladder.front();
  const Grid1D grid = reference_grid(cfg, spec, T / static_cast<double>(n_scheme), {cfg.ck_mid_time, T});
  const PicardOptions opts = picard_options(cfg, workers);
  Csv csv({"check", "value", "tolerance", "passed"});
  auto record = [&](const std::string& name, double value, double tol, bool pass, const std::string& detail) {
    csv.row(name, value, tol, pass ? "true" : "false");
    r.values.emplace_back(name, value);
    add_check(r, name, pass, detail);
  };

  // Exact kernel evaluation is costly, so the sup runs over at most 1024 evenly
  // strided nodes plus every node of the central window |y - x0| <= 4 t^{1/alpha}.
  auto sup_error_vs = [&](const GridDensity& g, double shift_rate) {
    double err = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, grid.n_x() / 1024);
    for (std::size_t i = 0; i < g.n_times(); ++i) {
      const double t = grid.times()[i];
      const double centre = cfg.x0 + shift_rate * t;
      const double window = 4.0 * spec.scale(t);
      const auto row = g.row(i);
      for (std::size_t j = 0; j < grid.n_x(); ++j) {
        if (j % stride != 0 && std::abs(grid.x(j) - centre) > window) continue;
        err = std::max(err, std::abs(row[j] - density(spec, t, grid.x(j) - centre)));
      }
    }
    return err;
  };

  const DriftSpec zero = make_holder_drift(cfg.beta, 1.0, SpaceProfile::zero, TimeProfile::constant());
  const double zero_err = sup_error_vs(solve_sde_density(zero, spec, cfg.x0, grid, opts), 0.0);
  record("solver_zero_drift", zero_err, cfg.exact_tolerance, zero_err <= cfg.exact_tolerance,
         "sup |Gamma - p| = " + short_fmt(zero_err));

  const DriftSpec constant = make_holder_drift(cfg.beta, cfg.drift.amplitude, SpaceProfile::constant, TimeProfile::constant());
  const double const_err = sup_error_vs(solve_sde_density(constant, spec, cfg.x0, grid, opts), cfg.drift.amplitude);
  record("solver_constant_drift", const_err, cfg.exact_tolerance, const_err <= cfg.exact_tolerance,
         "sup |Gamma - p(t, . - c t)| = " + short_fmt(const_err));

  const SchemeConfig scheme_cfg{T, n_scheme, cfg.randomized, cfg.seed};
  const double scheme_err = sup_error_vs(propagate_scheme_density(zero, spec, cfg.x0, scheme_cfg, grid, workers), 0.0);
  record("scheme_zero_drift", scheme_err, cfg.exact_tolerance, scheme_err <= cfg.exact_tolerance,
         "sup |Gamma^h - p| = " + short_fmt(scheme_err));

  const DriftSpec drift = cfg.make_drift().with_step(T / static_cast<double>(n_scheme));
  SolverDiagnostics diag;
  const GridDensity gamma = solve_sde_density(drift, spec, cfg.x0, grid, opts, &diag);
  const bool contracting = diag.max_contraction < 1.0;
  record("picard_contraction", diag.max_contraction, 1.0, contracting,
         "largest ratio of successive sup-changes = " + short_fmt(diag.max_contraction) + " over " +
             std::to_string(diag.windows) + " windows");
  r.values.emplace_back("certified_horizon", diag.certified_horizon);
  r.values.emplace_back("initial_layer", diag.initial_layer);
  r.values.emplace_back("picard_iterations", static_cast<double>(diag.total_iterations));
  r.values.emplace_back("window_halvings", static_cast<double>(diag.window_halvings));

  double max_defect = 0.0;
  for (double m : gamma.mass_defects()) max_defect = std::max(max_defect, std::abs(m));
  record("mass_defect", max_defect, 1e-3, max_defect <= 1e-3, "max |mass defect| = " + short_fmt(max_defect));
  record("min_value", gamma.min_value(), -1e-8, gamma.min_value() >= -1e-8, "min Gamma = " + short_fmt(gamma.min_value()));

  double upper = 0.0;
  const auto last = gamma.at_time(T);
  for (std::size_t j = 0; j < grid.n_x(); ++j) {
    upper = std::max(upper, last[j] / pk.radial(T, std::abs(grid.x(j) - cfg.x0)));
  }
  r.values.emplace_back("aronson_upper_constant", upper);

  const ChapmanKolmogorovResult ck =
      chapman_kolmogorov_check(gamma, drift, spec, cfg.ck_mid_time, T, opts, cfg.ck_points, cfg.ck_radius);
  record("chapman_kolmogorov", ck.defect, cfg.ck_tolerance, ck.defect <= cfg.ck_tolerance,
         "sup defect = " + short_fmt(ck.defect) + " with " + std::to_string(ck.subgrid_points) + " inner starts");

  // Scheme density against a Monte Carlo histogram of the same scheme.
  const GridDensity scheme = propagate_scheme_density(drift, spec, cfg.x0, scheme_cfg, grid.with_times({T}), workers);
  const std::vector<double> terminals = batch_terminals(drift, spec, scheme_cfg, std::span<const double>(&cfg.x0, 1), cfg.paths, workers);
  const std::size_t bins = cfg.histogram_bins;
  const double lo = cfg.x0 - cfg.histogram_radius;
  const double width = 2.0 * cfg.histogram_radius / static_cast<double>(bins);
  std::vector<double> observed(bins + 2, 0.0);
  for (double x : terminals) {
    const double u = (x - lo) / width;
    if (u < 0.0) observed[0] += 1.0;
    else if (u >= static_cast<double>(bins)) observed[bins + 1] += 1.0;
    else observed[1 + static_cast<std::size_t>(u)] += 1.0;
  }
  std::vector<double> expected(bins + 2, 0.0);
  const auto row = scheme.row(0);
  double inside = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + width * static_cast<double>(b);
    expected[1 + b] = interval_mass(grid, row, a, a + width);
    inside += expected[1 + b];
  }
  const double left_mass = interval_mass(grid, row, grid.x_min(), lo);
  expected[0] = left_mass;
  expected[bins + 1] = std::max(0.0, 1.0 - inside - left_mass);
  for (double& e : expected) e *= static_cast<double>(terminals.size());
  const ChiSquareResult chi = chi_square_test(observed, expected);
  record("scheme_histogram_chi2_pvalue", chi.p_value, 0.01, chi.p_value >= 0.01,
         "chi2 = " + short_fmt(chi.statistic) + " on " + short_fmt(chi.dof) + " dof, n = " + std::to_string(n_scheme));

  r.plot = {"Picard sup-change per sweep", "sweep", "sup-change", false, true, {}};
  const std::size_t nrec = diag.records.size();
  for (std::size_t idx : {std::size_t{0}, nrec / 2, nrec - 1}) {
    if (idx >= nrec) continue;
    const auto& rec = diag.records[idx];
    PlotSeries s{"window at t = " + short_fmt(rec.start), {}, {}, true, false};
    for (std::size_t k = 0; k < rec.changes.size(); ++k) {
      s.x.push_back(static_cast<double>(k + 1));
      s.y.push_back(rec.changes[k]);
    }
    r.plot.series.push_back(std::move(s));
  }
  r.csv = csv.str();
  return r;
}

// ---------------------------------------------------------------- convergence

bool monotone_with_one_inversion(const std::vector<double>& errors, double noise) {
  std::size_t inversions = 0;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] > errors[i - 1]) {
      ++inversions;
      if (errors[i] - errors[i - 1] > noise) return false;
    }
  }
  return inversions <= 1;
}

ExperimentReport convergence(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, 1);
  const ProxyKernel pk(spec);
  const double T = cfg.horizon;
  const DriftSpec drift = cfg.make_drift();
  const double h_min = T / static_cast<double>(cfg.ladder.back());
  const Grid1D grid = reference_grid(cfg, spec, h_min, {T});
  const PicardOptions opts = picard_options(cfg, workers);
  const TestFunction f = capped_root(cfg.test_delta, cfg.test_cap);
  const double target = cfg.target_rate();
  r.values.emplace_back("target", target);
  r.values.emplace_back("grid_points", static_cast<double>(grid.n_x()));

  std::optional<GridDensity> fixed_ref;
  if (drift.resolved()) fixed_ref = solve_sde_density(drift, spec, cfg.x0, grid, opts);

  Csv csv({"n", "h", "weighted_error", "unweighted_error", "l1_error", "weak_error", "error_over_h_target"});
  std::vector<double> hs;
  std::vector<double> errs;
  std::vector<double> weak;
  for (std::size_t n : cfg.ladder) {
    const double h = T / static_cast<double>(n);
    const GridDensity ref = fixed_ref ? *fixed_ref : solve_sde_density(drift.with_step(h), spec, cfg.x0, grid, opts);
    const GridDensity approx = propagate_scheme_density(drift, spec, cfg.x0, SchemeConfig{T, n, cfg.randomized, cfg.seed}, grid, workers);
    const DensityError e = weighted_density_error(ref, approx, pk, T, cfg.x0);
    const double w = weak_error(f, ref, approx, T);
    csv.row(n, h, e.weighted, e.unweighted, e.l1, w, e.weighted / std::pow(h, target));
    hs.push_back(h);
    errs.push_back(e.weighted);
    weak.push_back(w);
  }

  PlotSeries err_series{"weighted density error", hs, errs, true, false};
  r.plot = {"Weighted density error, alpha = " + short_fmt(cfg.alpha) + ", beta = " + short_fmt(cfg.beta), "h", "error",
            true, true, {err_series}};

  if (drift.is_zero()) {
    const double worst = *std::max_element(errs.begin(), errs.end());
    r.notes.push_back("degenerate: exact scheme");
    r.values.emplace_back("max_error", worst);
    add_check(r, "exact_scheme", worst <= cfg.exact_tolerance,
              "max weighted error " + short_fmt(worst) + " (tolerance " + short_fmt(cfg.exact_tolerance) + ")");
    r.csv = csv.str();
    return r;
  }

  const RateEstimate fit = fit_rate(hs, errs, target);
  r.values.emplace_back("slope", fit.slope);
  r.values.emplace_back("intercept", fit.intercept);
  r.values.emplace_back("residual_rms", fit.residual_rms);
  r.values.emplace_back("slope_half_width_95", fit.half_width_95);
  r.values.emplace_back("normalized_spread", fit.normalized_spread());
  const bool in_band = fit.slope >= target - cfg.slope_below && fit.slope <= target + cfg.slope_above;
  add_check(r, "slope_in_band", in_band,
            "slope " + short_fmt(fit.slope) + " +- " + short_fmt(fit.half_width_95) + ", band [" +
                short_fmt(target - cfg.slope_below) + ", " + short_fmt(target + cfg.slope_above) + "]");
  add_check(r, "normalized_error_bounded", fit.normalized_spread() <= cfg.spread_max,
            "max/min of error / h^target = " + short_fmt(fit.normalized_spread()));
  add_check(r, "monotone_refinement", monotone_with_one_inversion(errs, cfg.exact_tolerance),
            "errors nonincreasing in n up to one inversion below " + short_fmt(cfg.exact_tolerance));
  r.plot.series.push_back(guide_line(fit, "slope " + short_fmt(target)));

  if (cfg.weak_error) {
    if (std::all_of(weak.begin(), weak.end(), [](double v) { return v > 0.0; })) {
      const RateEstimate wfit = fit_rate(hs, weak, target);
      r.values.emplace_back("weak_slope", wfit.slope);
      r.values.emplace_back("weak_slope_half_width_95", wfit.half_width_95);
      add_check(r, "weak_slope", wfit.slope >= target - cfg.slope_below,
                "test function " + f.name + ": slope " + short_fmt(wfit.slope) + " (needs >= " +
                    short_fmt(target - cfg.slope_below) + ")");
      r.plot.series.push_back({"weak error " + f.name, hs, weak, true, false});
    } else {
      add_check(r, "weak_slope", false, "a weak error vanished; no rate can be fitted");
    }
  }

  if (cfg.cross_check_steps > 0 && fixed_ref) {
    const Grid1D fine_grid = grid.refined(cfg.cross_check_refine);
    const GridDensity fine = propagate_scheme_density(
        drift, spec, cfg.x0, SchemeConfig{T, cfg.cross_check_steps, cfg.randomized, cfg.seed}, fine_grid, workers);
    const DensityError diff = weighted_density_error(*fixed_ref, fine.coarsened(cfg.cross_check_refine), pk, T, cfg.x0);
    r.values.emplace_back("cross_check_difference", diff.weighted);
    add_check(r, "cross_check", diff.weighted <= errs.back(),
              "fine scheme (n = " + std::to_string(cfg.cross_check_steps) + ", " + std::to_string(fine_grid.n_x()) +
                  " nodes) differs from the reference by " + short_fmt(diff.weighted) + ", finest ladder error " +
                  short_fmt(errs.back()));
  }
  r.csv = csv.str();
  return r;
}

// ---------------------------------------------------------------- regularity

ExperimentReport regularity(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, 1);
  const ProxyKernel pk(spec);
  const DriftSpec drift = cfg.make_drift().with_step(cfg.horizon / 64.0);
  const PicardOptions opts = picard_options(cfg, workers);
  std::vector<double> times;
  for (double t : cfg.regularity_times) {
    if (t <= cfg.horizon) times.push_back(t);
  }
  if (times.empty()) throw ConfigError("regularity.times", "no time inside the horizon");
  const double radius = cfg.grid_radius > 0.0 ? cfg.grid_radius : default_radius(spec, cfg.horizon);

  std::vector<GridDensity> densities;
  std::vector<GridDensity> schemes;
  const bool with_scheme = !cfg.ladder.empty();
  const std::size_t n_scheme = with_scheme ? cfg.ladder.back() : 0;
  for (std::size_t points : cfg.regularity_grids) {
    const Grid1D grid = Grid1D::centered(cfg.x0, radius, points, times);
    densities.push_back(solve_sde_density(drift, spec, cfg.x0, grid, opts));
    if (with_scheme) {
      schemes.push_back(propagate_scheme_density(drift, spec, cfg.x0,
                                                 SchemeConfig{cfg.horizon, n_scheme, cfg.randomized, cfg.seed}, grid, workers));
    }
  }
  const double time_exp = cfg.time_exponent > 0.0 ? cfg.time_exponent : cfg.target_rate();

  Csv csv({"kind", "exponent", "grid_points", "dx", "max_quotient", "pairs"});
  r.plot = {"Holder quotients under refinement", "dx", "max quotient", true, true, {}};
  auto report = [&](const RegularityReport& rep, const std::string& label) {
    PlotSeries s{label, {}, {}, true, false};
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
      const auto& p = rep.trace[i];
      csv.row(to_string(rep.kind), rep.exponent, cfg.regularity_grids[i], p.grid_scale, p.max_quotient, p.pairs);
      s.x.push_back(p.grid_scale);
      s.y.push_back(p.max_quotient);
    }
    r.plot.series.push_back(std::move(s));
    r.values.emplace_back(label + "_max_quotient", rep.max_quotient);
    r.values.emplace_back(label + "_variation", rep.variation());
  };

  const RegularityReport time_rep = regularity_report(densities, QuotientKind::forward_time, time_exp, pk);
  report(time_rep, "forward_time");
  add_check(r, "forward_time_stable", time_rep.variation() - 1.0 <= cfg.stability_tolerance,
            "exponent " + short_fmt(time_exp) + ": max/min across grids = " + short_fmt(time_rep.variation()));

  const RegularityReport space_rep = regularity_report(densities, QuotientKind::forward_space, cfg.space_exponent, pk);
  report(space_rep, "forward_space");
  add_check(r, "forward_space_stable", space_rep.variation() - 1.0 <= cfg.stability_tolerance,
            "exponent " + short_fmt(cfg.space_exponent) + ": max/min across grids = " + short_fmt(space_rep.variation()));

  const RegularityReport control = regularity_report(densities, QuotientKind::forward_space, cfg.control_exponent, pk);
  report(control, "forward_space_control");
  bool increasing = true;
  for (std::size_t i = 1; i < control.trace.size(); ++i) {
    increasing = increasing && control.trace[i].max_quotient > control.trace[i - 1].max_quotient;
  }
  add_check(r, "control_exponent_diverges", increasing && control.growth() >= cfg.divergence_growth,
            "exponent " + short_fmt(cfg.control_exponent) + ": finest/coarsest = " + short_fmt(control.growth()));

  if (with_scheme) {
    const double h = cfg.horizon / static_cast<double>(n_scheme);
    const RegularityReport scheme_rep =
        regularity_report(schemes, QuotientKind::forward_space_scheme, cfg.space_exponent, pk, h);
    report(scheme_rep, "forward_space_scheme");
    add_check(r, "forward_space_scheme_stable", scheme_rep.variation() - 1.0 <= cfg.stability_tolerance,
              "n = " + std::to_string(n_scheme) + ", exponent " + short_fmt(cfg.space_exponent) +
                  ": max/min across grids = " + short_fmt(scheme_rep.variation()));
  }
  r.csv = csv.str();
  return r;
}

// ---------------------------------------------------------------- ablation

ExperimentReport ablation(const ExperimentConfig& cfg, unsigned workers) {
  ExperimentReport r;
  const StableSpec spec(cfg.alpha, 1);
  const ProxyKernel pk(spec);
  const double T = cfg.horizon;
  const DriftSpec drift = cfg.make_drift();
  const Grid1D grid = reference_grid(cfg, spec, T / static_cast<double>(cfg.ladder.back()), {T});
  const PicardOptions opts = picard_options(cfg, workers);
  const double target = cfg.target_rate();
  r.values.emplace_back("target", target);

  Csv csv({"n", "h", "randomized_error", "left_point_error"});
  std::vector<double> hs;
  std::vector<double> rand_err;
  std::vector<double> left_err;
  for (std::size_t n : cfg.ladder) {
    const double h = T / static_cast<double>(n);
    const GridDensity ref = solve_sde_density(drift.with_step(h), spec, cfg.x0, grid, opts);
    const GridDensity rnd = propagate_scheme_density(drift, spec, cfg.x0, SchemeConfig{T, n, true, cfg.seed}, grid, workers);
    const GridDensity lft = propagate_scheme_density(drift, spec, cfg.x0, SchemeConfig{T, n, false, cfg.seed}, grid, workers);
    const double er = weighted_density_error(ref, rnd, pk, T, cfg.x0).weighted;
    const double el = weighted_density_error(ref, lft, pk, T, cfg.x0).weighted;
    csv.row(n, h, er, el);
    hs.push_back(h);
    rand_err.push_back(er);
    left_err.push_back(el);
  }
  r.plot = {"Randomized vs left-point scheme, square wave of period " + short_fmt(cfg.drift.period_steps) + " h", "h",
            "weighted error", true, true,
            {{"randomized", hs, rand_err, true, false}, {"left point", hs, left_err, true, false}}};
  if (drift.is_zero()) {
    r.notes.push_back("degenerate: exact scheme");
    const double worst = std::max(*std::max_element(rand_err.begin(), rand_err.end()),
                                  *std::max_element(left_err.begin(), left_err.end()));
    add_check(r, "exact_scheme", worst <= cfg.exact_tolerance, "max weighted error " + short_fmt(worst));
    r.csv = csv.str();
    return r;
  }
  const RateEstimate fr = fit_rate(hs, rand_err, target);
  const RateEstimate fl = fit_rate(hs, left_err, target);
  r.values.emplace_back("randomized_slope", fr.slope);
  r.values.emplace_back("randomized_slope_half_width_95", fr.half_width_95);
  r.values.emplace_back("left_point_slope", fl.slope);
  r.values.emplace_back("left_point_slope_half_width_95", fl.half_width_95);
  add_check(r, "randomized_slope", fr.slope >= target - cfg.slope_below,
            "randomized slope " + short_fmt(fr.slope) + " (needs >= " + short_fmt(target - cfg.slope_below) +
                "), left-point slope " + short_fmt(fl.slope));
  r.plot.series.push_back(guide_line(fr, "slope " + short_fmt(target)));
  r.csv = csv.str();
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double ExperimentReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw std::out_of_range("ExperimentReport: no value named " + key);
}

const CheckResult& ExperimentReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("ExperimentReport: no check named " + name);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  validate(cfg);
  if (workers == 0) workers = 1;
  ExperimentReport r;
  switch (cfg.kind) {
    case ExperimentKind::sampler_check: r = sampler_check(cfg, workers); break;
    case ExperimentKind::kernel_check: r = kernel_check(cfg, workers); break;
    case ExperimentKind::solver_check: r = solver_check(cfg, workers); break;
    case ExperimentKind::convergence: r = convergence(cfg, workers); break;
    case ExperimentKind::regularity: r = regularity(cfg, workers); break;
    case ExperimentKind::randomization_ablation: r = ablation(cfg, workers); break;
  }
  r.kind = cfg.kind;
  return r;
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  const char* env = std::getenv("STABLE_EULER_OUTPUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return cfg.output_dir;
}

std::string render_manifest(const ExperimentConfig& cfg, const ExperimentReport& report, double wall_seconds) {
  std::ostringstream os;
  os << "# stable_euler run manifest\n";
  os << "version = " << STABLE_EULER_VERSION << '\n';
  os << "experiment = " << to_string(cfg.kind) << '\n';
  for (const auto& [k, v] : cfg.entries) os << "config." << k << " = " << v << '\n';
  os << "seed = " << cfg.seed << '\n';
  os << "seed.noise_streams = splitmix64(seed, noise, path index)\n";
  os << "seed.time_streams = splitmix64(seed, time, path index)\n";
  os << "seed.sampler_streams = splitmix64(seed, aux, block of 4096 draws)\n";
  os << "gamma = " << fmt(cfg.gamma()) << '\n';
  os << "target_rate = " << fmt(cfg.target_rate()) << '\n';
  for (const auto& [k, v] : report.values) os << "result." << k << " = " << fmt(v) << '\n';
  for (std::size_t i = 0; i < report.notes.size(); ++i) os << "note." << i << " = " << report.notes[i] << '\n';
  std::size_t passed = 0;
  for (const auto& c : report.checks) {
    os << "check." << c.name << " = " << (c.passed ? "pass" : "fail") << '\n';
    os << "check." << c.name << ".detail = " << c.detail << '\n';
    passed += c.passed ? 1 : 0;
  }
  os << "checks_passed = " << passed << '/' << report.checks.size() << '\n';
  os << "status = " << (report.passed() ? "pass" : "fail") << '\n';
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", wall_seconds);
  os << "wall_time_seconds = " << wall << '\n';
  os << "timestamp = " << utc_timestamp() << '\n';
  return os.str();
}

void write_artifacts(const ExperimentConfig& cfg, const ExperimentReport& report, const std::string& dir,
                     double wall_seconds) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream os(base / "results.csv");
    if (!os) throw std::runtime_error("cannot write " + (base / "results.csv").string());
    os << report.csv;
  }
  write_svg(report.plot, (base / "plot.svg").string());
  std::ofstream os(base / "manifest.txt");
  if (!os) throw std::runtime_error("cannot write " + (base / "manifest.txt").string());
  os << render_manifest(cfg, report, wall_seconds);
}

}  // namespace stable_euler
