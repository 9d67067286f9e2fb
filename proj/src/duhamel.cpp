#include "stable_euler/duhamel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gauss_rule.hpp"
#include "spectral_grid.hpp"
#include "stable_euler/errors.hpp"
#include "stable_euler/parallel.hpp"
#include "stable_euler/stable_kernel.hpp"

namespace stable_euler {

using detail::cplx;
using detail::SpectralGrid;

double wrap_mass_estimate(const StableSpec& spec, const Grid1D& grid, double x0, double elapsed, double drift_sup) {
  if (!(elapsed > 0.0)) return 0.0;
  const double room = std::min(grid.x_max() - x0, x0 - grid.x_min()) - drift_sup * elapsed;
  if (room <= 0.0) return 1.0;
  if (spec.gaussian()) return std::erfc(room / std::sqrt(2.0 * elapsed));
  return std::clamp(stable_tail_mass(spec.alpha(), room / spec.scale(elapsed)), 0.0, 1.0);
}

namespace {

void require_dim1(const DriftSpec& drift, const StableSpec& spec, const char* who) {
  if (spec.dim() != 1 || drift.dim() != 1) throw std::invalid_argument(std::string(who) + ": implemented for dim 1");
  if (!drift.resolved()) {
    throw std::invalid_argument(std::string(who) + ": square-wave period given in steps; resolve it with with_step");
  }
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

std::vector<double> space_profile(const DriftSpec& drift, const Grid1D& grid) {
  std::vector<double> sigma(grid.n_x());
  for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] = drift.amplitude() * drift.space_factor(grid.x(j));
  return sigma;
}

// Exponential-integrator weights for one window of length dt:
//   Gamma_q = E_q Gamma_0 - i k sum_m R_{q,m} g_m,   q = 1..Q
// with E_q = exp(-c_q x), x = dt psi, and
//   R_{q,m} = dt int_0^{c_q} exp(-(c_q - u) x) l_m(u) du.
// For c_q x <= 45 the integral is done by 40-point Gauss-Legendre in u with
// l_m in product form. Beyond, the exponential confines the integrand to
// u near c_q and R_{q,m} = dt sum_p (-1)^p l_m^{(p)}(c_q) / x^{p+1} up to e^{-45}.
class WindowWeights {
 public:
  explicit WindowWeights(int order) : order_(order), nodes_(order + 1) {
    for (int m = 0; m <= order; ++m) nodes_[m] = 0.5 * (1.0 - std::cos(std::numbers::pi * m / order));
    const auto size = static_cast<Eigen::Index>(order + 1);
    Eigen::MatrixXd vander(size, size);
    for (Eigen::Index m = 0; m < size; ++m) {
      for (Eigen::Index p = 0; p < size; ++p) vander(m, p) = std::pow(nodes_[static_cast<std::size_t>(m)], static_cast<double>(p));
    }
    // Row m holds the monomial coefficients of the Lagrange polynomial l_m.
    const Eigen::MatrixXd coeff = vander.inverse().transpose();
    // derivs_[(q * (Q+1) + m) * (Q+1) + p] = (-1)^p l_m^{(p)}(c_q)
    derivs_.assign(static_cast<std::size_t>(size * size * size), 0.0);
    for (Eigen::Index q = 0; q < size; ++q) {
      const double c = nodes_[static_cast<std::size_t>(q)];
      for (Eigen::Index m = 0; m < size; ++m) {
        for (Eigen::Index p = 0; p < size; ++p) {
          double acc = 0.0;
          for (Eigen::Index i = p; i < size; ++i) {
            double falling = 1.0;
            for (Eigen::Index f = 0; f < p; ++f) falling *= static_cast<double>(i - f);
            acc += coeff(m, i) * falling * std::pow(c, static_cast<double>(i - p));
          }
          derivs_[static_cast<std::size_t>((q * size + m) * size + p)] = (p % 2 == 0 ? 1.0 : -1.0) * acc;
        }
      }
    }
  }

  const std::vector<double>& nodes() const noexcept { return nodes_; }

  double lagrange(std::size_t m, double u) const {
    double v = 1.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i != m) v *= (u - nodes_[i]) / (nodes_[m] - nodes_[i]);
    }
    return v;
  }

  void build(const std::vector<double>& psi, double dt) {
    if (dt == dt_ && psi.size() == nk_) return;
    dt_ = dt;
    nk_ = psi.size();
    const auto q_count = static_cast<std::size_t>(order_);
    const auto m_count = static_cast<std::size_t>(order_ + 1);
    e_.assign(q_count * nk_, 0.0);
    r_.assign(q_count * m_count * nk_, 0.0);
    const auto& gl = detail::gauss_legendre(40);
    std::vector<double> lvals(gl.nodes.size() * m_count);
    for (std::size_t q = 1; q <= q_count; ++q) {
      const double c = nodes_[q];
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double u = 0.5 * c * (1.0 + gl.nodes[i]);
        for (std::size_t m = 0; m < m_count; ++m) lvals[i * m_count + m] = 0.5 * c * gl.weights[i] * lagrange(m, u);
      }
      for (std::size_t j = 0; j < nk_; ++j) {
        const double x = dt * psi[j];
        e_[(q - 1) * nk_ + j] = std::exp(-c * x);
        double* row = &r_[((q - 1) * m_count) * nk_ + j];
        if (c * x <= 45.0) {
          for (std::size_t m = 0; m < m_count; ++m) row[m * nk_] = 0.0;
          for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double u = 0.5 * c * (1.0 + gl.nodes[i]);
            const double decay = std::exp(-(c - u) * x);
            for (std::size_t m = 0; m < m_count; ++m) row[m * nk_] += decay * lvals[i * m_count + m];
          }
          for (std::size_t m = 0; m < m_count; ++m) row[m * nk_] *= dt;
        } else {
          for (std::size_t m = 0; m < m_count; ++m) {
            const double* d = &derivs_[(q * m_count + m) * m_count];
            double acc = 0.0;
            double inv = 1.0 / x;
            for (std::size_t p = 0; p < m_count; ++p) {
              acc += d[p] * inv;
              inv /= x;
            }
            row[m * nk_] = dt * acc;
          }
        }
      }
    }
  }

  double e(std::size_t q, std::size_t j) const { return e_[(q - 1) * nk_ + j]; }
  const double* r(std::size_t q, std::size_t m) const {
    return r_.data() + ((q - 1) * static_cast<std::size_t>(order_ + 1) + m) * nk_;
  }

 private:
  int order_;
  std::vector<double> nodes_;
  std::vector<double> derivs_;
  double dt_ = -1.0;
  std::size_t nk_ = 0;
  std::vector<double> e_;
  std::vector<double> r_;
};

double sup_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

GridDensity solve_sde_density(const DriftSpec& drift, const StableSpec& spec, double x0, const Grid1D& grid,
                              const PicardOptions& options, SolverDiagnostics* diagnostics, double start_time) {
  require_dim1(drift, spec, "solve_sde_density");
  if (!(options.tol > 0.0) || options.max_iter == 0 || !(options.window_cap > 0.0) || options.collocation_order < 2 ||
      !(options.graded_fraction > 0.0)) {
    throw std::invalid_argument("solve_sde_density: invalid Picard options");
  }
  if (x0 < grid.x_min() || x0 >= grid.x_max()) throw std::invalid_argument("solve_sde_density: x0 outside the grid");

  SolverDiagnostics local_diag;
  SolverDiagnostics& diag = diagnostics != nullptr ? *diagnostics : local_diag;
  diag = SolverDiagnostics{};

  GridDensity out(grid, start_time, x0);
  out.metadata()["kind"] = "sde_density";
  out.metadata()["drift"] = drift.describe();
  out.metadata()["alpha"] = std::to_string(spec.alpha());

  SpectralGrid sg(grid, spec);
  const std::size_t n = sg.n();
  const std::size_t nk = sg.nk();
  const auto& times = grid.times();
  const std::vector<double> sigma = space_profile(drift, grid);
  const bool zero_drift = drift.is_zero();

  // Initial layer: one averaged Euler step of length epsilon, exact in Fourier space.
  double eps = std::pow(8.0 * grid.dx(), spec.alpha());
  eps = std::min(eps, 0.5 * (times.front() - start_time));
  diag.initial_layer = eps;
  std::vector<cplx> g0hat(nk, cplx{});
  for (const auto& node : step_time_rule(drift, start_time, eps, true)) {
    sg.add_point_mass(x0 + eps * drift(node.u, x0), eps, node.weight, g0hat);
  }
  std::vector<double> g0(n);
  sg.inverse(g0hat, g0);

  // Window boundaries that must be hit exactly.
  std::vector<double> stops(times.begin(), times.end());
  for (double b : drift.time_breakpoints(start_time + eps, times.back())) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(), same_time), stops.end());

  const int order = options.collocation_order;
  const auto q_count = static_cast<std::size_t>(order);
  WindowWeights weights(order);
  const auto& c = weights.nodes();

  std::vector<std::vector<cplx>> ghat(q_count + 1, std::vector<cplx>(nk));    // spectra of Gamma at nodes
  std::vector<std::vector<double>> greal(q_count + 1, std::vector<double>(n));
  std::vector<std::vector<cplx>> fhat(q_count + 1, std::vector<cplx>(nk));    // spectra of b Gamma at nodes
  std::vector<double> work(n);
  std::vector<double> fresh(n);
  double cap = options.window_cap;

  auto flux_spectrum = [&](double tau, std::span<const double> gamma, std::vector<cplx>& dst) {
    if (zero_drift || tau == 0.0) {
      std::fill(dst.begin(), dst.end(), cplx{});
      return;
    }
    for (std::size_t j = 0; j < n; ++j) work[j] = tau * sigma[j] * gamma[j];
    sg.forward(work, dst);
  };

  // Updates ghat[q] for q = 1..Q from fhat[0..Q].
  auto apply_window = [&](const std::vector<double>& kvec) {
    parallel_for(nk, options.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t q = 1; q <= q_count; ++q) {
        for (std::size_t j = begin; j < end; ++j) {
          cplx acc{};
          for (std::size_t m = 0; m <= q_count; ++m) acc += weights.r(q, m)[j] * fhat[m][j];
          ghat[q][j] = weights.e(q, j) * ghat[0][j] - cplx(0.0, kvec[j]) * acc;
        }
      }
    });
  };

  std::size_t next_stop = 0;
  std::size_t next_out = 0;
  double a = start_time + eps;
  while (next_out < times.size()) {
    while (next_stop < stops.size() && stops[next_stop] <= a + 1e-14) ++next_stop;
    const double stop = stops[next_stop];
    double dt = std::min(cap, options.graded_fraction * (a - start_time));
    if (stop - a <= 1.25 * dt) dt = stop - a;
    const bool square = drift.time_profile().kind == TimeKind::square_wave;
    auto tau_at = [&](std::size_t m) {
      return square ? drift.time_factor(a + 0.5 * dt) : drift.time_factor(a + c[m] * dt);
    };

    ghat[0] = g0hat;
    greal[0] = g0;
    flux_spectrum(tau_at(0), greal[0], fhat[0]);
    weights.build(sg.psi(), dt);
    for (std::size_t m = 1; m <= q_count; ++m) fhat[m] = fhat[0];
    apply_window(sg.k());
    for (std::size_t q = 1; q <= q_count; ++q) sg.inverse(ghat[q], greal[q]);

    WindowRecord rec;
    rec.start = a;
    rec.length = dt;
    bool converged = zero_drift;
    bool failed = false;
    double prev_change = 0.0;
    for (std::size_t it = 0; !converged && it < options.max_iter; ++it) {
      for (std::size_t m = 1; m <= q_count; ++m) flux_spectrum(tau_at(m), greal[m], fhat[m]);
      apply_window(sg.k());
      double change = 0.0;
      double sup = 0.0;
      for (std::size_t q = 1; q <= q_count; ++q) {
        sg.inverse(ghat[q], fresh);
        for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(fresh[j] - greal[q][j]));
        sup = std::max(sup, sup_abs(fresh));
        greal[q].swap(fresh);
      }
      rec.changes.push_back(change);
      ++rec.iterations;
      if (!std::isfinite(change) || change > 1e3 * std::max(1.0, sup)) {
        failed = true;
        break;
      }
      if (it > 0 && change > 256.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sup)) {
        diag.max_contraction = std::max(diag.max_contraction, change / prev_change);
      }
      prev_change = change;
      converged = change <= options.tol * std::max(1.0, sup);
    }
    if (!converged || failed) {
      if (dt < 1e-9) {
        std::ostringstream os;
        os << "Picard iteration failed to contract on a window of length " << dt << " at t = " << a
           << " (last sup-change " << (rec.changes.empty() ? 0.0 : rec.changes.back()) << ")";
        throw NonConvergence(os.str());
      }
      cap = 0.5 * dt;
      ++diag.window_halvings;
      continue;
    }
    rec.final_change = rec.changes.empty() ? 0.0 : rec.changes.back();
    diag.total_iterations += rec.iterations;
    ++diag.windows;
    diag.records.push_back(std::move(rec));

    a = (stop - a == dt) ? stop : a + dt;
    g0hat = ghat[q_count];
    g0 = greal[q_count];
    if (same_time(a, times[next_out])) {
      auto row = out.row(next_out);
      std::copy(g0.begin(), g0.end(), row.begin());
      out.finalize_row(next_out, wrap_mass_estimate(spec, grid, x0, a - start_time, drift.sup_norm()));
      ++next_out;
    }
  }
  diag.certified_horizon = cap;
  out.metadata()["certified_horizon"] = std::to_string(cap);
  out.metadata()["initial_layer"] = std::to_string(eps);
  out.check_mass();
  return out;
}

GridDensity propagate_scheme_density(const DriftSpec& drift_in, const StableSpec& spec, double x0, const SchemeConfig& cfg,
                                     const Grid1D& grid, unsigned workers) {
  (void)workers;
  cfg.validate();
  const DriftSpec drift = drift_in.with_step(cfg.h());
  require_dim1(drift, spec, "propagate_scheme_density");
  if (grid.horizon() > cfg.horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("propagate_scheme_density: output times exceed the scheme horizon");
  }
  GridDensity out(grid, 0.0, x0);
  out.metadata()["kind"] = "scheme_density";
  out.metadata()["drift"] = drift.describe();
  out.metadata()["steps"] = std::to_string(cfg.steps);
  out.metadata()["randomized"] = cfg.randomized ? "true" : "false";

  SpectralGrid sg(grid, spec);
  const std::size_t n = sg.n();
  const double h = cfg.h();
  const std::vector<double> sigma = space_profile(drift, grid);
  std::vector<cplx> spec_buf(sg.nk());
  std::vector<double> state(n);
  std::vector<double> scratch(n);

  // Advances from t_k by tau <= h with the drift-time nodes of the full step.
  auto advance = [&](std::size_t k, double tau, bool from_point_mass, std::span<const double> in, std::span<double> dst) {
    const double t_k = cfg.t(k);
    const auto nodes = step_time_rule(drift, t_k, h, cfg.randomized);
    if (from_point_mass) {
      std::fill(spec_buf.begin(), spec_buf.end(), cplx{});
      for (const auto& nd : nodes) sg.add_point_mass(x0 + tau * drift(nd.u, x0), tau, nd.weight, spec_buf);
      sg.inverse(spec_buf, dst);
      return;
    }
    if (drift.is_zero()) {
      std::copy(in.begin(), in.end(), scratch.begin());
    } else {
      std::fill(scratch.begin(), scratch.end(), 0.0);
      for (const auto& nd : nodes) {
        const double shift = tau * drift.time_factor(nd.u);
        detail::deposit(in, sg.dx(), nd.weight, [&](std::size_t j) { return shift * sigma[j]; }, scratch);
      }
    }
    sg.forward(scratch, spec_buf);
    sg.propagate(spec_buf, tau);
    sg.inverse(spec_buf, dst);
  };

  const auto& times = grid.times();
  std::size_t k = 0;  // state holds Gamma^h(t_k); k == 0 means the point mass
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t_out = times[i];
    while (k < cfg.steps && cfg.t(k + 1) <= t_out * (1.0 + 1e-12)) {
      advance(k, h, k == 0, state, state);
      ++k;
    }
    auto row = out.row(i);
    const double rest = t_out - cfg.t(k);
    if (rest <= 1e-12 * std::max(1.0, t_out)) {
      std::copy(state.begin(), state.end(), row.begin());
    } else {
      advance(k, rest, k == 0, state, row);
    }
    out.finalize_row(i, wrap_mass_estimate(spec, grid, x0, t_out, drift.sup_norm()));
  }
  out.check_mass();
  return out;
}

ChapmanKolmogorovResult chapman_kolmogorov_check(const GridDensity& gamma, const DriftSpec& drift, const StableSpec& spec,
                                                 double r, double t, const PicardOptions& options, std::size_t n_sub,
                                                 double radius) {
  require_dim1(drift, spec, "chapman_kolmogorov_check");
  const double s = gamma.start_time();
  const double x = gamma.origin();
  if (!(s < r && r < t)) throw std::invalid_argument("chapman_kolmogorov_check: need s < r < t");
  if (n_sub < 2 || !(radius > 0.0)) throw std::invalid_argument("chapman_kolmogorov_check: bad subgrid");
  const Grid1D& grid = gamma.grid();
  const auto mid = gamma.at_time(r);
  const auto direct = gamma.at_time(t);

  SpectralGrid sg(grid, spec);
  const std::size_t n = sg.n();
  const std::size_t nk = sg.nk();
  // Nodes graded towards x, where Gamma(s, x, r, .) carries its mass:
  // z_i = x + radius sign(u_i) |u_i|^2 with u_i equispaced in [-1, 1].
  std::vector<double> nodes(n_sub);
  for (std::size_t i = 0; i < n_sub; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_sub - 1);
    nodes[i] = x + radius * std::copysign(u * u, u);
  }
  const double tau = t - r;
  const double dx = sg.dx();

  // Control variate: the frozen-drift transition q(z, y) = p(tau, y - z - tau b(r, z))
  // is integrated against Gamma(s, x, r, .) exactly (deposit, then semigroup).
  // Only the residual K(z_i, .) - q(z_i, .) is interpolated in z, with hat
  // weights (constant beyond the subgrid ends) integrated against Gamma_r.
  std::vector<double> frozen(n, 0.0);
  detail::deposit(mid, dx, 1.0, [&](std::size_t j) { return tau * drift(r, grid.x(j)); }, frozen);
  std::vector<cplx> total(nk);
  sg.forward(frozen, total);
  sg.propagate(total, tau);

  std::vector<cplx> residual(nk);
  const Grid1D inner_grid = grid.with_times({t});
  for (std::size_t i = 0; i < n_sub; ++i) {
    const double zi = nodes[i];
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double z = grid.x(j);
      double w = 0.0;
      if (z <= zi) {
        w = i == 0 ? 1.0 : std::max(0.0, (z - nodes[i - 1]) / (zi - nodes[i - 1]));
      } else {
        w = i + 1 == n_sub ? 1.0 : std::max(0.0, (nodes[i + 1] - z) / (nodes[i + 1] - zi));
      }
      mass += w * mid[j] * dx;
    }
    const GridDensity inner = solve_sde_density(drift, spec, zi, inner_grid, options, nullptr, r);
    sg.forward(inner.row(0), residual);
    for (auto& c : residual) c *= -1.0;
    sg.add_point_mass(zi + tau * drift(r, zi), tau, 1.0, residual);
    for (std::size_t j = 0; j < nk; ++j) total[j] -= mass * residual[j];
  }
  std::vector<double> composite(n);
  sg.inverse(total, composite);
  ChapmanKolmogorovResult res;
  res.s = s;
  res.r = r;
  res.t = t;
  res.subgrid_points = n_sub;
  res.subgrid_radius = radius;
  for (std::size_t j = 0; j < n; ++j) res.defect = std::max(res.defect, std::abs(direct[j] - composite[j]));
  return res;
}

}  // namespace stable_euler
