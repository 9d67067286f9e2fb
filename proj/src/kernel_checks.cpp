#include "stable_euler/kernel_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "stable_euler/parallel.hpp"
#include "stable_euler/stable_kernel.hpp"

namespace stable_euler {
namespace {

void require_dim1(const ProxyKernel& pk, const char* who) {
  if (pk.spec().dim() != 1) throw std::invalid_argument(std::string(who) + ": implemented for dim 1");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (double& v : out) v = std::exp(v);
  return out;
}

// Max over i in [0, n) of f(i), evaluated in parallel. The maximum does not
// depend on the evaluation order.
template <class F>
double parallel_max(std::size_t n, unsigned workers, F&& f) {
  double best = 0.0;
  std::mutex mutex;
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    double local = 0.0;
    for (std::size_t i = begin; i < end; ++i) local = std::max(local, f(i));
    std::lock_guard lock(mutex);
    best = std::max(best, local);
  });
  return best;
}

double kernel_derivative(const StableSpec& spec, int order, double u, double x) {
  return order == 0 ? density(spec, u, x) : grad_density(spec, u, x);
}

double relative_change(double base, double fine) { return base > 0.0 ? std::abs(fine / base - 1.0) : 0.0; }

struct Extremes {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::size_t points = 0;
};

Extremes sandwich_extremes(const ProxyKernel& pk, std::span<const double> times, double x_max, std::size_t n,
                           unsigned workers) {
  const std::vector<double> xs = linspace(-x_max, x_max, n);
  Extremes out;
  std::mutex mutex;
  for (double t : times) {
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
      Extremes local;
      for (std::size_t i = begin; i < end; ++i) {
        const double ratio = density(pk.spec(), t, xs[i]) / pk.radial(t, std::abs(xs[i]));
        local.min_ratio = std::min(local.min_ratio, ratio);
        local.max_ratio = std::max(local.max_ratio, ratio);
      }
      std::lock_guard lock(mutex);
      out.min_ratio = std::min(out.min_ratio, local.min_ratio);
      out.max_ratio = std::max(out.max_ratio, local.max_ratio);
    });
    out.points += n;
  }
  return out;
}

double holder_sup(const ProxyKernel& pk, KernelHolderKind kind, int order, double theta, const HolderSampling& s,
                  unsigned workers, std::size_t& samples) {
  const StableSpec& spec = pk.spec();
  const double alpha = spec.alpha();
  const std::vector<double> us = logspace(s.u_min, s.u_max, s.n_u);
  const std::vector<double> gaps = logspace(1e-2, 1.0, s.n_gap);
  const std::vector<double> xs = linspace(-s.x_max, s.x_max, s.n_x);
  samples = us.size() * gaps.size() * xs.size();
  return parallel_max(xs.size(), workers, [&](std::size_t ix) {
    const double x = xs[ix];
    double best = 0.0;
    for (double u : us) {
      const double here = kernel_derivative(spec, order, u, x);
      for (double g : gaps) {
        double diff = 0.0;
        double bound = 0.0;
        if (kind == KernelHolderKind::time) {
          const double u2 = u * (1.0 + g);
          diff = std::abs(here - kernel_derivative(spec, order, u2, x));
          bound = std::pow(u2 - u, theta) * std::pow(u, -theta - order / alpha) *
                  (pk.radial(u, std::abs(x)) + pk.radial(u2, std::abs(x)));
        } else {
          const double x2 = x + g * spec.scale(u);
          diff = std::abs(here - kernel_derivative(spec, order, u, x2));
          const double gap_factor = std::min(1.0, std::pow(std::abs(x2 - x), theta) * std::pow(u, -theta / alpha));
          bound = gap_factor * std::pow(u, -order / alpha) * (pk.radial(u, std::abs(x)) + pk.radial(u, std::abs(x2)));
        }
        best = std::max(best, diff / bound);
      }
    }
    return best;
  });
}

double smoothing_sup(const ProxyKernel& pk, double beta, std::span<const double> times, double x_max, std::size_t n,
                     unsigned workers) {
  const StableSpec& spec = pk.spec();
  const std::vector<double> zs = linspace(-x_max, x_max, n);
  double best = 0.0;
  for (double v : times) {
    const double time_factor = std::pow(v, (1.0 - beta) / spec.alpha());
    best = std::max(best, parallel_max(n, workers, [&](std::size_t i) {
                      const double z = zs[i];
                      return std::pow(std::abs(z), beta) * std::abs(grad_density(spec, v, z)) * time_factor /
                             pk.radial(v, std::abs(z));
                    }));
  }
  return best;
}

}  // namespace

SandwichCheck aronson_sandwich(const ProxyKernel& pk, std::span<const double> times, double x_max, std::size_t n_points,
                               unsigned workers) {
  require_dim1(pk, "aronson_sandwich");
  if (times.empty() || n_points < 2 || !(x_max > 0.0)) throw std::invalid_argument("aronson_sandwich: empty sampling");
  const Extremes base = sandwich_extremes(pk, times, x_max, n_points, workers);
  const Extremes fine = sandwich_extremes(pk, times, x_max, 2 * n_points - 1, workers);
  SandwichCheck out;
  out.min_ratio = base.min_ratio;
  out.max_ratio = base.max_ratio;
  out.constant = std::max(base.max_ratio, 1.0 / base.min_ratio);
  out.refined_constant = std::max(fine.max_ratio, 1.0 / fine.min_ratio);
  out.refinement_change = relative_change(out.constant, out.refined_constant);
  out.points = base.points;
  return out;
}

KernelHolderCheck kernel_holder_constant(const ProxyKernel& pk, KernelHolderKind kind, int derivative_order,
                                         double theta, const HolderSampling& sampling, unsigned workers) {
  require_dim1(pk, "kernel_holder_constant");
  if (derivative_order != 0 && derivative_order != 1) {
    throw std::invalid_argument("kernel_holder_constant: derivative order must be 0 or 1");
  }
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("kernel_holder_constant: theta must lie in (0, 1]");
  if (sampling.n_u < 1 || sampling.n_gap < 1 || sampling.n_x < 2 || !(sampling.u_min > 0.0 && sampling.u_max >= sampling.u_min)) {
    throw std::invalid_argument("kernel_holder_constant: empty sampling");
  }
  HolderSampling fine = sampling;
  fine.n_u = 2 * sampling.n_u - 1;
  fine.n_gap = 2 * sampling.n_gap - 1;
  fine.n_x = 2 * sampling.n_x - 1;

  KernelHolderCheck out;
  out.kind = kind;
  out.derivative_order = derivative_order;
  out.theta = theta;
  std::size_t fine_samples = 0;
  out.constant = holder_sup(pk, kind, derivative_order, theta, sampling, workers, out.samples);
  out.refined_constant = holder_sup(pk, kind, derivative_order, theta, fine, workers, fine_samples);
  out.refinement_change = relative_change(out.constant, out.refined_constant);
  return out;
}

SmoothingCheck drift_smoothing_constant(const ProxyKernel& pk, double beta, std::span<const double> times,
                                        double x_max, std::size_t n_points, unsigned workers) {
  require_dim1(pk, "drift_smoothing_constant");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("drift_smoothing_constant: beta must lie in (0, 1)");
  if (times.empty() || n_points < 2) throw std::invalid_argument("drift_smoothing_constant: empty sampling");
  SmoothingCheck out;
  out.beta = beta;
  out.constant = smoothing_sup(pk, beta, times, x_max, n_points, workers);
  out.refined_constant = smoothing_sup(pk, beta, times, x_max, 2 * n_points - 1, workers);
  out.refinement_change = relative_change(out.constant, out.refined_constant);
  out.samples = times.size() * n_points;
  return out;
}

}  // namespace stable_euler
