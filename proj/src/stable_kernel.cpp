#include "stable_euler/stable_kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stable_euler/errors.hpp"

namespace stable_euler {
namespace {

using std::numbers::pi;

enum class Moment { value, radial, time };

constexpr double kCutoffExponent = 50.0;  // Lambda^alpha

double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

// d/du sinc(u)
double sinc_prime(double u) {
  if (std::abs(u) < 1e-3) {
    const double u2 = u * u;
    return -u / 3.0 + u * u2 / 30.0 - u * u2 * u2 / 840.0;
  }
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}

struct Integrand {
  double alpha;
  int dim;
  double r;
  Moment moment;

  double operator()(double lambda) const {
    const double la = std::pow(lambda, alpha);
    const double e = std::exp(-la);
    const double u = lambda * r;
    switch (dim) {
      case 1:
        switch (moment) {
          case Moment::value: return std::cos(u) * e;
          case Moment::radial: return -lambda * std::sin(u) * e;
          case Moment::time: return -la * std::cos(u) * e;
        }
        break;
      case 2:
        switch (moment) {
          case Moment::value: return std::cyl_bessel_j(0.0, u) * lambda * e;
          case Moment::radial: return -std::cyl_bessel_j(1.0, u) * lambda * lambda * e;
          case Moment::time: return -std::cyl_bessel_j(0.0, u) * lambda * la * e;
        }
        break;
      case 3:
        switch (moment) {
          case Moment::value: return lambda * lambda * sinc(u) * e;
          case Moment::radial: return lambda * lambda * lambda * sinc_prime(u) * e;
          case Moment::time: return -lambda * lambda * la * sinc(u) * e;
        }
        break;
      default: break;
    }
    return 0.0;
  }
};

double prefactor(int dim) {
  switch (dim) {
    case 1: return 1.0 / pi;
    case 2: return 1.0 / (2.0 * pi);
    case 3: return 1.0 / (2.0 * pi * pi);
    default: return 0.0;
  }
}

// Highest power of lambda multiplying exp(-lambda^alpha) in the integrand.
double polynomial_degree(int dim, Moment m, double alpha) {
  const double base = dim - 1.0;
  switch (m) {
    case Moment::value: return base;
    case Moment::radial: return base + 1.0;
    case Moment::time: return base + alpha;
  }
  return base;
}

double invert(double alpha, int dim, double r, Moment moment) {
  const Integrand f{alpha, dim, r, moment};
  const double cutoff = std::pow(kCutoffExponent, 1.0 / alpha);
  const double panel = r > 0.0 ? std::min(1.0, pi / r) : 1.0;
  const auto panels = static_cast<std::size_t>(std::ceil(cutoff / panel));
  const double width = cutoff / static_cast<double>(panels);

  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = width * static_cast<double>(i);
    const double b = i + 1 == panels ? cutoff : a + width;
    double panel_error = 0.0;
    double l1 = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-13, &panel_error, &l1);
    error += panel_error;
  }
  // int_Lambda^inf lambda^m exp(-lambda^alpha) <= Lambda^{m+1-alpha} exp(-Lambda^alpha) / (alpha - (m+1-alpha) Lambda^-alpha)
  const double m = polynomial_degree(dim, moment, alpha);
  const double tail = std::pow(cutoff, m + 1.0 - alpha) * std::exp(-kCutoffExponent) /
                      (alpha - std::max(0.0, m + 1.0 - alpha) / kCutoffExponent);
  error += tail;
  const double scale = prefactor(dim);
  if (!(error * scale <= kInversionTolerance) || !std::isfinite(total)) {
    throw QuadratureFailure("stable density inversion failed at r = " + std::to_string(r) +
                            " (error estimate " + std::to_string(error * scale) + ")");
  }
  return scale * total;
}

// Large-r asymptotic expansion of the d = 1 unit density,
//   p(1, r) ~ (1/pi) sum_k (-1)^{k+1} Gamma(alpha k + 1) / k! sin(k pi alpha / 2) r^{-alpha k - 1},
// summed up to its smallest term. Returns false when that term is not negligible.
bool tail_series(double alpha, double r, double& value, double& radial) {
  constexpr double kMinRadius = 8.0;
  if (r < kMinRadius) return false;
  const double log_r = std::log(r);
  value = 0.0;
  radial = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double power = alpha * k + 1.0;
    const double magnitude = std::exp(std::lgamma(power) - std::lgamma(k + 1.0) - power * log_r);
    if (magnitude > previous) break;
    const double c = (k % 2 == 1 ? 1.0 : -1.0) * std::sin(0.5 * k * pi * alpha) / pi;
    value += c * magnitude;
    radial -= c * magnitude * power / r;
    previous = magnitude;
    if (magnitude < 1e-18 * std::abs(value)) break;
  }
  return previous <= 1e-13 * std::abs(value);
}

void check_dim(const StableSpec& spec) {
  if (!spec.gaussian() && spec.dim() > 3) {
    throw std::invalid_argument("stable density: alpha < 2 is only implemented for dim 1, 2, 3");
  }
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_args(const StableSpec& spec, double t, std::size_t n) {
  if (!(t > 0.0)) throw std::invalid_argument("stable density: t must be positive");
  if (n != static_cast<std::size_t>(spec.dim())) throw std::invalid_argument("stable density: x must have size dim");
  check_dim(spec);
}

}  // namespace

RadialProfile unit_radial_profile(const StableSpec& spec, double r, bool with_derivatives) {
  check_dim(spec);
  RadialProfile out;
  const int d = spec.dim();
  if (spec.gaussian()) {
    const double g = std::pow(2.0 * pi, -0.5 * d) * std::exp(-0.5 * r * r);
    out.value = g;
    out.radial_derivative = -r * g;
    out.time_derivative = 0.5 * (r * r - d) * g;
    return out;
  }
  if (d == 1 && tail_series(spec.alpha(), r, out.value, out.radial_derivative)) {
    // p(t, x) = t^{-1/alpha} p(1, x t^{-1/alpha}) gives d/dt at t = 1.
    out.time_derivative = -(out.value + r * out.radial_derivative) / spec.alpha();
    if (!with_derivatives) out.radial_derivative = out.time_derivative = 0.0;
    return out;
  }
  out.value = invert(spec.alpha(), d, r, Moment::value);
  if (with_derivatives) {
    out.radial_derivative = r == 0.0 ? 0.0 : invert(spec.alpha(), d, r, Moment::radial);
    out.time_derivative = invert(spec.alpha(), d, r, Moment::time);
  }
  return out;
}

double density(const StableSpec& spec, double t, std::span<const double> x) {
  check_args(spec, t, x.size());
  const double s = spec.scale(t);
  const double rho = norm(x) / s;
  return std::pow(s, -spec.dim()) * unit_radial_profile(spec, rho, false).value;
}

double density(const StableSpec& spec, double t, double x) { return density(spec, t, std::span<const double>(&x, 1)); }

void grad_density(const StableSpec& spec, double t, std::span<const double> x, std::span<double> out) {
  check_args(spec, t, x.size());
  if (out.size() != x.size()) throw std::invalid_argument("grad_density: output size must equal dim");
  const double r = norm(x);
  if (r == 0.0) {
    for (double& v : out) v = 0.0;
    return;
  }
  const double s = spec.scale(t);
  const double rho = r / s;
  const double dr = spec.gaussian() ? -rho * unit_radial_profile(spec, rho, false).value
                                    : invert(spec.alpha(), spec.dim(), rho, Moment::radial);
  const double factor = std::pow(s, -(spec.dim() + 1)) * dr / r;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = factor * x[i];
}

std::vector<double> grad_density(const StableSpec& spec, double t, std::span<const double> x) {
  std::vector<double> out(x.size());
  grad_density(spec, t, x, out);
  return out;
}

double grad_density(const StableSpec& spec, double t, double x) {
  double out = 0.0;
  grad_density(spec, t, std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

double time_deriv_density(const StableSpec& spec, double t, std::span<const double> x) {
  check_args(spec, t, x.size());
  const double s = spec.scale(t);
  const double rho = norm(x) / s;
  const double dt = spec.gaussian() ? unit_radial_profile(spec, rho, true).time_derivative
                                    : invert(spec.alpha(), spec.dim(), rho, Moment::time);
  return std::pow(s, -spec.dim()) / t * dt;
}

double time_deriv_density(const StableSpec& spec, double t, double x) {
  return time_deriv_density(spec, t, std::span<const double>(&x, 1));
}

double stable_tail_constant(double alpha) { return std::tgamma(1.0 + alpha) * std::sin(0.5 * pi * alpha) / pi; }

double stable_tail_mass(double alpha, double x) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw std::invalid_argument("stable_tail_mass: alpha must lie in (1, 2)");
  if (!(x > 0.0)) throw std::invalid_argument("stable_tail_mass: x must be positive");
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 3; ++k) {
    const double ka = k * alpha;
    sum += sign * std::tgamma(ka + 1.0) / std::tgamma(k + 1.0) * std::sin(0.5 * k * pi * alpha) * std::pow(x, -ka) / ka;
    sign = -sign;
  }
  return 2.0 * sum / pi;
}

}  // namespace stable_euler
