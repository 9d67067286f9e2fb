#include "stable_euler/proxy_kernel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "stable_euler/errors.hpp"
#include "stable_euler/statistics.hpp"

namespace stable_euler {
namespace {

using std::numbers::pi;

double sphere_area(int dim) { return 2.0 * std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim); }

}  // namespace

double proxy_normalizer(double alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("proxy_normalizer: dim must be >= 1");
  return 1.0 / (sphere_area(dim) * boost::math::beta(static_cast<double>(dim), alpha));
}

ProxyKernel::ProxyKernel(StableSpec spec, double gauss_inflation)
    : spec_(spec), c_alpha_(spec.gaussian() ? 0.0 : proxy_normalizer(spec.alpha(), spec.dim())), c_gauss_(gauss_inflation) {
  if (!(gauss_inflation >= 1.0)) throw std::invalid_argument("ProxyKernel: Gaussian inflation must be >= 1");
}

double ProxyKernel::radial(double v, double r) const {
  if (!(v > 0.0)) throw std::invalid_argument("ProxyKernel: v must be positive");
  const double d = spec_.dim();
  if (spec_.gaussian()) {
    return std::pow(2.0 * pi * c_gauss_ * v, -0.5 * d) * std::exp(-r * r / (2.0 * c_gauss_ * v));
  }
  const double s = spec_.scale(v);
  return c_alpha_ * std::pow(s, -d) * std::pow(1.0 + r / s, -(d + spec_.alpha()));
}

double ProxyKernel::operator()(double v, std::span<const double> z) const {
  if (z.size() != static_cast<std::size_t>(spec_.dim())) throw std::invalid_argument("ProxyKernel: z must have size dim");
  double r2 = 0.0;
  for (double c : z) r2 += c * c;
  return radial(v, std::sqrt(r2));
}

ConvolutionCheck check_convolution(const ProxyKernel& pk, double u, double v, std::size_t n_offsets, double radius) {
  if (pk.spec().dim() != 1) throw std::invalid_argument("check_convolution: implemented for dim 1");
  if (!(u > 0.0 && v > 0.0)) throw std::invalid_argument("check_convolution: u and v must be positive");
  if (n_offsets < 2) throw std::invalid_argument("check_convolution: need at least two offsets");
  const double scale = pk.spec().scale(u + v);
  if (radius <= 0.0) radius = 10.0 * scale;

  boost::math::quadrature::exp_sinh<double> half_line;
  boost::math::quadrature::tanh_sinh<double> segment;
  ConvolutionCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.offsets = n_offsets;
  // The ratio is even in w, so offsets in [0, radius] suffice.
  for (std::size_t i = 0; i < n_offsets; ++i) {
    const double w = radius * static_cast<double>(i) / static_cast<double>(n_offsets - 1);
    auto integrand = [&](double z) { return pk.radial(u, std::abs(z)) * pk.radial(v, std::abs(w - z)); };
    double err_left = 0.0;
    double err_mid = 0.0;
    double err_right = 0.0;
    const double left = half_line.integrate([&](double s) { return integrand(-s); }, 1e-14, &err_left);
    const double right = half_line.integrate([&](double s) { return integrand(w + s); }, 1e-14, &err_right);
    const double mid = w > 0.0 ? segment.integrate(integrand, 0.0, w, 1e-14, &err_mid) : 0.0;
    const double conv = left + mid + right;
    const double err = err_left + err_mid + err_right;
    if (!std::isfinite(conv) || !(err <= 1e-9 * conv)) {
      throw QuadratureFailure("check_convolution: quadrature did not converge");
    }
    const double ratio = conv / pk.radial(u + v, w);
    if (ratio > out.constant) {
      out.constant = ratio;
      out.argmax_offset = w;
    }
    out.min_ratio = std::min(out.min_ratio, ratio);
  }
  return out;
}

MomentCheck check_moments(const ProxyKernel& pk, double delta, std::span<const double> v_list) {
  const double alpha = pk.spec().alpha();
  if (!(delta >= 0.0)) throw std::invalid_argument("check_moments: delta must be >= 0");
  if (!pk.spec().gaussian() && !(delta < alpha)) {
    throw std::invalid_argument("check_moments: moment of order delta >= alpha diverges for alpha < 2");
  }
  if (v_list.size() < 4) throw std::invalid_argument("check_moments: need at least 4 values of v");

  const int d = pk.spec().dim();
  const double area = 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> half_line;

  MomentCheck out;
  for (double v : v_list) {
    if (!(v > 0.0)) throw std::invalid_argument("check_moments: v must be positive");
    const double split = pk.spec().scale(v);
    auto f = [&](double r) { return area * std::pow(r, d - 1.0 + delta) * pk.radial(v, r); };
    const double m = finite.integrate(f, 0.0, split) + half_line.integrate([&](double s) { return f(split + s); });
    out.v_values.push_back(v);
    out.moments.push_back(m);
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < out.moments.size(); ++i) {
    lx.push_back(std::log(out.v_values[i]));
    ly.push_back(std::log(out.moments[i]));
  }
  out.slope = fit_line(lx, ly).slope;
  return out;
}

}  // namespace stable_euler
