#pragma once

#include <span>
#include <vector>

#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Default variance inflation of the Gaussian proxy (alpha == 2).
inline constexpr double kGaussianInflation = 2.0;

// C_alpha = 1 / (|S^{d-1}| B(d, alpha)) making (1 + |z|)^{-(d+alpha)} a density.
double proxy_normalizer(double alpha, int dim);

// The proxy density used as the weight in every error and regularity bound:
//   alpha < 2 : C_alpha v^{-d/alpha} (1 + |z| v^{-1/alpha})^{-(d+alpha)}
//   alpha = 2 : (2 pi c v)^{-d/2} exp(-|z|^2 / (2 c v))
// Immutable once built; safe to share between threads.
class ProxyKernel {
 public:
  explicit ProxyKernel(StableSpec spec, double gauss_inflation = kGaussianInflation);

  const StableSpec& spec() const noexcept { return spec_; }
  double c_alpha() const noexcept { return c_alpha_; }
  double c_gauss() const noexcept { return c_gauss_; }

  double operator()(double v, std::span<const double> z) const;
  double radial(double v, double r) const;

 private:
  StableSpec spec_;
  double c_alpha_;
  double c_gauss_;
};

// d = 1. Sup over the offsets w = y - x in [-radius, radius] (n_offsets
// equispaced values, radius = 10 (u+v)^{1/alpha} by default) of
//   int pbar(u, z - x) pbar(v, y - z) dz / pbar(u + v, y - x).
struct ConvolutionCheck {
  double constant = 0.0;      // fitted sup ratio
  double argmax_offset = 0.0;
  double min_ratio = 0.0;
  std::size_t offsets = 0;
};
ConvolutionCheck check_convolution(const ProxyKernel& pk, double u, double v, std::size_t n_offsets,
                                   double radius = 0.0);

// Moments m(v) = int |z|^delta pbar(v, z) dz by quadrature at each v, and the
// least-squares slope of log m against log v.
struct MomentCheck {
  double slope = 0.0;
  std::vector<double> v_values;
  std::vector<double> moments;
};
MomentCheck check_moments(const ProxyKernel& pk, double delta, std::span<const double> v_list);

}  // namespace stable_euler
