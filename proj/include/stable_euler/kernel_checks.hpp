#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stable_euler/proxy_kernel.hpp"
#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Numerical constant fitting for the two-sided and derivative bounds of the
// free kernel p_alpha against the proxy pbar, in dimension 1. Every check is
// run at a base sampling resolution and again with each sample count doubled;
// `refinement_change` is |C_fine / C_base - 1|.

struct SandwichCheck {
  double constant = 0.0;   // max(max_ratio, 1 / min_ratio)
  double min_ratio = 0.0;  // min p / pbar
  double max_ratio = 0.0;  // max p / pbar
  double refined_constant = 0.0;
  double refinement_change = 0.0;
  std::size_t points = 0;
};

// Ratio p(t, x) / pbar(t, x) over t in `times` and n_points equispaced x in
// [-x_max, x_max] (then 2 n_points - 1 for the refinement).
SandwichCheck aronson_sandwich(const ProxyKernel& pk, std::span<const double> times, double x_max,
                               std::size_t n_points = 201, unsigned workers = 1);

enum class KernelHolderKind { time, space };

struct KernelHolderCheck {
  KernelHolderKind kind = KernelHolderKind::time;
  int derivative_order = 0;  // |zeta|
  double theta = 1.0;
  double constant = 0.0;
  double refined_constant = 0.0;
  double refinement_change = 0.0;
  std::size_t samples = 0;
};

// Smallest C with
//   time : |D p(u, x) - D p(u', x)| <= C |u - u'|^theta u^{-theta - |zeta|/alpha} (pbar(u, x) + pbar(u', x))
//   space: |D p(u, x) - D p(u, x')| <= C (|x - x'|^theta u^{-theta/alpha} ^ 1) u^{-|zeta|/alpha} (pbar(u, x) + pbar(u, x'))
// with D the identity (|zeta| = 0) or the gradient (|zeta| = 1), over
// u log-spaced in [u_min, u_max], relative gaps (u' - u)/u or |x - x'| / u^{1/alpha}
// log-spaced in [1e-2, 1], and x equispaced in [-x_max, x_max].
struct HolderSampling {
  double u_min = 0.25;
  double u_max = 4.0;
  double x_max = 10.0;
  std::size_t n_u = 5;
  std::size_t n_gap = 6;
  std::size_t n_x = 41;
};
KernelHolderCheck kernel_holder_constant(const ProxyKernel& pk, KernelHolderKind kind, int derivative_order,
                                         double theta = 1.0, const HolderSampling& sampling = {},
                                         unsigned workers = 1);

struct SmoothingCheck {
  double beta = 0.0;
  double constant = 0.0;
  double refined_constant = 0.0;
  double refinement_change = 0.0;
  std::size_t samples = 0;
};

// sup of |z|^beta |grad p(v, z)| v^{(1 - beta)/alpha} / pbar(v, z) over v in
// `times` and n_points equispaced z in [-x_max, x_max].
SmoothingCheck drift_smoothing_constant(const ProxyKernel& pk, double beta, std::span<const double> times,
                                        double x_max = 10.0, std::size_t n_points = 201, unsigned workers = 1);

}  // namespace stable_euler
