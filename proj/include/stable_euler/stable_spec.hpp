#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stable_euler {

// Isotropic symmetric alpha-stable noise in dimension `dim`.
//
// Characteristic exponent convention (fixed for the whole library):
//   psi(lambda) = |lambda|^alpha      for alpha in (1, 2)
//   psi(lambda) = |lambda|^2 / 2      for alpha == 2 (generator 1/2 Laplacian)
// so that E exp(i lambda . Z_t) = exp(-t psi(lambda)). Every fitted constant in
// the kernel checks depends on this normalisation; exponents do not.
class StableSpec {
 public:
  StableSpec(double alpha, int dim) : alpha_(alpha), dim_(dim) {
    if (!(alpha > 1.0 && alpha <= 2.0)) {
      throw std::invalid_argument("StableSpec: alpha must lie in (1, 2], got " + std::to_string(alpha));
    }
    if (dim < 1) throw std::invalid_argument("StableSpec: dim must be >= 1");
  }

  double alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  bool gaussian() const noexcept { return alpha_ == 2.0; }

  // psi(|lambda|)
  double psi(double lambda_abs) const noexcept {
    return gaussian() ? 0.5 * lambda_abs * lambda_abs : std::pow(lambda_abs, alpha_);
  }

  // Spatial scale of Z_t: t^{1/alpha}.
  double scale(double t) const noexcept { return std::pow(t, 1.0 / alpha_); }

  friend bool operator==(const StableSpec&, const StableSpec&) = default;

 private:
  double alpha_;
  int dim_;
};

// gamma = alpha + beta - 1, the exponent governing the weak error rate gamma/alpha.
inline double gap_to_singularity(double alpha, double beta) { return alpha + beta - 1.0; }

}  // namespace stable_euler
