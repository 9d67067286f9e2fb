#include "stable_euler/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stable_euler {

double sample_symmetric_stable(double alpha, Rng& rng) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("sample_symmetric_stable: alpha must lie in (1, 2); use Gaussian sampling at alpha = 2");
  }
  const double v = std::numbers::pi * (uniform01(rng) - 0.5);
  const double w = exponential1(rng);
  const double cos_v = std::cos(v);
  return std::sin(alpha * v) / std::pow(cos_v, 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_positive_stable(double index, Rng& rng) {
  if (!(index > 0.0 && index < 1.0)) {
    throw std::invalid_argument("sample_positive_stable: index must lie in (0, 1)");
  }
  const double u = std::numbers::pi * uniform01(rng);
  const double w = exponential1(rng);
  const double a = index;
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
}

void sample_isotropic_increment(const StableSpec& spec, double dt, Rng& rng, std::span<double> out) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_isotropic_increment: dt must be positive");
  if (out.size() != static_cast<std::size_t>(spec.dim())) {
    throw std::invalid_argument("sample_isotropic_increment: output size must equal dim");
  }
  if (spec.gaussian()) {
    const double sd = std::sqrt(dt);
    for (double& x : out) x = sd * std_normal(rng);
    return;
  }
  const double scale = spec.scale(dt);
  if (spec.dim() == 1) {
    out[0] = scale * sample_symmetric_stable(spec.alpha(), rng);
    return;
  }
  const double sub = sample_positive_stable(0.5 * spec.alpha(), rng);
  const double radial = scale * kSubordinatorScale * std::sqrt(sub);
  for (double& x : out) x = radial * std_normal(rng);
}

std::vector<double> sample_isotropic_increment(const StableSpec& spec, double dt, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(spec.dim()));
  sample_isotropic_increment(spec, dt, rng, out);
  return out;
}

}  // namespace stable_euler
