#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "stable_euler/grid.hpp"
#include "stable_euler/spectral.hpp"
#include "stable_euler/stable_spec.hpp"

namespace stable_euler::detail {

using cplx = std::complex<double>;

// A Grid1D together with its FFT, wavenumbers and symbol psi(k_j). Spectra are
// raw DFT coefficients V_j of the node values; the continuous transform is
// dx exp(-i k_j x_min) V_j, so translations, derivatives and semigroups act by
// the usual multipliers.
class SpectralGrid {
 public:
  SpectralGrid(const Grid1D& grid, const StableSpec& spec)
      : n_(grid.n_x()), dx_(grid.dx()), x_min_(grid.x_min()), fft_(grid.n_x()), k_(wavenumbers(grid.n_x(), grid.dx())) {
    psi_.resize(k_.size());
    for (std::size_t j = 0; j < k_.size(); ++j) psi_[j] = spec.psi(k_[j]);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t nk() const noexcept { return k_.size(); }
  double dx() const noexcept { return dx_; }
  double x_min() const noexcept { return x_min_; }
  const std::vector<double>& k() const noexcept { return k_; }
  const std::vector<double>& psi() const noexcept { return psi_; }

  void forward(std::span<const double> v, std::span<cplx> out) { fft_.forward(v, out); }
  void inverse(std::span<const cplx> in, std::span<double> v) { fft_.inverse(in, v); }

  // out += weight * spectrum of exp(-tau psi) applied to a unit point mass at a.
  void add_point_mass(double a, double tau, double weight, std::span<cplx> out) const {
    const double offset = a - x_min_;
    for (std::size_t j = 0; j < k_.size(); ++j) {
      const double decay = std::exp(-tau * psi_[j]);
      if (decay == 0.0) continue;
      const double phase = -k_[j] * offset;
      out[j] += (weight * decay / dx_) * cplx(std::cos(phase), std::sin(phase));
    }
  }

  void propagate(std::span<cplx> spec, double tau) const {
    for (std::size_t j = 0; j < k_.size(); ++j) spec[j] *= std::exp(-tau * psi_[j]);
  }

 private:
  std::size_t n_;
  double dx_;
  double x_min_;
  RealFft fft_;
  std::vector<double> k_;
  std::vector<double> psi_;
};

// Six-point Lagrange weights for nodes at offsets -2..3 evaluated at f in [0, 1).
inline void lagrange6(double f, double w[6]) {
  const double a = f + 2.0;
  const double b = f + 1.0;
  const double c = f;
  const double d = f - 1.0;
  const double e = f - 2.0;
  const double g = f - 3.0;
  w[0] = b * c * d * e * g / -120.0;
  w[1] = a * c * d * e * g / 24.0;
  w[2] = a * b * d * e * g / -12.0;
  w[3] = a * b * c * e * g / 12.0;
  w[4] = a * b * c * d * g / -24.0;
  w[5] = a * b * c * d * e / 120.0;
}

// out[j + shift_j / dx] += weight * v[j] for all j, distributed over six
// periodic neighbours with Lagrange weights. Conserves sum(v) * weight.
template <class Shift>
void deposit(std::span<const double> v, double dx, double weight, Shift&& shift, std::span<double> out) {
  const std::size_t n = v.size();
  const auto ni = static_cast<long long>(n);
  double w[6];
  for (std::size_t j = 0; j < n; ++j) {
    const double m = v[j] * weight;
    if (m == 0.0) continue;
    const double pos = static_cast<double>(j) + shift(j) / dx;
    const double base = std::floor(pos);
    lagrange6(pos - base, w);
    long long idx = static_cast<long long>(base) - 2;
    idx %= ni;
    if (idx < 0) idx += ni;
    for (int q = 0; q < 6; ++q) {
      out[static_cast<std::size_t>(idx)] += m * w[q];
      if (++idx == ni) idx = 0;
    }
  }
}

}  // namespace stable_euler::detail
