#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stable_euler {

// Real-to-half-complex FFT of fixed length backed by FFTW. Owns its plans and
// aligned work buffers; not safe to share between threads.
//
// Conventions for samples v_i, i = 0..n-1:
//   forward : V_j = sum_i v_i exp(-2 pi i ij / n),  j = 0..n/2
//   inverse : v_i = (1/n) sum_j V_j exp(+2 pi i ij / n)   (normalised)
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  double* real_ = nullptr;
  void* complex_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

// Angular wavenumbers k_j = 2 pi j / (n dx), j = 0..n/2.
std::vector<double> wavenumbers(std::size_t n, double dx);

}  // namespace stable_euler
