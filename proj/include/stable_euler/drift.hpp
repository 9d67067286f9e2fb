#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stable_euler/random.hpp"

namespace stable_euler {

// Componentwise space shapes, each bounded by 1 in absolute value.
enum class SpaceProfile {
  zero,          // 0
  constant,      // 1
  capped_power,  // sign(x) min(|x|, 1)^beta
  abs_sin,       // |sin x|^beta
};

enum class TimeKind {
  constant,      // 1
  oscillating,   // cos(frequency t)
  square_wave,   // +1 where cos(2 pi t / period) >= 0, else -1
};

struct TimeProfile {
  TimeKind kind = TimeKind::constant;
  double frequency = 0.0;
  double period = 0.0;        // absolute period, or
  double period_steps = 0.0;  // period in units of the scheme step, resolved by DriftSpec::with_step

  static TimeProfile constant() { return {}; }
  static TimeProfile oscillating(double frequency) { return {TimeKind::oscillating, frequency, 0.0, 0.0}; }
  static TimeProfile square_wave(double period) { return {TimeKind::square_wave, 0.0, period, 0.0}; }
  static TimeProfile square_wave_in_steps(double steps) { return {TimeKind::square_wave, 0.0, 0.0, steps}; }
};

std::string_view to_string(SpaceProfile p);
std::string_view to_string(TimeKind k);
std::optional<SpaceProfile> parse_space_profile(std::string_view name);
std::optional<TimeKind> parse_time_kind(std::string_view name);

// Bounded, space-Holder drift b(t, x) = amplitude * tau(t) * (sigma(x_1), ..., sigma(x_d)).
//
// Declared metadata (Euclidean norms, dimension d):
//   sup_norm         amplitude sqrt(d)                       (0 for the zero profile)
//   holder_seminorm  capped_power: amplitude 2^{1-beta} d^{(1-beta)/2}
//                    abs_sin     : amplitude d^{(1-beta)/2}
//                    zero/constant: 0
// The factor 2^{1-beta} for capped_power is attained by symmetric pairs x = -y
// around the origin.
class DriftSpec {
 public:
  DriftSpec(double beta, double amplitude, SpaceProfile space, TimeProfile time, int dim);

  double beta() const noexcept { return beta_; }
  double amplitude() const noexcept { return amplitude_; }
  int dim() const noexcept { return dim_; }
  SpaceProfile space_profile() const noexcept { return space_; }
  const TimeProfile& time_profile() const noexcept { return time_; }
  double sup_norm() const noexcept { return sup_norm_; }
  double holder_seminorm() const noexcept { return seminorm_; }

  bool time_homogeneous() const noexcept { return time_.kind == TimeKind::constant || space_ == SpaceProfile::zero; }
  bool is_zero() const noexcept { return space_ == SpaceProfile::zero; }
  bool resolved() const noexcept { return !(time_.kind == TimeKind::square_wave && time_.period <= 0.0); }

  // Square-wave periods given in steps become absolute for step h. Other
  // profiles are returned unchanged.
  DriftSpec with_step(double h) const;

  double time_factor(double t) const;
  double space_factor(double x) const;

  // d = 1 fast path.
  double operator()(double t, double x) const { return amplitude_ * time_factor(t) * space_factor(x); }
  void evaluate(double t, std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(double t, std::span<const double> x) const;

  // Discontinuities of the time profile strictly inside (a, b), ascending.
  std::vector<double> time_breakpoints(double a, double b) const;

  std::string describe() const;

 private:
  double beta_;
  double amplitude_;
  SpaceProfile space_;
  TimeProfile time_;
  int dim_;
  double sup_norm_ = 0.0;
  double seminorm_ = 0.0;
};

DriftSpec make_holder_drift(double beta, double amplitude, SpaceProfile space, TimeProfile time, int dim = 1);

struct CertificationReport {
  double max_ratio_beta = 0.0;  // max |b(t,x) - b(t,y)| / |x - y|^beta
  double max_abs = 0.0;         // max |b(t,x)|
  std::size_t pairs = 0;
};

// Dense sampling of pairs (x, y) at log-spaced separations in [1e-6, 10] and
// random times in [0, horizon]. Throws CertificationFailure if the sampled
// maxima exceed the declared metadata by more than 1e-9.
CertificationReport certify(const DriftSpec& drift, std::size_t n_pairs, Rng& rng, double horizon = 1.0);

struct CatalogEntry {
  std::string_view name;
  std::string_view formula;
};
std::vector<CatalogEntry> drift_catalog();

}  // namespace stable_euler
