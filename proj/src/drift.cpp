#include "stable_euler/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stable_euler/errors.hpp"

namespace stable_euler {

std::string_view to_string(SpaceProfile p) {
  switch (p) {
    case SpaceProfile::zero: return "zero";
    case SpaceProfile::constant: return "constant";
    case SpaceProfile::capped_power: return "capped_power";
    case SpaceProfile::abs_sin: return "abs_sin";
  }
  return "unknown";
}

std::string_view to_string(TimeKind k) {
  switch (k) {
    case TimeKind::constant: return "constant";
    case TimeKind::oscillating: return "oscillating";
    case TimeKind::square_wave: return "square_wave";
  }
  return "unknown";
}

std::optional<SpaceProfile> parse_space_profile(std::string_view name) {
  for (auto p : {SpaceProfile::zero, SpaceProfile::constant, SpaceProfile::capped_power, SpaceProfile::abs_sin}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<TimeKind> parse_time_kind(std::string_view name) {
  for (auto k : {TimeKind::constant, TimeKind::oscillating, TimeKind::square_wave}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

DriftSpec::DriftSpec(double beta, double amplitude, SpaceProfile space, TimeProfile time, int dim)
    : beta_(beta), amplitude_(amplitude), space_(space), time_(time), dim_(dim) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("DriftSpec: beta must lie in (0, 1)");
  if (!(amplitude > 0.0)) throw std::invalid_argument("DriftSpec: amplitude must be positive");
  if (dim < 1) throw std::invalid_argument("DriftSpec: dim must be >= 1");
  if (time.kind == TimeKind::oscillating && !(time.frequency > 0.0)) {
    throw std::invalid_argument("DriftSpec: oscillating profile needs a positive frequency");
  }
  if (time.kind == TimeKind::square_wave && !(time.period > 0.0) && !(time.period_steps > 0.0)) {
    throw std::invalid_argument("DriftSpec: square wave needs a positive period");
  }
  const double d = dim;
  const double spread = std::pow(d, 0.5 * (1.0 - beta));
  switch (space) {
    case SpaceProfile::zero:
      break;
    case SpaceProfile::constant:
      sup_norm_ = amplitude * std::sqrt(d);
      break;
    case SpaceProfile::capped_power:
      sup_norm_ = amplitude * std::sqrt(d);
      seminorm_ = amplitude * std::pow(2.0, 1.0 - beta) * spread;
      break;
    case SpaceProfile::abs_sin:
      sup_norm_ = amplitude * std::sqrt(d);
      seminorm_ = amplitude * spread;
      break;
  }
}

DriftSpec DriftSpec::with_step(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("DriftSpec::with_step: h must be positive");
  if (time_.kind != TimeKind::square_wave || time_.period_steps <= 0.0) return *this;
  DriftSpec out = *this;
  out.time_.period = time_.period_steps * h;
  return out;
}

double DriftSpec::time_factor(double t) const {
  switch (time_.kind) {
    case TimeKind::constant: return 1.0;
    case TimeKind::oscillating: return std::cos(time_.frequency * t);
    case TimeKind::square_wave: {
      if (!(time_.period > 0.0)) {
        throw std::logic_error("DriftSpec: square-wave period given in steps; call with_step(h) first");
      }
      const double phase = t / time_.period - std::floor(t / time_.period);
      return (phase < 0.25 || phase >= 0.75) ? 1.0 : -1.0;
    }
  }
  return 1.0;
}

double DriftSpec::space_factor(double x) const {
  switch (space_) {
    case SpaceProfile::zero: return 0.0;
    case SpaceProfile::constant: return 1.0;
    case SpaceProfile::capped_power: {
      const double a = std::abs(x);
      const double v = a >= 1.0 ? 1.0 : std::pow(a, beta_);
      return x < 0.0 ? -v : (x > 0.0 ? v : 0.0);
    }
    case SpaceProfile::abs_sin: return std::pow(std::abs(std::sin(x)), beta_);
  }
  return 0.0;
}

void DriftSpec::evaluate(double t, std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(dim_) || out.size() != x.size()) {
    throw std::invalid_argument("DriftSpec::evaluate: x and out must have size dim");
  }
  const double a = amplitude_ * time_factor(t);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * space_factor(x[i]);
}

std::vector<double> DriftSpec::evaluate(double t, std::span<const double> x) const {
  std::vector<double> out(x.size());
  evaluate(t, x, out);
  return out;
}

std::vector<double> DriftSpec::time_breakpoints(double a, double b) const {
  std::vector<double> out;
  if (time_.kind != TimeKind::square_wave || is_zero() || !(b > a)) return out;
  if (!(time_.period > 0.0)) throw std::logic_error("DriftSpec: square-wave period unresolved");
  const double p = time_.period;
  const double first = std::floor(a / p) - 1.0;
  for (double j = first;; j += 1.0) {
    const double c1 = p * (j + 0.25);
    const double c2 = p * (j + 0.75);
    if (c1 >= b) break;
    if (c1 > a) out.push_back(c1);
    if (c2 > a && c2 < b) out.push_back(c2);
  }
  return out;
}

std::string DriftSpec::describe() const {
  std::ostringstream os;
  os << to_string(space_) << "(beta=" << beta_ << ", amplitude=" << amplitude_ << ", dim=" << dim_ << ")";
  os << " x " << to_string(time_.kind);
  if (time_.kind == TimeKind::oscillating) os << "(frequency=" << time_.frequency << ")";
  if (time_.kind == TimeKind::square_wave) {
    if (time_.period > 0.0) os << "(period=" << time_.period << ")";
    else os << "(period_steps=" << time_.period_steps << ")";
  }
  return os.str();
}

DriftSpec make_holder_drift(double beta, double amplitude, SpaceProfile space, TimeProfile time, int dim) {
  return DriftSpec(beta, amplitude, space, time, dim);
}

CertificationReport certify(const DriftSpec& drift, std::size_t n_pairs, Rng& rng, double horizon) {
  if (n_pairs < 1000) throw std::invalid_argument("certify: need at least 1000 pairs");
  const DriftSpec b = drift.resolved() ? drift : drift.with_step(horizon / 64.0);
  const auto d = static_cast<std::size_t>(b.dim());
  std::vector<double> x(d);
  std::vector<double> y(d);
  std::vector<double> bx(d);
  std::vector<double> by(d);
  CertificationReport rep;
  rep.pairs = n_pairs;
  const double log_lo = std::log(1e-6);
  const double log_hi = std::log(10.0);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const double t = horizon * uniform01(rng);
    const double gap = std::exp(log_lo + (log_hi - log_lo) * uniform01(rng));
    // Direction on the sphere, base point in [-2 pi, 2 pi]^d.
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      y[i] = std_normal(rng);
      norm += y[i] * y[i];
    }
    norm = std::sqrt(norm);
    const bool symmetric = k % 4 == 0;  // pairs straddling the origin
    for (std::size_t i = 0; i < d; ++i) {
      const double dir = y[i] / norm;
      if (symmetric) {
        x[i] = -0.5 * gap * dir;
      } else {
        x[i] = 4.0 * std::numbers::pi * (uniform01(rng) - 0.5);
      }
      y[i] = x[i] + gap * dir;
    }
    b.evaluate(t, x, bx);
    b.evaluate(t, y, by);
    double diff = 0.0;
    double abs_x = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      diff += (bx[i] - by[i]) * (bx[i] - by[i]);
      abs_x += bx[i] * bx[i];
      dist += (x[i] - y[i]) * (x[i] - y[i]);
    }
    rep.max_ratio_beta = std::max(rep.max_ratio_beta, std::sqrt(diff) / std::pow(std::sqrt(dist), b.beta()));
    rep.max_abs = std::max(rep.max_abs, std::sqrt(abs_x));
  }
  constexpr double slack = 1e-9;
  if (rep.max_ratio_beta > b.holder_seminorm() + slack || rep.max_abs > b.sup_norm() + slack) {
    std::ostringstream os;
    os << "drift " << b.describe() << " violates declared metadata: sampled seminorm " << rep.max_ratio_beta
       << " (declared " << b.holder_seminorm() << "), sampled sup " << rep.max_abs << " (declared " << b.sup_norm() << ")";
    throw CertificationFailure(os.str());
  }
  return rep;
}

std::vector<CatalogEntry> drift_catalog() {
  return {
      {"zero", "b = 0"},
      {"constant", "b_i = amplitude * tau(t)"},
      {"capped_power", "b_i = amplitude * tau(t) * sign(x_i) min(|x_i|, 1)^beta"},
      {"abs_sin", "b_i = amplitude * tau(t) * |sin(x_i)|^beta"},
  };
}

}  // namespace stable_euler
