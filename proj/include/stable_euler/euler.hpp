#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stable_euler/drift.hpp"
#include "stable_euler/random.hpp"
#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Euler scheme on the uniform grid t_k = k h, h = horizon / steps.
// Path p draws its noise from make_stream(seed, StreamKind::noise, p) and its
// drift-evaluation times from make_stream(seed, StreamKind::time, p); the
// worker that runs the path plays no role.
struct SchemeConfig {
  double horizon = 1.0;
  std::size_t steps = 1;
  bool randomized = true;
  std::uint64_t seed = 0;

  double h() const { return horizon / static_cast<double>(steps); }
  double t(std::size_t k) const { return horizon * static_cast<double>(k) / static_cast<double>(steps); }
  // h floor(s / h), which lies in (s - h, s].
  double grid_floor(double s) const;
  void validate() const;
};

struct SchemePath {
  int dim = 1;
  std::vector<double> times;     // t_0 .. t_n
  std::vector<double> states;    // (n + 1) x dim, row-major
  std::vector<double> u_draws;   // drift times theta_k; empty unless randomized

  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

// X_{k+1} = X_k + h b(theta_k, X_k) + dZ_k with theta_k uniform on [t_k, t_{k+1})
// (randomized) or theta_k = t_k. Each step takes one uniform from rng_time
// when randomized, and its noise increment from rng_noise.
SchemePath simulate_path(const DriftSpec& drift, const StableSpec& spec, const SchemeConfig& cfg,
                         std::span<const double> x0, Rng& rng_noise, Rng& rng_time);

// Terminal states of paths 0..n_paths-1 (n_paths x dim, row-major). Identical
// for every worker count.
std::vector<double> batch_terminals(const DriftSpec& drift, const StableSpec& spec, const SchemeConfig& cfg,
                                    std::span<const double> x0, std::size_t n_paths, unsigned workers = 1);

// Nodes and weights for averaging over the drift time u in one step [t_k, t_k + h).
//   left-point or time-homogeneous drift : {t_k, 1}
//   square wave                          : one node per constant piece, weight = piece length / h
//   oscillating                          : Gauss-Legendre, 16 nodes doubled until the first four
//                                          moments of tau(u) change by less than 1e-8
struct TimeNode {
  double u = 0.0;
  double weight = 1.0;
};
std::vector<TimeNode> step_time_rule(const DriftSpec& drift, double t_k, double h, bool randomized);

// One-step transition density of the scheme averaged over the drift time,
//   (1/h) int_{t_k}^{t_k + h} p(h, y - x - h b(u, x)) du,
// or p(h, y - x - h b(t_k, x)) for the left-point variant. Oscillating drifts
// use Gauss-Legendre with 16 nodes, doubled until the relative change is below 1e-8.
double step_density(const DriftSpec& drift, const StableSpec& spec, double h, double t_k, std::span<const double> x,
                    std::span<const double> y, bool randomized = true);
double step_density(const DriftSpec& drift, const StableSpec& spec, double h, double t_k, double x, double y,
                    bool randomized = true);

// Terminal exports. CSV columns: path_index, x_1 .. x_d.
void write_terminals_csv(std::ostream& os, std::span<const double> terminals, int dim);
void write_terminals_csv(const std::string& path, std::span<const double> terminals, int dim);
// Binary: 8-byte magic, uint32 dim, uint64 count, then count x dim doubles.
void write_terminals_binary(const std::string& path, std::span<const double> terminals, int dim);
std::vector<double> read_terminals_binary(const std::string& path, int& dim);

}  // namespace stable_euler
