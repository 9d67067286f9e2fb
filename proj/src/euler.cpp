#include "stable_euler/euler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "gauss_rule.hpp"
#include "stable_euler/parallel.hpp"
#include "stable_euler/sampling.hpp"
#include "stable_euler/stable_kernel.hpp"

namespace stable_euler {

double SchemeConfig::grid_floor(double s) const {
  const double step = h();
  return step * std::floor(s / step);
}

void SchemeConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("SchemeConfig: horizon must be positive");
  if (steps == 0) throw std::invalid_argument("SchemeConfig: steps must be positive");
}

namespace {

void check_inputs(const DriftSpec& drift, const StableSpec& spec, const SchemeConfig& cfg, std::span<const double> x0) {
  cfg.validate();
  if (drift.dim() != spec.dim()) throw std::invalid_argument("scheme: drift and noise dimensions differ");
  if (x0.size() != static_cast<std::size_t>(spec.dim())) throw std::invalid_argument("scheme: x0 must have size dim");
}

}  // namespace

SchemePath simulate_path(const DriftSpec& drift_in, const StableSpec& spec, const SchemeConfig& cfg,
                         std::span<const double> x0, Rng& rng_noise, Rng& rng_time) {
  check_inputs(drift_in, spec, cfg, x0);
  const DriftSpec drift = drift_in.with_step(cfg.h());
  const auto d = static_cast<std::size_t>(spec.dim());
  const double h = cfg.h();

  SchemePath path;
  path.dim = spec.dim();
  path.times.resize(cfg.steps + 1);
  path.states.resize((cfg.steps + 1) * d);
  if (cfg.randomized) path.u_draws.resize(cfg.steps);
  std::copy(x0.begin(), x0.end(), path.states.begin());
  path.times[0] = 0.0;

  std::vector<double> b(d);
  std::vector<double> dz(d);
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    const double t_k = cfg.t(k);
    double theta = t_k;
    if (cfg.randomized) {
      theta = t_k + h * uniform01(rng_time);
      path.u_draws[k] = theta;
    }
    const std::span<const double> x(path.states.data() + k * d, d);
    drift.evaluate(theta, x, b);
    sample_isotropic_increment(spec, h, rng_noise, dz);
    for (std::size_t i = 0; i < d; ++i) path.states[(k + 1) * d + i] = x[i] + h * b[i] + dz[i];
    path.times[k + 1] = cfg.t(k + 1);
  }
  return path;
}

std::vector<double> batch_terminals(const DriftSpec& drift_in, const StableSpec& spec, const SchemeConfig& cfg,
                                    std::span<const double> x0, std::size_t n_paths, unsigned workers) {
  check_inputs(drift_in, spec, cfg, x0);
  if (n_paths == 0) throw std::invalid_argument("batch_terminals: need at least one path");
  const DriftSpec drift = drift_in.with_step(cfg.h());
  const auto d = static_cast<std::size_t>(spec.dim());
  const double h = cfg.h();
  std::vector<double> out(n_paths * d);

  parallel_for(n_paths, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(d);
    std::vector<double> b(d);
    std::vector<double> dz(d);
    for (std::size_t p = begin; p < end; ++p) {
      Rng noise = make_stream(cfg.seed, StreamKind::noise, p);
      Rng time = make_stream(cfg.seed, StreamKind::time, p);
      std::copy(x0.begin(), x0.end(), x.begin());
      for (std::size_t k = 0; k < cfg.steps; ++k) {
        const double t_k = cfg.t(k);
        const double theta = cfg.randomized ? t_k + h * uniform01(time) : t_k;
        if (!drift.is_zero()) drift.evaluate(theta, x, b);
        sample_isotropic_increment(spec, h, noise, dz);
        for (std::size_t i = 0; i < d; ++i) x[i] += (drift.is_zero() ? 0.0 : h * b[i]) + dz[i];
      }
      std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(p * d));
    }
  });
  return out;
}

std::vector<TimeNode> step_time_rule(const DriftSpec& drift, double t_k, double h, bool randomized) {
  if (!(h > 0.0)) throw std::invalid_argument("step_time_rule: h must be positive");
  if (!randomized || drift.time_homogeneous()) return {{t_k, 1.0}};
  const TimeKind kind = drift.time_profile().kind;
  if (kind == TimeKind::square_wave) {
    std::vector<double> cuts{t_k};
    for (double c : drift.time_breakpoints(t_k, t_k + h)) cuts.push_back(c);
    cuts.push_back(t_k + h);
    std::vector<TimeNode> nodes;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      if (len > 0.0) nodes.push_back({0.5 * (cuts[i] + cuts[i + 1]), len / h});
    }
    return nodes;
  }
  // Oscillating: Gauss-Legendre with doubling, judged on the moments of tau.
  auto rule_for = [&](std::size_t n) {
    const auto& gl = detail::gauss_legendre(n);
    std::vector<TimeNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = {t_k + 0.5 * h * (1.0 + gl.nodes[i]), 0.5 * gl.weights[i]};
    return nodes;
  };
  auto moments = [&](const std::vector<TimeNode>& nodes) {
    std::array<double, 4> m{};
    for (const auto& nd : nodes) {
      const double tau = drift.time_factor(nd.u);
      double p = 1.0;
      for (double& mi : m) {
        p *= tau;
        mi += nd.weight * p;
      }
    }
    return m;
  };
  std::size_t n = 16;
  auto nodes = rule_for(n);
  auto m = moments(nodes);
  while (n < 1024) {
    auto finer = rule_for(2 * n);
    auto mf = moments(finer);
    double change = 0.0;
    for (std::size_t i = 0; i < 4; ++i) change = std::max(change, std::abs(mf[i] - m[i]));
    nodes = std::move(finer);
    m = mf;
    n *= 2;
    if (change < 1e-8) break;
  }
  return nodes;
}

double step_density(const DriftSpec& drift_in, const StableSpec& spec, double h, double t_k, std::span<const double> x,
                    std::span<const double> y, bool randomized) {
  if (!(h > 0.0)) throw std::invalid_argument("step_density: h must be positive");
  const auto d = static_cast<std::size_t>(spec.dim());
  if (x.size() != d || y.size() != d || drift_in.dim() != spec.dim()) {
    throw std::invalid_argument("step_density: dimension mismatch");
  }
  const DriftSpec drift = drift_in.with_step(h);
  std::vector<double> b(d);
  std::vector<double> z(d);
  auto kernel_at = [&](double u) {
    drift.evaluate(u, x, b);
    for (std::size_t i = 0; i < d; ++i) z[i] = y[i] - x[i] - h * b[i];
    return density(spec, h, z);
  };
  if (!randomized || drift.time_homogeneous()) return kernel_at(t_k);
  if (drift.time_profile().kind == TimeKind::square_wave) {
    double sum = 0.0;
    for (const auto& nd : step_time_rule(drift, t_k, h, true)) sum += nd.weight * kernel_at(nd.u);
    return sum;
  }
  std::size_t n = 16;
  double prev = detail::gauss_integrate(kernel_at, t_k, t_k + h, n) / h;
  while (n < 4096) {
    n *= 2;
    const double next = detail::gauss_integrate(kernel_at, t_k, t_k + h, n) / h;
    if (std::abs(next - prev) <= 1e-8 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

double step_density(const DriftSpec& drift, const StableSpec& spec, double h, double t_k, double x, double y,
                    bool randomized) {
  return step_density(drift, spec, h, t_k, std::span<const double>(&x, 1), std::span<const double>(&y, 1), randomized);
}

void write_terminals_csv(std::ostream& os, std::span<const double> terminals, int dim) {
  if (dim < 1 || terminals.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("write_terminals_csv: size is not a multiple of dim");
  }
  const auto d = static_cast<std::size_t>(dim);
  os << "path_index";
  for (int i = 1; i <= dim; ++i) os << ",x_" << i;
  os << '\n' << std::setprecision(17);
  for (std::size_t p = 0; p < terminals.size() / d; ++p) {
    os << p;
    for (std::size_t i = 0; i < d; ++i) os << ',' << terminals[p * d + i];
    os << '\n';
  }
}

void write_terminals_csv(const std::string& path, std::span<const double> terminals, int dim) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_terminals_csv(os, terminals, dim);
}

namespace {
constexpr char kTerminalMagic[8] = {'S', 'E', 'T', 'E', 'R', 'M', 'S', '1'};
}

void write_terminals_binary(const std::string& path, std::span<const double> terminals, int dim) {
  if (dim < 1 || terminals.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("write_terminals_binary: size is not a multiple of dim");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const auto d32 = static_cast<std::uint32_t>(dim);
  const auto count = static_cast<std::uint64_t>(terminals.size() / static_cast<std::size_t>(dim));
  os.write(kTerminalMagic, sizeof kTerminalMagic);
  os.write(reinterpret_cast<const char*>(&d32), sizeof d32);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  os.write(reinterpret_cast<const char*>(terminals.data()), static_cast<std::streamsize>(terminals.size_bytes()));
  if (!os) throw std::runtime_error("write_terminals_binary: write failed");
}

std::vector<double> read_terminals_binary(const std::string& path, int& dim) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[sizeof kTerminalMagic];
  std::uint32_t d32 = 0;
  std::uint64_t count = 0;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(&d32), sizeof d32);
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!is || std::memcmp(magic, kTerminalMagic, sizeof magic) != 0 || d32 == 0 || count > (1ULL << 32)) {
    throw std::runtime_error("read_terminals_binary: malformed file " + path);
  }
  std::vector<double> out(count * d32);
  is.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_terminals_binary: truncated file " + path);
  dim = static_cast<int>(d32);
  return out;
}

}  // namespace stable_euler
