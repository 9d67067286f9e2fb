#include "stable_euler/config.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "stable_euler/errors.hpp"

namespace stable_euler {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) throw ConfigError(key, "expected a number, got '" + value + "'");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

std::vector<std::size_t> to_sizes(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(value)) out.push_back(static_cast<std::size_t>(to_unsigned(key, item)));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of integers");
  return out;
}

ExperimentKind to_kind(const std::string& key, const std::string& value) {
  for (auto k : {ExperimentKind::sampler_check, ExperimentKind::kernel_check, ExperimentKind::solver_check,
                 ExperimentKind::convergence, ExperimentKind::regularity, ExperimentKind::randomization_ablation}) {
    if (to_string(k) == value) return k;
  }
  throw ConfigError(key, "unknown experiment kind '" + value + "'");
}

struct KeySpec {
  const char* name;
  const char* doc;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)> set;
};

template <class Member>
auto number(Member ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); };
}

template <class Member>
auto count(Member ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.*m = static_cast<Member>(to_unsigned(k, v));
  };
}

auto flag(bool ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_bool(k, v); };
}

auto numbers(std::vector<double> ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_doubles(k, v); };
}

auto sizes(std::vector<std::size_t> ExperimentConfig::*m) {
  return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_sizes(k, v); };
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"experiment", "sampler-check | kernel-check | solver-check | convergence | regularity | randomization-ablation",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.kind = to_kind(k, v); }},
      {"alpha", "stability index in (1, 2]", number(&ExperimentConfig::alpha)},
      {"beta", "drift Holder exponent in (0, 1)", number(&ExperimentConfig::beta)},
      {"dim", "space dimension (1 for every density-based experiment)",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.dim = static_cast<int>(to_unsigned(k, v));
       }},
      {"horizon", "final time T", number(&ExperimentConfig::horizon)},
      {"x0", "starting point (dimension 1)", number(&ExperimentConfig::x0)},
      {"ladder", "step counts n, strictly increasing powers of two", sizes(&ExperimentConfig::ladder)},
      {"drift.profile", "zero | constant | capped_power | abs_sin",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto p = parse_space_profile(v);
         if (!p) throw ConfigError(k, "unknown drift profile '" + v + "'");
         c.drift.profile = *p;
       }},
      {"drift.amplitude", "drift amplitude c > 0",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.drift.amplitude = to_double(k, v); }},
      {"drift.time", "constant | oscillating | square_wave",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto t = parse_time_kind(v);
         if (!t) throw ConfigError(k, "unknown time profile '" + v + "'");
         c.drift.time = *t;
       }},
      {"drift.frequency", "angular frequency of the oscillating profile",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.drift.frequency = to_double(k, v); }},
      {"drift.period", "absolute square-wave period",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.drift.period = to_double(k, v); }},
      {"drift.period_steps", "square-wave period in units of the step h",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.drift.period_steps = to_double(k, v); }},
      {"scheme.randomized", "randomized drift time (true) or left point (false)", flag(&ExperimentConfig::randomized)},
      {"paths", "Monte Carlo sample size", count(&ExperimentConfig::paths)},
      {"seed", "64-bit seed of every random stream",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.seed = to_unsigned(k, v); }},
      {"output.dir", "output directory (overridden by STABLE_EULER_OUTPUT_DIR)",
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"grid.points", "spatial nodes (power of two); 0 chooses automatically", count(&ExperimentConfig::grid_points)},
      {"grid.radius", "half-width of the periodic window; 0 chooses automatically", number(&ExperimentConfig::grid_radius)},
      {"picard.tol", "relative sup-change stopping tolerance",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.picard.tol = to_double(k, v); }},
      {"picard.max_iter", "Picard sweeps per window",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.picard.max_iter = static_cast<std::size_t>(to_unsigned(k, v));
       }},
      {"picard.window_cap", "longest time window",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.picard.window_cap = to_double(k, v); }},
      {"tolerance.slope_below", "accepted slope deficit below gamma/alpha", number(&ExperimentConfig::slope_below)},
      {"tolerance.slope_above", "accepted slope excess above gamma/alpha", number(&ExperimentConfig::slope_above)},
      {"tolerance.spread", "max/min of error / h^(gamma/alpha)", number(&ExperimentConfig::spread_max)},
      {"tolerance.cf", "characteristic-function sup error", number(&ExperimentConfig::cf_tolerance)},
      {"tolerance.histogram", "histogram sup error against the density", number(&ExperimentConfig::histogram_tolerance)},
      {"tolerance.exact", "sup error of exactly solvable cases", number(&ExperimentConfig::exact_tolerance)},
      {"tolerance.stability", "max/min - 1 of regularity quotients across grids", number(&ExperimentConfig::stability_tolerance)},
      {"tolerance.divergence", "growth factor that flags a diverging quotient", number(&ExperimentConfig::divergence_growth)},
      {"tolerance.sandwich_max", "largest accepted Aronson constant", number(&ExperimentConfig::sandwich_max)},
      {"tolerance.sandwich_stability", "relative change of the Aronson constant under refinement",
       number(&ExperimentConfig::sandwich_stability)},
      {"tolerance.moment_slope", "moment slope error", number(&ExperimentConfig::moment_tolerance)},
      {"tolerance.chapman_kolmogorov", "Chapman-Kolmogorov sup defect", number(&ExperimentConfig::ck_tolerance)},
      {"sampler.lambdas", "characteristic-function frequencies (norms along a fixed direction)",
       numbers(&ExperimentConfig::cf_lambdas)},
      {"sampler.histogram_bins", "histogram bins on [-radius, radius]", count(&ExperimentConfig::histogram_bins)},
      {"sampler.histogram_radius", "histogram half-width", number(&ExperimentConfig::histogram_radius)},
      {"kernel.times", "times of the Aronson sandwich", numbers(&ExperimentConfig::kernel_times)},
      {"kernel.x_max", "half-width of the kernel sampling window", number(&ExperimentConfig::kernel_x_max)},
      {"kernel.points", "kernel sampling points per time", count(&ExperimentConfig::kernel_points)},
      {"kernel.moment_deltas", "moment orders delta", numbers(&ExperimentConfig::moment_deltas)},
      {"kernel.holder", "also fit the kernel Holder and drift-smoothing constants", flag(&ExperimentConfig::kernel_holder)},
      {"solver.ck_mid_time", "intermediate time r of the Chapman-Kolmogorov check", number(&ExperimentConfig::ck_mid_time)},
      {"solver.ck_points", "starting points of the inner transitions", count(&ExperimentConfig::ck_points)},
      {"solver.ck_radius", "radius of the inner starting points", number(&ExperimentConfig::ck_radius)},
      {"weak.enabled", "also fit the test-function weak error", flag(&ExperimentConfig::weak_error)},
      {"weak.delta", "Holder exponent of min(|y|, cap)^delta", number(&ExperimentConfig::test_delta)},
      {"weak.cap", "cap of the test function", number(&ExperimentConfig::test_cap)},
      {"cross_check.steps", "step count of the fine scheme compared with the reference; 0 disables",
       count(&ExperimentConfig::cross_check_steps)},
      {"cross_check.refine", "spatial refinement factor of the fine scheme", count(&ExperimentConfig::cross_check_refine)},
      {"regularity.grids", "spatial node counts, coarse to fine", sizes(&ExperimentConfig::regularity_grids)},
      {"regularity.times", "stored times of the regularity densities", numbers(&ExperimentConfig::regularity_times)},
      {"regularity.time_exponent", "forward-time exponent; 0 means gamma/alpha", number(&ExperimentConfig::time_exponent)},
      {"regularity.space_exponent", "forward-space exponent", number(&ExperimentConfig::space_exponent)},
      {"regularity.control_exponent", "forward-space exponent expected to diverge", number(&ExperimentConfig::control_exponent)},
  };
  return table;
}

bool power_of_two(std::size_t n) { return n > 0 && std::has_single_bit(n); }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sampler_check: return "sampler-check";
    case ExperimentKind::kernel_check: return "kernel-check";
    case ExperimentKind::solver_check: return "solver-check";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::regularity: return "regularity";
    case ExperimentKind::randomization_ablation: return "randomization-ablation";
  }
  return "unknown";
}

DriftSpec ExperimentConfig::make_drift() const {
  TimeProfile time;
  switch (drift.time) {
    case TimeKind::constant: time = TimeProfile::constant(); break;
    case TimeKind::oscillating: time = TimeProfile::oscillating(drift.frequency); break;
    case TimeKind::square_wave:
      time = drift.period > 0.0 ? TimeProfile::square_wave(drift.period)
                                : TimeProfile::square_wave_in_steps(drift.period_steps);
      break;
  }
  return make_holder_drift(beta, drift.amplitude, drift.profile, time, dim);
}

void validate(const ExperimentConfig& c) {
  if (!(c.alpha > 1.0 && c.alpha <= 2.0)) throw ConfigError("alpha", "must lie in (1, 2]");
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("beta", "must lie in (0, 1)");
  if (!(c.gamma() > 0.0)) throw ConfigError("beta", "gamma = alpha + beta - 1 must be positive");
  if (c.dim < 1) throw ConfigError("dim", "must be at least 1");
  if (!(c.horizon > 0.0)) throw ConfigError("horizon", "must be positive");
  if (!(c.drift.amplitude > 0.0)) throw ConfigError("drift.amplitude", "must be positive");
  if (c.drift.time == TimeKind::square_wave && !(c.drift.period > 0.0) && !(c.drift.period_steps > 0.0)) {
    throw ConfigError("drift.period_steps", "a square wave needs drift.period or drift.period_steps");
  }
  if (c.drift.time == TimeKind::oscillating && !(c.drift.frequency > 0.0)) {
    throw ConfigError("drift.frequency", "must be positive for an oscillating drift");
  }
  for (std::size_t i = 0; i < c.ladder.size(); ++i) {
    if (!power_of_two(c.ladder[i])) throw ConfigError("ladder", "entries must be powers of two");
    if (i > 0 && c.ladder[i] <= c.ladder[i - 1]) throw ConfigError("ladder", "must be strictly increasing");
  }
  const bool density_based = c.kind == ExperimentKind::convergence || c.kind == ExperimentKind::regularity ||
                             c.kind == ExperimentKind::randomization_ablation || c.kind == ExperimentKind::solver_check ||
                             c.kind == ExperimentKind::kernel_check;
  if (density_based && c.dim != 1) throw ConfigError("dim", "density-based experiments run in dimension 1");
  if ((c.kind == ExperimentKind::convergence || c.kind == ExperimentKind::randomization_ablation) && c.ladder.size() < 4) {
    throw ConfigError("ladder", "needs at least four step counts");
  }
  if (c.kind == ExperimentKind::randomization_ablation && c.drift.time != TimeKind::square_wave) {
    throw ConfigError("drift.time", "the ablation needs a square_wave time profile");
  }
  if (c.grid_points != 0 && (!power_of_two(c.grid_points) || c.grid_points < 256)) {
    throw ConfigError("grid.points", "must be a power of two >= 256");
  }
  if (c.grid_radius < 0.0) throw ConfigError("grid.radius", "must be non-negative");
  if (c.kind == ExperimentKind::sampler_check && c.paths < 2) throw ConfigError("paths", "needs at least two samples");
  if (c.histogram_bins == 0 || !(c.histogram_radius > 0.0)) throw ConfigError("sampler.histogram_bins", "empty histogram");
  for (std::size_t i = 0; i < c.regularity_grids.size(); ++i) {
    if (!power_of_two(c.regularity_grids[i]) || c.regularity_grids[i] < 256) {
      throw ConfigError("regularity.grids", "entries must be powers of two >= 256");
    }
    if (i > 0 && c.regularity_grids[i] <= c.regularity_grids[i - 1]) {
      throw ConfigError("regularity.grids", "must be strictly increasing");
    }
  }
  if (c.kind == ExperimentKind::regularity && c.regularity_grids.size() < 3) {
    throw ConfigError("regularity.grids", "needs at least three grid scales");
  }
  for (std::size_t i = 0; i < c.regularity_times.size(); ++i) {
    if (!(c.regularity_times[i] > 0.0) || (i > 0 && c.regularity_times[i] <= c.regularity_times[i - 1])) {
      throw ConfigError("regularity.times", "must be positive and strictly increasing");
    }
  }
  if (!(c.ck_mid_time > 0.0 && c.ck_mid_time < c.horizon)) throw ConfigError("solver.ck_mid_time", "must lie in (0, horizon)");
  if (c.ck_points < 2) throw ConfigError("solver.ck_points", "needs at least two points");
  if (!(c.test_delta >= c.beta && c.test_delta <= 1.0)) throw ConfigError("weak.delta", "must lie in [beta, 1]");
  if (c.cross_check_steps != 0 && !power_of_two(c.cross_check_refine)) {
    throw ConfigError("cross_check.refine", "must be a power of two");
  }
  if (c.picard.tol <= 0.0) throw ConfigError("picard.tol", "must be positive");
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return key == k.name; });
    if (it == table.end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->set(cfg, key, value);
    cfg.entries.emplace_back(key, value);
  }
  if (!seen.contains("experiment")) throw ConfigError("experiment", "missing required key");
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open config file " + path);
  return parse_config(is);
}

std::vector<std::pair<std::string, std::string>> config_schema() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : key_table()) out.emplace_back(k.name, k.doc);
  return out;
}

}  // namespace stable_euler
