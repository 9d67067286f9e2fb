// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "stable_euler/config.hpp"
#include "stable_euler/experiments.hpp"
#include "stable_euler/stable_kernel.hpp"

namespace se = stable_euler;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
  void require_check(const se::ExperimentReport& r, const std::string& name, const std::string& label) {
    const auto& c = r.check(name);
    require(c.passed, label + ": " + c.detail);
  }
};

struct Timed {
  se::ExperimentReport report;
  double seconds = 0.0;
};

se::ExperimentConfig config(const std::string& name, const std::string& overrides = "") {
  std::ifstream file(std::string(STABLE_EULER_CONFIG_DIR) + "/" + name);
  if (!file) throw std::runtime_error("missing config " + name);
  std::stringstream text;
  text << file.rdbuf();
  // Later keys may not repeat earlier ones, so overrides replace whole lines.
  std::istringstream lines(text.str());
  std::istringstream extra(overrides);
  std::string merged;
  std::string line;
  std::vector<std::string> override_lines;
  while (std::getline(extra, line)) override_lines.push_back(line);
  while (std::getline(lines, line)) {
    bool replaced = false;
    for (const auto& o : override_lines) {
      const auto key = o.substr(0, o.find('='));
      if (line.rfind(key, 0) == 0) replaced = true;
    }
    if (!replaced) merged += line + "\n";
  }
  merged += overrides;
  std::istringstream is(merged);
  return se::parse_config(is);
}

Timed run(const se::ExperimentConfig& cfg, unsigned workers = 1) {
  const auto start = std::chrono::steady_clock::now();
  Timed t{se::run_experiment(cfg, workers), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  if (!out.passed) ++failures;
  std::printf("%s criterion %d (%s): %s\n", out.passed ? "PASS" : "FAIL", id, title.c_str(), out.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  Timed sampler_15_d1;
  criterion(1, "sampler characteristic function", [&] {
    Outcome o;
    for (double alpha : {1.3, 1.5, 1.8}) {
      for (int dim : {1, 2}) {
        const se::ExperimentConfig cfg =
            config("sampler_alpha15_d1.cfg", "alpha = " + num(alpha) + "\ndim = " + std::to_string(dim) + "\n");
        Timed t = run(cfg);
        const std::string label = "alpha " + num(alpha) + " d " + std::to_string(dim);
        o.require(t.report.check("characteristic_function").passed,
                  label + " cf error " + num(t.report.value("cf_max_error")));
        o.require(t.seconds <= 60.0, label + " " + num(t.seconds) + " s");
        if (alpha == 1.5 && dim == 1) sampler_15_d1 = std::move(t);
      }
    }
    return o;
  });

  criterion(2, "kernel inversion", [&] {
    Outcome o;
    const double oracle = std::tgamma(1.0 + 1.0 / 1.5) / std::numbers::pi;
    const double value = se::density(se::StableSpec(1.5, 1), 1.0, 0.0);
    o.require(std::abs(value - oracle) <= 1e-6, "|p(1, 0) - Gamma(5/3)/pi| = " + num(std::abs(value - oracle)));
    o.require_check(sampler_15_d1.report, "histogram", "histogram of 1e6 samples");
    return o;
  });

  Timed kernel;
  criterion(3, "Aronson sandwich", [&] {
    kernel = run(config("kernel_alpha15.cfg"));
    Outcome o;
    o.require_check(kernel.report, "aronson_sandwich", "alpha 1.5");
    return o;
  });

  criterion(4, "proxy properties", [&] {
    Outcome o;
    o.require_check(kernel.report, "convolution_stable", "alpha 1.5 convolution");
    o.require_check(kernel.report, "moment_slope_delta_0.5", "delta 0.5");
    o.require_check(kernel.report, "moment_slope_delta_1", "delta 1");
    const Timed gauss = run(config("kernel_gaussian.cfg"));
    o.require_check(gauss.report, "convolution_exact", "alpha 2 convolution");
    o.require_check(gauss.report, "moment_slope_delta_0.5", "alpha 2 delta 0.5");
    o.require_check(gauss.report, "moment_slope_delta_1", "alpha 2 delta 1");
    return o;
  });

  criterion(5, "density solver oracles", [&] {
    const Timed t = run(config("solver_alpha15.cfg"));
    Outcome o;
    for (const char* name : {"solver_zero_drift", "solver_constant_drift", "chapman_kolmogorov", "picard_contraction"}) {
      o.require_check(t.report, name, name);
    }
    return o;
  });

  std::vector<Timed> convergence;
  criterion(6, "weighted density error rate", [&] {
    Outcome o;
    for (const char* name : {"convergence_alpha15.cfg", "convergence_alpha2.cfg"}) {
      convergence.push_back(run(config(name)));
      const Timed& t = convergence.back();
      o.require_check(t.report, "slope_in_band", name);
      o.require_check(t.report, "normalized_error_bounded", name);
      o.require(t.seconds <= 900.0, std::string(name) + " " + num(t.seconds) + " s");
    }
    return o;
  });

  criterion(7, "Holder test function", [&] {
    Outcome o;
    if (convergence.size() != 2) {
      o.require(false, "convergence runs unavailable");
      return o;
    }
    o.require_check(convergence[0].report, "weak_slope", "alpha 1.5");
    o.require_check(convergence[1].report, "weak_slope", "alpha 2");
    return o;
  });

  criterion(8, "randomization ablation", [&] {
    const se::ExperimentConfig cfg = config("ablation_square_wave.cfg");
    const Timed t = run(cfg);
    Outcome o;
    o.require_check(t.report, "randomized_slope", "square wave, period 2h");
    const std::string manifest = se::render_manifest(cfg, t.report, t.seconds);
    o.require(manifest.find("result.randomized_slope = ") != std::string::npos &&
                  manifest.find("result.left_point_slope = ") != std::string::npos,
              "both slopes in the manifest");
    return o;
  });

  criterion(9, "regularity quotients", [&] {
    const Timed t = run(config("regularity_alpha15.cfg"));
    Outcome o;
    o.require_check(t.report, "forward_time_stable", "time");
    o.require_check(t.report, "forward_space_stable", "space");
    o.require_check(t.report, "control_exponent_diverges", "control");
    return o;
  });

  criterion(10, "determinism", [&] {
    Outcome o;
    const se::ExperimentConfig sampler = config("sampler_alpha13_d2.cfg");
    const auto s1 = run(sampler, 1).report.csv;
    const auto s4 = run(sampler, 4).report.csv;
    o.require(s1 == s4, "sampler csv, 1 vs 4 workers");
    const se::ExperimentConfig conv = config("convergence_alpha15.cfg");
    const auto c4 = run(conv, 4).report.csv;
    const auto c1 = convergence.empty() ? run(conv, 1).report.csv : convergence[0].report.csv;
    o.require(c1 == c4, "convergence csv, 1 vs 4 workers");
    o.require(run(conv, 1).report.csv == c1, "convergence csv, repeated run");
    return o;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
