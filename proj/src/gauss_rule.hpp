#pragma once

#include <boost/math/special_functions/legendre.hpp>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace stable_euler::detail {

// Gauss-Legendre rule on [-1, 1] with n nodes, ascending, cached per n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto order = static_cast<int>(n);
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(order);
  GaussRule rule;
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z != 0.0) add(-*z);
  }
  for (double z : zeros) add(z);
  return cache.emplace(n, std::move(rule)).first->second;
}

// Integral of f over [a, b] with the n-point rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, std::size_t n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace stable_euler::detail
