#pragma once

#include <span>
#include <vector>

#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// The exact transition density p_alpha(t, x) of the driving noise and its
// derivatives.
//
// alpha < 2 is evaluated by Fourier inversion of exp(-t|lambda|^alpha) written
// as a one-dimensional radial integral (dims 1, 2, 3), at the unit time and
// rescaled:  p(t, x) = t^{-d/alpha} p(1, t^{-1/alpha} x). The radial integral
// runs over [0, Lambda] with Lambda^alpha = 50, split into panels no wider than
// half an oscillation period, each integrated by adaptive Gauss-Kronrod.
// The error estimate plus an analytic bound on the truncated tail must stay
// below kInversionTolerance or QuadratureFailure is thrown. In d = 1 and for
// r >= 8 the large-r asymptotic expansion replaces the quadrature whenever its
// smallest term is below 1e-13 relative.
//
// alpha == 2 uses the closed-form Gaussian N(0, t I).

inline constexpr double kInversionTolerance = 1e-9;

double density(const StableSpec& spec, double t, std::span<const double> x);
double density(const StableSpec& spec, double t, double x);  // dim 1

void grad_density(const StableSpec& spec, double t, std::span<const double> x, std::span<double> out);
std::vector<double> grad_density(const StableSpec& spec, double t, std::span<const double> x);
double grad_density(const StableSpec& spec, double t, double x);  // dim 1

double time_deriv_density(const StableSpec& spec, double t, std::span<const double> x);
double time_deriv_density(const StableSpec& spec, double t, double x);  // dim 1

// Unit-time radial profiles: value p(1, r), d/dr p(1, r) and d/dt p(t, r) at t = 1.
struct RadialProfile {
  double value = 0.0;
  double radial_derivative = 0.0;
  double time_derivative = 0.0;
};
RadialProfile unit_radial_profile(const StableSpec& spec, double r, bool with_derivatives = true);

// d = 1, alpha < 2: p(1, x) ~ tail_constant(alpha) |x|^{-(1+alpha)} as |x| -> infinity,
// tail_constant = Gamma(1 + alpha) sin(pi alpha / 2) / pi.
double stable_tail_constant(double alpha);

// d = 1, alpha < 2: P(|Z_1| > x) from the first three terms of the large-x
// expansion of the density. Accurate to O(x^{-4 alpha}).
double stable_tail_mass(double alpha, double x);

}  // namespace stable_euler
