#pragma once

#include <span>
#include <vector>

#include "stable_euler/random.hpp"
#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Scale that turns a positive (alpha/2)-stable subordinator A with Laplace
// transform exp(-s^{alpha/2}) into an isotropic increment Z = kSubordinatorScale
// * sqrt(A) * G with G ~ N(0, I): E exp(i lambda.Z) = E exp(-|lambda|^2 A)
// = exp(-|lambda|^alpha).
inline constexpr double kSubordinatorScale = 1.4142135623730950488;  // sqrt(2)

// Symmetric alpha-stable scalar with characteristic function exp(-|lambda|^alpha),
// alpha in (1, 2), by the Chambers-Mallows-Stuck transform. Consumes exactly two
// uniforms (one angle, one exponential).
double sample_symmetric_stable(double alpha, Rng& rng);

// Positive stable variable with Laplace transform exp(-s^index), index in (0, 1),
// by Kanter's representation. Consumes exactly two uniforms.
double sample_positive_stable(double index, Rng& rng);

// One increment Z_{t+dt} - Z_t with CF exp(-dt psi(lambda)).
//   alpha == 2        : N(0, dt I), 2 uniforms per coordinate
//   alpha < 2, dim 1  : Chambers-Mallows-Stuck, 2 uniforms
//   alpha < 2, dim > 1: subordinated Brownian motion, 2 + 2 dim uniforms
void sample_isotropic_increment(const StableSpec& spec, double dt, Rng& rng, std::span<double> out);

std::vector<double> sample_isotropic_increment(const StableSpec& spec, double dt, Rng& rng);

}  // namespace stable_euler
