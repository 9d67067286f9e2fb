#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stable_euler {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_stderr = 0.0;  // 0 when fewer than 3 points
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Two-sided 95% Student-t quantile with `dof` degrees of freedom.
double student_t_975(std::size_t dof);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
// distribution (adequate for samples of 10^3 and up).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins_used = 0;
};

// Pearson chi-square goodness of fit of observed counts against expected
// counts. Adjacent bins are pooled until each expected count reaches
// min_expected. Degrees of freedom = pooled bins - 1.
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                double min_expected = 5.0);

}  // namespace stable_euler
