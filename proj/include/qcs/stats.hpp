#pragma once

#include <cstddef>
#include <span>

namespace qcs {

double normal_pdf(double x);
// Φ(x) via the C library erfc; absolute error well below 1e-12.
double normal_cdf(double x);
// 1 − Φ(x), accurate to full relative precision in the upper tail.
double normal_sf(double x);
// Φ⁻¹(p): rational approximation polished by one Halley step.
double normal_quantile(double p);

// P(a < Z ≤ b) for standard normal Z; evaluated tail-first so that cells far
// from the origin keep relative accuracy. Bounds may be ±infinity.
double normal_interval_prob(double a, double b);
// E[Z ; a < Z ≤ b] (unnormalized first moment).
double normal_interval_mean(double a, double b);
// E[(Z − c)² ; a < Z ≤ b] (unnormalized second moment about c).
double normal_interval_sqerr(double a, double b, double c);
// E[Z | a < Z ≤ b]; falls back to the cell midpoint if the cell probability
// underflows to zero.
double truncated_normal_mean(double a, double b);

// Two-sided Kolmogorov-Smirnov statistic against the standard normal CDF.
double ks_statistic_normal(std::span<const double> sample);

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;  // sample stddev / sqrt(n); zero when n < 2
  std::size_t count = 0;
};
Summary summarize_values(std::span<const double> values);

}  // namespace qcs
