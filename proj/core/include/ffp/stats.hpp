// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ffp {

// sup_x |F_n(x) - F(x)|, evaluated at the jump points of F_n.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sided 1% critical value of the KS statistic, 1.628 / sqrt(M).
double ks_critical_1pct(std::size_t M);

struct ProbabilityEstimate {
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return (hi - lo) / 2.0; }
};

// Wilson score interval at normal quantile z.
ProbabilityEstimate wilson(std::int64_t hits, std::int64_t trials, double z = 1.959963984540054);

struct MeanEstimate {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double stderr_mean = 0.0;
  std::size_t count = 0;
};
MeanEstimate summarize(const std::vector<double>& xs);

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct GofResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson chi-square of integer counts against Poisson(mean). Cells are merged
// from both tails until each expected count is at least 5.
GofResult poisson_gof(const std::vector<std::int64_t>& counts, double mean);

double median(std::vector<double> xs);

}  // namespace ffp
