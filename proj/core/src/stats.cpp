// SPDX-License-Identifier: Apache-2.0
#include "ffp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "ffp/errors.hpp"

namespace ffp {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_statistic needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    // Ties form one jump of the empirical distribution function.
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(j) / n - F, F - static_cast<double>(i) / n});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_critical_1pct(std::size_t M) {
  require(M > 0, "sample size must be positive");
  return 1.628 / std::sqrt(static_cast<double>(M));
}

ProbabilityEstimate wilson(std::int64_t hits, std::int64_t trials, double z) {
  require(trials > 0 && hits >= 0 && hits <= trials, "wilson needs 0 <= hits <= trials, trials > 0");
  ProbabilityEstimate e;
  e.hits = hits;
  e.trials = trials;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  e.p = p;
  e.lo = std::max(0.0, centre - half);
  e.hi = std::min(1.0, centre + half);
  return e;
}

MeanEstimate summarize(const std::vector<double>& xs) {
  MeanEstimate s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  s.mean = mean;
  s.variance = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  s.stderr_mean = std::sqrt(s.variance / static_cast<double>(xs.size()));
  return s;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && xs.size() > 1, "pearson needs two equal-length samples");
  const MeanEstimate a = summarize(xs);
  const MeanEstimate b = summarize(ys);
  if (a.variance == 0.0 || b.variance == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) cov += (xs[i] - a.mean) * (ys[i] - b.mean);
  cov /= static_cast<double>(xs.size() - 1);
  return cov / std::sqrt(a.variance * b.variance);
}

GofResult poisson_gof(const std::vector<std::int64_t>& counts, double mean) {
  require(!counts.empty(), "poisson_gof needs counts");
  require(mean > 0.0, "poisson_gof needs a positive mean");
  const double n = static_cast<double>(counts.size());
  auto pmf = [mean](std::int64_t k) {
    return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
  };
  // Cells [edge_j, edge_{j+1}); the last cell is open-ended.
  std::vector<std::int64_t> edges{0};
  double cum = 0.0;
  double cell = 0.0;
  for (std::int64_t k = 0;; ++k) {
    const double pk = pmf(k);
    cell += pk;
    cum += pk;
    if (n * (1.0 - cum) < 5.0) break;
    if (n * cell >= 5.0) {
      edges.push_back(k + 1);
      cell = 0.0;
    }
  }
  auto cell_probs = [&] {
    std::vector<double> e(edges.size(), 0.0);
    double head = 0.0;
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
      for (std::int64_t k = edges[j]; k < edges[j + 1]; ++k) e[j] += pmf(k);
      head += e[j];
    }
    e.back() = std::max(0.0, 1.0 - head);
    return e;
  };
  std::vector<double> expected = cell_probs();
  // The open tail cell must also reach 5 expected counts.
  if (edges.size() > 1 && n * expected.back() < 5.0) {
    edges.pop_back();
    expected = cell_probs();
  }
  const std::size_t cells = edges.size();
  std::vector<double> observed(cells, 0.0);
  for (std::int64_t c : counts) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), c);
    observed[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }
  GofResult r;
  for (std::size_t j = 0; j < cells; ++j) {
    const double e = n * expected[j];
    if (e > 0.0) r.chi2 += (observed[j] - e) * (observed[j] - e) / e;
  }
  r.dof = static_cast<int>(cells) - 1;
  if (r.dof < 1) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.chi2));
  return r;
}

double median(std::vector<double> xs) {
  require(!xs.empty(), "median of empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : (xs[k - 1] + xs[k]) / 2.0;
}

}  // namespace ffp
