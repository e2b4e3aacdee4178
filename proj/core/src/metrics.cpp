// SPDX-License-Identifier: Apache-2.0
#include "ffp/metrics.hpp"

#include <cmath>

#include "ffp/errors.hpp"

namespace ffp {

IntervalOrEmpty make_interval(double lo, double hi) {
  require(lo <= hi, "interval needs lo <= hi");
  return Interval{lo, hi};
}

double delta_interval(const IntervalOrEmpty& I, const IntervalOrEmpty& J) {
  if (I && J) return std::abs(I->lo - J->lo) + std::abs(I->hi - J->hi);
  if (I) return std::abs(I->hi - I->lo);
  if (J) return std::abs(J->hi - J->lo);
  return 0.0;
}

std::vector<double> uniform_grid(double T, int points) {
  require(T > 0.0 && std::isfinite(T), "grid horizon must be positive");
  require(points >= 1, "grid needs at least one point");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = T * k / points;
  return g;
}

namespace {

double integrate(const Trajectory& a, const Trajectory& b, double T, bool with_values) {
  require(a.grid == b.grid, "trajectories must share a grid");
  require(a.points.size() == a.grid.size() && b.points.size() == b.grid.size(),
          "trajectory sample count must match its grid");
  const auto& g = a.grid;
  require(!g.empty() && g.front() == 0.0, "grid must start at 0");
  require(g.back() <= T, "grid must lie inside [0,T]");
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double next = k + 1 < g.size() ? g[k + 1] : T;
    require(next >= g[k] && (k + 1 == g.size() || next > g[k]), "grid must be strictly increasing");
    double f = delta_interval(a.points[k].interval, b.points[k].interval);
    if (with_values) f += std::abs(a.points[k].value - b.points[k].value);
    total += f * (next - g[k]);
  }
  return total;
}

}  // namespace

double d_T(const Trajectory& a, const Trajectory& b, double T) { return integrate(a, b, T, true); }

double delta_T(const Trajectory& a, const Trajectory& b, double T) {
  return integrate(a, b, T, false);
}

bool cone_contains(double p, SpaceTime apex, SpaceTime query, ConeDirection dir) {
  require(p >= 0.0, "cone slope must be nonnegative");
  const double dist = std::abs(query.x - apex.x);
  if (dir == ConeDirection::Past) {
    const double s = apex.t - p * dist;
    return std::abs(query.t - s) <= kConeTolerance && query.t >= -kConeTolerance;
  }
  const double s = apex.t + p * dist;
  return std::abs(query.t - s) <= kConeTolerance && apex.t >= -kConeTolerance;
}

bool segment_clear(double p, SpaceTime apex, SpaceTime from,
                   const std::function<bool(double, double)>& clear, int samples) {
  require(samples >= 1, "segment_clear needs at least one sample");
  require(cone_contains(p, apex, from, ConeDirection::Past), "segment endpoint not on the cone");
  for (int k = 0; k < samples; ++k) {
    const double u = static_cast<double>(k) / samples;
    if (!clear(from.x + (apex.x - from.x) * u, from.t + (apex.t - from.t) * u)) return false;
  }
  return true;
}

}  // namespace ffp
