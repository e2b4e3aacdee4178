// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace ffp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};
// Empty is std::nullopt. Nonempty intervals satisfy lo <= hi.
using IntervalOrEmpty = std::optional<Interval>;

IntervalOrEmpty make_interval(double lo, double hi);

// |a-c| + |b-d|; |b-a| against the empty set; 0 for two empty sets.
double delta_interval(const IntervalOrEmpty& I, const IntervalOrEmpty& J);

struct PathPoint {
  double value = 0.0;
  IntervalOrEmpty interval;
};

// A (value, interval) path sampled on a strictly increasing grid starting at 0.
struct Trajectory {
  std::vector<double> grid;
  std::vector<PathPoint> points;
};

// k T / points for k = 0..points-1.
std::vector<double> uniform_grid(double T, int points = 512);

// Left-Riemann sums of |x-y| + delta(I,J) (d_T) and of delta alone (delta_T)
// over [0,T]; the last grid cell extends to T.
double d_T(const Trajectory& a, const Trajectory& b, double T);
double delta_T(const Trajectory& a, const Trajectory& b, double T);

struct SpaceTime {
  double x = 0.0;
  double t = 0.0;
};

enum class ConeDirection { Past, Future };

inline constexpr double kConeTolerance = 1e-9;

// Past: s = t - p|y-x| and s >= 0. Future: s = t + p|y-x| and t >= 0.
// For p = 0 both degenerate to the horizontal line through the apex.
bool cone_contains(double p, SpaceTime apex, SpaceTime query, ConeDirection dir);

// Evaluates `clear` at `samples` evenly spaced points of the cone segment
// from `from` (inclusive) toward `apex` (exclusive). Both endpoints must lie on
// a common slope-p line.
bool segment_clear(double p, SpaceTime apex, SpaceTime from,
                   const std::function<bool(double x, double t)>& clear, int samples = 1024);

}  // namespace ffp
