// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace ffp {

struct FrontStep {
  double time = 0.0;  // raw units
  std::int64_t position = 0;
};

struct Spark {
  std::int64_t site = 0;
  double start = 0.0;
  double end = 0.0;  // +inf if still burning at the horizon
};

// Fire ignited at site 0 at time 0 in a fully occupied box, seeds at rate 1,
// no matches. All times are raw.
struct PropagationRun {
  double pi = 0.0;
  double a = 1.0;
  double horizon = 0.0;  // raw
  std::int64_t box_radius = 0;
  std::uint64_t seed = 0;
  bool truncated = false;  // a front reached the box edge
  // Jump records of i^+ (nondecreasing) and i^- (nonincreasing), excluding t=0.
  std::vector<FrontStep> right;
  std::vector<FrontStep> left;
  // Per site, index site + box_radius. NaN when the event did not happen.
  std::vector<double> burn_time;         // first time Burning
  std::vector<double> first_extinction;  // first time Burning -> Vacant
  std::vector<double> first_regrowth;    // first seed after first extinction
  std::vector<Spark> sparks;

  std::int64_t right_front(double t_raw) const;
  std::int64_t left_front(double t_raw) const;
  double burn_time_of(std::int64_t site) const;
};

std::int64_t suggested_box_radius(double pi, double a, double T_macro);

PropagationRun run_propagation(double pi, double T_macro, double a, std::int64_t box_radius,
                               std::uint64_t seed);

// Outcome of the no-spark pattern at each interior site i != 0: site i stays
// vacant from its first extinction until its outer neighbour first goes out.
// Sites whose neighbour has not gone out by the horizon are skipped.
struct Omega1Tally {
  std::int64_t sites = 0;
  std::int64_t hits = 0;
  double fraction() const { return sites > 0 ? static_cast<double>(hits) / sites : 0.0; }
};
Omega1Tally omega1_tally(const PropagationRun& run);

}  // namespace ffp
