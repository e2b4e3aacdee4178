// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ffp/discrete.hpp"
#include "ffp/metrics.hpp"
#include "ffp/rng.hpp"
#include "ffp/scales.hpp"
#include "ffp/stats.hpp"

namespace ffp {

// Master seed of run `run` of an experiment seeded with `seed`.
std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run);

struct CoupledRow {
  double t = 0.0;
  IntervalOrEmpty disc_D;
  double disc_Z = 0.0;
  double disc_W = 0.0;
  IntervalOrEmpty lim_D;
  double lim_value = 0.0;  // Z, or Y in the slow regime
  double delta = 0.0;      // delta(disc_D, lim_D)
  double value_gap = 0.0;  // |disc_Z - lim_value|; 0 in the slow regime
};

struct CoupledRun {
  double lambda = 0.0;
  double pi = 0.0;
  Regime regime;
  double A = 0.0;
  double T = 0.0;
  double x = 0.0;
  std::uint64_t seed = 0;
  Scales scales;
  MarkSet marks;
  std::int64_t marks_outside_box = 0;
  std::vector<ClockEvent> discrete_matches;  // every match the discrete engine consumed
  std::vector<CoupledRow> rows;
  double d_T = 0.0;
  double delta_T = 0.0;
};

// One shared mark set drives both the discrete process (mark (x,t) becomes a
// match at site floor(n x), raw time a t) and the limit process of `regime`.
CoupledRun coupled_run(double lambda, double pi, const Regime& regime, double A, double T,
                       int grid_points, std::uint64_t seed, double x = 0.0);

// Maps the consumed discrete matches back to cells and times and compares with
// the marks that fall inside the discrete box.
bool coupling_consistent(const CoupledRun& run);

struct ClusterDistOptions {
  double box_A = 8.0;
  int jobs = 1;
  int bins = 20;
};

struct ClusterDistResult {
  double lambda = 0.0;
  double pi = 0.0;
  double t = 0.0;
  double a_exp = 0.0;
  double b_exp = 0.0;
  std::vector<double> B;
  int runs = 0;
  std::uint64_t seed = 0;
  double box_A = 0.0;
  Scales scales;
  std::vector<std::int64_t> sizes;  // |C(0)| per run
  std::vector<double> W;
  std::vector<double> Z;
  ProbabilityEstimate nonempty;
  ProbabilityEstimate in_window;  // |C| in [lambda^-a, lambda^-b]
  std::vector<ProbabilityEstimate> tail;  // |C| >= B n, per B
  MeanEstimate scaled;  // |C| / n
  std::vector<double> W_hist;  // normalized on [0,1]
  std::vector<double> Z_hist;

  std::vector<double> scaled_sizes() const;
};

ClusterDistResult cluster_dist_experiment(double lambda, double pi, double t, double a, double b,
                                          const std::vector<double>& B, int runs,
                                          std::uint64_t seed, const ClusterDistOptions& opt = {});

struct BarrierOptions {
  double box_A = 1.0;
  int jobs = 1;
  double max_delay = 10.0;  // macroscopic; runs exceeding it are censored
};

struct BarrierResult {
  double lambda = 0.0;
  double pi = 0.0;
  Regime regime;
  double t0 = 0.0;
  double t1 = 0.0;
  int runs = 0;
  std::uint64_t seed = 0;
  double box_A = 0.0;
  std::vector<double> theta;               // NaN when censored
  std::vector<std::int64_t> destroyed;     // |C^P| per run; 0 if the origin was not occupied
  std::int64_t censored = 0;
  MeanEstimate summary;                    // over uncensored runs
};

// Drops a match on the origin at macroscopic time t1 and measures how long the
// component it destroys takes to be fully occupied again. For t0 = 0 the box
// starts vacant; for t0 > 1 it starts occupied and is swept by a fire lit at
// the origin at t0. No other matches occur.
BarrierResult barrier_height_experiment(double lambda, double pi, const Regime& regime, double t0,
                                        double t1, int runs, std::uint64_t seed,
                                        const BarrierOptions& opt = {});

struct FrontRow {
  double horizon = 0.0;  // raw
  double expected = 0.0; // pi * horizon
  MeanEstimate right;
  MeanEstimate left;     // of -i^-
  double correlation = 0.0;
  GofResult gof_right;   // increments since the previous horizon
  GofResult gof_left;
};

struct FrontStatsResult {
  double pi = 0.0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::int64_t truncated = 0;
  std::vector<FrontRow> rows;
};

FrontStatsResult front_statistics(double pi, const std::vector<double>& horizons, int runs,
                                  std::uint64_t seed, int jobs = 1);

}  // namespace ffp
