// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "ffp/discrete.hpp"
#include "ffp/errors.hpp"
#include "ffp/scales.hpp"
#include "support/reference_sim.hpp"

namespace ffp {
namespace {

EngineConfig small_config(std::uint64_t seed, double lambda, double pi, std::int64_t hw) {
  EngineConfig cfg;
  cfg.lambda = lambda;
  cfg.pi = pi;
  cfg.half_width = hw;
  cfg.seed = seed;
  return cfg;
}

TEST(Discrete, TieOrder) {
  const ClockEvent p{1.0, 3, ClockKind::Propagate};
  const ClockEvent m{1.0, 3, ClockKind::Match};
  const ClockEvent s{1.0, 3, ClockKind::Seed};
  EXPECT_TRUE(fires_before(p, m));
  EXPECT_TRUE(fires_before(m, s));
  EXPECT_TRUE(fires_before(ClockEvent{1.0, 2, ClockKind::Seed}, p));
  EXPECT_TRUE(fires_before(ClockEvent{0.5, 9, ClockKind::Seed}, p));
  EXPECT_FALSE(fires_before(p, p));
}

TEST(Discrete, CreateUsesScaledBox) {
  const DiscreteFFP proc = DiscreteFFP::create(0.01, 10.0, 2.0, 1);
  EXPECT_EQ(proc.half_width(), 42);
  EXPECT_EQ(proc.config().n, 21);
  EXPECT_EQ(proc.at(0), SiteState::Vacant);
  EXPECT_EQ(proc.at(1000), SiteState::Vacant);
  EXPECT_THROW(DiscreteFFP::create(0.01, 10.0, -1.0, 1), ParameterError);
  EXPECT_THROW(DiscreteFFP::create(1e-12, 1.0, 1.0, 1), ResourceError);
}

TEST(Discrete, TransitionsAreLegal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DiscreteFFP proc(small_config(seed, 0.05, 3.0, 30));
    std::int64_t bad = 0;
    std::int64_t count = 0;
    double last = 0.0;
    proc.on_transition([&](const Transition& tr) {
      ++count;
      if (tr.time < last) ++bad;
      last = tr.time;
      const bool ok = (tr.from == SiteState::Vacant && tr.to == SiteState::Occupied &&
                       tr.cause == ClockKind::Seed && tr.source == tr.site) ||
                      (tr.from == SiteState::Occupied && tr.to == SiteState::Burning &&
                       tr.cause == ClockKind::Match && tr.source == tr.site) ||
                      (tr.from == SiteState::Occupied && tr.to == SiteState::Burning &&
                       tr.cause == ClockKind::Propagate && std::llabs(tr.source - tr.site) == 1) ||
                      (tr.from == SiteState::Burning && tr.to == SiteState::Vacant &&
                       tr.cause == ClockKind::Propagate && tr.source == tr.site);
      if (!ok) ++bad;
    });
    proc.advance_raw(60.0);
    EXPECT_EQ(bad, 0);
    EXPECT_GT(count, 100);
  }
}

TEST(Discrete, MatchesReferenceReplay) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const EngineConfig cfg = small_config(seed, 0.1, 2.0 + static_cast<double>(seed % 5), 12);
    std::vector<double> times;
    for (int k = 1; k <= 50; ++k) times.push_back(0.6 * k);
    const auto ref = testing::reference_replay(cfg, times);
    DiscreteFFP proc(cfg);
    for (std::size_t k = 0; k < times.size(); ++k) {
      proc.advance_raw(times[k]);
      ASSERT_EQ(testing::engine_state(proc), ref.states[k]) << "seed " << seed << " t " << times[k];
    }
  }
}

TEST(Discrete, ZObservableInvariants) {
  const double lambda = 0.01;
  const Scales s = compute_scales(lambda);
  ASSERT_LT(2 * s.m + 1, 1.0 / lambda);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DiscreteFFP proc = DiscreteFFP::create(lambda, 10.0, 3.0, seed);
    for (int k = 1; k <= 40; ++k) {
      proc.advance_to(0.1 * k);
      for (double x = -1.5; x <= 1.5; x += 0.05) {
        const ClusterObservables o = proc.observables(x);
        ASSERT_GE(o.Z, 0.0);
        ASSERT_LE(o.Z, 1.0);
        ASSERT_GE(o.K, 0.0);
        ASSERT_LE(o.K, 1.0);
        ASSERT_EQ(o.Z == 1.0, o.K == 1.0);
        ASSERT_GE(o.W, 0.0);
        ASSERT_LE(o.W, 1.0);
        ASSERT_EQ(o.cluster.has_value(), o.D.has_value());
      }
    }
  }
}

TEST(Discrete, ObservablesOracleOnHandState) {
  EngineConfig cfg = small_config(1, 0.0, 1.0, 10);
  cfg.seeds = false;
  cfg.n = 4;
  cfg.m = 2;
  cfg.a = 2.0;
  DiscreteFFP proc(cfg);
  proc.fill(SiteState::Occupied);
  auto o = proc.observables(0.0);
  ASSERT_TRUE(o.cluster);
  EXPECT_EQ(o.cluster->lo, -10);
  EXPECT_EQ(o.cluster->hi, 10);
  EXPECT_EQ(o.K, 1.0);
  EXPECT_EQ(o.Z, 1.0);
  EXPECT_DOUBLE_EQ(o.D->lo, -2.5);
  EXPECT_DOUBLE_EQ(o.W, std::min(std::log(21.0) / 2.0, 1.0));
  // Burn site 2: the window around 0 is {-2..2} with one burning site.
  ASSERT_TRUE(proc.ignite(2));
  EXPECT_FALSE(proc.ignite(2));
  o = proc.observables(0.0);
  EXPECT_DOUBLE_EQ(o.K, 0.8);
  EXPECT_DOUBLE_EQ(o.Z, std::log(5.0) / 2.0);
  EXPECT_EQ(o.cluster->hi, 1);
  EXPECT_EQ(proc.burning_count(), 1);
  EXPECT_THROW(proc.observables(100.0), ParameterError);
}

TEST(Discrete, SnapshotIsDeterministic) {
  auto run = [](std::uint64_t seed) {
    DiscreteFFP proc = DiscreteFFP::create(0.02, 5.0, 2.0, seed);
    proc.advance_to(1.7);
    return proc.snapshot();
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));
}

TEST(Discrete, AdvanceBackwardsRejected) {
  DiscreteFFP proc(small_config(1, 0.1, 1.0, 3));
  proc.advance_raw(2.0);
  EXPECT_THROW(proc.advance_raw(1.0), ParameterError);
}

TEST(Discrete, ExternalMatchesReplaceClocks) {
  EngineConfig cfg = small_config(4, 0.5, 1e6, 20);
  DiscreteFFP proc(cfg);
  proc.use_external_matches({{5.0, 0, ClockKind::Match}, {1.0, 99, ClockKind::Match}});
  std::vector<ClockEvent> seen;
  proc.on_event([&](const ClockEvent& e, bool) {
    if (e.kind == ClockKind::Match) seen.push_back(e);
  });
  proc.advance_raw(10.0);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].site, 0);
  EXPECT_EQ(seen[0].time, 5.0);
}

TEST(Discrete, ClusterSizeAtOriginIsZeroWhenVacant) {
  EngineConfig cfg = small_config(1, 0.0, 1.0, 5);
  cfg.seeds = false;
  DiscreteFFP proc(cfg);
  EXPECT_EQ(cluster_size_at_origin(proc, 3.0), 0);
}

}  // namespace
}  // namespace ffp
