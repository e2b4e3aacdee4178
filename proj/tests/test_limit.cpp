// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ffp/errors.hpp"
#include "ffp/limit.hpp"
#include "ffp/rng.hpp"

namespace ffp {
namespace {

constexpr double kTol = 1e-12;

void expect_interval(const IntervalOrEmpty& got, double lo, double hi) {
  ASSERT_TRUE(got.has_value());
  EXPECT_NEAR(got->lo, lo, 1e-12);
  EXPECT_NEAR(got->hi, hi, 1e-12);
}

TEST(LimitP, NoMarks) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 3.0, {});
  EXPECT_TRUE(st.events.empty());
  for (double t : {0.0, 0.3, 0.99, 1.0, 2.5}) {
    for (double x : {-2.0, -0.7, 0.0, 1.3, 2.0}) {
      const LimitQuery q = query_limit(st, x, t);
      EXPECT_DOUBLE_EQ(q.value, std::min(t, 1.0));
      EXPECT_EQ(q.H, 0.0);
      if (t < 1.0) {
        expect_interval(q.D, x, x);
      } else {
        expect_interval(q.D, -2.0, 2.0);
      }
    }
  }
}

TEST(LimitP, MicroscopicMarkBuildsBarrier) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 3.0, {{0.5, 0.7}});
  ASSERT_EQ(st.barriers.size(), 1u);
  EXPECT_DOUBLE_EQ(st.barriers[0].expiry, 1.4);
  ASSERT_EQ(st.events.size(), 2u);
  EXPECT_EQ(st.events[0].outcome, "microscopic");
  EXPECT_EQ(st.events[1].kind, LimitEventKind::BarrierExpiry);
  expect_interval(query_limit(st, 0.0, 1.2).D, -2.0, 0.5);
  expect_interval(query_limit(st, 1.0, 1.2).D, 0.5, 2.0);
  EXPECT_NEAR(query_limit(st, 0.5, 1.2).H, 0.2, kTol);
  expect_interval(query_limit(st, 0.0, 1.5).D, -2.0, 2.0);
  EXPECT_EQ(query_limit(st, 0.5, 1.5).H, 0.0);
}

TEST(LimitP, MacroscopicMarkSpawnsTwoFronts) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 5.0, {{0.0, 1.5}});
  ASSERT_EQ(st.fronts.size(), 2u);
  // Behind the fronts Z = min(t - t1 - p|x - x1|, 1); ahead Z = 1.
  EXPECT_NEAR(query_limit(st, 0.3, 2.5).value, 0.7, kTol);
  EXPECT_NEAR(query_limit(st, -0.3, 2.5).value, 0.7, kTol);
  EXPECT_EQ(query_limit(st, 1.5, 2.5).value, 1.0);
  EXPECT_NEAR(query_limit(st, 0.0, 1.5).value, 0.0, kTol);
  expect_interval(query_limit(st, 1.9, 2.5).D, 1.0, 2.0);
  expect_interval(query_limit(st, -1.9, 2.5).D, -2.0, -1.0);
  expect_interval(query_limit(st, 0.0, 4.0).D, -1.5, 1.5);
  EXPECT_EQ(front_count(st, 1.0, 2.5), 1);
  EXPECT_EQ(front_count(st, 0.0, 1.5), 1);  // twin fronts share one mark
  EXPECT_EQ(front_count(st, 0.5, 2.5), 0);
  // Both fronts die at the box edge at t = 3.5, left one first.
  ASSERT_EQ(st.events.size(), 3u);
  for (int k : {1, 2}) {
    EXPECT_EQ(st.events[k].kind, LimitEventKind::FrontStopped);
    EXPECT_EQ(st.events[k].outcome, "edge");
    EXPECT_NEAR(st.events[k].time, 3.5, kTol);
  }
  EXPECT_EQ(st.events[1].x, -2.0);
  EXPECT_EQ(st.events[2].x, 2.0);
}

TEST(LimitP, OpposingFrontsMeet) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 4.0, {{-1.0, 1.2}, {1.0, 1.3}});
  const auto it = std::find_if(st.events.begin(), st.events.end(), [](const LimitEvent& e) {
    return e.kind == LimitEventKind::FrontMeetsFront;
  });
  ASSERT_NE(it, st.events.end());
  EXPECT_NEAR(it->time, 2.25, kTol);
  EXPECT_NEAR(it->x, 0.05, kTol);
  EXPECT_EQ(front_count(st, 0.05, 2.25), 2);
  // Reset profile is the lower envelope of the two cones.
  EXPECT_NEAR(query_limit(st, 0.0, 3.0).value, 3.0 - 2.2, kTol);
  EXPECT_EQ(query_limit(st, 0.5, 3.0).value, 1.0);
  EXPECT_NEAR(query_limit(st, 0.5, 2.5).value, 2.5 - 1.8, kTol);
}

TEST(LimitP, BarrierAndProfileStops) {
  const MarkSet marks{{0.0, 0.9}, {-0.5, 1.0}, {0.5, 1.6}};
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 4.0, marks);
  struct Want {
    double t;
    LimitEventKind kind;
    double x;
    const char* outcome;
  };
  const std::vector<Want> want{
      {0.9, LimitEventKind::MarkArrival, 0.0, "microscopic"},
      {1.0, LimitEventKind::MarkArrival, -0.5, "macroscopic"},
      {1.5, LimitEventKind::FrontStopped, 0.0, "barrier"},
      {1.6, LimitEventKind::MarkArrival, 0.5, "macroscopic"},
      {1.8, LimitEventKind::BarrierExpiry, 0.0, ""},
      {2.1, LimitEventKind::FrontStopped, 0.0, "profile"},
      {2.5, LimitEventKind::FrontStopped, -2.0, "edge"},
      {3.1, LimitEventKind::FrontStopped, 2.0, "edge"},
  };
  ASSERT_EQ(st.events.size(), want.size()) << st.event_log_json();
  for (std::size_t k = 0; k < want.size(); ++k) {
    EXPECT_NEAR(st.events[k].time, want[k].t, kTol) << k;
    EXPECT_EQ(st.events[k].kind, want[k].kind) << k;
    EXPECT_NEAR(st.events[k].x, want[k].x, kTol) << k;
    EXPECT_EQ(st.events[k].outcome, want[k].outcome) << k;
  }
  expect_interval(query_limit(st, 1.5, 2.0).D, 0.9, 2.0);
  EXPECT_NEAR(query_limit(st, 0.0, 1.2).H, 0.6, kTol);
}

TEST(LimitP, AbsorbedMarkOnActiveBarrier) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 3.0, {{0.25, 0.5}, {0.25, 0.75}});
  ASSERT_GE(st.events.size(), 2u);
  EXPECT_EQ(st.events[1].outcome, "absorbed");
  EXPECT_EQ(st.barriers.size(), 1u);
}

TEST(LimitP, RejectsBadMarks) {
  EXPECT_THROW(simulate_alffp_p(1.0, 2.0, 3.0, {{0.0, 2.0}, {0.0, 1.0}}), ParameterError);
  EXPECT_THROW(simulate_alffp_p(1.0, 2.0, 3.0, {{2.5, 1.0}}), ParameterError);
  EXPECT_THROW(simulate_alffp_p(1.0, 2.0, 3.0, {{0.0, 3.5}}), ParameterError);
  EXPECT_THROW(simulate_alffp_p(0.0, 2.0, 3.0, {}), ParameterError);
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 3.0, {});
  EXPECT_THROW(query_limit(st, 2.5, 1.0), ParameterError);
  EXPECT_THROW(query_limit(st, 0.0, 3.5), ParameterError);
}

TEST(LimitZero, InstantaneousDestruction) {
  const LimitStateP st = simulate_lffp_0(2.0, 3.0, {{0.0, 1.5}});
  EXPECT_TRUE(st.fronts.empty());
  for (double x : {-2.0, -1.0, 0.0, 1.99})
    EXPECT_NEAR(query_limit(st, x, 1.5).value, 0.0, kTol) << x;
  EXPECT_NEAR(query_limit(st, 0.7, 2.0).value, 0.5, kTol);
}

TEST(LimitZero, BarrierBoundsTheDestroyedCluster) {
  const LimitStateP st = simulate_lffp_0(2.0, 3.0, {{0.5, 0.8}, {-1.0, 1.2}});
  EXPECT_EQ(query_limit(st, 1.0, 1.3).value, 1.0);
  EXPECT_NEAR(query_limit(st, 0.0, 1.3).value, 0.1, kTol);
  EXPECT_NEAR(query_limit(st, -2.0, 1.3).value, 0.1, kTol);
}

TEST(LimitInf, FeatureValues) {
  LimitStateInf st = simulate_lffp_inf(0.6, 2.0, 3.0, {{0.3, 0.4}});
  ASSERT_EQ(st.features.size(), 1u);
  EXPECT_FALSE(st.features[0].permanent);
  EXPECT_NEAR(query_limit(st, 0.3, 0.5).value, 0.3, kTol);
  EXPECT_EQ(query_limit(st, 0.3, 0.8).value, 0.0);
  st = simulate_lffp_inf(0.6, 2.0, 3.0, {{0.3, 0.7}});
  EXPECT_TRUE(st.features[0].permanent);
  for (double t : {0.7, 1.0, 2.9}) EXPECT_EQ(query_limit(st, 0.3, t).value, 1.0);
  st = simulate_lffp_inf(0.0, 2.0, 3.0, {{0.3, 0.1}, {-1.0, 0.2}});
  for (const auto& f : st.features) EXPECT_TRUE(f.permanent);
}

TEST(LimitInf, ClusterQueries) {
  const LimitStateInf st = simulate_lffp_inf(0.5, 2.0, 3.0, {{-0.4, 0.6}, {0.9, 0.7}});
  expect_interval(query_limit(st, 0.0, 2.0).D, -0.4, 0.9);
  expect_interval(query_limit(st, 0.0, 0.5).D, 0.0, 0.0);
  expect_interval(query_limit(st, 1.5, 2.0).D, 0.9, 2.0);
  EXPECT_THROW(simulate_lffp_inf(1.5, 2.0, 3.0, {}), ParameterError);
}

TEST(LimitInf, ClusterShrinksAfterTwoZ0) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rs(seed, 77);
    const MarkSet marks = poisson_rectangle(rs, -3.0, 3.0, 0.0, 3.0);
    const double z0 = 0.1 + 0.8 * RngStream(seed, 78).uniform();
    const LimitStateInf st = simulate_lffp_inf(z0, 3.0, 3.0, marks);
    for (double x : {-1.0, 0.0, 0.7}) {
      double prev = 1e9;
      for (double t = std::max(2.0 * z0, 1.0); t <= 3.0; t += 0.01) {
        const double len = query_limit(st, x, t).D->length();
        ASSERT_LE(len, prev + 1e-12) << seed;
        prev = len;
      }
    }
  }
}

TEST(LimitInf, GammaSampler) {
  EXPECT_THROW(sample_cluster_length_inf(0.5, 1.0, 10, 1), ParameterError);
  const auto xs = sample_cluster_length_inf(0.5, 2.0, 20000, 3);
  double s = 0.0;
  for (double v : xs) s += v;
  EXPECT_NEAR(s / 20000.0, 4.0 / 3.0, 5.0 * std::sqrt(2.0) / 1.5 / std::sqrt(20000.0));
  EXPECT_EQ(xs, sample_cluster_length_inf(0.5, 2.0, 20000, 3));
}

TEST(LimitInf, Gamma2CdfAgainstSeries) {
  // 1 - e^{-y}(1 + y), evaluated through the regularized incomplete gamma series.
  for (double rate : {0.5, 1.5, 4.0}) {
    for (double x : {0.01, 0.3, 1.0, 2.5, 10.0}) {
      const double y = rate * x;
      double term = std::exp(-y) * y * y / 2.0;
      double sum = term;
      for (int k = 3; k < 200; ++k) {
        term *= y / k;
        sum += term;
      }
      EXPECT_NEAR(gamma2_cdf(x, rate), sum, 1e-13);
    }
  }
  EXPECT_EQ(gamma2_cdf(-1.0, 1.0), 0.0);
}

// Random-mark properties of the event engine.
class LimitProperties : public ::testing::TestWithParam<double> {};

TEST_P(LimitProperties, EventLogInvariants) {
  const double p = GetParam();
  const double A = 2.0;
  const double T = 4.0;
  int stops = 0;
  int meets = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RngStream rs(seed, 0x11);
    const MarkSet marks = poisson_rectangle(rs, -A, A, 0.0, T);
    const LimitStateP st = simulate_alffp_p(p, A, T, marks);
    for (std::size_t k = 0; k < st.events.size(); ++k) {
      const LimitEvent& e = st.events[k];
      ASSERT_LE(e.time, T);
      if (k) {
        const LimitEvent& f = st.events[k - 1];
        ASSERT_LE(f.time, e.time + 1e-12);
        if (std::abs(f.time - e.time) <= 1e-12) {
          ASSERT_TRUE(f.kind < e.kind || (f.kind == e.kind && f.x <= e.x));
        }
      }
      if (e.kind == LimitEventKind::FrontStopped) {
        ++stops;
        const Front& fr = st.fronts[static_cast<std::size_t>(e.fronts.at(0))];
        ASSERT_NEAR(e.time, fr.t0 + p * std::abs(e.x - fr.x0), 1e-9);
        bool chi0 = false;
        if (e.outcome == "edge") chi0 = std::abs(std::abs(e.x) - A) <= 1e-12;
        if (e.outcome == "barrier") {
          for (const Barrier& b : st.barriers)
            chi0 |= std::abs(b.x - e.x) <= 1e-12 && b.created <= e.time && b.expiry > e.time;
        }
        if (e.outcome == "profile") {
          // Profile just before the event, on the side the front was entering.
          ResetProfile prof(A);
          for (const auto& pc : st.snapshots[k].pieces) prof.assign(pc.lo, pc.hi, pc);
          const double y = e.x + fr.dir * 1e-9;
          chi0 = e.time - prof.at(y) < 1.0 + 1e-6;
        }
        ASSERT_TRUE(chi0) << "seed " << seed << " event " << k;
      }
      if (e.kind == LimitEventKind::FrontMeetsFront) {
        ++meets;
        ASSERT_EQ(e.fronts.size(), 2u);
        for (int f : e.fronts) {
          const Front& fr = st.fronts[static_cast<std::size_t>(f)];
          ASSERT_NEAR(e.time, fr.t0 + p * std::abs(e.x - fr.x0), 1e-9);
          ASSERT_TRUE(cone_contains(p, {e.x, e.time}, {fr.x0, fr.t0}, ConeDirection::Past));
        }
        ASSERT_EQ(front_count(st, e.x, e.time, 1e-9), 2);
      }
    }
    for (const Barrier& b : st.barriers) {
      const ResetProfile prof = st.profile_at(b.created);
      ASSERT_NEAR(b.expiry - b.created, std::min(b.created - prof.at(b.x), 1.0), 1e-9);
    }
  }
  EXPECT_GT(stops, 50);
  EXPECT_GT(meets, 5);
}

TEST_P(LimitProperties, ZDynamicsOnGrid) {
  const double p = GetParam();
  const double A = 2.0;
  const double T = 4.0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    RngStream rs(seed, 0x12);
    const LimitStateP st = simulate_alffp_p(p, A, T, poisson_rectangle(rs, -A, A, 0.0, T));
    const double h = 1e-3;
    for (double x = -A; x <= A; x += 0.173) {
      for (double t = 0.0; t + h <= T; t += 0.0571) {
        const LimitQuery a = query_limit(st, x, t);
        const LimitQuery b = query_limit(st, x, t + h);
        ASSERT_GE(a.value, 0.0);
        ASSERT_LE(a.value, 1.0);
        ASSERT_GE(a.H, 0.0);
        // Z grows at unit rate until it saturates, unless a front resets it.
        ASSERT_LE(b.value, std::min(a.value + h, 1.0) + 1e-9);
        const double rho_a = st.profile_at(t).at(x);
        const double rho_b = st.profile_at(t + h).at(x);
        if (rho_a == rho_b) {
          ASSERT_NEAR(b.value, std::min(a.value + h, 1.0), 1e-9);
        }
        if (a.D) {
          ASSERT_LE(a.D->lo, x);
          ASSERT_GE(a.D->hi, x);
          ASSERT_GE(a.D->lo, -A);
          ASSERT_LE(a.D->hi, A);
        }
      }
    }
    // Live fronts lie on their cone and count once.
    for (double t = 0.05; t < T; t += 0.1) {
      for (int f : st.live_fronts_at(t)) {
        const Front& fr = st.fronts[static_cast<std::size_t>(f)];
        const double x = fr.position(t, p);
        ASSERT_TRUE(cone_contains(p, {x, t}, {fr.x0, fr.t0}, ConeDirection::Past));
        ASSERT_GE(front_count(st, x, t, 1e-9), 1);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Slopes, LimitProperties, ::testing::Values(0.3, 1.0, 2.5));

TEST(LimitZero, AgreesWithSmallP) {
  const double A = 2.0;
  const double T = 3.0;
  auto gap = [&](double p) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RngStream rs(seed, 0x13);
      const MarkSet marks = poisson_rectangle(rs, -A, A, 0.0, T);
      const LimitStateP a = simulate_alffp_p(p, A, T, marks);
      const LimitStateP b = simulate_lffp_0(A, T, marks);
      Trajectory ta;
      Trajectory tb;
      ta.grid = tb.grid = uniform_grid(T, 256);
      for (double t : ta.grid) {
        ta.points.push_back({0.0, query_limit(a, 0.0, t).D});
        tb.points.push_back({0.0, query_limit(b, 0.0, t).D});
      }
      total += d_T(ta, tb, T);
    }
    return total / 10.0;
  };
  const double g1 = gap(0.1);
  const double g3 = gap(0.001);
  EXPECT_LT(g3, g1);
}

TEST(LimitP, EventLogJson) {
  const LimitStateP st = simulate_alffp_p(1.0, 2.0, 3.0, {{0.0, 1.5}});
  const std::string j = st.event_log_json();
  EXPECT_NE(j.find("\"format\":\"ffp-limit-events/1\""), std::string::npos);
  EXPECT_NE(j.find("\"kind\":\"mark_arrival\""), std::string::npos);
  EXPECT_EQ(j, simulate_alffp_p(1.0, 2.0, 3.0, {{0.0, 1.5}}).event_log_json());
}

}  // namespace
}  // namespace ffp
