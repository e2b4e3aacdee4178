// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ffp/errors.hpp"
#include "ffp/rng.hpp"

namespace ffp {
namespace {

TEST(Rng, StreamIsAFunctionOfSeedAndId) {
  RngStream a(7, 11);
  RngStream b(7, 11);
  RngStream c(7, 12);
  RngStream d(8, 11);
  bool differs_c = false;
  bool differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  EXPECT_TRUE(differs_c);
  EXPECT_TRUE(differs_d);
}

TEST(Rng, KnownSplitmixOutput) {
  // Reference value of the splitmix64 finalizer applied to 0x9E3779B97F4A7C15.
  EXPECT_EQ(mix64(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, StreamKeyIsOrderSensitive) {
  EXPECT_NE(stream_key({1, 2}), stream_key({2, 1}));
  EXPECT_EQ(stream_key({1, 2}), stream_key({1, 2}));
}

TEST(Rng, UniformStaysInHalfOpenUnitInterval) {
  RngStream s(1, 2);
  double sum = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / N, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / N));
}

TEST(Rng, ExponentialMeanAndErrors) {
  RngStream s(3, 4);
  const int N = 200000;
  const double rate = 2.5;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += s.exponential(rate);
  EXPECT_NEAR(sum / N, 1.0 / rate, 5.0 / rate / std::sqrt(N));
  EXPECT_THROW(s.exponential(0.0), ParameterError);
  EXPECT_DOUBLE_EQ(exp_from_uniform(1.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(exp_from_uniform(std::exp(-2.0), 4.0), 0.5);
}

TEST(Rng, ChildIgnoresDrawPosition) {
  RngStream a(5, 6);
  RngStream b(5, 6);
  for (int i = 0; i < 10; ++i) b.next_u64();
  EXPECT_EQ(a.child(9).next_u64(), b.child(9).next_u64());
}

TEST(Rng, PoissonRectangleSortedInsideAndCorrectMean) {
  double total = 0.0;
  const int R = 2000;
  for (int r = 0; r < R; ++r) {
    RngStream s(10, static_cast<std::uint64_t>(r));
    const MarkSet m = poisson_rectangle(s, -1.5, 2.5, 0.5, 3.0);
    for (std::size_t k = 0; k < m.size(); ++k) {
      ASSERT_GE(m[k].x, -1.5);
      ASSERT_LT(m[k].x, 2.5);
      ASSERT_GE(m[k].t, 0.5);
      ASSERT_LT(m[k].t, 3.0);
      if (k) {
        ASSERT_LT(m[k - 1].t, m[k].t);
      }
    }
    total += static_cast<double>(m.size());
  }
  const double area = 4.0 * 2.5;
  EXPECT_NEAR(total / R, area, 5.0 * std::sqrt(area / R));
}

TEST(Rng, PoissonClockCursorMatchesEnumeration) {
  for (std::uint64_t id = 0; id < 50; ++id) {
    PoissonClock c(99, id, 3.7);
    const auto pts = c.points_before(20.0);
    std::vector<double> walked;
    double s = 0.0;
    for (;;) {
      s = c.next_after(s);
      if (s >= 20.0) break;
      walked.push_back(s);
    }
    ASSERT_EQ(pts, walked);
    for (std::size_t k = 1; k < pts.size(); ++k) ASSERT_LT(pts[k - 1], pts[k]);
  }
}

TEST(Rng, PoissonClockNextAfterSkipsAhead) {
  PoissonClock c(1, 1, 1.0);
  const auto pts = PoissonClock(1, 1, 1.0).points_before(50.0);
  ASSERT_GT(pts.size(), 10u);
  // Query from the middle of the sequence without visiting earlier points.
  const double q = pts[7];
  EXPECT_EQ(c.next_after(q), pts[8]);
  EXPECT_EQ(c.next_after(q + 0.0), pts[8]);
}

TEST(Rng, PoissonClockRateAndZeroRate) {
  const double rate = 2.0;
  double total = 0.0;
  const int R = 500;
  for (int r = 0; r < R; ++r)
    total += static_cast<double>(PoissonClock(4, static_cast<std::uint64_t>(r), rate).points_before(10.0).size());
  EXPECT_NEAR(total / R, 20.0, 5.0 * std::sqrt(20.0 / R));
  PoissonClock z(1, 2, 0.0);
  EXPECT_TRUE(std::isinf(z.next_after(0.0)));
  EXPECT_TRUE(z.points_before(100.0).empty());
}

}  // namespace
}  // namespace ffp
