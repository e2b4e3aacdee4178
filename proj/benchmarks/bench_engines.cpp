// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "ffp/discrete.hpp"
#include "ffp/harness.hpp"
#include "ffp/limit.hpp"
#include "ffp/propagation.hpp"

namespace {

// Discrete engine over a macroscopic box of half-width 2; range(0) = -log lambda.
void BM_DiscreteAdvance(benchmark::State& state) {
  const double lambda = std::exp(-static_cast<double>(state.range(0)));
  const double pi = ffp::pi_for_regime(lambda, ffp::Regime::intermediate(1.0));
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    ffp::DiscreteFFP proc = ffp::DiscreteFFP::create(lambda, pi, 2.0, ++seed);
    proc.advance_to(2.0);
    events += proc.event_count();
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_DiscreteAdvance)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Propagation(benchmark::State& state) {
  const double pi = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto run = ffp::run_propagation(pi, 2.0, 1.0, ffp::suggested_box_radius(pi, 1.0, 2.0), ++seed);
    benchmark::DoNotOptimize(run.right.size());
  }
}
BENCHMARK(BM_Propagation)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

// Limit engine on a random mark set; range(0) is the box half-width.
void BM_LimitP(benchmark::State& state) {
  const double A = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ffp::RngStream rs(++seed, 1);
    const ffp::MarkSet marks = ffp::poisson_rectangle(rs, -A, A, 0.0, 4.0);
    const auto st = ffp::simulate_alffp_p(1.0, A, 4.0, marks);
    benchmark::DoNotOptimize(st.events.size());
  }
}
BENCHMARK(BM_LimitP)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_LimitZero(benchmark::State& state) {
  const double A = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ffp::RngStream rs(++seed, 2);
    const auto st = ffp::simulate_lffp_0(A, 4.0, ffp::poisson_rectangle(rs, -A, A, 0.0, 4.0));
    benchmark::DoNotOptimize(st.events.size());
  }
}
BENCHMARK(BM_LimitZero)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_CoupledRun(benchmark::State& state) {
  const double lambda = std::exp(-6.0);
  const ffp::Regime r = ffp::Regime::intermediate(1.0);
  const double pi = ffp::pi_for_regime(lambda, r);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ffp::coupled_run(lambda, pi, r, 2.0, 2.0, 512, ++seed).d_T);
}
BENCHMARK(BM_CoupledRun)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
