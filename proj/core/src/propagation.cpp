// SPDX-License-Identifier: Apache-2.0
#include "ffp/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ffp/discrete.hpp"
#include "ffp/errors.hpp"

namespace ffp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t front_at(const std::vector<FrontStep>& steps, double t) {
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](double v, const FrontStep& s) { return v < s.time; });
  return it == steps.begin() ? 0 : std::prev(it)->position;
}

}  // namespace

std::int64_t PropagationRun::right_front(double t_raw) const { return front_at(right, t_raw); }
std::int64_t PropagationRun::left_front(double t_raw) const { return front_at(left, t_raw); }

double PropagationRun::burn_time_of(std::int64_t site) const {
  if (site < -box_radius || site > box_radius) return kNaN;
  return burn_time[static_cast<std::size_t>(site + box_radius)];
}

std::int64_t suggested_box_radius(double pi, double a, double T_macro) {
  const double mean = pi * a * T_macro;
  return static_cast<std::int64_t>(std::ceil(mean + 10.0 * std::sqrt(mean))) + 1;
}

PropagationRun run_propagation(double pi, double T_macro, double a, std::int64_t box_radius,
                               std::uint64_t seed) {
  require(pi > 0.0 && std::isfinite(pi), "pi must be positive");
  require(T_macro >= 0.0 && std::isfinite(T_macro), "horizon must be nonnegative");
  require(a > 0.0 && std::isfinite(a), "time scale must be positive");
  require(box_radius >= 1, "box radius must be >= 1");
  EngineConfig cfg;
  cfg.lambda = 0.0;
  cfg.pi = pi;
  cfg.half_width = box_radius;
  cfg.seed = seed;
  cfg.a = a;
  DiscreteFFP proc(cfg);
  proc.fill(SiteState::Occupied);

  PropagationRun run;
  run.pi = pi;
  run.a = a;
  run.horizon = a * T_macro;
  run.box_radius = box_radius;
  run.seed = seed;
  const auto count = static_cast<std::size_t>(2 * box_radius + 1);
  run.burn_time.assign(count, kNaN);
  run.first_extinction.assign(count, kNaN);
  run.first_regrowth.assign(count, kNaN);
  std::vector<std::size_t> open_spark(count, SIZE_MAX);
  std::int64_t hi = 0;
  std::int64_t lo = 0;

  proc.on_transition([&](const Transition& tr) {
    const auto k = static_cast<std::size_t>(tr.site + box_radius);
    if (tr.to == SiteState::Burning) {
      if (std::isnan(run.burn_time[k])) {
        run.burn_time[k] = tr.time;
        if (tr.site > hi) {
          hi = tr.site;
          run.right.push_back({tr.time, hi});
        } else if (tr.site < lo) {
          lo = tr.site;
          run.left.push_back({tr.time, lo});
        }
        if (tr.site == box_radius || tr.site == -box_radius) run.truncated = true;
      } else {
        open_spark[k] = run.sparks.size();
        run.sparks.push_back({tr.site, tr.time, kInf});
      }
    } else if (tr.from == SiteState::Burning) {
      if (std::isnan(run.first_extinction[k])) run.first_extinction[k] = tr.time;
      if (open_spark[k] != SIZE_MAX) {
        run.sparks[open_spark[k]].end = tr.time;
        open_spark[k] = SIZE_MAX;
      }
    } else if (tr.to == SiteState::Occupied) {
      if (!std::isnan(run.first_extinction[k]) && std::isnan(run.first_regrowth[k]))
        run.first_regrowth[k] = tr.time;
    }
  });
  proc.ignite(0);
  proc.advance_raw(run.horizon);
  return run;
}

Omega1Tally omega1_tally(const PropagationRun& run) {
  Omega1Tally tally;
  const std::int64_t R = run.box_radius;
  auto idx = [R](std::int64_t s) { return static_cast<std::size_t>(s + R); };
  for (std::int64_t i = -R + 1; i <= R - 1; ++i) {
    if (i == 0) continue;
    const std::int64_t outer = i > 0 ? i + 1 : i - 1;
    const double out_ext = run.first_extinction[idx(outer)];
    const double own_ext = run.first_extinction[idx(i)];
    if (std::isnan(out_ext) || std::isnan(own_ext)) continue;
    const double regrow = run.first_regrowth[idx(i)];
    ++tally.sites;
    if (std::isnan(regrow) || regrow > out_ext) ++tally.hits;
  }
  return tally;
}

}  // namespace ffp
