// SPDX-License-Identifier: Apache-2.0
#include "ffp/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>

#include "ffp/errors.hpp"
#include "ffp/scales.hpp"

namespace ffp {

const char* to_string(SiteState s) {
  switch (s) {
    case SiteState::Vacant: return "vacant";
    case SiteState::Occupied: return "occupied";
    case SiteState::Burning: return "burning";
  }
  return "?";
}

const char* to_string(ClockKind k) {
  switch (k) {
    case ClockKind::Propagate: return "propagate";
    case ClockKind::Match: return "match";
    case ClockKind::Seed: return "seed";
  }
  return "?";
}

bool fires_before(const ClockEvent& a, const ClockEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.site != b.site) return a.site < b.site;
  return a.kind < b.kind;
}

std::uint64_t clock_stream_id(std::uint64_t tag, std::int64_t site) {
  return stream_key({tag, static_cast<std::uint64_t>(site)});
}

DiscreteFFP::DiscreteFFP(const EngineConfig& cfg) : cfg_(cfg) {
  require(cfg.half_width >= 0, "half_width must be nonnegative");
  require(cfg.pi > 0.0 && std::isfinite(cfg.pi), "pi must be positive");
  require(cfg.lambda >= 0.0 && std::isfinite(cfg.lambda), "lambda must be nonnegative");
  require(cfg.a > 0.0 && std::isfinite(cfg.a), "time scale must be positive");
  require(cfg.n >= 1 && cfg.m >= 0, "observable scales need n >= 1 and m >= 0");
  const std::int64_t sites = 2 * cfg.half_width + 1;
  if (sites > cfg.max_sites)
    throw ResourceError(fmt::format("box of {} sites exceeds the cap of {}", sites, cfg.max_sites));
  const auto count = static_cast<std::size_t>(sites);
  eta_.assign(count, SiteState::Vacant);
  seed_clock_.reserve(count);
  match_clock_.reserve(count);
  prop_clock_.reserve(count);
  std::vector<ClockEvent> initial;
  initial.reserve(2 * count);
  for (std::int64_t i = -cfg.half_width; i <= cfg.half_width; ++i) {
    seed_clock_.emplace_back(cfg.seed, clock_stream_id(kSeedClockTag, i), cfg.seeds ? 1.0 : 0.0);
    match_clock_.emplace_back(cfg.seed, clock_stream_id(kMatchClockTag, i), cfg.lambda);
    prop_clock_.emplace_back(cfg.seed, clock_stream_id(kPropagateClockTag, i), cfg.pi);
  }
  for (std::int64_t i = -cfg.half_width; i <= cfg.half_width; ++i) {
    if (cfg.seeds) initial.push_back({seed_clock_[index(i)].next_after(0.0), i, ClockKind::Seed});
    if (cfg.lambda > 0.0)
      initial.push_back({match_clock_[index(i)].next_after(0.0), i, ClockKind::Match});
  }
  queue_ = decltype(queue_)(Later{}, std::move(initial));
}

DiscreteFFP DiscreteFFP::create(double lambda, double pi, double A, std::uint64_t seed) {
  require(A > 0.0 && std::isfinite(A), "box half-width A must be positive");
  const Scales s = compute_scales(lambda, pi);
  EngineConfig cfg;
  cfg.lambda = lambda;
  cfg.pi = pi;
  const long double hw = std::floor(static_cast<long double>(A) * s.n);
  if (!(hw < 4.0e18L)) throw ResourceError("box half-width overflows");
  cfg.half_width = static_cast<std::int64_t>(hw);
  cfg.seed = seed;
  cfg.a = s.a;
  cfg.n = s.n;
  cfg.m = s.m;
  return DiscreteFFP(cfg);
}

SiteState DiscreteFFP::at(std::int64_t site) const {
  return in_box(site) ? eta_[index(site)] : SiteState::Vacant;
}

void DiscreteFFP::schedule(std::int64_t site, ClockKind kind, double after) {
  double t = 0.0;
  switch (kind) {
    case ClockKind::Seed: t = seed_clock_[index(site)].next_after(after); break;
    case ClockKind::Match: t = match_clock_[index(site)].next_after(after); break;
    case ClockKind::Propagate: t = prop_clock_[index(site)].next_after(after); break;
  }
  if (std::isfinite(t)) queue_.push({t, site, kind});
}

void DiscreteFFP::set_state(std::int64_t site, SiteState to, ClockKind cause, std::int64_t source) {
  SiteState& cell = eta_[index(site)];
  const SiteState from = cell;
  if (from == to) return;
  if (from == SiteState::Burning) --burning_;
  if (to == SiteState::Burning) ++burning_;
  cell = to;
  if (transition_hook_) transition_hook_({now_, site, from, to, cause, source});
}

void DiscreteFFP::start_burning(std::int64_t site, ClockKind cause, std::int64_t source) {
  set_state(site, SiteState::Burning, cause, source);
  schedule(site, ClockKind::Propagate, now_);
}

void DiscreteFFP::fill(SiteState s) {
  for (std::int64_t i = -cfg_.half_width; i <= cfg_.half_width; ++i) {
    if (eta_[index(i)] == s) continue;
    if (s == SiteState::Burning) {
      start_burning(i, ClockKind::Match, i);
    } else {
      set_state(i, s, ClockKind::Seed, i);
    }
  }
  if (s != SiteState::Burning) {
    // Drop stale propagation events of sites that stopped burning.
    std::vector<ClockEvent> keep;
    while (!queue_.empty()) {
      if (queue_.top().kind != ClockKind::Propagate) keep.push_back(queue_.top());
      queue_.pop();
    }
    queue_ = decltype(queue_)(Later{}, std::move(keep));
  }
}

bool DiscreteFFP::ignite(std::int64_t site) {
  require(in_box(site), "ignite: site outside box");
  if (eta_[index(site)] != SiteState::Occupied) return false;
  start_burning(site, ClockKind::Match, site);
  return true;
}

void DiscreteFFP::use_external_matches(std::vector<ClockEvent> matches) {
  std::vector<ClockEvent> keep;
  while (!queue_.empty()) {
    if (queue_.top().kind != ClockKind::Match) keep.push_back(queue_.top());
    queue_.pop();
  }
  queue_ = decltype(queue_)(Later{}, std::move(keep));
  external_.clear();
  for (ClockEvent e : matches) {
    require(std::isfinite(e.time) && e.time >= 0.0, "external match time must be >= 0");
    if (!in_box(e.site) || e.time <= now_) continue;
    e.kind = ClockKind::Match;
    external_.push_back(e);
  }
  std::sort(external_.begin(), external_.end(), fires_before);
  external_next_ = 0;
  external_mode_ = true;
}

std::optional<ClockEvent> DiscreteFFP::peek() const {
  const bool has_ext = external_mode_ && external_next_ < external_.size();
  if (queue_.empty() && !has_ext) return std::nullopt;
  if (queue_.empty()) return external_[external_next_];
  if (!has_ext) return queue_.top();
  const ClockEvent& q = queue_.top();
  const ClockEvent& x = external_[external_next_];
  return fires_before(x, q) ? x : q;
}

bool DiscreteFFP::step(double raw_limit) {
  const auto next = peek();
  if (!next || next->time > raw_limit) return false;
  const ClockEvent ev = *next;
  // In external mode the queue holds no match events.
  const bool from_external = external_mode_ && ev.kind == ClockKind::Match;
  if (from_external) {
    ++external_next_;
  } else {
    queue_.pop();
  }
  now_ = ev.time;
  ++events_;
  const std::int64_t i = ev.site;
  bool effective = false;
  switch (ev.kind) {
    case ClockKind::Seed:
      if (eta_[index(i)] == SiteState::Vacant) {
        set_state(i, SiteState::Occupied, ClockKind::Seed, i);
        effective = true;
      }
      schedule(i, ClockKind::Seed, now_);
      break;
    case ClockKind::Match:
      if (eta_[index(i)] == SiteState::Occupied) {
        start_burning(i, ClockKind::Match, i);
        effective = true;
      }
      if (!from_external) schedule(i, ClockKind::Match, now_);
      break;
    case ClockKind::Propagate:
      // Propagation clocks are only scheduled while the site burns.
      effective = true;
      set_state(i, SiteState::Vacant, ClockKind::Propagate, i);
      for (std::int64_t nb : {i - 1, i + 1}) {
        if (in_box(nb) && eta_[index(nb)] == SiteState::Occupied)
          start_burning(nb, ClockKind::Propagate, i);
      }
      break;
  }
  if (event_hook_) event_hook_(ev, effective);
  return true;
}

void DiscreteFFP::advance_raw(double t_raw) {
  require(t_raw >= now_, "cannot advance backwards in time");
  while (step(t_raw)) {
  }
  now_ = t_raw;
}

void DiscreteFFP::advance_to(double t_macro) { advance_raw(cfg_.a * t_macro); }

std::optional<SiteInterval> DiscreteFFP::cluster(std::int64_t site) const {
  if (at(site) != SiteState::Occupied) return std::nullopt;
  std::int64_t lo = site;
  std::int64_t hi = site;
  while (lo - 1 >= -cfg_.half_width && eta_[index(lo - 1)] == SiteState::Occupied) --lo;
  while (hi + 1 <= cfg_.half_width && eta_[index(hi + 1)] == SiteState::Occupied) ++hi;
  return SiteInterval{lo, hi};
}

ClusterObservables DiscreteFFP::observables(double x) const {
  const double n = static_cast<double>(cfg_.n);
  const double c = std::floor(n * x);
  require(std::isfinite(c) && std::abs(c) <= static_cast<double>(cfg_.half_width),
          "observables: x outside box");
  const auto centre = static_cast<std::int64_t>(c);
  ClusterObservables obs;
  obs.cluster = cluster(centre);
  if (obs.cluster)
    obs.D = Interval{static_cast<double>(obs.cluster->lo) / n, static_cast<double>(obs.cluster->hi) / n};
  const std::int64_t lo = std::max(centre - cfg_.m, -cfg_.half_width);
  const std::int64_t hi = std::min(centre + cfg_.m, cfg_.half_width);
  std::int64_t occupied = 0;
  for (std::int64_t i = lo; i <= hi; ++i) occupied += eta_[index(i)] == SiteState::Occupied;
  const std::int64_t window = hi - lo + 1;
  obs.K = static_cast<double>(occupied) / static_cast<double>(window);
  const double log_inv_lambda = cfg_.lambda > 0.0 ? -std::log(cfg_.lambda) : cfg_.a;
  obs.Z = occupied == window ? 1.0 : std::min(-std::log1p(-obs.K) / log_inv_lambda, 1.0);
  if (obs.cluster)
    obs.W = std::min(std::log(static_cast<double>(obs.cluster->size())) / log_inv_lambda, 1.0);
  return obs;
}

std::string DiscreteFFP::snapshot() const {
  nlohmann::ordered_json j;
  j["format"] = "ffp-snapshot/1";
  j["lambda"] = cfg_.lambda;
  j["pi"] = cfg_.pi;
  j["A"] = static_cast<double>(cfg_.half_width) / static_cast<double>(cfg_.n);
  j["half_width"] = cfg_.half_width;
  j["seed"] = cfg_.seed;
  j["t"] = now_macro();
  j["t_raw"] = now_;
  j["events"] = events_;
  auto rle = nlohmann::ordered_json::array();
  std::size_t k = 0;
  while (k < eta_.size()) {
    std::size_t run = 1;
    while (k + run < eta_.size() && eta_[k + run] == eta_[k]) ++run;
    rle.push_back({static_cast<int>(eta_[k]), run});
    k += run;
  }
  j["rle"] = std::move(rle);
  return j.dump();
}

std::int64_t cluster_size_at_origin(DiscreteFFP& proc, double t_macro) {
  require(t_macro >= 0.0, "time must be nonnegative");
  proc.advance_to(t_macro);
  const auto c = proc.cluster(0);
  return c ? c->size() : 0;
}

}  // namespace ffp
