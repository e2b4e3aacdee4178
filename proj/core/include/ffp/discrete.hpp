// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "ffp/metrics.hpp"
#include "ffp/rng.hpp"

namespace ffp {

enum class SiteState : std::uint8_t { Vacant = 0, Occupied = 1, Burning = 2 };

// Declaration order is the tie-break priority at equal times.
enum class ClockKind : std::uint8_t { Propagate = 0, Match = 1, Seed = 2 };

const char* to_string(SiteState s);
const char* to_string(ClockKind k);

struct ClockEvent {
  double time = 0.0;  // raw units
  std::int64_t site = 0;
  ClockKind kind = ClockKind::Seed;
};

// Strict total order on (time, site, kind).
bool fires_before(const ClockEvent& a, const ClockEvent& b);

struct Transition {
  double time = 0.0;  // raw units
  std::int64_t site = 0;
  SiteState from = SiteState::Vacant;
  SiteState to = SiteState::Vacant;
  ClockKind cause = ClockKind::Seed;
  std::int64_t source = 0;  // site whose clock fired
};

// Stream tags of the per-site clock families.
inline constexpr std::uint64_t kSeedClockTag = 0x5EED;
inline constexpr std::uint64_t kMatchClockTag = 0x3A7C;
inline constexpr std::uint64_t kPropagateClockTag = 0x9209;

std::uint64_t clock_stream_id(std::uint64_t tag, std::int64_t site);

struct EngineConfig {
  double lambda = 0.0;          // match rate per site; 0 disables match clocks
  double pi = 1.0;              // propagation rate
  std::int64_t half_width = 0;  // sites -half_width..half_width
  std::uint64_t seed = 0;
  double a = 1.0;               // raw time = a * macroscopic time
  std::int64_t n = 1;           // sites per macroscopic unit
  std::int64_t m = 0;           // density window radius
  bool seeds = true;            // seed clocks at rate 1
  std::int64_t max_sites = std::int64_t{1} << 30;
};

struct SiteInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t size() const { return hi - lo + 1; }
};

struct ClusterObservables {
  std::optional<SiteInterval> cluster;
  IntervalOrEmpty D;
  double K = 0.0;
  double Z = 0.0;
  double W = 0.0;
};

// Event-driven (lambda, pi, A)-forest-fire process on a finite box with
// permanently vacant ghost sites at +-(half_width+1). The engine runs in raw
// time; *_macro entry points scale by `a`.
class DiscreteFFP {
 public:
  explicit DiscreteFFP(const EngineConfig& cfg);

  // Box of half-width floor(A n_lambda), all sites vacant.
  static DiscreteFFP create(double lambda, double pi, double A, std::uint64_t seed);

  const EngineConfig& config() const { return cfg_; }
  std::int64_t half_width() const { return cfg_.half_width; }
  double now_raw() const { return now_; }
  double now_macro() const { return now_ / cfg_.a; }
  std::uint64_t event_count() const { return events_; }
  std::int64_t burning_count() const { return burning_; }

  SiteState at(std::int64_t site) const;
  bool in_box(std::int64_t site) const {
    return site >= -cfg_.half_width && site <= cfg_.half_width;
  }

  // Overwrites every site at the current time. Burning sites get fresh
  // propagation clocks.
  void fill(SiteState s);
  // Occupied -> Burning at the current time. Returns false if the site was not occupied.
  bool ignite(std::int64_t site);
  // Replaces the match clocks by a fixed list of (raw time, site) events.
  // Entries outside the box are ignored. The list is sorted internally.
  void use_external_matches(std::vector<ClockEvent> matches);

  void advance_to(double t_macro);
  void advance_raw(double t_raw);
  // Processes one event with raw time <= raw_limit. Returns false if none.
  bool step(double raw_limit);
  std::optional<ClockEvent> peek() const;

  using TransitionHook = std::function<void(const Transition&)>;
  using EventHook = std::function<void(const ClockEvent&, bool effective)>;
  void on_transition(TransitionHook hook) { transition_hook_ = std::move(hook); }
  void on_event(EventHook hook) { event_hook_ = std::move(hook); }

  // Maximal occupied run containing `site`, clipped to the box.
  std::optional<SiteInterval> cluster(std::int64_t site) const;
  // Observables at macroscopic position x (site floor(n x)).
  ClusterObservables observables(double x) const;

  // JSON text: metadata plus run-length-encoded states from -half_width upward.
  std::string snapshot() const;

 private:
  struct Later {
    bool operator()(const ClockEvent& a, const ClockEvent& b) const { return fires_before(b, a); }
  };

  std::size_t index(std::int64_t site) const {
    return static_cast<std::size_t>(site + cfg_.half_width);
  }
  void set_state(std::int64_t site, SiteState to, ClockKind cause, std::int64_t source);
  void start_burning(std::int64_t site, ClockKind cause, std::int64_t source);
  void schedule(std::int64_t site, ClockKind kind, double after);

  EngineConfig cfg_;
  double now_ = 0.0;
  std::uint64_t events_ = 0;
  std::int64_t burning_ = 0;
  std::vector<SiteState> eta_;
  std::vector<PoissonClock> seed_clock_;
  std::vector<PoissonClock> match_clock_;
  std::vector<PoissonClock> prop_clock_;
  std::priority_queue<ClockEvent, std::vector<ClockEvent>, Later> queue_;
  std::vector<ClockEvent> external_;
  std::size_t external_next_ = 0;
  bool external_mode_ = false;
  TransitionHook transition_hook_;
  EventHook event_hook_;
};

std::int64_t cluster_size_at_origin(DiscreteFFP& proc, double t_macro);

}  // namespace ffp
