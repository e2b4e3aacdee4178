// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffp/metrics.hpp"
#include "ffp/rng.hpp"

namespace ffp {

// Linear piece of the reset-time profile on [lo, hi):
// rho(y) = t0 + slope * (y - x0), slope in {0, +p, -p}.
struct ProfilePiece {
  double lo = 0.0;
  double hi = 0.0;
  double t0 = 0.0;
  double x0 = 0.0;
  double slope = 0.0;
  double at(double y) const { return t0 + slope * (y - x0); }
};

// Piecewise-linear map rho on [-A, A], right-continuous at breakpoints.
// Z_t(x) = min(t - rho(x), 1).
class ResetProfile {
 public:
  ResetProfile() = default;
  explicit ResetProfile(double A);

  double A() const { return A_; }
  double at(double y) const;
  // Overwrites rho on [lo, hi) with the affine map of `fn` (its lo/hi are ignored).
  void assign(double lo, double hi, const ProfilePiece& fn);
  const std::vector<ProfilePiece>& pieces() const { return pieces_; }

 private:
  std::size_t locate(double y) const;
  double A_ = 0.0;
  std::vector<ProfilePiece> pieces_;
};

struct Barrier {
  double x = 0.0;
  double created = 0.0;
  double expiry = 0.0;  // created + Z at creation; H_t = expiry - t on [created, expiry)
  int mark = -1;
  bool active_at(double t) const { return created <= t && t < expiry; }
};

struct Front {
  int id = 0;
  int mark = -1;
  double x0 = 0.0;
  double t0 = 0.0;
  int dir = 1;             // +1 right, -1 left
  double end_time = 0.0;   // +inf while alive
  double end_x = 0.0;
  double position(double t, double p) const { return x0 + dir * (t - t0) / p; }
};

enum class LimitEventKind { MarkArrival, FrontMeetsFront, FrontStopped, BarrierExpiry };
const char* to_string(LimitEventKind k);

struct LimitEvent {
  double time = 0.0;
  LimitEventKind kind = LimitEventKind::MarkArrival;
  double x = 0.0;
  // mark: macroscopic | microscopic | absorbed; stop: barrier | profile | edge
  std::string outcome;
  int mark = -1;
  std::vector<int> fronts;
};

// State of a finite-box LFFP(p) (p > 0) or of the p = 0 variant, evolved to T,
// with a snapshot after each event so past times can be queried.
struct LimitStateP {
  struct Snapshot {
    double time = 0.0;
    std::vector<ProfilePiece> pieces;
    std::vector<int> live_fronts;
  };

  double p = 0.0;
  double A = 0.0;
  double T = 0.0;
  MarkSet marks;
  std::vector<Barrier> barriers;  // every barrier ever created
  std::vector<Front> fronts;      // every front ever created
  std::vector<LimitEvent> events;
  std::vector<Snapshot> snapshots;  // snapshots[0] is time 0

  // Profile at time t, with live fronts' trails drawn up to t.
  ResetProfile profile_at(double t) const;
  std::vector<int> live_fronts_at(double t) const;
  std::string event_log_json() const;
};

struct LimitStateInf {
  struct Feature {
    double x = 0.0;
    double tau = 0.0;
    bool permanent = false;
    // Y_t at the feature location.
    double value(double t) const;
  };
  double z0 = 0.0;
  double A = 0.0;
  double T = 0.0;
  MarkSet marks;
  std::vector<Feature> features;
};

struct LimitQuery {
  double value = 0.0;  // Z, or Y in the infinite case
  double H = 0.0;
  IntervalOrEmpty D;
};

LimitStateP simulate_alffp_p(double p, double A, double T, const MarkSet& marks);
LimitStateP simulate_lffp_0(double A, double T, const MarkSet& marks);
LimitStateInf simulate_lffp_inf(double z0, double A, double T, const MarkSet& marks);

LimitQuery query_limit(const LimitStateP& state, double x, double t);
LimitQuery query_limit(const LimitStateInf& state, double x, double t);

// Number of live fronts located at x at time t (within `tol`).
int front_count(const LimitStateP& state, double x, double t, double tol = 1e-9);

// |D_t(0)| on the unbounded line for t > 2 z0: sum of two Exp(t - z0) gaps.
std::vector<double> sample_cluster_length_inf(double z0, double t, int runs, std::uint64_t seed);

// Gamma(shape 2, rate r) distribution function.
double gamma2_cdf(double x, double rate);

}  // namespace ffp
