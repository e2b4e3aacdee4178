// SPDX-License-Identifier: Apache-2.0
#include "ffp/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "ffp/errors.hpp"

namespace ffp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieWindow = 1e-12;
constexpr double kSameLocation = 1e-12;

bool same_function(const ProfilePiece& a, const ProfilePiece& b) {
  if (a.slope != b.slope) return false;
  if (a.slope == 0.0) return a.t0 == b.t0;
  return a.t0 == b.t0 && a.x0 == b.x0;
}

void validate_marks(double A, double T, const MarkSet& marks) {
  require(A > 0.0 && std::isfinite(A), "box half-width A must be positive");
  require(T > 0.0 && std::isfinite(T), "horizon T must be positive");
  double last = 0.0;
  for (const Mark& mk : marks) {
    require(mk.x >= -A && mk.x <= A && mk.t >= 0.0 && mk.t <= T, "mark outside [-A,A]x[0,T]");
    require(mk.t >= last, "marks must be sorted by time");
    last = mk.t;
  }
}

// sup{y <= x : rho(y) > t-1 or H_t(y) > 0} v (-A), and the symmetric inf.
Interval cluster_bounds(const ResetProfile& prof, const std::vector<Barrier>& barriers,
                        double x, double t) {
  const double A = prof.A();
  const double thr = t - 1.0;
  const auto& pcs = prof.pieces();
  std::size_t k = 0;
  while (k + 1 < pcs.size() && pcs[k + 1].lo <= x) ++k;

  double L = -A;
  for (std::size_t j = k + 1; j-- > 0;) {
    const ProfilePiece& pc = pcs[j];
    const double right = j == k ? x : pc.hi;
    if (pc.at(right) > thr) {
      L = std::max(L, right);
      break;
    }
    if (pc.slope < 0.0 && pc.at(pc.lo) > thr) {
      L = std::max(L, std::clamp(pc.x0 + (thr - pc.t0) / pc.slope, pc.lo, right));
      break;
    }
  }
  double R = A;
  for (std::size_t j = k; j < pcs.size(); ++j) {
    const ProfilePiece& pc = pcs[j];
    const double left = j == k ? x : pc.lo;
    if (pc.at(left) > thr) {
      R = std::min(R, left);
      break;
    }
    if (pc.slope > 0.0 && pc.at(pc.hi) > thr) {
      R = std::min(R, std::clamp(pc.x0 + (thr - pc.t0) / pc.slope, left, pc.hi));
      break;
    }
  }
  for (const Barrier& b : barriers) {
    if (!b.active_at(t)) continue;
    if (b.x <= x) L = std::max(L, b.x);
    if (b.x >= x) R = std::min(R, b.x);
  }
  return {std::max(L, -A), std::min(R, A)};
}

struct Candidate {
  double time = kInf;
  LimitEventKind kind = LimitEventKind::MarkArrival;
  double x = 0.0;
  std::string outcome;
  std::vector<int> fronts;
  int barrier = -1;
};

bool candidate_before(const Candidate& a, const Candidate& b) {
  if (std::abs(a.time - b.time) > kTieWindow) return a.time < b.time;
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.x < b.x;
}

class Engine {
 public:
  Engine(double p, double A, double T, const MarkSet& marks) : prof_(A) {
    st_.p = p;
    st_.A = A;
    st_.T = T;
    st_.marks = marks;
    snapshot();
  }

  LimitStateP run() {
    std::size_t next_mark = 0;
    for (;;) {
      std::vector<Candidate> cands;
      if (next_mark < st_.marks.size()) {
        Candidate c;
        c.time = st_.marks[next_mark].t;
        c.kind = LimitEventKind::MarkArrival;
        c.x = st_.marks[next_mark].x;
        cands.push_back(c);
      }
      for (int b : active_) {
        Candidate c;
        c.time = st_.barriers[static_cast<std::size_t>(b)].expiry;
        c.kind = LimitEventKind::BarrierExpiry;
        c.x = st_.barriers[static_cast<std::size_t>(b)].x;
        c.barrier = b;
        cands.push_back(c);
      }
      for (int f : live_) {
        Candidate c = front_candidate(f);
        if (std::isfinite(c.time)) cands.push_back(std::move(c));
      }
      if (cands.empty()) break;
      const Candidate best = *std::min_element(cands.begin(), cands.end(), candidate_before);
      if (best.time > st_.T) break;

      commit(best);
      now_ = best.time;
      LimitEvent ev;
      ev.time = best.time;
      ev.kind = best.kind;
      ev.x = best.x;
      ev.fronts = best.fronts;
      switch (best.kind) {
        case LimitEventKind::MarkArrival:
          ev.mark = static_cast<int>(next_mark);
          ev.outcome = handle_mark(static_cast<int>(next_mark));
          ev.fronts = spawned_;
          ++next_mark;
          break;
        case LimitEventKind::BarrierExpiry:
          ev.mark = st_.barriers[static_cast<std::size_t>(best.barrier)].mark;
          active_.erase(std::find(active_.begin(), active_.end(), best.barrier));
          break;
        case LimitEventKind::FrontMeetsFront:
        case LimitEventKind::FrontStopped:
          ev.outcome = best.outcome;
          for (int f : best.fronts) {
            Front& fr = st_.fronts[static_cast<std::size_t>(f)];
            fr.end_time = best.time;
            fr.end_x = best.x;
            live_.erase(std::find(live_.begin(), live_.end(), f));
          }
          ev.mark = st_.fronts[static_cast<std::size_t>(best.fronts.front())].mark;
          break;
      }
      st_.events.push_back(std::move(ev));
      snapshot();
    }
    return std::move(st_);
  }

 private:
  double p() const { return st_.p; }

  void snapshot() { st_.snapshots.push_back({now_, prof_.pieces(), live_}); }

  // Draws every live front's trail up to the event time. Fronts named in the
  // event stop exactly at the event location.
  void commit(const Candidate& ev) {
    for (int f : live_) {
      const Front& fr = st_.fronts[static_cast<std::size_t>(f)];
      const bool involved = (ev.kind == LimitEventKind::FrontMeetsFront ||
                             ev.kind == LimitEventKind::FrontStopped) &&
                            std::find(ev.fronts.begin(), ev.fronts.end(), f) != ev.fronts.end();
      double target = involved ? ev.x : fr.position(ev.time, p());
      target = std::clamp(target, -st_.A, st_.A);
      double& pos = pos_[static_cast<std::size_t>(f)];
      const ProfilePiece trail{0.0, 0.0, fr.t0, fr.x0, fr.dir * p()};
      if (fr.dir > 0 && target > pos) prof_.assign(pos, target, trail);
      if (fr.dir < 0 && target < pos) prof_.assign(target, pos, trail);
      pos = target;
    }
  }

  std::string handle_mark(int index) {
    spawned_.clear();
    const Mark& mk = st_.marks[static_cast<std::size_t>(index)];
    const double z = std::min(mk.t - prof_.at(mk.x), 1.0);
    bool blocked = false;
    for (int b : active_) {
      const Barrier& br = st_.barriers[static_cast<std::size_t>(b)];
      if (std::abs(br.x - mk.x) <= kSameLocation && br.expiry > mk.t) blocked = true;
    }
    if (blocked) return "absorbed";
    if (z < 1.0) {
      active_.push_back(static_cast<int>(st_.barriers.size()));
      st_.barriers.push_back({mk.x, mk.t, mk.t + z, index});
      return "microscopic";
    }
    if (p() == 0.0) {
      std::vector<Barrier> act;
      for (int b : active_) act.push_back(st_.barriers[static_cast<std::size_t>(b)]);
      const Interval d = cluster_bounds(prof_, act, mk.x, mk.t);
      prof_.assign(d.lo, d.hi >= st_.A ? st_.A : d.hi, ProfilePiece{0.0, 0.0, mk.t, mk.x, 0.0});
      return "macroscopic";
    }
    for (int dir : {-1, 1}) {
      Front fr;
      fr.id = static_cast<int>(st_.fronts.size());
      fr.mark = index;
      fr.x0 = mk.x;
      fr.t0 = mk.t;
      fr.dir = dir;
      fr.end_time = kInf;
      st_.fronts.push_back(fr);
      pos_.push_back(mk.x);
      live_.push_back(fr.id);
      spawned_.push_back(fr.id);
    }
    return "macroscopic";
  }

  Candidate front_candidate(int f) const {
    const Front& fr = st_.fronts[static_cast<std::size_t>(f)];
    const double P = pos_[static_cast<std::size_t>(f)];
    const int d = fr.dir;
    const double A = st_.A;

    Candidate best;
    int ahead = -1;
    double Q = 0.0;
    for (int g : live_) {
      if (g == f) continue;
      const double pg = pos_[static_cast<std::size_t>(g)];
      if (d * (pg - P) > 0.0 && (ahead < 0 || d * (pg - Q) < 0.0)) {
        ahead = g;
        Q = pg;
      }
    }
    const double limit = ahead >= 0 ? Q : d * A;
    if (ahead >= 0 && st_.fronts[static_cast<std::size_t>(ahead)].dir == -d) {
      best.time = now_ + p() * std::abs(Q - P) / 2.0;
      best.kind = LimitEventKind::FrontMeetsFront;
      best.x = (P + Q) / 2.0;
      best.fronts = {std::min(f, ahead), std::max(f, ahead)};
    }

    // Nearest blocking location in the direction of travel.
    double stop = kInf;  // distance from P
    std::string why;
    const auto& pcs = prof_.pieces();
    if (d > 0) {
      for (const ProfilePiece& pc : pcs) {
        if (pc.lo < P || pc.lo >= limit) continue;
        const double v = fr.t0 + p() * std::abs(pc.lo - fr.x0);
        if (v - pc.at(pc.lo) < 1.0) {
          stop = pc.lo - P;
          why = "profile";
          break;
        }
      }
    } else {
      for (auto it = pcs.rbegin(); it != pcs.rend(); ++it) {
        if (it->hi > P || it->hi <= limit) continue;
        const double v = fr.t0 + p() * std::abs(it->hi - fr.x0);
        if (v - it->at(it->hi) < 1.0) {
          stop = P - it->hi;
          why = "profile";
          break;
        }
      }
    }
    for (int b : active_) {
      const Barrier& br = st_.barriers[static_cast<std::size_t>(b)];
      const double dist = d * (br.x - P);
      if (dist < 0.0 || d * (br.x - limit) >= 0.0) continue;
      const double v = fr.t0 + p() * std::abs(br.x - fr.x0);
      if (br.expiry > v && dist < stop) {
        stop = dist;
        why = "barrier";
      }
    }
    if (ahead < 0) {
      const double dist = d * (d * A - P);
      if (dist < stop) {
        stop = dist;
        why = "edge";
      }
    }
    if (std::isfinite(stop)) {
      const double y = P + d * stop;
      const double v = fr.t0 + p() * std::abs(y - fr.x0);
      if (v < best.time) {
        best.time = v;
        best.kind = LimitEventKind::FrontStopped;
        best.x = y;
        best.outcome = why;
        best.fronts = {f};
      }
    }
    return best;
  }

  LimitStateP st_;
  ResetProfile prof_;
  double now_ = 0.0;
  std::vector<int> live_;
  std::vector<double> pos_;
  std::vector<int> active_;
  std::vector<int> spawned_;
};

}  // namespace

const char* to_string(LimitEventKind k) {
  switch (k) {
    case LimitEventKind::MarkArrival: return "mark_arrival";
    case LimitEventKind::FrontMeetsFront: return "front_meets_front";
    case LimitEventKind::FrontStopped: return "front_stopped";
    case LimitEventKind::BarrierExpiry: return "barrier_expiry";
  }
  return "?";
}

ResetProfile::ResetProfile(double A) : A_(A), pieces_{{-A, A, 0.0, 0.0, 0.0}} {}

std::size_t ResetProfile::locate(double y) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), y,
                             [](double v, const ProfilePiece& pc) { return v < pc.lo; });
  return it == pieces_.begin() ? 0 : static_cast<std::size_t>(std::prev(it) - pieces_.begin());
}

double ResetProfile::at(double y) const { return pieces_[locate(y)].at(y); }

void ResetProfile::assign(double lo, double hi, const ProfilePiece& fn) {
  lo = std::max(lo, -A_);
  hi = std::min(hi, A_);
  if (!(hi > lo)) return;
  std::vector<ProfilePiece> out;
  out.reserve(pieces_.size() + 2);
  ProfilePiece mid = fn;
  mid.lo = lo;
  mid.hi = hi;
  bool placed = false;
  for (const ProfilePiece& pc : pieces_) {
    if (pc.lo < lo) {
      ProfilePiece left = pc;
      left.hi = std::min(pc.hi, lo);
      out.push_back(left);
    }
    if (!placed && pc.hi > lo) {
      out.push_back(mid);
      placed = true;
    }
    if (pc.hi > hi) {
      ProfilePiece right = pc;
      right.lo = std::max(pc.lo, hi);
      if (placed) {
        out.push_back(right);
      }
    }
  }
  if (!placed) out.push_back(mid);
  pieces_.clear();
  for (const ProfilePiece& pc : out) {
    if (!(pc.hi > pc.lo)) continue;
    if (!pieces_.empty() && same_function(pieces_.back(), pc) && pieces_.back().hi == pc.lo) {
      pieces_.back().hi = pc.hi;
    } else {
      pieces_.push_back(pc);
    }
  }
}

ResetProfile LimitStateP::profile_at(double t) const {
  auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t,
                             [](double v, const Snapshot& s) { return v < s.time; });
  const Snapshot& snap = it == snapshots.begin() ? snapshots.front() : *std::prev(it);
  ResetProfile prof(A);
  for (const ProfilePiece& pc : snap.pieces) prof.assign(pc.lo, pc.hi, pc);
  for (int f : snap.live_fronts) {
    const Front& fr = fronts[static_cast<std::size_t>(f)];
    const double from = std::clamp(fr.position(snap.time, p), -A, A);
    const double to = std::clamp(fr.position(t, p), -A, A);
    const ProfilePiece trail{0.0, 0.0, fr.t0, fr.x0, fr.dir * p};
    prof.assign(std::min(from, to), std::max(from, to), trail);
  }
  return prof;
}

std::vector<int> LimitStateP::live_fronts_at(double t) const {
  std::vector<int> out;
  for (const Front& fr : fronts)
    if (fr.t0 <= t && t < fr.end_time) out.push_back(fr.id);
  return out;
}

std::string LimitStateP::event_log_json() const {
  nlohmann::ordered_json j;
  j["format"] = "ffp-limit-events/1";
  j["p"] = p;
  j["A"] = A;
  j["T"] = T;
  auto mk = nlohmann::ordered_json::array();
  for (const Mark& m : marks) mk.push_back({m.x, m.t});
  j["marks"] = std::move(mk);
  auto evs = nlohmann::ordered_json::array();
  for (const LimitEvent& e : events) {
    nlohmann::ordered_json o;
    o["time"] = e.time;
    o["kind"] = to_string(e.kind);
    o["x"] = e.x;
    o["outcome"] = e.outcome;
    o["mark"] = e.mark;
    o["fronts"] = e.fronts;
    evs.push_back(std::move(o));
  }
  j["events"] = std::move(evs);
  auto frs = nlohmann::ordered_json::array();
  for (const Front& f : fronts) {
    nlohmann::ordered_json o;
    o["id"] = f.id;
    o["mark"] = f.mark;
    o["x0"] = f.x0;
    o["t0"] = f.t0;
    o["dir"] = f.dir;
    if (std::isfinite(f.end_time)) {
      o["end_time"] = f.end_time;
      o["end_x"] = f.end_x;
    } else {
      o["end_time"] = nullptr;
      o["end_x"] = nullptr;
    }
    frs.push_back(std::move(o));
  }
  j["fronts"] = std::move(frs);
  auto brs = nlohmann::ordered_json::array();
  for (const Barrier& b : barriers) brs.push_back({{"x", b.x}, {"created", b.created}, {"expiry", b.expiry}, {"mark", b.mark}});
  j["barriers"] = std::move(brs);
  return j.dump();
}

double LimitStateInf::Feature::value(double t) const {
  if (t < tau) return 0.0;
  if (permanent) return 1.0;
  return t < 2.0 * tau ? 2.0 * tau - t : 0.0;
}

LimitStateP simulate_alffp_p(double p, double A, double T, const MarkSet& marks) {
  require(p > 0.0 && std::isfinite(p), "front slope p must be positive");
  validate_marks(A, T, marks);
  return Engine(p, A, T, marks).run();
}

LimitStateP simulate_lffp_0(double A, double T, const MarkSet& marks) {
  validate_marks(A, T, marks);
  return Engine(0.0, A, T, marks).run();
}

LimitStateInf simulate_lffp_inf(double z0, double A, double T, const MarkSet& marks) {
  require(z0 >= 0.0 && z0 <= 1.0, "z0 must lie in [0,1]");
  validate_marks(A, T, marks);
  LimitStateInf st;
  st.z0 = z0;
  st.A = A;
  st.T = T;
  st.marks = marks;
  for (const Mark& mk : marks) st.features.push_back({mk.x, mk.t, mk.t >= z0});
  return st;
}

LimitQuery query_limit(const LimitStateP& state, double x, double t) {
  require(x >= -state.A && x <= state.A, "query x outside [-A,A]");
  require(t >= 0.0 && t <= state.T, "query t outside [0,T]");
  const ResetProfile prof = state.profile_at(t);
  LimitQuery q;
  q.value = std::min(t - prof.at(x), 1.0);
  // Pieces are right-continuous, so a front's own location is not yet covered
  // by its trail; the front resets Z there.
  for (const Front& f : state.fronts) {
    if (t < f.t0 || t >= f.end_time) continue;
    if (std::abs(f.position(t, state.p) - x) <= kSameLocation) q.value = 0.0;
  }
  for (const Barrier& b : state.barriers)
    if (b.active_at(t) && std::abs(b.x - x) <= kSameLocation) q.H = std::max(q.H, b.expiry - t);
  q.D = cluster_bounds(prof, state.barriers, x, t);
  return q;
}

LimitQuery query_limit(const LimitStateInf& state, double x, double t) {
  require(x >= -state.A && x <= state.A, "query x outside [-A,A]");
  require(t >= 0.0 && t <= state.T, "query t outside [0,T]");
  LimitQuery q;
  for (const auto& f : state.features)
    if (std::abs(f.x - x) <= kSameLocation) q.value = std::max(q.value, f.value(t));
  if (t < 1.0) {
    q.D = Interval{x, x};
    return q;
  }
  double L = -state.A;
  double R = state.A;
  for (const auto& f : state.features) {
    if (f.value(t) <= 0.0) continue;
    if (f.x <= x) L = std::max(L, f.x);
    if (f.x >= x) R = std::min(R, f.x);
  }
  q.D = Interval{L, R};
  return q;
}

int front_count(const LimitStateP& state, double x, double t, double tol) {
  if (state.p == 0.0) return 0;
  std::vector<int> marks;
  for (const Front& f : state.fronts) {
    if (t < f.t0 || t > f.end_time) continue;
    const double pos = t == f.end_time ? f.end_x : f.position(t, state.p);
    if (std::abs(pos - x) <= tol && std::find(marks.begin(), marks.end(), f.mark) == marks.end())
      marks.push_back(f.mark);
  }
  return static_cast<int>(marks.size());
}

std::vector<double> sample_cluster_length_inf(double z0, double t, int runs, std::uint64_t seed) {
  require(z0 >= 0.0 && z0 <= 1.0, "z0 must lie in [0,1]");
  require(t > 2.0 * z0 && std::isfinite(t), "need t > 2 z0");
  require(runs >= 1, "need at least one run");
  const double rate = t - z0;
  std::vector<double> out(static_cast<std::size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    RngStream rs(seed, stream_key({0x6A33A, static_cast<std::uint64_t>(i)}));
    const double left = rs.exponential(rate);
    out[static_cast<std::size_t>(i)] = left + rs.exponential(rate);
  }
  return out;
}

double gamma2_cdf(double x, double rate) {
  require(rate > 0.0, "gamma rate must be positive");
  if (x <= 0.0) return 0.0;
  const double rx = rate * x;
  return -std::expm1(-rx) - rx * std::exp(-rx);
}

}  // namespace ffp
