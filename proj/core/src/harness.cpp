// SPDX-License-Identifier: Apache-2.0
#include "ffp/harness.hpp"

#include <cmath>
#include <limits>
#include <variant>

#include "ffp/errors.hpp"
#include "ffp/limit.hpp"
#include "ffp/parallel.hpp"
#include "ffp/propagation.hpp"

namespace ffp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kMarkStreamTag = 0x3A75;
constexpr std::uint64_t kDiscreteTag = 0xD15C;

std::vector<double> histogram(const std::vector<double>& xs, int bins) {
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  if (xs.empty()) return h;
  for (double v : xs) {
    const int k = std::clamp(static_cast<int>(v * bins), 0, bins - 1);
    h[static_cast<std::size_t>(k)] += 1.0;
  }
  for (double& c : h) c /= static_cast<double>(xs.size());
  return h;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) { return stream_key({seed, run}); }

CoupledRun coupled_run(double lambda, double pi, const Regime& regime, double A, double T,
                       int grid_points, std::uint64_t seed, double x) {
  require(A > 0.0 && std::isfinite(A), "A must be positive");
  require(T > 0.0 && std::isfinite(T), "T must be positive");
  require(grid_points >= 1, "grid needs at least one point");
  require(std::abs(x) <= A, "query point outside the box");
  if (!regime_consistent(lambda, pi, regime))
    throw ParameterError("(lambda, pi) does not classify as " + regime.describe());

  CoupledRun run;
  run.lambda = lambda;
  run.pi = pi;
  run.regime = regime;
  run.A = A;
  run.T = T;
  run.x = x;
  run.seed = seed;
  run.scales = compute_scales(lambda, pi);
  const Scales& s = run.scales;

  RngStream marks_stream(seed, stream_key({kMarkStreamTag}));
  run.marks = poisson_rectangle(marks_stream, -A, A, 0.0, T);

  DiscreteFFP proc = DiscreteFFP::create(lambda, pi, A, stream_key({seed, kDiscreteTag}));
  std::vector<ClockEvent> matches;
  for (const Mark& mk : run.marks) {
    const auto site = static_cast<std::int64_t>(std::floor(static_cast<double>(s.n) * mk.x));
    if (!proc.in_box(site)) {
      ++run.marks_outside_box;
      continue;
    }
    matches.push_back({s.a * mk.t, site, ClockKind::Match});
  }
  proc.use_external_matches(std::move(matches));
  std::vector<ClockEvent> consumed;
  proc.on_event([&consumed](const ClockEvent& e, bool) {
    if (e.kind == ClockKind::Match) consumed.push_back(e);
  });

  std::variant<LimitStateP, LimitStateInf> limit;
  switch (regime.kind) {
    case Regime::Kind::Fast: limit = simulate_lffp_0(A, T, run.marks); break;
    case Regime::Kind::Intermediate: limit = simulate_alffp_p(regime.param, A, T, run.marks); break;
    case Regime::Kind::Slow: limit = simulate_lffp_inf(regime.param, A, T, run.marks); break;
  }

  Trajectory disc;
  Trajectory lim;
  disc.grid = uniform_grid(T, grid_points);
  lim.grid = disc.grid;
  const bool slow = regime.kind == Regime::Kind::Slow;
  for (double t : disc.grid) {
    proc.advance_to(t);
    const ClusterObservables obs = proc.observables(x);
    const LimitQuery q = std::visit([&](const auto& st) { return query_limit(st, x, t); }, limit);
    CoupledRow row;
    row.t = t;
    row.disc_D = obs.D;
    row.disc_Z = obs.Z;
    row.disc_W = obs.W;
    row.lim_D = q.D;
    row.lim_value = q.value;
    row.delta = delta_interval(obs.D, q.D);
    row.value_gap = slow ? 0.0 : std::abs(obs.Z - q.value);
    disc.points.push_back({slow ? 0.0 : obs.Z, obs.D});
    lim.points.push_back({slow ? 0.0 : q.value, q.D});
    run.rows.push_back(row);
  }
  proc.advance_to(T);
  run.discrete_matches = std::move(consumed);
  run.d_T = d_T(disc, lim, T);
  run.delta_T = delta_T(disc, lim, T);
  return run;
}

bool coupling_consistent(const CoupledRun& run) {
  const Scales& s = run.scales;
  const auto half = static_cast<std::int64_t>(std::floor(static_cast<long double>(run.A) * s.n));
  std::vector<Mark> inside;
  for (const Mark& mk : run.marks) {
    const auto site = static_cast<std::int64_t>(std::floor(static_cast<double>(s.n) * mk.x));
    if (site >= -half && site <= half) inside.push_back(mk);
  }
  if (inside.size() != run.discrete_matches.size()) return false;
  if (static_cast<std::int64_t>(inside.size()) + run.marks_outside_box !=
      static_cast<std::int64_t>(run.marks.size()))
    return false;
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const ClockEvent& e = run.discrete_matches[k];
    const Mark& mk = inside[k];
    const auto cell = static_cast<std::int64_t>(std::floor(static_cast<double>(s.n) * mk.x));
    if (e.site != cell) return false;
    if (e.time != s.a * mk.t) return false;
    if (std::abs(e.time / s.a - mk.t) > 1e-12 * std::max(1.0, mk.t)) return false;
  }
  return true;
}

std::vector<double> ClusterDistResult::scaled_sizes() const {
  std::vector<double> out;
  out.reserve(sizes.size());
  for (std::int64_t c : sizes) out.push_back(static_cast<double>(c) / static_cast<double>(scales.n));
  return out;
}

ClusterDistResult cluster_dist_experiment(double lambda, double pi, double t, double a, double b,
                                          const std::vector<double>& B, int runs,
                                          std::uint64_t seed, const ClusterDistOptions& opt) {
  require(a > 0.0 && a < b && b < 1.0, "need 0 < a < b < 1");
  require(!B.empty(), "need at least one B");
  for (double v : B) require(v > 0.0, "B must be positive");
  require(runs >= 1, "need at least one run");
  require(t >= 0.0 && std::isfinite(t), "t must be nonnegative");
  require(opt.bins >= 1, "need at least one histogram bin");
  ClusterDistResult r;
  r.lambda = lambda;
  r.pi = pi;
  r.t = t;
  r.a_exp = a;
  r.b_exp = b;
  r.B = B;
  r.runs = runs;
  r.seed = seed;
  r.box_A = opt.box_A;
  r.scales = compute_scales(lambda, pi);

  struct One {
    std::int64_t size = 0;
    double W = 0.0;
    double Z = 0.0;
  };
  const auto results = parallel_map(runs, opt.jobs, [&](int i) {
    DiscreteFFP proc = DiscreteFFP::create(lambda, pi, opt.box_A, run_seed(seed, static_cast<std::uint64_t>(i)));
    proc.advance_to(t);
    const ClusterObservables obs = proc.observables(0.0);
    return One{obs.cluster ? obs.cluster->size() : 0, obs.W, obs.Z};
  });

  const double lo = std::pow(lambda, -a);
  const double hi = std::pow(lambda, -b);
  std::int64_t nonempty = 0;
  std::int64_t window = 0;
  std::vector<std::int64_t> tails(B.size(), 0);
  for (const One& o : results) {
    r.sizes.push_back(o.size);
    r.W.push_back(o.W);
    r.Z.push_back(o.Z);
    nonempty += o.size >= 1;
    const auto c = static_cast<double>(o.size);
    window += c >= lo && c <= hi;
    for (std::size_t k = 0; k < B.size(); ++k)
      tails[k] += c >= B[k] * static_cast<double>(r.scales.n);
  }
  r.nonempty = wilson(nonempty, runs);
  r.in_window = wilson(window, runs);
  for (std::int64_t h : tails) r.tail.push_back(wilson(h, runs));
  r.scaled = summarize(r.scaled_sizes());
  r.W_hist = histogram(r.W, opt.bins);
  r.Z_hist = histogram(r.Z, opt.bins);
  return r;
}

BarrierResult barrier_height_experiment(double lambda, double pi, const Regime& regime, double t0,
                                        double t1, int runs, std::uint64_t seed,
                                        const BarrierOptions& opt) {
  require(t0 == 0.0 || t0 > 1.0, "t0 must be 0 or exceed 1");
  require(t1 > t0 && t1 < t0 + 1.0, "need t0 < t1 < t0 + 1");
  require(runs >= 1, "need at least one run");
  require(opt.box_A > 0.0 && opt.max_delay > 0.0, "box and max delay must be positive");
  if (!regime_consistent(lambda, pi, regime))
    throw ParameterError("(lambda, pi) does not classify as " + regime.describe());
  const Scales s = compute_scales(lambda, pi);

  BarrierResult r;
  r.lambda = lambda;
  r.pi = pi;
  r.regime = regime;
  r.t0 = t0;
  r.t1 = t1;
  r.runs = runs;
  r.seed = seed;
  r.box_A = opt.box_A;

  struct One {
    double theta = kNaN;
    std::int64_t destroyed = 0;
  };
  const auto results = parallel_map(runs, opt.jobs, [&](int i) {
    EngineConfig cfg;
    cfg.lambda = 0.0;
    cfg.pi = pi;
    cfg.half_width = static_cast<std::int64_t>(std::floor(static_cast<long double>(opt.box_A) * s.n));
    cfg.seed = run_seed(seed, static_cast<std::uint64_t>(i));
    cfg.a = s.a;
    cfg.n = s.n;
    cfg.m = s.m;
    DiscreteFFP proc(cfg);
    if (t0 > 1.0) {
      proc.fill(SiteState::Occupied);
      proc.advance_to(t0);
      proc.ignite(0);
    }
    proc.advance_to(t1);
    One one;
    if (proc.at(0) != SiteState::Occupied) {
      one.theta = 0.0;
      return one;
    }
    // C^P: sites set burning by the fire lit at the origin at t1.
    std::vector<char> in_cp(static_cast<std::size_t>(2 * cfg.half_width + 1), 0);
    auto idx = [&](std::int64_t site) { return static_cast<std::size_t>(site + cfg.half_width); };
    std::int64_t unoccupied = 0;
    bool tracking = false;
    proc.on_transition([&](const Transition& tr) {
      if (!tracking) return;
      if (tr.to == SiteState::Burning) {
        const bool ours = tr.cause == ClockKind::Match ? tr.site == 0 : in_cp[idx(tr.source)] != 0;
        if (!ours) return;
        if (!in_cp[idx(tr.site)]) {
          in_cp[idx(tr.site)] = 1;
          ++one.destroyed;
        }
        ++unoccupied;
      } else if (tr.to == SiteState::Occupied && in_cp[idx(tr.site)]) {
        --unoccupied;
      }
    });
    tracking = true;
    proc.ignite(0);
    const double limit = s.a * (t1 + opt.max_delay);
    while (unoccupied > 0) {
      if (!proc.step(limit)) return one;
    }
    one.theta = proc.now_macro() - t1;
    return one;
  });

  std::vector<double> ok;
  for (const One& o : results) {
    r.theta.push_back(o.theta);
    r.destroyed.push_back(o.destroyed);
    if (std::isnan(o.theta)) {
      ++r.censored;
    } else {
      ok.push_back(o.theta);
    }
  }
  r.summary = summarize(ok);
  return r;
}

FrontStatsResult front_statistics(double pi, const std::vector<double>& horizons, int runs,
                                  std::uint64_t seed, int jobs) {
  require(pi >= 1.0 && std::isfinite(pi), "pi must be >= 1");
  require(!horizons.empty(), "need at least one horizon");
  require(runs >= 2, "need at least two runs");
  double prev = 0.0;
  for (double h : horizons) {
    require(h > prev, "horizons must be positive and increasing");
    prev = h;
  }
  const double hmax = horizons.back();
  const std::int64_t radius = suggested_box_radius(pi, 1.0, hmax);

  struct One {
    std::vector<std::int64_t> right;
    std::vector<std::int64_t> left;
    bool truncated = false;
  };
  const auto results = parallel_map(runs, jobs, [&](int i) {
    const PropagationRun pr = run_propagation(pi, hmax, 1.0, radius, run_seed(seed, static_cast<std::uint64_t>(i)));
    One o;
    o.truncated = pr.truncated;
    for (double h : horizons) {
      o.right.push_back(pr.right_front(h));
      o.left.push_back(-pr.left_front(h));
    }
    return o;
  });

  FrontStatsResult r;
  r.pi = pi;
  r.runs = runs;
  r.seed = seed;
  for (const One& o : results) r.truncated += o.truncated;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    FrontRow row;
    row.horizon = horizons[k];
    row.expected = pi * horizons[k];
    std::vector<double> right;
    std::vector<double> left;
    std::vector<std::int64_t> inc_right;
    std::vector<std::int64_t> inc_left;
    for (const One& o : results) {
      right.push_back(static_cast<double>(o.right[k]));
      left.push_back(static_cast<double>(o.left[k]));
      inc_right.push_back(o.right[k] - (k ? o.right[k - 1] : 0));
      inc_left.push_back(o.left[k] - (k ? o.left[k - 1] : 0));
    }
    row.right = summarize(right);
    row.left = summarize(left);
    row.correlation = pearson(right, left);
    const double span = horizons[k] - (k ? horizons[k - 1] : 0.0);
    row.gof_right = poisson_gof(inc_right, pi * span);
    row.gof_left = poisson_gof(inc_left, pi * span);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace ffp
