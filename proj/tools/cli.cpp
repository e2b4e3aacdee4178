// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ffp/errors.hpp"
#include "ffp/harness.hpp"
#include "ffp/limit.hpp"
#include "ffp/parallel.hpp"
#include "ffp/propagation.hpp"
#include "ffp/scales.hpp"
#include "ffp/stats.hpp"

namespace ffp::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kOutputDirEnv = "FFP_OUTPUT_DIR";
constexpr std::uint64_t kLimitMarkTag = 0x3A75;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

std::string lo_of(const IntervalOrEmpty& I) { return I ? num(I->lo) : "nan"; }
std::string hi_of(const IntervalOrEmpty& I) { return I ? num(I->hi) : "nan"; }

ordered_json interval_json(const IntervalOrEmpty& I) {
  if (!I) return nullptr;
  return ordered_json::array({I->lo, I->hi});
}

// Ordered parameter list; emitted as '# key=value' lines or a JSON object.
class Meta {
 public:
  explicit Meta(std::string command) { add("command", std::move(command)); }
  void add(const std::string& k, std::string v) { kv_.emplace_back(k, std::move(v)); }
  void add(const std::string& k, const char* v) { kv_.emplace_back(k, std::string(v)); }
  void add(const std::string& k, double v) { kv_.emplace_back(k, num(v)); }
  void add(const std::string& k, std::int64_t v) { kv_.emplace_back(k, std::to_string(v)); }
  void add(const std::string& k, int v) { kv_.emplace_back(k, std::to_string(v)); }
  void add(const std::string& k, std::uint64_t v) { kv_.emplace_back(k, std::to_string(v)); }
  void add(const std::string& k, bool v) { kv_.emplace_back(k, v ? "true" : "false"); }

  void write_comment(std::ostream& os) const {
    os << "# ffp " << FFP_VERSION << "\n";
    for (const auto& [k, v] : kv_) os << "# " << k << "=" << v << "\n";
  }
  ordered_json json() const {
    ordered_json j;
    j["tool"] = "ffp";
    j["version"] = FFP_VERSION;
    for (const auto& [k, v] : kv_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

struct Common {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;
  std::string out_dir;
  std::string format = "csv";
  bool raw_time = false;
};

void add_common(CLI::App* sub, Common& c, bool with_format, bool with_raw_time) {
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads; output order is independent of this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "output file (relative paths resolve under --out-dir)");
  sub->add_option("--out-dir", c.out_dir,
                  std::string("output directory (default: $") + kOutputDirEnv + ")");
  if (with_format)
    sub->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  if (with_raw_time) sub->add_flag("--raw-time", c.raw_time, "report raw (unscaled) times");
}

// Writes `text` to stdout or to the resolved --out path.
void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::filesystem::path path(c.out);
  std::string dir = c.out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv(kOutputDirEnv)) dir = env;
  }
  if (path.is_relative() && !dir.empty()) path = std::filesystem::path(dir) / path;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

struct RegimeArgs {
  std::optional<double> pi;
  std::optional<double> p;
  std::optional<double> z0;
  bool fast = false;
};

void add_regime(CLI::App* sub, RegimeArgs& r) {
  sub->add_option("--pi", r.pi, "propagation rate; derived from the regime when omitted");
  auto* p = sub->add_option("--p", r.p, "intermediate regime with this p");
  auto* z = sub->add_option("--z0", r.z0, "slow regime with this z0");
  auto* f = sub->add_flag("--fast", r.fast, "fast regime");
  p->excludes(z)->excludes(f);
  z->excludes(f);
}

// Resolves (pi, regime) from the flags. Without a regime flag the regime is
// whatever (lambda, pi) classifies as.
std::pair<double, Regime> resolve_regime(double lambda, const RegimeArgs& r) {
  std::optional<Regime> target;
  if (r.p) target = Regime::intermediate(*r.p);
  if (r.z0) target = Regime::slow(*r.z0);
  if (r.fast) target = Regime::fast();
  if (!target && !r.pi) throw ParameterError("give --pi or one of --p/--z0/--fast");
  const double pi = r.pi ? *r.pi : pi_for_regime(lambda, *target);
  if (!target) target = classify_regime(lambda, pi).regime;
  return {pi, *target};
}

// ---- scales ----------------------------------------------------------------

struct ScalesArgs {
  double lambda = 0.01;
  double pi = 1.0;
  std::optional<double> z;
  std::optional<double> A;
  std::optional<double> gamma;
  double z0 = 0.0;
  std::string format = "text";
  Common c;
};

void cmd_scales(const ScalesArgs& a, std::ostream& out) {
  const Scales s = compute_scales(a.lambda, a.pi);
  const RegimeInfo info = classify_regime(a.lambda, a.pi);
  ordered_json j;
  j["lambda"] = s.lambda;
  j["pi"] = s.pi;
  j["a"] = s.a;
  j["n"] = s.n;
  j["m"] = s.m;
  j["eps"] = s.eps;
  j["ratio"] = s.ratio;
  j["zeta"] = s.zeta;
  j["regime"] = info.regime.describe();
  j["asymptotic"] = s.asymptotic;
  if (a.z) j["kappa_z"] = kappa_z(s, *a.z);
  if (a.A) j["varkappa_A"] = varkappa_A(s, *a.A);
  if (a.gamma) j["m_gamma"] = m_gamma(s, *a.gamma, a.z0);
  std::ostringstream os;
  if (a.format == "json") {
    ordered_json doc;
    Meta meta("scales");
    doc["meta"] = meta.json();
    doc["scales"] = j;
    os << doc.dump(2) << "\n";
  } else {
    os << "# ffp " << FFP_VERSION << "\n";
    os << fmt::format("lambda={}\npi={}\na={:.6f}\nn={}\nm={}\neps={:.6g}\nratio={:.6g}\nzeta={:.6g}\n",
                      num(s.lambda), num(s.pi), s.a, s.n, s.m, s.eps, s.ratio, s.zeta);
    os << "regime=" << info.regime.describe() << "\n";
    os << "asymptotic=" << (s.asymptotic ? "true" : "false") << "\n";
    if (a.z) os << fmt::format("kappa_z={:.6g}\n", kappa_z(s, *a.z));
    if (a.A) os << fmt::format("varkappa_A={:.6g}\n", varkappa_A(s, *a.A));
    if (a.gamma) os << fmt::format("m_gamma={}\n", m_gamma(s, *a.gamma, a.z0));
  }
  emit(a.c, out, os.str());
}

// ---- simulate-discrete -----------------------------------------------------

struct DiscreteArgs {
  double lambda = 0.01;
  double pi = 1.0;
  double A = 1.0;
  double T = 2.0;
  int samples = 4;
  double x = 0.0;
  Common c;
};

void cmd_simulate_discrete(DiscreteArgs& a, std::ostream& out) {
  require(a.T > 0.0, "T must be positive");
  require(a.samples >= 1, "need at least one sample time");
  DiscreteFFP proc = DiscreteFFP::create(a.lambda, a.pi, a.A, a.c.seed);
  Meta meta("simulate-discrete");
  meta.add("lambda", a.lambda);
  meta.add("pi", a.pi);
  meta.add("A", a.A);
  meta.add("T", a.T);
  meta.add("samples", a.samples);
  meta.add("x", a.x);
  meta.add("seed", a.c.seed);
  meta.add("time_units", a.c.raw_time ? "raw" : "macroscopic");
  const double scale = a.c.raw_time ? proc.config().a : 1.0;
  std::ostringstream os;
  if (a.c.format == "json") {
    ordered_json doc;
    doc["meta"] = meta.json();
    auto snaps = ordered_json::array();
    for (int k = 1; k <= a.samples; ++k) {
      const double t = a.T * k / a.samples;
      proc.advance_to(t);
      snaps.push_back(ordered_json::parse(proc.snapshot()));
    }
    doc["snapshots"] = std::move(snaps);
    os << doc.dump() << "\n";
  } else {
    meta.write_comment(os);
    os << "t,cluster_lo,cluster_hi,D_lo,D_hi,K,Z,W,burning,events\n";
    for (int k = 1; k <= a.samples; ++k) {
      const double t = a.T * k / a.samples;
      proc.advance_to(t);
      const ClusterObservables o = proc.observables(a.x);
      os << num(t * scale) << ","
         << (o.cluster ? std::to_string(o.cluster->lo) : "nan") << ","
         << (o.cluster ? std::to_string(o.cluster->hi) : "nan") << "," << lo_of(o.D) << ","
         << hi_of(o.D) << "," << num(o.K) << "," << num(o.Z) << "," << num(o.W) << ","
         << proc.burning_count() << "," << proc.event_count() << "\n";
    }
  }
  emit(a.c, out, os.str());
}

// ---- simulate-limit --------------------------------------------------------

struct LimitArgs {
  std::optional<double> p;
  std::optional<double> z0;
  double A = 2.0;
  double T = 3.0;
  double x = 0.0;
  int queries = 31;
  Common c;
};

void cmd_simulate_limit(LimitArgs& a, std::ostream& out) {
  require(a.p.has_value() != a.z0.has_value(), "give exactly one of --p and --z0");
  require(a.queries >= 1, "need at least one query time");
  RngStream ms(a.c.seed, stream_key({kLimitMarkTag}));
  const MarkSet marks = poisson_rectangle(ms, -a.A, a.A, 0.0, a.T);
  Meta meta("simulate-limit");
  if (a.p) meta.add("p", *a.p);
  if (a.z0) meta.add("z0", *a.z0);
  meta.add("A", a.A);
  meta.add("T", a.T);
  meta.add("x", a.x);
  meta.add("seed", a.c.seed);
  ordered_json doc;
  doc["meta"] = meta.json();
  auto qs = ordered_json::array();
  auto query_rows = [&](const auto& st) {
    for (int k = 0; k < a.queries; ++k) {
      const double t = a.queries == 1 ? a.T : a.T * k / (a.queries - 1);
      const LimitQuery q = query_limit(st, a.x, t);
      qs.push_back({{"t", t}, {"value", q.value}, {"H", q.H}, {"D", interval_json(q.D)}});
    }
  };
  if (a.p) {
    const LimitStateP st = *a.p > 0.0 ? simulate_alffp_p(*a.p, a.A, a.T, marks)
                                      : simulate_lffp_0(a.A, a.T, marks);
    doc["log"] = ordered_json::parse(st.event_log_json());
    query_rows(st);
  } else {
    const LimitStateInf st = simulate_lffp_inf(*a.z0, a.A, a.T, marks);
    auto feats = ordered_json::array();
    for (const auto& f : st.features)
      feats.push_back({{"x", f.x}, {"tau", f.tau}, {"kind", f.permanent ? "permanent" : "temporary"}});
    doc["features"] = std::move(feats);
    query_rows(st);
  }
  doc["queries"] = std::move(qs);
  emit(a.c, out, doc.dump() + "\n");
}

// ---- propagation -----------------------------------------------------------

struct PropagationArgs {
  double pi = 50.0;
  double T = 2.0;
  double a = 1.0;
  std::int64_t radius = 0;
  Common c;
};

void cmd_propagation(PropagationArgs& a, std::ostream& out) {
  const std::int64_t radius = a.radius > 0 ? a.radius : suggested_box_radius(a.pi, a.a, a.T);
  const PropagationRun run = run_propagation(a.pi, a.T, a.a, radius, a.c.seed);
  const Omega1Tally tally = omega1_tally(run);
  Meta meta("propagation");
  meta.add("pi", a.pi);
  meta.add("T", a.T);
  meta.add("a", a.a);
  meta.add("box_radius", radius);
  meta.add("seed", a.c.seed);
  meta.add("time_units", a.c.raw_time ? "raw" : "macroscopic");
  meta.add("truncated", run.truncated);
  meta.add("sparks", static_cast<std::int64_t>(run.sparks.size()));
  meta.add("omega1_sites", tally.sites);
  meta.add("omega1_fraction", tally.fraction());
  const double scale = a.c.raw_time ? 1.0 : 1.0 / a.a;
  std::ostringstream os;
  meta.write_comment(os);
  os << "t,right,left\n";
  os << "0,0,0\n";
  std::size_t r = 0;
  std::size_t l = 0;
  std::int64_t right = 0;
  std::int64_t left = 0;
  while (r < run.right.size() || l < run.left.size()) {
    const bool take_right =
        l >= run.left.size() || (r < run.right.size() && run.right[r].time <= run.left[l].time);
    double t = 0.0;
    if (take_right) {
      t = run.right[r].time;
      right = run.right[r++].position;
    } else {
      t = run.left[l].time;
      left = run.left[l++].position;
    }
    os << num(t * scale) << "," << right << "," << left << "\n";
  }
  emit(a.c, out, os.str());
}

// ---- couple ----------------------------------------------------------------

struct CoupleArgs {
  double lambda = std::exp(-6.0);
  RegimeArgs regime;
  double A = 2.0;
  double T = 2.0;
  int grid = 512;
  double x = 0.0;
  int runs = 1;
  Common c;
};

void cmd_couple(CoupleArgs& a, std::ostream& out) {
  require(a.runs >= 1, "need at least one run");
  const auto [pi, regime] = resolve_regime(a.lambda, a.regime);
  Meta meta("couple");
  meta.add("lambda", a.lambda);
  meta.add("pi", pi);
  meta.add("regime", regime.describe());
  meta.add("A", a.A);
  meta.add("T", a.T);
  meta.add("grid", a.grid);
  meta.add("x", a.x);
  meta.add("runs", a.runs);
  meta.add("seed", a.c.seed);
  std::ostringstream os;
  if (a.runs == 1) {
    const CoupledRun run = coupled_run(a.lambda, pi, regime, a.A, a.T, a.grid, a.c.seed, a.x);
    meta.add("marks", static_cast<std::int64_t>(run.marks.size()));
    meta.add("marks_outside_box", run.marks_outside_box);
    meta.add("coupling_consistent", coupling_consistent(run));
    meta.add("d_T", run.d_T);
    meta.add("delta_T", run.delta_T);
    meta.write_comment(os);
    os << "t,disc_lo,disc_hi,disc_Z,disc_W,lim_lo,lim_hi,lim_value,delta,value_gap\n";
    for (const CoupledRow& row : run.rows) {
      os << num(row.t) << "," << lo_of(row.disc_D) << "," << hi_of(row.disc_D) << ","
         << num(row.disc_Z) << "," << num(row.disc_W) << "," << lo_of(row.lim_D) << ","
         << hi_of(row.lim_D) << "," << num(row.lim_value) << "," << num(row.delta) << ","
         << num(row.value_gap) << "\n";
    }
  } else {
    const auto runs = parallel_map(a.runs, a.c.jobs, [&](int i) {
      return coupled_run(a.lambda, pi, regime, a.A, a.T, a.grid,
                         run_seed(a.c.seed, static_cast<std::uint64_t>(i)), a.x);
    });
    std::vector<double> dts;
    for (const auto& r : runs) dts.push_back(r.d_T);
    meta.add("median_d_T", median(dts));
    meta.write_comment(os);
    os << "run,seed,marks,d_T,delta_T,coupling_consistent\n";
    for (int i = 0; i < a.runs; ++i) {
      const CoupledRun& r = runs[static_cast<std::size_t>(i)];
      os << i << "," << r.seed << "," << r.marks.size() << "," << num(r.d_T) << ","
         << num(r.delta_T) << "," << (coupling_consistent(r) ? 1 : 0) << "\n";
    }
  }
  emit(a.c, out, os.str());
}

// ---- cluster-dist ----------------------------------------------------------

struct ClusterArgs {
  double lambda = std::exp(-6.0);
  RegimeArgs regime;
  double t = 2.0;
  double a = 0.25;
  double b = 0.75;
  std::vector<double> B{1.0, 2.0, 4.0};
  int runs = 500;
  double box = 8.0;
  Common c;
};

ordered_json estimate_json(const ProbabilityEstimate& e) {
  return {{"hits", e.hits}, {"trials", e.trials}, {"p", e.p}, {"lo", e.lo}, {"hi", e.hi}};
}

void cmd_cluster_dist(ClusterArgs& a, std::ostream& out) {
  const auto [pi, regime] = resolve_regime(a.lambda, a.regime);
  ClusterDistOptions opt;
  opt.box_A = a.box;
  opt.jobs = a.c.jobs;
  const ClusterDistResult r =
      cluster_dist_experiment(a.lambda, pi, a.t, a.a, a.b, a.B, a.runs, a.c.seed, opt);
  Meta meta("cluster-dist");
  meta.add("lambda", a.lambda);
  meta.add("pi", pi);
  meta.add("regime", regime.describe());
  meta.add("t", a.t);
  meta.add("a", a.a);
  meta.add("b", a.b);
  meta.add("runs", a.runs);
  meta.add("box_A", a.box);
  meta.add("seed", a.c.seed);
  std::ostringstream os;
  if (a.c.format == "json") {
    ordered_json doc;
    doc["meta"] = meta.json();
    doc["n"] = r.scales.n;
    doc["nonempty"] = estimate_json(r.nonempty);
    doc["in_window"] = estimate_json(r.in_window);
    auto tails = ordered_json::array();
    for (std::size_t k = 0; k < a.B.size(); ++k) {
      ordered_json e = estimate_json(r.tail[k]);
      e["B"] = a.B[k];
      e["envelope"] = 2.0 * std::exp(-a.B[k] / 8.0);
      tails.push_back(std::move(e));
    }
    doc["tail"] = std::move(tails);
    doc["mean_scaled"] = r.scaled.mean;
    doc["stderr_scaled"] = r.scaled.stderr_mean;
    doc["W_hist"] = r.W_hist;
    doc["Z_hist"] = r.Z_hist;
    if (regime.kind == Regime::Kind::Slow && a.t > 2.0 * regime.param) {
      const double rate = a.t - regime.param;
      doc["ks_gamma"] = ks_statistic(r.scaled_sizes(), [rate](double v) { return gamma2_cdf(v, rate); });
    }
    os << doc.dump(2) << "\n";
  } else {
    meta.add("mean_scaled", r.scaled.mean);
    meta.add("stderr_scaled", r.scaled.stderr_mean);
    meta.add("p_in_window", r.in_window.p);
    for (std::size_t k = 0; k < a.B.size(); ++k)
      meta.add(fmt::format("p_tail_B{}", num(a.B[k])), r.tail[k].p);
    meta.write_comment(os);
    os << "run,size,scaled,W,Z\n";
    for (std::size_t i = 0; i < r.sizes.size(); ++i)
      os << i << "," << r.sizes[i] << ","
         << num(static_cast<double>(r.sizes[i]) / static_cast<double>(r.scales.n)) << ","
         << num(r.W[i]) << "," << num(r.Z[i]) << "\n";
  }
  emit(a.c, out, os.str());
}

// ---- gamma-test ------------------------------------------------------------

struct GammaArgs {
  double z0 = 0.5;
  double t = 2.0;
  int runs = 10000;
  Common c;
};

void cmd_gamma_test(GammaArgs& a, std::ostream& out) {
  const auto samples = sample_cluster_length_inf(a.z0, a.t, a.runs, a.c.seed);
  const double rate = a.t - a.z0;
  const double ks = ks_statistic(samples, [rate](double v) { return gamma2_cdf(v, rate); });
  const double crit = ks_critical_1pct(samples.size());
  const MeanEstimate m = summarize(samples);
  Meta meta("gamma-test");
  meta.add("z0", a.z0);
  meta.add("t", a.t);
  meta.add("runs", a.runs);
  meta.add("seed", a.c.seed);
  meta.add("rate", rate);
  std::ostringstream os;
  if (a.c.format == "json") {
    ordered_json doc;
    doc["meta"] = meta.json();
    doc["ks"] = ks;
    doc["critical_1pct"] = crit;
    doc["pass"] = ks < crit;
    doc["mean"] = m.mean;
    doc["expected_mean"] = 2.0 / rate;
    os << doc.dump(2) << "\n";
  } else {
    meta.write_comment(os);
    os << "ks,critical_1pct,pass,mean,expected_mean\n";
    os << num(ks) << "," << num(crit) << "," << (ks < crit ? "pass" : "fail") << "," << num(m.mean)
       << "," << num(2.0 / rate) << "\n";
  }
  emit(a.c, out, os.str());
}

// ---- barrier ---------------------------------------------------------------

struct BarrierArgs {
  double lambda = std::exp(-8.0);
  RegimeArgs regime;
  double t0 = 0.0;
  double t1 = 0.5;
  int runs = 300;
  double box = 1.0;
  double max_delay = 10.0;
  Common c;
};

void cmd_barrier(BarrierArgs& a, std::ostream& out) {
  const auto [pi, regime] = resolve_regime(a.lambda, a.regime);
  BarrierOptions opt;
  opt.box_A = a.box;
  opt.jobs = a.c.jobs;
  opt.max_delay = a.max_delay;
  const BarrierResult r =
      barrier_height_experiment(a.lambda, pi, regime, a.t0, a.t1, a.runs, a.c.seed, opt);
  Meta meta("barrier");
  meta.add("lambda", a.lambda);
  meta.add("pi", pi);
  meta.add("regime", regime.describe());
  meta.add("t0", a.t0);
  meta.add("t1", a.t1);
  meta.add("runs", a.runs);
  meta.add("box_A", a.box);
  meta.add("max_delay", a.max_delay);
  meta.add("seed", a.c.seed);
  meta.add("mean_theta", r.summary.mean);
  meta.add("stderr_theta", r.summary.stderr_mean);
  meta.add("censored", r.censored);
  std::ostringstream os;
  meta.write_comment(os);
  os << "run,theta,destroyed\n";
  for (std::size_t i = 0; i < r.theta.size(); ++i)
    os << i << "," << num(r.theta[i]) << "," << r.destroyed[i] << "\n";
  emit(a.c, out, os.str());
}

// ---- fronts ----------------------------------------------------------------

struct FrontsArgs {
  double pi = 50.0;
  std::vector<double> horizons{0.5, 1.0, 1.5, 2.0};
  int runs = 1000;
  Common c;
};

void cmd_fronts(FrontsArgs& a, std::ostream& out) {
  const FrontStatsResult r = front_statistics(a.pi, a.horizons, a.runs, a.c.seed, a.c.jobs);
  Meta meta("fronts");
  meta.add("pi", a.pi);
  meta.add("runs", a.runs);
  meta.add("seed", a.c.seed);
  meta.add("time_units", "raw");
  meta.add("truncated_runs", r.truncated);
  std::ostringstream os;
  meta.write_comment(os);
  os << "horizon,expected,mean_right,var_right,se_right,mean_left,var_left,se_left,corr,"
        "gof_right_chi2,gof_right_dof,gof_right_p,gof_left_chi2,gof_left_dof,gof_left_p\n";
  for (const FrontRow& row : r.rows) {
    os << num(row.horizon) << "," << num(row.expected) << "," << num(row.right.mean) << ","
       << num(row.right.variance) << "," << num(row.right.stderr_mean) << ","
       << num(row.left.mean) << "," << num(row.left.variance) << ","
       << num(row.left.stderr_mean) << "," << num(row.correlation) << ","
       << num(row.gof_right.chi2) << "," << row.gof_right.dof << "," << num(row.gof_right.p_value)
       << "," << num(row.gof_left.chi2) << "," << row.gof_left.dof << ","
       << num(row.gof_left.p_value) << "\n";
  }
  emit(a.c, out, os.str());
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulation of one-dimensional forest-fire processes and their scaling limits",
               "ffp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FFP_VERSION);

  ScalesArgs sc;
  auto* s = app.add_subcommand("scales", "print derived scales and the regime of (lambda, pi)");
  s->add_option("--lambda", sc.lambda, "match rate in (0,1)")->required();
  s->add_option("--pi", sc.pi, "propagation rate >= 1")->capture_default_str();
  s->add_option("--z", sc.z, "also print kappa_z at this z");
  s->add_option("--A", sc.A, "also print varkappa_A at this A");
  s->add_option("--gamma", sc.gamma, "also print m_gamma at this gamma");
  s->add_option("--gamma-z0", sc.z0, "z0 used by m_gamma")->capture_default_str();
  s->add_option("--format", sc.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  add_common(s, sc.c, false, false);

  DiscreteArgs da;
  auto* d = app.add_subcommand("simulate-discrete", "run the discrete process and sample it");
  d->add_option("--lambda", da.lambda)->required();
  d->add_option("--pi", da.pi)->required();
  d->add_option("--A", da.A, "macroscopic box half-width")->capture_default_str();
  d->add_option("--T", da.T, "macroscopic horizon")->capture_default_str();
  d->add_option("--samples", da.samples, "number of evenly spaced sample times")->capture_default_str();
  d->add_option("--x", da.x, "observation point for csv output")->capture_default_str();
  add_common(d, da.c, true, true);

  LimitArgs la;
  auto* l = app.add_subcommand("simulate-limit", "run a limit process on random marks");
  auto* lp = l->add_option("--p", la.p, "front slope; 0 selects the instantaneous engine");
  auto* lz = l->add_option("--z0", la.z0, "slow-regime limit with this z0");
  lp->excludes(lz);
  l->add_option("--A", la.A)->capture_default_str();
  l->add_option("--T", la.T)->capture_default_str();
  l->add_option("--x", la.x, "query point")->capture_default_str();
  l->add_option("--queries", la.queries, "evenly spaced query times on [0,T]")->capture_default_str();
  add_common(l, la.c, false, false);

  PropagationArgs pa;
  auto* p = app.add_subcommand("propagation", "fire ignited at the origin of a full box");
  p->add_option("--pi", pa.pi)->capture_default_str();
  p->add_option("--T", pa.T, "horizon in units of --a")->capture_default_str();
  p->add_option("--a", pa.a, "time scale (raw = a * T)")->capture_default_str();
  p->add_option("--radius", pa.radius, "box radius; default pi a T + 10 sqrt(pi a T)");
  add_common(p, pa.c, false, true);

  CoupleArgs ca;
  auto* c = app.add_subcommand("couple", "discrete and limit processes on shared marks");
  c->add_option("--lambda", ca.lambda)->capture_default_str();
  add_regime(c, ca.regime);
  c->add_option("--A", ca.A)->capture_default_str();
  c->add_option("--T", ca.T)->capture_default_str();
  c->add_option("--grid", ca.grid, "grid points on [0,T)")->capture_default_str();
  c->add_option("--x", ca.x)->capture_default_str();
  c->add_option("--runs", ca.runs, "runs > 1 print one summary row per run")->capture_default_str();
  add_common(c, ca.c, false, false);

  ClusterArgs cl;
  auto* k = app.add_subcommand("cluster-dist", "cluster size at the origin over independent runs");
  k->add_option("--lambda", cl.lambda)->capture_default_str();
  add_regime(k, cl.regime);
  k->add_option("--t", cl.t)->capture_default_str();
  k->add_option("--a", cl.a, "window lower exponent")->capture_default_str();
  k->add_option("--b", cl.b, "window upper exponent")->capture_default_str();
  k->add_option("--B", cl.B, "tail thresholds in units of n")->capture_default_str();
  k->add_option("--runs", cl.runs)->capture_default_str();
  k->add_option("--box", cl.box, "macroscopic box half-width")->capture_default_str();
  add_common(k, cl.c, true, false);

  GammaArgs ga;
  auto* g = app.add_subcommand("gamma-test", "KS test of exact slow-regime cluster lengths");
  g->add_option("--z0", ga.z0)->capture_default_str();
  g->add_option("--t", ga.t)->capture_default_str();
  g->add_option("--runs", ga.runs)->capture_default_str();
  add_common(g, ga.c, true, false);

  BarrierArgs ba;
  auto* b = app.add_subcommand("barrier", "regeneration delay of a microscopic fire");
  b->add_option("--lambda", ba.lambda)->capture_default_str();
  add_regime(b, ba.regime);
  b->add_option("--t0", ba.t0)->capture_default_str();
  b->add_option("--t1", ba.t1)->capture_default_str();
  b->add_option("--runs", ba.runs)->capture_default_str();
  b->add_option("--box", ba.box)->capture_default_str();
  b->add_option("--max-delay", ba.max_delay)->capture_default_str();
  add_common(b, ba.c, false, false);

  FrontsArgs fa;
  auto* f = app.add_subcommand("fronts", "front position statistics of the propagation process");
  f->add_option("--pi", fa.pi)->capture_default_str();
  f->add_option("--horizons", fa.horizons, "raw horizons, increasing")->capture_default_str();
  f->add_option("--runs", fa.runs)->capture_default_str();
  add_common(f, fa.c, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << FFP_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (s->parsed()) cmd_scales(sc, out);
    if (d->parsed()) cmd_simulate_discrete(da, out);
    if (l->parsed()) cmd_simulate_limit(la, out);
    if (p->parsed()) cmd_propagation(pa, out);
    if (c->parsed()) cmd_couple(ca, out);
    if (k->parsed()) cmd_cluster_dist(cl, out);
    if (g->parsed()) cmd_gamma_test(ga, out);
    if (b->parsed()) cmd_barrier(ba, out);
    if (f->parsed()) cmd_fronts(fa, out);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ffp::cli
