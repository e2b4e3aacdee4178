// SPDX-License-Identifier: Apache-2.0
#include "ffp/scales.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ffp/errors.hpp"

namespace ffp {

namespace {

std::int64_t floor_checked(long double v, const char* what) {
  if (!(v < 9.0e18L)) throw ParameterError(fmt::format("{} overflows 64-bit range", what));
  return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace

Regime Regime::intermediate(double p) {
  require(p > 0.0 && std::isfinite(p), "Intermediate regime needs p > 0");
  return {Kind::Intermediate, p};
}

Regime Regime::slow(double z0) {
  require(z0 >= 0.0 && z0 <= 1.0, "Slow regime needs z0 in [0,1]");
  return {Kind::Slow, z0};
}

std::string Regime::describe() const {
  switch (kind) {
    case Kind::Fast: return "fast";
    case Kind::Intermediate: return fmt::format("intermediate(p={:.6g})", param);
    case Kind::Slow: return fmt::format("slow(z0={:.6g})", param);
  }
  return "unknown";
}

Scales compute_scales(double lambda, double pi) {
  require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0,1)");
  require(pi >= 1.0 && std::isfinite(pi), "pi must be >= 1");
  const long double l = lambda;
  const long double a = -std::log(l);
  Scales s;
  s.lambda = lambda;
  s.pi = pi;
  s.a = static_cast<double>(a);
  s.n = floor_checked(1.0L / (l * a), "n");
  s.m = floor_checked(1.0L / (l * a * a), "m");
  s.eps = static_cast<double>(1.0L / (a * a * a));
  s.ratio = static_cast<double>(static_cast<long double>(s.n) / (a * pi));
  s.zeta = static_cast<double>(std::log(static_cast<long double>(pi)) / a);
  s.asymptotic = static_cast<long double>(2 * s.m + 1) < 1.0L / l;
  return s;
}

double pi_for_regime(double lambda, const Regime& target, double fast_ratio) {
  const Scales s = compute_scales(lambda);
  double pi = 0.0;
  switch (target.kind) {
    case Regime::Kind::Intermediate:
      require(target.param > 0.0, "Intermediate regime needs p > 0");
      pi = static_cast<double>(s.n) / (s.a * target.param);
      break;
    case Regime::Kind::Slow:
      require(target.param >= 0.0 && target.param <= 1.0, "Slow regime needs z0 in [0,1]");
      pi = std::pow(lambda, -target.param);
      break;
    case Regime::Kind::Fast:
      require(fast_ratio > 0.0, "fast ratio must be positive");
      pi = static_cast<double>(s.n) / (s.a * fast_ratio);
      break;
  }
  if (!(pi >= 1.0))
    throw RangeError(fmt::format("regime {} needs pi = {:.6g} < 1 at lambda = {:.6g}",
                                 target.describe(), pi, lambda));
  return pi;
}

RegimeInfo classify_regime(double lambda, double pi, const RegimeThresholds& th) {
  const Scales s = compute_scales(lambda, pi);
  RegimeInfo info;
  info.ratio = s.ratio;
  info.zeta = s.zeta;
  if (s.ratio < th.fast) {
    info.regime = Regime::fast();
  } else if (s.ratio > th.slow) {
    info.regime = Regime{Regime::Kind::Slow, std::clamp(s.zeta, 0.0, 1.0)};
  } else {
    info.regime = Regime{Regime::Kind::Intermediate, s.ratio};
  }
  return info;
}

bool regime_consistent(double lambda, double pi, const Regime& target,
                       const RegimeThresholds& th, double tol) {
  const RegimeInfo info = classify_regime(lambda, pi, th);
  if (info.regime.kind != target.kind) return false;
  if (target.kind == Regime::Kind::Intermediate)
    return std::abs(info.ratio - target.param) <= tol * target.param;
  if (target.kind == Regime::Kind::Slow) return std::abs(info.regime.param - target.param) <= tol;
  return true;
}

double kappa_z(const Scales& s, double z) {
  require(z > 0.0 && z < 1.0, "kappa_z needs z in (0,1)");
  return 1.0 / (std::pow(s.lambda, z) * s.a * s.pi) + s.eps;
}

double varkappa_A(const Scales& s, double A) {
  require(A >= 0.0 && std::isfinite(A), "varkappa_A needs A >= 0");
  return static_cast<double>(s.n) * A / (s.a * s.pi) + s.eps;
}

std::int64_t m_gamma(const Scales& s, double gamma, double z0) {
  require(gamma > 0.0 && gamma < 1.0, "m_gamma needs gamma in (0,1)");
  require(z0 >= 0.0 && z0 <= 1.0, "m_gamma needs z0 in [0,1]");
  const long double l = s.lambda;
  const long double a = -std::log(l);
  const long double expo = gamma + (1.0L - gamma) * z0;
  return floor_checked(gamma / (std::pow(l, expo) * a), "m_gamma");
}

}  // namespace ffp
