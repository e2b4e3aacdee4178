// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace ffp {

struct Scales {
  double lambda = 0.0;
  double pi = 1.0;
  double a = 0.0;         // log(1/lambda): time acceleration
  std::int64_t n = 0;     // floor(1/(lambda a)): sites per macroscopic unit
  std::int64_t m = 0;     // floor(1/(lambda a^2)): density window radius
  double eps = 0.0;       // 1/a^3
  double ratio = 0.0;     // n/(a pi)
  double zeta = 0.0;      // log(pi)/log(1/lambda)
  // False when 2m+1 >= 1/lambda, i.e. Z=1 no longer characterizes a full window.
  bool asymptotic = true;
};

struct Regime {
  enum class Kind { Fast, Intermediate, Slow };
  Kind kind = Kind::Fast;
  double param = 0.0;  // p for Intermediate, z0 for Slow

  static Regime fast() { return {Kind::Fast, 0.0}; }
  static Regime intermediate(double p);
  static Regime slow(double z0);
  std::string describe() const;
};

struct RegimeThresholds {
  double fast = 0.05;
  double slow = 20.0;
};

struct RegimeInfo {
  Regime regime;
  double ratio = 0.0;
  double zeta = 0.0;
};

Scales compute_scales(double lambda, double pi = 1.0);

// pi realizing the requested regime at this lambda. Throws RangeError if pi < 1.
double pi_for_regime(double lambda, const Regime& target, double fast_ratio = 0.01);

RegimeInfo classify_regime(double lambda, double pi, const RegimeThresholds& th = {});

// True when (lambda, pi) classifies into the same kind as `target`, and for
// Intermediate the classified p is within relative `tol` of target.param.
bool regime_consistent(double lambda, double pi, const Regime& target,
                       const RegimeThresholds& th = {}, double tol = 0.05);

double kappa_z(const Scales& s, double z);
double varkappa_A(const Scales& s, double A);
std::int64_t m_gamma(const Scales& s, double gamma, double z0);

}  // namespace ffp
