// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ffp {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Folds a list of tags into one stream id. Order matters.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> tags) noexcept;

// Counter-based generator. The whole sequence is a function of
// (master_seed, stream_id) only, so streams need no coordination and
// produce the same bits on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

  std::uint64_t master_seed() const noexcept { return master_; }
  std::uint64_t stream_id() const noexcept { return id_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on (0,1], 53-bit resolution.
  double uniform() noexcept;
  // Exp(rate) by inversion. rate must be positive.
  double exponential(double rate);

  // Child stream keyed by (this stream id, tag); independent of the draw position.
  RngStream child(std::uint64_t tag) const noexcept;

 private:
  std::uint64_t master_;
  std::uint64_t id_;
  std::uint64_t state_;
};

struct Mark {
  double x = 0.0;
  double t = 0.0;
};
using MarkSet = std::vector<Mark>;

// -ln(u)/rate for u in (0,1].
double exp_from_uniform(double u, double rate);
double exp_sample(RngStream& stream, double rate);

// Homogeneous unit-intensity Poisson points on [x_lo,x_hi) x [t_lo,t_hi),
// sorted by t. Times are generated as cumulative exponential gaps, so the
// output is strictly increasing by construction.
MarkSet poisson_rectangle(RngStream& stream, double x_lo, double x_hi, double t_lo,
                          double t_hi);

// A rate-`rate` Poisson process on [0, inf) realized block by block: the
// points inside block k = [k w, (k+1) w) come from the stream keyed by
// (stream_id, k). Any consumer that asks for the same (master, id) sees the
// same point set, whatever order it queries in.
class PoissonClock {
 public:
  PoissonClock() = default;
  PoissonClock(std::uint64_t master_seed, std::uint64_t stream_id, double rate);

  double rate() const noexcept { return rate_; }
  double block_width() const noexcept { return width_; }

  // Smallest point strictly greater than s. Queries must be nondecreasing in s.
  double next_after(double s);

  // All points in [0, t_end), enumerated independently of any cursor.
  std::vector<double> points_before(double t_end) const;

 private:
  void open_block(std::int64_t k);

  std::uint64_t master_ = 0;
  std::uint64_t id_ = 0;
  double rate_ = 0.0;
  double width_ = 0.0;
  std::int64_t block_ = -1;
  std::uint64_t state_ = 0;
  double cursor_ = -1.0;  // last generated point, or block start
  double next_ = -1.0;    // cached answer; valid while next_ > last query
};

}  // namespace ffp
