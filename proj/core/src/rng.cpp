// SPDX-License-Identifier: Apache-2.0
#include "ffp/rng.hpp"

#include <cmath>
#include <limits>

#include "ffp/errors.hpp"

namespace ffp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t initial_state(std::uint64_t master, std::uint64_t id) noexcept {
  return mix64(mix64(master + kGolden) ^ mix64(id ^ 0xD1B54A32D192ED03ULL));
}

double to_unit(std::uint64_t bits) noexcept {
  // (k+1) * 2^-53 with k in [0, 2^53): never zero, reaches 1.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::uint64_t tag : tags) h = mix64(h ^ mix64(tag + kGolden)) + kGolden;
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
    : master_(master_seed), id_(stream_id), state_(initial_state(master_seed, stream_id)) {}

std::uint64_t RngStream::next_u64() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform() noexcept { return to_unit(next_u64()); }

double RngStream::exponential(double rate) { return exp_from_uniform(uniform(), rate); }

RngStream RngStream::child(std::uint64_t tag) const noexcept {
  return RngStream(master_, stream_key({id_, tag}));
}

double exp_from_uniform(double u, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be positive and finite");
  require(u > 0.0 && u <= 1.0, "uniform variate must lie in (0,1]");
  // -log(1) is -0.0; report +0.0.
  return u == 1.0 ? 0.0 : -std::log(u) / rate;
}

double exp_sample(RngStream& stream, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be positive and finite");
  return exp_from_uniform(stream.uniform(), rate);
}

MarkSet poisson_rectangle(RngStream& stream, double x_lo, double x_hi, double t_lo,
                          double t_hi) {
  require(std::isfinite(x_lo) && std::isfinite(x_hi) && x_lo < x_hi,
          "poisson_rectangle: need x_lo < x_hi");
  require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < t_hi,
          "poisson_rectangle: need t_lo < t_hi");
  const double width = x_hi - x_lo;
  MarkSet out;
  double t = t_lo;
  for (;;) {
    const double next = t + exp_sample(stream, width);
    if (next >= t_hi) break;
    // Gaps below one ulp would break strict ordering; they have probability ~1e-16.
    if (next <= t) continue;
    t = next;
    const double u = 1.0 - stream.uniform();  // [0,1)
    out.push_back({x_lo + width * u, t});
  }
  return out;
}

PoissonClock::PoissonClock(std::uint64_t master_seed, std::uint64_t stream_id, double rate)
    : master_(master_seed), id_(stream_id), rate_(rate) {
  require(rate >= 0.0 && std::isfinite(rate), "clock rate must be finite and nonnegative");
  width_ = rate > 0.0 ? 8.0 / rate : 0.0;
}

void PoissonClock::open_block(std::int64_t k) {
  block_ = k;
  state_ = initial_state(master_, stream_key({id_, static_cast<std::uint64_t>(k)}));
  cursor_ = static_cast<double>(k) * width_;
}

double PoissonClock::next_after(double s) {
  if (rate_ <= 0.0) return std::numeric_limits<double>::infinity();
  if (next_ > s) return next_;
  std::int64_t k = s > 0.0 ? static_cast<std::int64_t>(std::floor(s / width_)) : 0;
  if (k > block_) open_block(k);
  for (;;) {
    state_ += kGolden;
    const double t = cursor_ - std::log(to_unit(mix64(state_))) / rate_;
    if (t >= static_cast<double>(block_ + 1) * width_) {
      open_block(block_ + 1);
      continue;
    }
    cursor_ = t;
    if (t > s) {
      next_ = t;
      return t;
    }
  }
}

std::vector<double> PoissonClock::points_before(double t_end) const {
  std::vector<double> out;
  if (rate_ <= 0.0) return out;
  for (std::int64_t k = 0; static_cast<double>(k) * width_ < t_end; ++k) {
    std::uint64_t state = initial_state(master_, stream_key({id_, static_cast<std::uint64_t>(k)}));
    double t = static_cast<double>(k) * width_;
    const double end = static_cast<double>(k + 1) * width_;
    for (;;) {
      state += kGolden;
      t = t - std::log(to_unit(mix64(state))) / rate_;
      if (t >= end || t >= t_end) break;
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace ffp
