#pragma once

#include <cstdint>

#include "hsdpa/core.hpp"

namespace hsdpa {

struct TrafficParams {
  double rate_bps = 64'000.0;
  int packet_size_bits = 4096;
  double mean_burst_s = 0.5;
  double mean_idle_s = 0.5;
  bool enabled = true;

  bool operator==(const TrafficParams&) const = default;
};

/// Exponential on/off source: exponentially distributed ON and OFF
/// periods, constant-rate packets during ON. Starts with an OFF period so
/// sources sharing a start time do not burst in lockstep.
class ExponentialOnOffSource {
 public:
  struct Emission {
    SimTime time;
    std::uint64_t burst;
  };

  ExponentialOnOffSource(const TrafficParams& params, std::uint64_t seed) : params_(params), rng_(seed) {
    if (!(params.rate_bps > 0.0) || params.packet_size_bits <= 0 || !(params.mean_burst_s > 0.0) ||
        !(params.mean_idle_s > 0.0))
      throw InvalidInput("traffic source parameters must all be > 0");
    interval_ = seconds_to_time(static_cast<double>(params.packet_size_bits) / params.rate_bps);
    if (interval_ <= 0) throw InvalidInput("traffic source: packet interval rounds to zero");
    start_burst(0);
  }

  /// Next packet emission; advances the source.
  Emission next() {
    while (next_time_ >= burst_end_) start_burst(burst_end_);
    const Emission e{next_time_, burst_};
    next_time_ += interval_;
    return e;
  }

  SimTime packet_interval() const { return interval_; }
  /// Length of the ON period that contains the most recent emission.
  SimTime burst_length() const { return burst_end_ - burst_start_; }
  const TrafficParams& params() const { return params_; }

 private:
  void start_burst(SimTime after) {
    burst_start_ = after + seconds_to_time(rng_.exponential(params_.mean_idle_s));
    burst_end_ = burst_start_ + seconds_to_time(rng_.exponential(params_.mean_burst_s));
    next_time_ = burst_start_;
    ++burst_;
  }

  TrafficParams params_;
  Rng rng_;
  SimTime interval_ = 0;
  SimTime burst_start_ = 0;
  SimTime burst_end_ = 0;
  SimTime next_time_ = 0;
  std::uint64_t burst_ = 0;
};

}  // namespace hsdpa
