#pragma once

// Per-packet records and the delay datasets derived from them.
//
// CSV layouts (fixed column order, '\n' line endings, times in seconds
// with nine decimals):
//   packets.csv       flow,packet_id,created_s,delivered_s,delay_s,attempts,drop_reason
//   delay_series.csv  t_start,mean_delay_s,count      (empty mean for empty buckets)
//   distance.csv      flow,distance_m,mean_delay_s,count,empty
// Plot data is whitespace separated `t_start mean_delay_s`, non-empty buckets only.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsdpa/machs.hpp"

namespace hsdpa {

struct PacketRecord {
  FlowId flow{0};
  std::uint64_t packet_id = 0;
  SimTime created = 0;
  std::optional<SimTime> delivered;
  int harq_attempts_total = 0;
  std::optional<DropReason> dropped_reason;

  std::optional<SimTime> delay() const {
    if (!delivered) return std::nullopt;
    return *delivered - created;
  }
};

/// Append-only store; each packet is finalized exactly once.
class RecordStore {
 public:
  PacketRecord& create(FlowId flow, std::uint64_t packet_id, SimTime created) {
    if (index_.count(packet_id)) throw ContractViolation("packet " + std::to_string(packet_id) + " already recorded");
    index_.emplace(packet_id, records_.size());
    records_.push_back(PacketRecord{flow, packet_id, created, std::nullopt, 0, std::nullopt});
    return records_.back();
  }

  void record_delivery(std::uint64_t packet_id, SimTime delivered) {
    auto& r = at(packet_id);
    if (r.delivered || r.dropped_reason)
      throw ContractViolation("packet " + std::to_string(packet_id) + " finalized twice");
    if (delivered < r.created)
      throw InvalidInput("packet " + std::to_string(packet_id) + ": delivery precedes creation");
    r.delivered = delivered;
  }

  void record_drop(std::uint64_t packet_id, DropReason reason) {
    auto& r = at(packet_id);
    if (r.delivered || r.dropped_reason)
      throw ContractViolation("packet " + std::to_string(packet_id) + " finalized twice");
    r.dropped_reason = reason;
  }

  void add_attempt(std::uint64_t packet_id) { ++at(packet_id).harq_attempts_total; }

  /// Marks every packet still open with `reason`.
  void close_open(DropReason reason) {
    for (auto& r : records_)
      if (!r.delivered && !r.dropped_reason) r.dropped_reason = reason;
  }

  const std::vector<PacketRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  PacketRecord& at(std::uint64_t packet_id) {
    const auto it = index_.find(packet_id);
    if (it == index_.end()) throw ContractViolation("unknown packet " + std::to_string(packet_id));
    return records_[it->second];
  }

  std::vector<PacketRecord> records_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

namespace detail {
inline bool passes(std::span<const FlowId> filter, FlowId flow) {
  return filter.empty() || std::find(filter.begin(), filter.end(), flow) != filter.end();
}
}  // namespace detail

struct DelayBucket {
  SimTime t_start = 0;
  std::optional<double> mean_delay_s;
  std::size_t count = 0;
};

struct DelaySeries {
  SimTime bucket_width = 0;
  std::vector<DelayBucket> buckets;
};

/// Mean delay of the packets delivered in each [k*w, (k+1)*w) window.
/// With a horizon the series spans ceil(horizon / w) buckets; otherwise it
/// ends with the last delivery. An empty filter selects every flow.
inline DelaySeries aggregate_time_buckets(std::span<const PacketRecord> records, SimTime bucket_width,
                                          std::span<const FlowId> flows = {},
                                          std::optional<SimTime> horizon = std::nullopt) {
  if (bucket_width <= 0) throw InvalidInput("bucket width must be > 0");
  DelaySeries series;
  series.bucket_width = bucket_width;
  std::size_t n = 0;
  if (horizon) {
    n = static_cast<std::size_t>((*horizon + bucket_width - 1) / bucket_width);
  } else {
    for (const auto& r : records)
      if (r.delivered && detail::passes(flows, r.flow))
        n = std::max(n, static_cast<std::size_t>(*r.delivered / bucket_width) + 1);
  }
  std::vector<double> sums(n, 0.0);
  series.buckets.resize(n);
  for (std::size_t k = 0; k < n; ++k) series.buckets[k].t_start = static_cast<SimTime>(k) * bucket_width;
  for (const auto& r : records) {
    if (!r.delivered || !detail::passes(flows, r.flow)) continue;
    const auto k = static_cast<std::size_t>(*r.delivered / bucket_width);
    if (k >= n) continue;
    sums[k] += time_to_seconds(*r.delay());
    ++series.buckets[k].count;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (series.buckets[k].count > 0) series.buckets[k].mean_delay_s = sums[k] / static_cast<double>(series.buckets[k].count);
  return series;
}

struct DelayStats {
  std::size_t generated = 0;
  std::size_t delivered = 0;
  std::optional<double> mean_delay_s;
  std::optional<SimTime> min_delay;
  std::optional<SimTime> max_delay;
};

inline DelayStats delay_stats(std::span<const PacketRecord> records, std::span<const FlowId> flows = {}) {
  DelayStats s;
  double sum = 0.0;
  for (const auto& r : records) {
    if (!detail::passes(flows, r.flow)) continue;
    ++s.generated;
    if (!r.delivered) continue;
    ++s.delivered;
    const SimTime d = *r.delay();
    sum += time_to_seconds(d);
    s.min_delay = s.min_delay ? std::min(*s.min_delay, d) : d;
    s.max_delay = s.max_delay ? std::max(*s.max_delay, d) : d;
  }
  if (s.delivered > 0) s.mean_delay_s = sum / static_cast<double>(s.delivered);
  return s;
}

/// Delivered / generated; absent when nothing was generated.
inline std::optional<double> packet_delivery_ratio(std::span<const PacketRecord> records,
                                                   std::span<const FlowId> flows = {}) {
  const auto s = delay_stats(records, flows);
  if (s.generated == 0) return std::nullopt;
  return static_cast<double>(s.delivered) / static_cast<double>(s.generated);
}

struct FlowPlacement {
  FlowId flow;
  double distance_m;
};

struct DistanceRow {
  FlowId flow{0};
  double distance_m = 0.0;
  std::optional<double> mean_delay_s;
  std::size_t count = 0;
  bool empty() const { return count == 0; }
};

inline std::vector<DistanceRow> delay_vs_distance(std::span<const PacketRecord> records,
                                                  std::span<const FlowPlacement> placements) {
  std::vector<DistanceRow> rows;
  for (const auto& p : placements) {
    const FlowId one[] = {p.flow};
    const auto s = delay_stats(records, one);
    rows.push_back({p.flow, p.distance_m, s.mean_delay_s, s.delivered});
  }
  return rows;
}

// CSV ------------------------------------------------------------------------

namespace detail {
inline std::string format_time(SimTime t) {
  char buf[48];
  const char* sign = t < 0 ? "-" : "";
  const auto a = t < 0 ? -t : t;
  std::snprintf(buf, sizeof buf, "%s%lld.%09lld", sign, static_cast<long long>(a / kNanosPerSecond),
                static_cast<long long>(a % kNanosPerSecond));
  return buf;
}

inline std::string format_fixed(double v, int decimals = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}
}  // namespace detail

inline std::string packets_csv(std::span<const PacketRecord> records) {
  std::ostringstream os;
  os << "flow,packet_id,created_s,delivered_s,delay_s,attempts,drop_reason\n";
  for (const auto& r : records) {
    os << r.flow.id() << ',' << r.packet_id << ',' << detail::format_time(r.created) << ',';
    if (r.delivered) os << detail::format_time(*r.delivered);
    os << ',';
    if (r.delivered) os << detail::format_time(*r.delay());
    os << ',' << r.harq_attempts_total << ',';
    if (r.dropped_reason) os << to_string(*r.dropped_reason);
    os << '\n';
  }
  return os.str();
}

inline std::string delay_series_csv(const DelaySeries& series) {
  std::ostringstream os;
  os << "t_start,mean_delay_s,count\n";
  for (const auto& b : series.buckets) {
    os << detail::format_time(b.t_start) << ',';
    if (b.mean_delay_s) os << detail::format_fixed(*b.mean_delay_s);
    os << ',' << b.count << '\n';
  }
  return os.str();
}

inline std::string delay_series_plot_data(const DelaySeries& series) {
  std::ostringstream os;
  for (const auto& b : series.buckets)
    if (b.mean_delay_s) os << detail::format_time(b.t_start) << ' ' << detail::format_fixed(*b.mean_delay_s) << '\n';
  return os.str();
}

inline std::string distance_csv(std::span<const DistanceRow> rows) {
  std::ostringstream os;
  os << "flow,distance_m,mean_delay_s,count,empty\n";
  for (const auto& r : rows) {
    os << r.flow.id() << ',' << detail::format_fixed(r.distance_m, 3) << ',';
    if (r.mean_delay_s) os << detail::format_fixed(*r.mean_delay_s);
    os << ',' << r.count << ',' << (r.empty() ? 1 : 0) << '\n';
  }
  return os.str();
}

inline void write_csv(std::span<const PacketRecord> records, const std::string& path) {
  detail::write_file(path, packets_csv(records));
}
inline void write_csv(const DelaySeries& series, const std::string& path) {
  detail::write_file(path, delay_series_csv(series));
}
inline void write_csv(std::span<const DistanceRow> rows, const std::string& path) {
  detail::write_file(path, distance_csv(rows));
}
inline void write_plot_data(const DelaySeries& series, const std::string& path) {
  detail::write_file(path, delay_series_plot_data(series));
}

}  // namespace hsdpa
