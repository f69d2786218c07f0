#pragma once

// Wired chain from the remote host to the Node B. Each link is a FIFO
// server: transmission time size/bandwidth, then a fixed propagation delay.

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "hsdpa/core.hpp"

namespace hsdpa {

inline constexpr const char* kRemoteHost = "node2";
inline constexpr const char* kRnc = "rnc";
inline constexpr const char* kNodeB = "bs";

struct Link {
  std::string from;
  std::string to;
  double bandwidth_mbps = 0.0;
  double delay_ms = 0.0;

  SimTime propagation() const { return static_cast<SimTime>(std::llround(delay_ms * kNanosPerMilli)); }

  /// Serialization time, rounded up to the next nanosecond.
  SimTime transmission(std::int64_t bits) const {
    return static_cast<SimTime>(std::ceil(static_cast<double>(bits) * 1000.0 / bandwidth_mbps));
  }

  bool operator==(const Link&) const = default;
};

/// node2 -> node1 -> ggsn -> sgsn -> rnc -> bs plus the bs -> rnc uplink.
inline std::vector<Link> default_link_table() {
  return {
      {"node2", "node1", 100.0, 35.0}, {"node1", "ggsn", 100.0, 15.0}, {"ggsn", "sgsn", 622.0, 10.0},
      {"sgsn", "rnc", 622.0, 0.4},     {"rnc", "bs", 622.0, 15.0},     {"bs", "rnc", 622.0, 15.0},
  };
}

class Topology {
 public:
  /// Downlink path from the remote host to the Node B, in hop order.
  const std::vector<Link>& downlink() const { return path_; }

  /// Index into downlink() of the RNC -> Node B (Iub) hop.
  std::size_t iub_hop() const { return iub_; }

  SimTime propagation_delay() const {
    SimTime total = 0;
    for (const auto& l : path_) total += l.propagation();
    return total;
  }

 private:
  friend Topology build_topology(const std::vector<Link>& links);
  std::vector<Link> path_;
  std::size_t iub_ = 0;
};

/// Finds the downlink path node2 -> bs (through the RNC) over the directed link table.
inline Topology build_topology(const std::vector<Link>& links) {
  std::map<std::string, std::vector<const Link*>> out;
  for (const auto& l : links) {
    if (!(l.bandwidth_mbps > 0.0))
      throw ConfigError("link " + l.from + "->" + l.to + ": bandwidth must be > 0");
    if (!(l.delay_ms >= 0.0)) throw ConfigError("link " + l.from + "->" + l.to + ": delay must be >= 0");
    out[l.from].push_back(&l);
  }
  // Breadth-first search; links are visited in table order so the path is deterministic.
  std::map<std::string, const Link*> via;
  std::queue<std::string> frontier;
  frontier.push(kRemoteHost);
  via[kRemoteHost] = nullptr;
  while (!frontier.empty()) {
    const std::string node = frontier.front();
    frontier.pop();
    for (const Link* l : out[node]) {
      if (via.count(l->to)) continue;
      via[l->to] = l;
      frontier.push(l->to);
    }
  }
  if (!via.count(kNodeB))
    throw ConfigError(std::string("link table does not connect ") + kRemoteHost + " to " + kNodeB);

  Topology topo;
  for (std::string node = kNodeB; via[node] != nullptr; node = via[node]->from) topo.path_.push_back(*via[node]);
  std::reverse(topo.path_.begin(), topo.path_.end());
  const auto iub = std::find_if(topo.path_.begin(), topo.path_.end(),
                                [](const Link& l) { return l.from == kRnc && l.to == kNodeB; });
  if (iub == topo.path_.end())
    throw ConfigError(std::string("downlink path must end with the ") + kRnc + "->" + kNodeB + " link");
  topo.iub_ = static_cast<std::size_t>(iub - topo.path_.begin());
  return topo;
}

/// FIFO occupancy of one link direction.
class LinkServer {
 public:
  explicit LinkServer(Link link) : link_(std::move(link)) {}

  /// Time at which `bits` offered at `now` arrive at the far end.
  SimTime carry(SimTime now, std::int64_t bits) {
    const SimTime start = std::max(now, busy_until_);
    busy_until_ = start + link_.transmission(bits);
    return busy_until_ + link_.propagation();
  }

  const Link& link() const { return link_; }

 private:
  Link link_;
  SimTime busy_until_ = 0;
};

}  // namespace hsdpa
