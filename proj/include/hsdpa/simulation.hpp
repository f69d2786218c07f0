#pragma once

// End-to-end packet lifecycle: remote host -> wired chain -> RLC AM at the
// RNC -> Iub -> MAC-hs queues -> HS-DSCH (one TTI tick every 2 ms) -> UE
// reassembly. Runs start cold at t = 0; sources stop at the configured
// duration and the drain period lets queues empty.

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "hsdpa/channel.hpp"
#include "hsdpa/event_queue.hpp"
#include "hsdpa/machs.hpp"
#include "hsdpa/metrics.hpp"
#include "hsdpa/rlc.hpp"
#include "hsdpa/topology.hpp"
#include "hsdpa/traffic.hpp"

namespace hsdpa {

struct FlowSetup {
  FlowId flow{0};
  Priority priority{0};
  double distance_m = 500.0;
  ServiceClass service_class = ServiceClass::Gold;
  TrafficParams traffic;
};

struct SimulationSetup {
  std::vector<Link> links = default_link_table();
  std::vector<FlowSetup> flows;
  /// One trace per entry of `flows`, same order.
  std::vector<ChannelTrace> traces;
  MacConfig mac;
  TbsTable tbs = TbsTable::default_table();
  BlerCurve bler = BlerCurve::default_curve();
  int pdu_bits = kDefaultPduBits;
  double duration_s = 10.0;
  double drain_s = 0.0;
  std::uint64_t seed = 1;
};

struct SimulationResult {
  RecordStore records;
  MacLedger ledger;
  std::array<std::uint64_t, kFlowMax> scheduled_ttis{};
  std::array<std::uint64_t, kFlowMax> rlc_retransmissions{};
  std::array<std::uint64_t, kFlowMax> rlc_duplicates{};
  std::int64_t tti_events = 0;
  std::uint64_t events_executed = 0;
  /// Running hash over (time, event kind) of every executed event.
  std::uint64_t event_digest = 0xcbf29ce484222325ULL;
  SimTime propagation_floor = 0;
};

inline std::int64_t total_slots(const SimulationSetup& setup) {
  return static_cast<std::int64_t>(std::llround((setup.duration_s + setup.drain_s) / kTtiSeconds));
}

namespace detail {

class Simulation {
 public:
  explicit Simulation(const SimulationSetup& setup)
      : setup_(setup),
        topology_(build_topology(setup.links)),
        mac_(setup.mac, setup.tbs, setup.bler, classes(setup)) {
    for (const auto& l : topology_.downlink()) hops_.emplace_back(l);
    result_.propagation_floor = topology_.propagation_delay();
    slots_ = total_slots(setup);
    generation_end_ = seconds_to_time(setup.duration_s);
    end_ = static_cast<SimTime>(slots_) * kTti;

    std::set<int> seen;
    for (std::size_t i = 0; i < setup.flows.size(); ++i) {
      const auto& f = setup.flows[i];
      if (!seen.insert(f.flow.id()).second)
        throw ConfigError("duplicate flow id " + std::to_string(f.flow.id()));
      const auto& trace = setup.traces.at(i);
      if (static_cast<std::int64_t>(trace.samples.size()) < slots_)
        throw ConfigError("trace for flow " + std::to_string(f.flow.id()) + " covers " +
                          std::to_string(trace.samples.size()) + " slots, run needs " + std::to_string(slots_));
      const auto id = static_cast<std::size_t>(f.flow.id());
      traces_[id] = &trace;
      rlc_[id] = std::make_unique<RlcAmEntity>(f.flow, f.priority, setup.pdu_bits);
      harq_rng_[id] = std::make_unique<Rng>(derive_seed(setup.seed, id, StreamTag::Harq));
      if (f.traffic.enabled)
        sources_[id] = std::make_unique<ExponentialOnOffSource>(f.traffic, derive_seed(setup.seed, id, StreamTag::Traffic));
    }
  }

  SimulationResult run() {
    for (int f = 0; f < kFlowMax; ++f)
      if (sources_[static_cast<std::size_t>(f)]) schedule_emission(FlowId(f));
    if (slots_ > 0) events_.schedule(0, [this] { on_tti(0); });
    events_.run_until(end_);

    result_.records.close_open(DropReason::EndOfRun);
    result_.ledger = mac_.ledger();
    for (int f = 0; f < kFlowMax; ++f) {
      const auto id = static_cast<std::size_t>(f);
      result_.scheduled_ttis[id] = mac_.scheduled_ttis(FlowId(f));
      if (rlc_[id]) {
        result_.rlc_retransmissions[id] = rlc_[id]->retransmissions();
        result_.rlc_duplicates[id] = rlc_[id]->duplicates();
      }
    }
    result_.events_executed = events_.executed();
    return std::move(result_);
  }

 private:
  enum class Kind : std::uint64_t { Emit = 1, Hop, IubArrival, Tti, UeDelivery };

  static std::array<ServiceClass, kFlowMax> classes(const SimulationSetup& setup) {
    auto c = MacHs::default_classes();
    for (const auto& f : setup.flows) c[static_cast<std::size_t>(f.flow.id())] = f.service_class;
    return c;
  }

  void note(Kind kind) {
    const std::uint64_t word[2] = {static_cast<std::uint64_t>(events_.now()), static_cast<std::uint64_t>(kind)};
    result_.event_digest =
        fnv1a64(std::string_view(reinterpret_cast<const char*>(word), sizeof word), result_.event_digest);
  }

  const FlowSetup& flow_setup(FlowId flow) const {
    for (const auto& f : setup_.flows)
      if (f.flow == flow) return f;
    throw ContractViolation("unknown flow");
  }

  void schedule_emission(FlowId flow) {
    auto& src = *sources_[static_cast<std::size_t>(flow.id())];
    const auto e = src.next();
    if (e.time >= generation_end_) return;
    events_.schedule(e.time, [this, flow] { on_emit(flow); });
  }

  void on_emit(FlowId flow) {
    note(Kind::Emit);
    Packet p{next_packet_id_++, flow, flow_setup(flow).traffic.packet_size_bits, events_.now()};
    result_.records.create(flow, p.packet_id, p.created);
    forward(p, 0);
    schedule_emission(flow);
  }

  /// Carries a whole packet over hop `hop`; segmentation happens at the RNC.
  void forward(const Packet& p, std::size_t hop) {
    if (hop == topology_.iub_hop()) {
      auto pdus = rlc_[static_cast<std::size_t>(p.flow.id())]->segment(p);
      send_over_iub(std::move(pdus));
      return;
    }
    const SimTime arrival = hops_[hop].carry(events_.now(), p.size_bits);
    events_.schedule(arrival, [this, p, hop] {
      note(Kind::Hop);
      forward(p, hop + 1);
    });
  }

  void send_over_iub(std::vector<MacDPdu> pdus) {
    if (pdus.empty()) return;
    std::int64_t bits = 0;
    for (const auto& pdu : pdus) bits += pdu.payload_bits;
    const SimTime arrival = hops_[topology_.iub_hop()].carry(events_.now(), bits);
    events_.schedule(arrival, [this, pdus = std::move(pdus)]() mutable { on_iub_arrival(std::move(pdus)); });
  }

  void on_iub_arrival(std::vector<MacDPdu> pdus) {
    note(Kind::IubArrival);
    std::vector<MacDPdu> dropped;
    for (auto& pdu : pdus) {
      pdu.enqueue_time = events_.now();
      if (auto drop = mac_.enqueue(pdu)) dropped.push_back(drop->pdu);
    }
    if (!dropped.empty()) {
      const FlowId flow = dropped.front().flow;
      send_over_iub(rlc_[static_cast<std::size_t>(flow.id())]->retransmit(dropped));
    }
  }

  void on_tti(std::int64_t slot) {
    note(Kind::Tti);
    ++result_.tti_events;
    SlotChannel channel{};
    for (int f = 0; f < kFlowMax; ++f)
      if (const auto* t = traces_[static_cast<std::size_t>(f)]) channel[static_cast<std::size_t>(f)] = &t->at(slot);

    auto report = mac_.schedule_tti(slot, channel, [this](FlowId flow) {
      return harq_rng_[static_cast<std::size_t>(flow.id())]->uniform();
    });

    for (auto& r : report.resolved) {
      auto& rlc = *rlc_[static_cast<std::size_t>(r.block.flow.id())];
      if (r.disposition == HarqDisposition::Delivered) {
        for (const auto& pdu : r.block.pdus) rlc.acknowledge(pdu);
      } else {
        send_over_iub(rlc.retransmit(r.block.pdus));
      }
    }
    for (auto& a : report.actions) {
      std::uint64_t last = ~0ULL;
      for (const auto& pdu : a.block.pdus) {
        if (pdu.source.packet_id == last) continue;
        last = pdu.source.packet_id;
        result_.records.add_attempt(last);
      }
      if (a.outcome == Feedback::Ack) {
        events_.schedule((slot + 1) * kTti,
                         [this, pdus = std::move(a.block.pdus)] { on_ue_delivery(pdus); });
      }
    }
    if (slot + 1 < slots_) events_.schedule((slot + 1) * kTti, [this, slot] { on_tti(slot + 1); });
  }

  void on_ue_delivery(const std::vector<MacDPdu>& pdus) {
    note(Kind::UeDelivery);
    for (const auto& pdu : pdus)
      for (const auto& done : rlc_[static_cast<std::size_t>(pdu.flow.id())]->reassemble(pdu))
        result_.records.record_delivery(done.packet_id, events_.now());
  }

  const SimulationSetup& setup_;
  Topology topology_;
  std::vector<LinkServer> hops_;
  MacHs mac_;
  EventQueue events_;
  SimulationResult result_;
  std::array<const ChannelTrace*, kFlowMax> traces_{};
  std::array<std::unique_ptr<RlcAmEntity>, kFlowMax> rlc_{};
  std::array<std::unique_ptr<Rng>, kFlowMax> harq_rng_{};
  std::array<std::unique_ptr<ExponentialOnOffSource>, kFlowMax> sources_{};
  std::int64_t slots_ = 0;
  SimTime generation_end_ = 0;
  SimTime end_ = 0;
  std::uint64_t next_packet_id_ = 0;
};

}  // namespace detail

/// Runs one scenario to completion. Identical setups give identical results.
inline SimulationResult run_simulation(const SimulationSetup& setup) {
  if (!(setup.duration_s > 0.0)) throw ConfigError("duration must be > 0");
  if (!(setup.drain_s >= 0.0)) throw ConfigError("drain must be >= 0");
  if (setup.traces.size() != setup.flows.size()) throw ConfigError("one trace per flow is required");
  detail::Simulation sim(setup);
  return sim.run();
}

}  // namespace hsdpa
