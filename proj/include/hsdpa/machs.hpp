#pragma once

// Node-B MAC-hs: the (priority, flow) queue bank, the five per-TTI user
// selection policies, transport block assembly and stop-and-wait HARQ.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsdpa/channel.hpp"
#include "hsdpa/core.hpp"

namespace hsdpa {

inline constexpr int kFlowMax = 20;
inline constexpr int kPriorityLevels = 8;
inline constexpr int kQueueCount = kFlowMax * kPriorityLevels;
inline constexpr int kDefaultPduBits = 320;

/// Scheduling priority; level 0 is the most urgent.
class Priority {
 public:
  constexpr explicit Priority(int level) : level_(level) {
    if (level < 0 || level >= kPriorityLevels) throw InvalidInput("priority level outside [0, 7]");
  }
  constexpr int level() const { return level_; }
  constexpr auto operator<=>(const Priority&) const = default;

 private:
  int level_;
};

class FlowId {
 public:
  constexpr explicit FlowId(int id) : id_(id) {
    if (id < 0 || id >= kFlowMax) throw InvalidInput("flow id outside [0, 19]");
  }
  constexpr int id() const { return id_; }
  constexpr auto operator<=>(const FlowId&) const = default;

 private:
  int id_;
};

constexpr int queue_index(Priority priority, FlowId flow) { return priority.level() * kFlowMax + flow.id(); }

/// Where a mac-d PDU came from: the application packet and its RLC segment.
struct PduSource {
  std::uint64_t packet_id = 0;
  std::uint64_t packet_seq = 0;  // per-flow packet sequence number
  std::uint32_t segment = 0;
  std::uint32_t segment_count = 1;
  std::uint64_t rlc_sn = 0;

  bool operator==(const PduSource&) const = default;
};

struct MacDPdu {
  FlowId flow{0};
  Priority priority{0};
  int payload_bits = kDefaultPduBits;
  PduSource source;
  SimTime enqueue_time = 0;

  bool operator==(const MacDPdu&) const = default;
};

struct MacHsPdu {
  FlowId flow{0};
  std::vector<MacDPdu> pdus;
  int tbs_bits = 0;
  int harq_process = 0;
  std::int64_t transmit_slot = 0;
  int cqi = 0;

  int payload_bits() const {
    int sum = 0;
    for (const auto& p : pdus) sum += p.payload_bits;
    return sum;
  }
};

enum class DropReason { QueueFull, HarqFailed, EndOfRun };

inline std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::QueueFull: return "queue_full";
    case DropReason::HarqFailed: return "harq_failed";
    case DropReason::EndOfRun: return "end_of_run";
  }
  return "?";
}

struct DropEvent {
  MacDPdu pdu;
  DropReason reason;
};

// Queue bank -----------------------------------------------------------------

class QueueBank {
 public:
  /// `capacity` bounds each of the 160 queues; 0 means unbounded.
  explicit QueueBank(std::size_t capacity = 0) : capacity_(capacity) {}

  /// Appends at queue_index(priority, flow); returns the drop event when that queue is full.
  std::optional<DropEvent> enqueue(MacDPdu pdu) {
    auto& q = queues_[static_cast<std::size_t>(queue_index(pdu.priority, pdu.flow))];
    if (capacity_ != 0 && q.size() >= capacity_) return DropEvent{std::move(pdu), DropReason::QueueFull};
    q.push_back(std::move(pdu));
    ++size_;
    return std::nullopt;
  }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  const std::deque<MacDPdu>& queue(int index) const { return queues_.at(static_cast<std::size_t>(index)); }

  bool backlogged(FlowId flow) const { return head(flow) != nullptr; }

  /// Head of the most urgent non-empty queue of `flow`.
  const MacDPdu* head(FlowId flow) const {
    for (int p = 0; p < kPriorityLevels; ++p) {
      const auto& q = queues_[static_cast<std::size_t>(queue_index(Priority(p), flow))];
      if (!q.empty()) return &q.front();
    }
    return nullptr;
  }

  std::size_t flow_size(FlowId flow) const {
    std::size_t n = 0;
    for (int p = 0; p < kPriorityLevels; ++p) n += queues_[static_cast<std::size_t>(queue_index(Priority(p), flow))].size();
    return n;
  }

  /// Pops whole PDUs of `flow` in ascending queue-index order while they fit into `budget_bits`.
  std::vector<MacDPdu> take(FlowId flow, int budget_bits) {
    std::vector<MacDPdu> out;
    for (int p = 0; p < kPriorityLevels; ++p) {
      auto& q = queues_[static_cast<std::size_t>(queue_index(Priority(p), flow))];
      while (!q.empty() && q.front().payload_bits <= budget_bits) {
        budget_bits -= q.front().payload_bits;
        out.push_back(std::move(q.front()));
        q.pop_front();
        --size_;
      }
      if (!q.empty()) break;
    }
    return out;
  }

 private:
  std::array<std::deque<MacDPdu>, kQueueCount> queues_;
  std::size_t capacity_;
  std::size_t size_ = 0;
};

// Transport block sizes ------------------------------------------------------

class TbsTable {
 public:
  explicit TbsTable(const std::array<int, kMaxCqi + 1>& bits) : bits_(bits) {
    for (int b : bits_)
      if (b < 0) throw InvalidInput("TBS table: negative block size");
  }

  /// 137 bits per CQI step; CQI 0 carries nothing.
  static TbsTable default_table() {
    std::array<int, kMaxCqi + 1> bits{};
    for (int c = 0; c <= kMaxCqi; ++c) bits[static_cast<std::size_t>(c)] = 137 * c;
    return TbsTable(bits);
  }

  static TbsTable uniform(int bits_per_block) {
    std::array<int, kMaxCqi + 1> bits{};
    for (int c = 1; c <= kMaxCqi; ++c) bits[static_cast<std::size_t>(c)] = bits_per_block;
    return TbsTable(bits);
  }

  int bits(int cqi) const {
    if (cqi < 0 || cqi > kMaxCqi) throw InvalidInput("TBS lookup: CQI outside [0, 30]");
    return bits_[static_cast<std::size_t>(cqi)];
  }

  bool operator==(const TbsTable&) const = default;

 private:
  std::array<int, kMaxCqi + 1> bits_;
};

/// Rows `cqi tbs_bits` for CQI 1..30 (CQI 0 optional, defaults to 0).
inline TbsTable parse_tbs_table(const std::vector<std::string>& lines, const std::string& source) {
  std::array<int, kMaxCqi + 1> bits{};
  std::array<bool, kMaxCqi + 1> seen{};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const auto cols = detail::split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != 2) throw ParseError(source, i + 1, "expected 2 columns (cqi tbs_bits)");
    auto cqi = detail::parse_number<int>(cols[0]);
    auto tbs = detail::parse_number<int>(cols[1]);
    if (!cqi || *cqi < 0 || *cqi > kMaxCqi) throw ParseError(source, i + 1, "CQI outside [0, 30]");
    if (!tbs || *tbs < 0) throw ParseError(source, i + 1, "bad tbs_bits");
    if (seen[static_cast<std::size_t>(*cqi)])
      throw ParseError(source, i + 1, "duplicate row for CQI " + std::to_string(*cqi));
    seen[static_cast<std::size_t>(*cqi)] = true;
    bits[static_cast<std::size_t>(*cqi)] = *tbs;
  }
  for (int c = 1; c <= kMaxCqi; ++c)
    if (!seen[static_cast<std::size_t>(c)]) throw ParseError(source, 0, "missing row for CQI " + std::to_string(c));
  return TbsTable(bits);
}

inline TbsTable load_tbs_table(const std::string& path) { return parse_tbs_table(detail::read_lines(path), path); }

/// Dequeues as many whole mac-d PDUs of `flow` as fit the TBS for `cqi`.
inline MacHsPdu assemble_mac_hs_pdu(QueueBank& bank, FlowId flow, int cqi, const TbsTable& tbs) {
  if (cqi < 1 || cqi > kMaxCqi) throw InvalidInput("assemble_mac_hs_pdu: CQI outside [1, 30]");
  const MacDPdu* head = bank.head(flow);
  if (head == nullptr)
    throw ContractViolation("assemble_mac_hs_pdu: flow " + std::to_string(flow.id()) + " has no backlog");
  const int budget = tbs.bits(cqi);
  if (head->payload_bits > budget)
    throw ContractViolation("assemble_mac_hs_pdu: head PDU of flow " + std::to_string(flow.id()) +
                            " exceeds TBS " + std::to_string(budget));
  MacHsPdu block;
  block.flow = flow;
  block.tbs_bits = budget;
  block.cqi = cqi;
  block.pdus = bank.take(flow, budget);
  return block;
}

// Selection policies -----------------------------------------------------------

enum class SchedulerKind { MaxCI, RoundRobin, InverseCI, PrioritizedCI, ModifiedInverseCI };

inline constexpr std::array<SchedulerKind, 5> kAllSchedulers{
    SchedulerKind::MaxCI, SchedulerKind::RoundRobin, SchedulerKind::InverseCI, SchedulerKind::PrioritizedCI,
    SchedulerKind::ModifiedInverseCI};

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::MaxCI: return "MaxCI";
    case SchedulerKind::RoundRobin: return "RoundRobin";
    case SchedulerKind::InverseCI: return "InverseCI";
    case SchedulerKind::PrioritizedCI: return "PrioritizedCI";
    case SchedulerKind::ModifiedInverseCI: return "ModifiedInverseCI";
  }
  return "?";
}

inline std::optional<SchedulerKind> parse_scheduler(std::string_view name) {
  for (auto k : kAllSchedulers)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

inline std::string scheduler_names() {
  std::string out;
  for (auto k : kAllSchedulers) {
    if (!out.empty()) out += ", ";
    out += to_string(k);
  }
  return out;
}

enum class ServiceClass { Gold = 0, Silver = 1, Bronze = 2 };

inline std::string_view to_string(ServiceClass c) {
  switch (c) {
    case ServiceClass::Gold: return "Gold";
    case ServiceClass::Silver: return "Silver";
    case ServiceClass::Bronze: return "Bronze";
  }
  return "?";
}

inline std::optional<ServiceClass> parse_service_class(std::string_view name) {
  for (auto c : {ServiceClass::Gold, ServiceClass::Silver, ServiceClass::Bronze})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

struct FlowCqi {
  FlowId flow;
  int cqi;
};

struct FlowPriorityCqi {
  FlowId flow;
  Priority priority;
  int cqi;
};

struct FlowClass {
  FlowId flow;
  ServiceClass service_class;
};

/// Highest CQI; ties go to the lowest flow id.
inline std::optional<FlowId> select_max_ci(std::span<const FlowCqi> backlogged) {
  const auto it = std::min_element(backlogged.begin(), backlogged.end(), [](const FlowCqi& a, const FlowCqi& b) {
    return a.cqi != b.cqi ? a.cqi > b.cqi : a.flow < b.flow;
  });
  if (it == backlogged.end()) return std::nullopt;
  return it->flow;
}

/// Lowest CQI; ties go to the lowest flow id.
inline std::optional<FlowId> select_modified_inverse_ci(std::span<const FlowCqi> backlogged) {
  const auto it = std::min_element(backlogged.begin(), backlogged.end(), [](const FlowCqi& a, const FlowCqi& b) {
    return a.cqi != b.cqi ? a.cqi < b.cqi : a.flow < b.flow;
  });
  if (it == backlogged.end()) return std::nullopt;
  return it->flow;
}

/// Most urgent priority, then highest CQI, then lowest flow id.
inline std::optional<FlowId> select_prioritized_ci(std::span<const FlowPriorityCqi> backlogged) {
  const auto it = std::min_element(backlogged.begin(), backlogged.end(),
                                   [](const FlowPriorityCqi& a, const FlowPriorityCqi& b) {
                                     if (a.priority != b.priority) return a.priority < b.priority;
                                     if (a.cqi != b.cqi) return a.cqi > b.cqi;
                                     return a.flow < b.flow;
                                   });
  if (it == backlogged.end()) return std::nullopt;
  return it->flow;
}

struct RoundRobinPick {
  std::optional<FlowId> flow;
  int cursor = 0;
};

/// First backlogged flow at or after `cursor` (cyclically over the 20 flow slots).
inline RoundRobinPick select_round_robin(std::span<const FlowId> backlogged, int cursor) {
  if (cursor < 0 || cursor >= kFlowMax) throw InvalidInput("round-robin cursor outside [0, 19]");
  std::optional<FlowId> best;
  int best_distance = kFlowMax;
  for (FlowId f : backlogged) {
    const int distance = (f.id() - cursor + kFlowMax) % kFlowMax;
    if (distance < best_distance) {
      best_distance = distance;
      best = f;
    }
  }
  if (!best) return {std::nullopt, cursor};
  return {best, (best->id() + 1) % kFlowMax};
}

using ClassCursors = std::array<int, 3>;

/// Gold before Silver before Bronze; round-robin inside the winning class.
inline std::optional<FlowId> select_inverse_ci(std::span<const FlowClass> backlogged, ClassCursors& cursors) {
  if (backlogged.empty()) return std::nullopt;
  const auto top = std::min_element(backlogged.begin(), backlogged.end(), [](const FlowClass& a, const FlowClass& b) {
                     return a.service_class < b.service_class;
                   })->service_class;
  std::vector<FlowId> members;
  for (const auto& fc : backlogged)
    if (fc.service_class == top) members.push_back(fc.flow);
  auto& cursor = cursors[static_cast<std::size_t>(top)];
  const auto pick = select_round_robin(members, cursor);
  cursor = pick.cursor;
  return pick.flow;
}

// HARQ ---------------------------------------------------------------------

enum class HarqState { Idle, AwaitingFeedback };
enum class HarqDisposition { Delivered, Retransmit, Failed };

struct HarqProcess {
  int process_id = 0;
  HarqState state = HarqState::Idle;
  std::optional<MacHsPdu> in_flight;
  int attempt = 1;
  std::int64_t feedback_due_slot = 0;
  Feedback pending_feedback = Feedback::Ack;
};

struct HarqUpdate {
  HarqDisposition disposition;
  /// The block leaving the process on Delivered or Failed.
  std::optional<MacHsPdu> released;
};

/// Applies ACK/NACK to a process awaiting feedback. Three attempts at most.
inline HarqUpdate harq_update(HarqProcess& process, Feedback feedback) {
  if (process.state != HarqState::AwaitingFeedback || !process.in_flight)
    throw ContractViolation("harq_update: feedback for idle HARQ process " + std::to_string(process.process_id));
  if (feedback == Feedback::Nack && process.attempt < kHarqMaxAttempts) {
    ++process.attempt;
    return {HarqDisposition::Retransmit, std::nullopt};
  }
  HarqUpdate out{feedback == Feedback::Ack ? HarqDisposition::Delivered : HarqDisposition::Failed,
                 std::move(process.in_flight)};
  process.in_flight.reset();
  process.state = HarqState::Idle;
  process.attempt = 1;
  return out;
}

// MAC-hs entity --------------------------------------------------------------

/// Optional override of the priority used by Prioritized C/I, given the
/// flow, its queued priority and the head-of-line wait. Unset = queued priority.
using PriorityHook = std::function<Priority(FlowId, Priority, SimTime head_wait)>;

struct MacConfig {
  SchedulerKind policy = SchedulerKind::MaxCI;
  int harq_processes = 6;
  int harq_feedback_ttis = 2;
  std::size_t queue_capacity = 0;
  PriorityHook priority_hook;
};

struct TransmissionAction {
  enum class Kind { New, Retransmission };
  Kind kind = Kind::New;
  int process = 0;
  FlowId flow{0};
  int attempt = 1;
  int cqi = 0;
  double snr_db = 0.0;
  Feedback outcome = Feedback::Ack;
  MacHsPdu block;
};

struct HarqResolution {
  int process = 0;
  HarqDisposition disposition = HarqDisposition::Delivered;
  MacHsPdu block;
};

struct TtiReport {
  std::vector<HarqResolution> resolved;
  std::vector<TransmissionAction> actions;
};

/// PDU-level accounting. offered = delivered + dropped_queue_full +
/// harq_failed + queued + in_flight at every TTI boundary.
struct MacLedger {
  std::uint64_t offered = 0;
  std::uint64_t dropped_queue_full = 0;
  std::uint64_t delivered = 0;
  std::uint64_t harq_failed = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t queued = 0;
  int max_block_transmissions = 0;
  std::uint64_t blocks_transmitted = 0;

  bool balanced() const { return offered == delivered + dropped_queue_full + harq_failed + queued + in_flight; }
};

/// Channel state of each flow for the current slot; null for flows without a trace.
using SlotChannel = std::array<const TtiSample*, kFlowMax>;

class MacHs {
 public:
  MacHs(MacConfig config, TbsTable tbs, BlerCurve bler,
        std::array<ServiceClass, kFlowMax> classes = default_classes())
      : config_(std::move(config)),
        tbs_(tbs),
        bler_(bler),
        classes_(classes),
        bank_(config_.queue_capacity) {
    if (config_.harq_processes < 1) throw InvalidInput("MAC-hs needs at least one HARQ process");
    if (config_.harq_feedback_ttis < 0) throw InvalidInput("HARQ feedback delay must be >= 0");
    processes_.resize(static_cast<std::size_t>(config_.harq_processes));
    for (int i = 0; i < config_.harq_processes; ++i) processes_[static_cast<std::size_t>(i)].process_id = i;
  }

  static std::array<ServiceClass, kFlowMax> default_classes() {
    std::array<ServiceClass, kFlowMax> c{};
    c.fill(ServiceClass::Gold);
    return c;
  }

  std::optional<DropEvent> enqueue(MacDPdu pdu) {
    ++ledger_.offered;
    auto drop = bank_.enqueue(std::move(pdu));
    if (drop)
      ++ledger_.dropped_queue_full;
    else
      ++ledger_.queued;
    return drop;
  }

  /// One TTI: resolve due HARQ feedback, re-send NACKed blocks on their own
  /// processes, then give at most one new block to the policy's pick.
  /// `draw(flow)` supplies the uniform [0,1) used for the ACK decision.
  template <typename Draw>
  TtiReport schedule_tti(std::int64_t slot, const SlotChannel& channel, Draw&& draw) {
    TtiReport report;
    std::vector<HarqProcess*> retransmit;
    for (auto& p : processes_) {
      if (p.state != HarqState::AwaitingFeedback || p.feedback_due_slot > slot) continue;
      auto update = harq_update(p, p.pending_feedback);
      if (update.disposition == HarqDisposition::Retransmit) {
        retransmit.push_back(&p);
        continue;
      }
      const auto n = update.released->pdus.size();
      ledger_.in_flight -= n;
      if (update.disposition == HarqDisposition::Delivered)
        ledger_.delivered += n;
      else
        ledger_.harq_failed += n;
      report.resolved.push_back({p.process_id, update.disposition, std::move(*update.released)});
    }

    std::array<bool, kFlowMax> served{};
    for (HarqProcess* p : retransmit) {
      const FlowId flow = p->in_flight->flow;
      const TtiSample* sample = channel[static_cast<std::size_t>(flow.id())];
      if (sample == nullptr)
        throw ContractViolation("schedule_tti: no channel sample for flow " + std::to_string(flow.id()));
      report.actions.push_back(transmit(*p, slot, *sample, TransmissionAction::Kind::Retransmission, draw));
      served[static_cast<std::size_t>(flow.id())] = true;
    }

    auto idle = std::find_if(processes_.begin(), processes_.end(),
                             [](const HarqProcess& p) { return p.state == HarqState::Idle; });
    if (idle != processes_.end() && bank_.size() > 0) {
      if (auto pick = select(slot, channel)) {
        const int cqi = channel[static_cast<std::size_t>(pick->id())]->cqi;
        MacHsPdu block = assemble_mac_hs_pdu(bank_, *pick, cqi, tbs_);
        const auto n = block.pdus.size();
        ledger_.queued -= n;
        ledger_.in_flight += n;
        block.harq_process = idle->process_id;
        idle->in_flight = std::move(block);
        idle->state = HarqState::AwaitingFeedback;
        idle->attempt = 1;
        report.actions.push_back(transmit(*idle, slot, *channel[static_cast<std::size_t>(pick->id())],
                                          TransmissionAction::Kind::New, draw));
        served[static_cast<std::size_t>(pick->id())] = true;
      }
    }
    for (int f = 0; f < kFlowMax; ++f)
      if (served[static_cast<std::size_t>(f)]) ++scheduled_ttis_[static_cast<std::size_t>(f)];
    return report;
  }

  /// Flows eligible for a new block this slot: backlogged, with a channel
  /// sample, and whose head PDU fits the TBS at the current CQI.
  std::vector<FlowId> servable_flows(const SlotChannel& channel) const {
    std::vector<FlowId> out;
    for (int f = 0; f < kFlowMax; ++f) {
      const TtiSample* sample = channel[static_cast<std::size_t>(f)];
      const MacDPdu* head = bank_.head(FlowId(f));
      if (sample == nullptr || head == nullptr || sample->cqi < 1) continue;
      if (head->payload_bits <= tbs_.bits(sample->cqi)) out.push_back(FlowId(f));
    }
    return out;
  }

  const QueueBank& bank() const { return bank_; }
  const std::vector<HarqProcess>& processes() const { return processes_; }
  const MacLedger& ledger() const { return ledger_; }
  const MacConfig& config() const { return config_; }
  std::uint64_t scheduled_ttis(FlowId flow) const { return scheduled_ttis_[static_cast<std::size_t>(flow.id())]; }
  int round_robin_cursor() const { return rr_cursor_; }

 private:
  std::optional<FlowId> select(std::int64_t slot, const SlotChannel& channel) {
    const auto flows = servable_flows(channel);
    if (flows.empty()) return std::nullopt;
    auto cqi_of = [&](FlowId f) { return channel[static_cast<std::size_t>(f.id())]->cqi; };
    switch (config_.policy) {
      case SchedulerKind::MaxCI:
      case SchedulerKind::ModifiedInverseCI: {
        std::vector<FlowCqi> in;
        for (FlowId f : flows) in.push_back({f, cqi_of(f)});
        return config_.policy == SchedulerKind::MaxCI ? select_max_ci(in) : select_modified_inverse_ci(in);
      }
      case SchedulerKind::RoundRobin: {
        const auto pick = select_round_robin(flows, rr_cursor_);
        rr_cursor_ = pick.cursor;
        return pick.flow;
      }
      case SchedulerKind::InverseCI: {
        std::vector<FlowClass> in;
        for (FlowId f : flows) in.push_back({f, classes_[static_cast<std::size_t>(f.id())]});
        return select_inverse_ci(in, class_cursors_);
      }
      case SchedulerKind::PrioritizedCI: {
        std::vector<FlowPriorityCqi> in;
        for (FlowId f : flows) {
          const MacDPdu* head = bank_.head(f);
          Priority prio = head->priority;
          if (config_.priority_hook) prio = config_.priority_hook(f, prio, slot * kTti - head->enqueue_time);
          in.push_back({f, prio, cqi_of(f)});
        }
        return select_prioritized_ci(in);
      }
    }
    return std::nullopt;
  }

  template <typename Draw>
  TransmissionAction transmit(HarqProcess& p, std::int64_t slot, const TtiSample& sample,
                              TransmissionAction::Kind kind, Draw& draw) {
    auto& block = *p.in_flight;
    block.transmit_slot = slot;
    const double snr = sample.snr_attempt[static_cast<std::size_t>(p.attempt - 1)];
    const double u = draw(block.flow);
    p.pending_feedback = ack_decision(bler_, block.cqi, snr, u);
    p.feedback_due_slot = slot + 1 + config_.harq_feedback_ttis;
    ledger_.max_block_transmissions = std::max(ledger_.max_block_transmissions, p.attempt);
    ++ledger_.blocks_transmitted;
    return TransmissionAction{kind, p.process_id, block.flow, p.attempt, block.cqi, snr, p.pending_feedback, block};
  }

  MacConfig config_;
  TbsTable tbs_;
  BlerCurve bler_;
  std::array<ServiceClass, kFlowMax> classes_;
  QueueBank bank_;
  std::vector<HarqProcess> processes_;
  MacLedger ledger_;
  int rr_cursor_ = 0;
  ClassCursors class_cursors_{};
  std::array<std::uint64_t, kFlowMax> scheduled_ttis_{};
};

}  // namespace hsdpa
