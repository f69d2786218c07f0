#pragma once

// Simplified RLC acknowledged mode for one flow: segmentation into fixed
// mac-d PDUs at the RNC, retransmission of PDUs the MAC reports lost, and
// in-order duplicate-free reassembly at the UE.

#include <cstdint>
#include <map>
#include <vector>

#include "hsdpa/machs.hpp"

namespace hsdpa {

struct Packet {
  std::uint64_t packet_id = 0;
  FlowId flow{0};
  int size_bits = 0;
  SimTime created = 0;
};

struct ReassembledPacket {
  std::uint64_t packet_id = 0;
  std::uint64_t packet_seq = 0;

  bool operator==(const ReassembledPacket&) const = default;
};

class RlcAmEntity {
 public:
  RlcAmEntity(FlowId flow, Priority priority, int pdu_payload_bits = kDefaultPduBits)
      : flow_(flow), priority_(priority), pdu_bits_(pdu_payload_bits) {
    if (pdu_payload_bits <= 0) throw InvalidInput("RLC PDU payload must be > 0 bits");
  }

  /// ceil(size / pdu_bits) PDUs; the last one is padded to the full PDU size.
  std::vector<MacDPdu> segment(const Packet& packet) {
    if (packet.size_bits <= 0) throw InvalidInput("rlc_segment: packet size must be > 0");
    const auto count = static_cast<std::uint32_t>((packet.size_bits + pdu_bits_ - 1) / pdu_bits_);
    const std::uint64_t seq = next_packet_seq_++;
    std::vector<MacDPdu> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      MacDPdu pdu;
      pdu.flow = flow_;
      pdu.priority = priority_;
      pdu.payload_bits = pdu_bits_;
      pdu.source = PduSource{packet.packet_id, seq, i, count, next_sn_++};
      unacked_.emplace(pdu.source.rlc_sn, pdu);
      out.push_back(pdu);
    }
    return out;
  }

  /// The MAC confirmed delivery; the PDU leaves the transmit window.
  void acknowledge(const MacDPdu& pdu) { unacked_.erase(pdu.source.rlc_sn); }

  /// The MAC gave up on `lost`; returns the copies to send again.
  std::vector<MacDPdu> retransmit(const std::vector<MacDPdu>& lost) {
    std::vector<MacDPdu> out;
    for (const auto& pdu : lost) {
      if (!unacked_.count(pdu.source.rlc_sn)) continue;
      out.push_back(pdu);
      ++retransmissions_;
    }
    return out;
  }

  /// Receiver side. Returns every packet that became deliverable in order.
  std::vector<ReassembledPacket> reassemble(const MacDPdu& pdu) {
    std::vector<ReassembledPacket> done;
    const auto& src = pdu.source;
    if (src.packet_seq < next_expected_) {
      ++duplicates_;
      return done;
    }
    auto& partial = pending_[src.packet_seq];
    if (partial.received.empty()) {
      partial.packet_id = src.packet_id;
      partial.received.assign(src.segment_count, false);
    }
    if (src.segment >= partial.received.size() || partial.received[src.segment]) {
      ++duplicates_;
      return done;
    }
    partial.received[src.segment] = true;
    ++partial.count;
    while (true) {
      auto it = pending_.find(next_expected_);
      if (it == pending_.end() || it->second.count != it->second.received.size()) break;
      done.push_back({it->second.packet_id, next_expected_});
      pending_.erase(it);
      ++next_expected_;
    }
    return done;
  }

  FlowId flow() const { return flow_; }
  std::uint64_t duplicates() const { return duplicates_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::size_t unacknowledged() const { return unacked_.size(); }
  std::size_t held_packets() const { return pending_.size(); }

 private:
  struct Partial {
    std::uint64_t packet_id = 0;
    std::vector<bool> received;
    std::size_t count = 0;
  };

  FlowId flow_;
  Priority priority_;
  int pdu_bits_;
  std::uint64_t next_packet_seq_ = 0;
  std::uint64_t next_sn_ = 0;
  std::map<std::uint64_t, MacDPdu> unacked_;
  std::map<std::uint64_t, Partial> pending_;
  std::uint64_t next_expected_ = 0;
  std::uint64_t duplicates_ = 0;
  std::uint64_t retransmissions_ = 0;
};

}  // namespace hsdpa
