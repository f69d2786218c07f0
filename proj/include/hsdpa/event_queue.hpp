#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "hsdpa/core.hpp"

namespace hsdpa {

/// Discrete-event queue. Events run in (time, insertion sequence) order.
class EventQueue {
 public:
  using Action = std::function<void()>;

  void schedule(SimTime time, Action action) {
    if (time < now_) throw ContractViolation("EventQueue: cannot schedule into the past");
    heap_.push(Entry{time, next_sequence_++, std::move(action)});
  }

  /// Runs every event with time <= `end`.
  void run_until(SimTime end) {
    while (!heap_.empty() && heap_.top().time <= end) {
      Entry e = heap_.top();
      heap_.pop();
      now_ = e.time;
      ++executed_;
      e.action();
    }
  }

  SimTime now() const { return now_; }
  std::uint64_t executed() const { return executed_; }
  std::size_t pending() const { return heap_.size(); }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t sequence;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t executed_ = 0;
};

}  // namespace hsdpa
