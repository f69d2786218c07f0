#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsdpa/machs.hpp"
#include "oracles.hpp"

namespace support {

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hsdpa-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Random selection state; roughly half the flows backlogged, CQIs drawn
/// from a narrow or a wide range so ties are common in some states.
inline oracle::State random_state(std::mt19937_64& rng) {
  oracle::State s;
  std::uniform_int_distribution<int> coin(0, 1), prio(0, 7), cls(0, 2);
  const int cqi_hi = coin(rng) ? 3 : 30;
  std::uniform_int_distribution<int> cqi(0, cqi_hi);
  const int density = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int f = 0; f < 20; ++f) {
    s.backlogged[f] = std::uniform_int_distribution<int>(0, 4)(rng) < density;
    s.cqi[f] = cqi(rng);
    s.priority[f] = prio(rng) % (coin(rng) ? 2 : 8);
    s.service_class[f] = cls(rng);
  }
  return s;
}

inline std::vector<hsdpa::FlowCqi> flow_cqi(const oracle::State& s) {
  std::vector<hsdpa::FlowCqi> out;
  for (int f = 0; f < 20; ++f)
    if (s.backlogged[f]) out.push_back({hsdpa::FlowId(f), s.cqi[f]});
  return out;
}

inline std::vector<hsdpa::FlowPriorityCqi> flow_priority_cqi(const oracle::State& s) {
  std::vector<hsdpa::FlowPriorityCqi> out;
  for (int f = 0; f < 20; ++f)
    if (s.backlogged[f]) out.push_back({hsdpa::FlowId(f), hsdpa::Priority(s.priority[f]), s.cqi[f]});
  return out;
}

inline std::vector<hsdpa::FlowId> flows(const oracle::State& s) {
  std::vector<hsdpa::FlowId> out;
  for (int f = 0; f < 20; ++f)
    if (s.backlogged[f]) out.push_back(hsdpa::FlowId(f));
  return out;
}

inline std::vector<hsdpa::FlowClass> flow_class(const oracle::State& s) {
  std::vector<hsdpa::FlowClass> out;
  for (int f = 0; f < 20; ++f)
    if (s.backlogged[f]) out.push_back({hsdpa::FlowId(f), static_cast<hsdpa::ServiceClass>(s.service_class[f])});
  return out;
}

inline std::optional<int> id(const std::optional<hsdpa::FlowId>& f) {
  if (!f) return std::nullopt;
  return f->id();
}

/// Shuffled presentation order, so implementations cannot rely on sorted input.
template <typename T>
std::vector<T> shuffled(std::vector<T> v, std::mt19937_64& rng) {
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

struct OracleTally {
  long states = 0;
  long mismatches[5] = {0, 0, 0, 0, 0};  // max, rr, inverse, prioritized, modified inverse
};

/// Runs `n` random states through all five select_* operations and the
/// oracles. Round-robin and Inverse C/I cursors persist across states.
inline OracleTally oracle_sweep(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleTally t;
  int rr_lib = 0, rr_ref = 0;
  hsdpa::ClassCursors cls_lib{};
  std::array<int, 3> cls_ref{};
  for (long i = 0; i < n; ++i) {
    const auto s = random_state(rng);
    ++t.states;
    if (id(hsdpa::select_max_ci(shuffled(flow_cqi(s), rng))) != oracle::max_ci(s)) ++t.mismatches[0];
    const auto pick = hsdpa::select_round_robin(shuffled(flows(s), rng), rr_lib);
    rr_lib = pick.cursor;
    std::array<bool, 20> member = s.backlogged;
    if (id(pick.flow) != oracle::round_robin(member, rr_ref) || rr_lib != rr_ref) ++t.mismatches[1];
    const auto inv = hsdpa::select_inverse_ci(shuffled(flow_class(s), rng), cls_lib);
    const auto inv_ref = oracle::inverse_ci(s, cls_ref);
    if (id(inv) != inv_ref || cls_lib != cls_ref) ++t.mismatches[2];
    if (id(hsdpa::select_prioritized_ci(shuffled(flow_priority_cqi(s), rng))) != oracle::prioritized_ci(s))
      ++t.mismatches[3];
    if (id(hsdpa::select_modified_inverse_ci(shuffled(flow_cqi(s), rng))) != oracle::min_ci(s)) ++t.mismatches[4];
  }
  return t;
}

}  // namespace support
