#pragma once

// The work behind each CLI subcommand, kept out of main() so the
// acceptance suite and tests drive exactly what the tool runs.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsdpa/metrics.hpp"
#include "hsdpa/scenario.hpp"
#include "hsdpa/simulation.hpp"

namespace hsdpa {

namespace fs = std::filesystem;

inline std::string trace_file_name(const FlowSpec& f) {
  std::string env(to_string(f.environment));
  for (auto& c : env) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return "ue" + std::to_string(f.ue) + "_" + env + "_" + detail::shortest(f.distance_m) + "m.trc";
}

inline std::string checksum_hex(const ChannelTrace& t) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(format_trace(t))));
  return buf;
}

/// One file per flow, named ue<id>_<env>_<dist>m.trc.
inline std::vector<fs::path> cmd_generate_traces(const Scenario& s, const fs::path& base_dir, const fs::path& out_dir) {
  validate(s);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  for (const auto& f : s.flows) {
    const auto path = out_dir / trace_file_name(f);
    store_trace(trace_for(s, f, base_dir), path.string());
    written.push_back(path);
  }
  return written;
}

struct FlowSummary {
  int ue = 0;
  double distance_m = 0.0;
  Environment environment = Environment::Pedestrian;
  int priority = 0;
  DelayStats stats;
  std::uint64_t scheduled_ttis = 0;
  std::string trace_checksum;
};

struct RunSummary {
  std::string scenario;
  SchedulerKind policy = SchedulerKind::MaxCI;
  DelayStats overall;
  std::vector<FlowSummary> flows;
  MacLedger ledger;
  std::int64_t tti_events = 0;
  std::uint64_t event_digest = 0;
};

struct RunOutcome {
  SimulationResult result;
  RunSummary summary;
};

inline RunSummary summarize(const Scenario& s, const SimulationSetup& setup, const SimulationResult& r) {
  RunSummary out;
  out.scenario = s.name;
  out.policy = setup.mac.policy;
  out.overall = delay_stats(r.records.records());
  out.ledger = r.ledger;
  out.tti_events = r.tti_events;
  out.event_digest = r.event_digest;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& f = s.flows[i];
    const FlowId one[] = {FlowId(f.ue)};
    out.flows.push_back({f.ue, f.distance_m, f.environment, f.priority, delay_stats(r.records.records(), one),
                         r.scheduled_ttis[static_cast<std::size_t>(f.ue)], checksum_hex(setup.traces[i])});
  }
  return out;
}

inline std::string flows_csv(const RunSummary& s) {
  std::ostringstream os;
  os << "flow,distance_m,environment,priority,generated,delivered,pdr,mean_delay_s,scheduled_ttis\n";
  for (const auto& f : s.flows) {
    os << f.ue << ',' << detail::format_fixed(f.distance_m, 3) << ',' << to_string(f.environment) << ',' << f.priority
       << ',' << f.stats.generated << ',' << f.stats.delivered << ',';
    if (f.stats.generated)
      os << detail::format_fixed(static_cast<double>(f.stats.delivered) / static_cast<double>(f.stats.generated), 6);
    os << ',';
    if (f.stats.mean_delay_s) os << detail::format_fixed(*f.stats.mean_delay_s);
    os << ',' << f.scheduled_ttis << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json summary_json(const RunSummary& s) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  auto pdr = [](const DelayStats& d) {
    return d.generated ? ordered_json(static_cast<double>(d.delivered) / static_cast<double>(d.generated))
                       : ordered_json(nullptr);
  };
  ordered_json flows = ordered_json::array();
  for (const auto& f : s.flows)
    flows.push_back({{"ue", f.ue},
                     {"distance_m", f.distance_m},
                     {"environment", std::string(to_string(f.environment))},
                     {"priority", f.priority},
                     {"generated", f.stats.generated},
                     {"delivered", f.stats.delivered},
                     {"pdr", pdr(f.stats)},
                     {"mean_delay_s", opt(f.stats.mean_delay_s)},
                     {"scheduled_ttis", f.scheduled_ttis},
                     {"trace_checksum", f.trace_checksum}});
  return ordered_json{{"scenario", s.scenario},
                      {"policy", std::string(to_string(s.policy))},
                      {"generated", s.overall.generated},
                      {"delivered", s.overall.delivered},
                      {"pdr", pdr(s.overall)},
                      {"mean_delay_s", opt(s.overall.mean_delay_s)},
                      {"tti_events", s.tti_events},
                      {"ledger",
                       {{"offered", s.ledger.offered},
                        {"delivered", s.ledger.delivered},
                        {"dropped_queue_full", s.ledger.dropped_queue_full},
                        {"harq_failed", s.ledger.harq_failed},
                        {"queued", s.ledger.queued},
                        {"in_flight", s.ledger.in_flight},
                        {"balanced", s.ledger.balanced()},
                        {"max_block_transmissions", s.ledger.max_block_transmissions}}},
                      {"flows", flows}};
}

/// Runs `setup` and writes packets.csv, delay_series.csv, delay_series.dat,
/// distance.csv, flows.csv and summary.json into `out_dir`.
inline RunOutcome run_and_write(const Scenario& s, const SimulationSetup& setup, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  RunOutcome out{run_simulation(setup), {}};
  out.summary = summarize(s, setup, out.result);
  const auto& records = out.result.records.records();
  const SimTime horizon = seconds_to_time(s.run.duration_s + s.run.drain_s);
  const auto series = aggregate_time_buckets(records, seconds_to_time(s.run.bucket_width_s), {}, horizon);
  std::vector<FlowPlacement> placements;
  for (const auto& f : s.flows) placements.push_back({FlowId(f.ue), f.distance_m});
  write_csv(records, (out_dir / "packets.csv").string());
  write_csv(series, (out_dir / "delay_series.csv").string());
  write_plot_data(series, (out_dir / "delay_series.dat").string());
  const auto rows = delay_vs_distance(records, placements);
  write_csv(std::span<const DistanceRow>(rows), (out_dir / "distance.csv").string());
  detail::write_file((out_dir / "flows.csv").string(), flows_csv(out.summary));
  detail::write_file((out_dir / "summary.json").string(), summary_json(out.summary).dump(2) + "\n");
  return out;
}

inline RunOutcome cmd_run(const Scenario& s, const fs::path& base_dir, const fs::path& out_dir) {
  return run_and_write(s, prepare_simulation(s, base_dir), out_dir);
}

struct CompareRow {
  int ue = 0;
  double distance_m = 0.0;
  std::optional<double> mean_delay_a_s;
  std::optional<double> mean_delay_b_s;
  std::optional<double> delta_s;  // a - b
};

struct CompareOutcome {
  RunOutcome a;
  RunOutcome b;
  std::vector<CompareRow> rows;
};

/// Same scenario, seeds and traces under two policies. Writes
/// <out>/a_<policy>/, <out>/b_<policy>/ and <out>/compare.csv.
inline CompareOutcome cmd_compare(Scenario s, const fs::path& base_dir, SchedulerKind policy_a, SchedulerKind policy_b,
                                  const fs::path& out_dir) {
  auto setup = prepare_simulation(s, base_dir);
  s.mac.policy = policy_a;
  setup.mac.policy = policy_a;
  CompareOutcome out{run_and_write(s, setup, out_dir / ("a_" + std::string(to_string(policy_a)))), {}, {}};
  s.mac.policy = policy_b;
  setup.mac.policy = policy_b;
  out.b = run_and_write(s, setup, out_dir / ("b_" + std::string(to_string(policy_b))));

  std::ostringstream os;
  os << "flow,distance_m,mean_delay_a_s,mean_delay_b_s,delta_s\n";
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& fa = out.a.summary.flows[i];
    const auto& fb = out.b.summary.flows[i];
    if (fa.trace_checksum != fb.trace_checksum) throw std::logic_error("compare: runs saw different traces");
    CompareRow row{fa.ue, fa.distance_m, fa.stats.mean_delay_s, fb.stats.mean_delay_s, std::nullopt};
    if (row.mean_delay_a_s && row.mean_delay_b_s) row.delta_s = *row.mean_delay_a_s - *row.mean_delay_b_s;
    os << row.ue << ',' << detail::format_fixed(row.distance_m, 3) << ',';
    if (row.mean_delay_a_s) os << detail::format_fixed(*row.mean_delay_a_s);
    os << ',';
    if (row.mean_delay_b_s) os << detail::format_fixed(*row.mean_delay_b_s);
    os << ',';
    if (row.delta_s) os << detail::format_fixed(*row.delta_s);
    os << '\n';
    out.rows.push_back(row);
  }
  detail::write_file((out_dir / "compare.csv").string(), os.str());
  return out;
}

struct SweepEntry {
  Environment environment;
  double speed_kmh;
  RunOutcome outcome;
};

/// Five runs that differ only in the environment of every flow. Writes
/// <out>/<env>/ per run and <out>/sweep.csv.
inline std::vector<SweepEntry> cmd_sweep_environments(const Scenario& base, const fs::path& base_dir,
                                                      const fs::path& out_dir) {
  validate(base);
  std::vector<SweepEntry> out;
  std::ostringstream os;
  os << "environment,speed_kmh,generated,delivered,mean_delay_s\n";
  for (auto env : kAllEnvironments) {
    Scenario s = base;
    s.name = base.name + "-" + std::string(to_string(env));
    for (auto& f : s.flows) {
      f.environment = env;
      f.trace_path.reset();
    }
    const double speed = environment_preset(env).speed_kmh;
    auto outcome = run_and_write(s, prepare_simulation(s, base_dir), out_dir / std::string(to_string(env)));
    os << to_string(env) << ',' << detail::format_fixed(speed, 1) << ',' << outcome.summary.overall.generated << ','
       << outcome.summary.overall.delivered << ',';
    if (outcome.summary.overall.mean_delay_s) os << detail::format_fixed(*outcome.summary.overall.mean_delay_s);
    os << '\n';
    out.push_back({env, speed, std::move(outcome)});
  }
  detail::write_file((out_dir / "sweep.csv").string(), os.str());
  return out;
}

}  // namespace hsdpa
