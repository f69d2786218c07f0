#pragma once

// Scenario files (JSON) and the two shipped presets.
//
// {
//   "name": "...",
//   "links": [{"from", "to", "bandwidth_mbps", "delay_ms"}, ...],        // optional, defaults to the wired chain
//   "flows": [{"ue", "distance_m", "environment", "priority",
//              "service_class"?, "trace"?, "traffic": {...}?}, ...],
//   "mac":   {"policy", "tbs_table"?, "bler_curve"?, "harq_processes",
//             "harq_feedback_ttis", "queue_capacity", "pdu_bits"},
//   "run":   {"duration_s", "drain_s", "seed", "trace_length_s",
//             "shadowing", "bucket_width_s", "out_dir"}
// }
//
// Relative trace/table paths resolve against the scenario file's directory.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsdpa/simulation.hpp"

namespace hsdpa {

/// Field-level scenario problem; `field` is a dotted path such as `flows[2].priority`.
struct ValidationError : std::runtime_error {
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct FlowSpec {
  int ue = 0;
  double distance_m = 500.0;
  Environment environment = Environment::Pedestrian;
  int priority = 0;
  std::optional<ServiceClass> service_class;
  TrafficParams traffic;
  std::optional<std::string> trace_path;

  bool operator==(const FlowSpec&) const = default;
};

struct MacSpec {
  SchedulerKind policy = SchedulerKind::MaxCI;
  std::optional<std::string> tbs_table_path;
  std::optional<std::string> bler_curve_path;
  int harq_processes = 6;
  int harq_feedback_ttis = 2;
  std::size_t queue_capacity = 0;
  int pdu_bits = kDefaultPduBits;

  bool operator==(const MacSpec&) const = default;
};

struct RunSpec {
  double duration_s = 10.0;
  double drain_s = 0.0;
  std::uint64_t seed = 1;
  double trace_length_s = 100.0;
  bool shadowing = true;  // only affects synthesized traces
  double bucket_width_s = 5.0;
  std::string out_dir = "out";

  bool operator==(const RunSpec&) const = default;
};

struct Scenario {
  std::string name = "custom";
  std::vector<Link> links = default_link_table();
  std::vector<FlowSpec> flows;
  MacSpec mac;
  RunSpec run;

  bool operator==(const Scenario&) const = default;
};

// Presets ----------------------------------------------------------------------

// The two table presets list no large-scale fading, so their traces are
// synthesized with fast fading only.

/// Ten equidistant UEs at 500 m, 80 s, priorities cycling 0,1,2,3.
inline Scenario table1_preset() {
  Scenario s;
  s.name = "table1";
  for (int ue = 0; ue < 10; ++ue) {
    FlowSpec f;
    f.ue = ue;
    f.distance_m = 500.0;
    f.priority = ue % 4;
    s.flows.push_back(f);
  }
  s.mac.policy = SchedulerKind::PrioritizedCI;
  s.run.duration_s = 80.0;
  s.run.shadowing = false;
  return s;
}

/// Five UEs at 100..500 m, 10 s, no priorities.
inline Scenario table3_preset() {
  Scenario s;
  s.name = "table3";
  for (int ue = 0; ue < 5; ++ue) {
    FlowSpec f;
    f.ue = ue;
    f.distance_m = 100.0 * (ue + 1);
    s.flows.push_back(f);
  }
  s.mac.policy = SchedulerKind::ModifiedInverseCI;
  s.run.duration_s = 10.0;
  s.run.shadowing = false;
  return s;
}

inline std::optional<Scenario> preset(std::string_view name) {
  if (name == "table1") return table1_preset();
  if (name == "table3") return table3_preset();
  return std::nullopt;
}

// Validation -------------------------------------------------------------------

inline void validate(const Scenario& s) {
  if (!(s.run.duration_s > 0.0)) throw ValidationError("run.duration_s", "must be > 0");
  if (!(s.run.drain_s >= 0.0)) throw ValidationError("run.drain_s", "must be >= 0");
  if (!(s.run.trace_length_s > 0.0)) throw ValidationError("run.trace_length_s", "must be > 0");
  if (!(s.run.bucket_width_s > 0.0)) throw ValidationError("run.bucket_width_s", "must be > 0");
  if (s.run.duration_s + s.run.drain_s > s.run.trace_length_s + 1e-9)
    throw ValidationError("run.duration_s", "duration plus drain exceeds trace_length_s");
  if (s.mac.harq_processes < 1) throw ValidationError("mac.harq_processes", "must be >= 1");
  if (s.mac.harq_feedback_ttis < 0) throw ValidationError("mac.harq_feedback_ttis", "must be >= 0");
  if (s.mac.pdu_bits <= 0) throw ValidationError("mac.pdu_bits", "must be > 0");
  try {
    build_topology(s.links);
  } catch (const ConfigError& e) {
    throw ValidationError("links", e.what());
  }
  std::set<int> ids;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& f = s.flows[i];
    const std::string at = "flows[" + std::to_string(i) + "]";
    if (f.ue < 0 || f.ue >= kFlowMax) throw ValidationError(at + ".ue", "must be in [0, 19]");
    if (!ids.insert(f.ue).second) throw ValidationError(at + ".ue", "duplicate flow id " + std::to_string(f.ue));
    if (!(f.distance_m > 0.0)) throw ValidationError(at + ".distance_m", "must be > 0");
    if (f.priority < 0 || f.priority >= kPriorityLevels) throw ValidationError(at + ".priority", "must be in [0, 7]");
    const auto& t = f.traffic;
    if (!(t.rate_bps > 0.0)) throw ValidationError(at + ".traffic.rate_bps", "must be > 0");
    if (t.packet_size_bits <= 0) throw ValidationError(at + ".traffic.packet_size_bits", "must be > 0");
    if (!(t.mean_burst_s > 0.0)) throw ValidationError(at + ".traffic.mean_burst_s", "must be > 0");
    if (!(t.mean_idle_s > 0.0)) throw ValidationError(at + ".traffic.mean_idle_s", "must be > 0");
  }
}

// JSON -----------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Scenario& s) {
  using nlohmann::ordered_json;
  ordered_json links = ordered_json::array();
  for (const auto& l : s.links)
    links.push_back({{"from", l.from}, {"to", l.to}, {"bandwidth_mbps", l.bandwidth_mbps}, {"delay_ms", l.delay_ms}});
  ordered_json flows = ordered_json::array();
  for (const auto& f : s.flows) {
    ordered_json j{{"ue", f.ue},
                   {"distance_m", f.distance_m},
                   {"environment", std::string(to_string(f.environment))},
                   {"priority", f.priority}};
    if (f.service_class) j["service_class"] = std::string(to_string(*f.service_class));
    if (f.trace_path) j["trace"] = *f.trace_path;
    j["traffic"] = {{"enabled", f.traffic.enabled},
                    {"rate_bps", f.traffic.rate_bps},
                    {"packet_size_bits", f.traffic.packet_size_bits},
                    {"mean_burst_s", f.traffic.mean_burst_s},
                    {"mean_idle_s", f.traffic.mean_idle_s}};
    flows.push_back(std::move(j));
  }
  ordered_json mac{{"policy", std::string(to_string(s.mac.policy))}};
  if (s.mac.tbs_table_path) mac["tbs_table"] = *s.mac.tbs_table_path;
  if (s.mac.bler_curve_path) mac["bler_curve"] = *s.mac.bler_curve_path;
  mac["harq_processes"] = s.mac.harq_processes;
  mac["harq_feedback_ttis"] = s.mac.harq_feedback_ttis;
  mac["queue_capacity"] = s.mac.queue_capacity;
  mac["pdu_bits"] = s.mac.pdu_bits;
  ordered_json run{{"duration_s", s.run.duration_s},         {"drain_s", s.run.drain_s},
                   {"seed", s.run.seed},                     {"trace_length_s", s.run.trace_length_s},
                   {"shadowing", s.run.shadowing},           {"bucket_width_s", s.run.bucket_width_s}, {"out_dir", s.run.out_dir}};
  return ordered_json{{"name", s.name}, {"links", links}, {"flows", flows}, {"mac", mac}, {"run", run}};
}

inline std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

namespace detail {
template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& at, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(at + "." + key, "wrong type");
  }
}
}  // namespace detail

/// Parses and validates scenario JSON.
inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("<scenario>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("<scenario>", "top level must be an object");
  Scenario s;
  s.name = detail::field<std::string>(j, "name", "", s.name);
  if (j.contains("links")) {
    s.links.clear();
    const auto& links = j.at("links");
    if (!links.is_array()) throw ValidationError("links", "must be an array");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string at = "links[" + std::to_string(i) + "]";
      Link l;
      l.from = detail::field<std::string>(links[i], "from", at, "");
      l.to = detail::field<std::string>(links[i], "to", at, "");
      l.bandwidth_mbps = detail::field<double>(links[i], "bandwidth_mbps", at, 0.0);
      l.delay_ms = detail::field<double>(links[i], "delay_ms", at, -1.0);
      s.links.push_back(l);
    }
  }
  if (j.contains("flows")) {
    const auto& flows = j.at("flows");
    if (!flows.is_array()) throw ValidationError("flows", "must be an array");
    for (std::size_t i = 0; i < flows.size(); ++i) {
      const std::string at = "flows[" + std::to_string(i) + "]";
      const auto& fj = flows[i];
      FlowSpec f;
      f.ue = detail::field<int>(fj, "ue", at, -1);
      f.distance_m = detail::field<double>(fj, "distance_m", at, f.distance_m);
      const auto env = detail::field<std::string>(fj, "environment", at, "Pedestrian");
      const auto parsed_env = parse_environment(env);
      if (!parsed_env)
        throw ValidationError(at + ".environment",
                              "unknown environment '" + env + "' (valid: Pedestrian, Rural, Hilly, Indoor, Urban)");
      f.environment = *parsed_env;
      f.priority = detail::field<int>(fj, "priority", at, 0);
      if (fj.contains("service_class")) {
        const auto name = detail::field<std::string>(fj, "service_class", at, "");
        const auto cls = parse_service_class(name);
        if (!cls) throw ValidationError(at + ".service_class", "unknown class '" + name + "' (valid: Gold, Silver, Bronze)");
        f.service_class = *cls;
      }
      if (fj.contains("trace")) f.trace_path = detail::field<std::string>(fj, "trace", at, "");
      if (fj.contains("traffic")) {
        const auto& tj = fj.at("traffic");
        const std::string tat = at + ".traffic";
        f.traffic.enabled = detail::field<bool>(tj, "enabled", tat, true);
        f.traffic.rate_bps = detail::field<double>(tj, "rate_bps", tat, f.traffic.rate_bps);
        f.traffic.packet_size_bits = detail::field<int>(tj, "packet_size_bits", tat, f.traffic.packet_size_bits);
        f.traffic.mean_burst_s = detail::field<double>(tj, "mean_burst_s", tat, f.traffic.mean_burst_s);
        f.traffic.mean_idle_s = detail::field<double>(tj, "mean_idle_s", tat, f.traffic.mean_idle_s);
      }
      s.flows.push_back(f);
    }
  }
  if (j.contains("mac")) {
    const auto& mj = j.at("mac");
    const auto policy = detail::field<std::string>(mj, "policy", "mac", "MaxCI");
    const auto kind = parse_scheduler(policy);
    if (!kind) throw ValidationError("mac.policy", "unknown scheduler '" + policy + "' (valid: " + scheduler_names() + ")");
    s.mac.policy = *kind;
    if (mj.contains("tbs_table")) s.mac.tbs_table_path = detail::field<std::string>(mj, "tbs_table", "mac", "");
    if (mj.contains("bler_curve")) s.mac.bler_curve_path = detail::field<std::string>(mj, "bler_curve", "mac", "");
    s.mac.harq_processes = detail::field<int>(mj, "harq_processes", "mac", s.mac.harq_processes);
    s.mac.harq_feedback_ttis = detail::field<int>(mj, "harq_feedback_ttis", "mac", s.mac.harq_feedback_ttis);
    s.mac.queue_capacity = detail::field<std::size_t>(mj, "queue_capacity", "mac", s.mac.queue_capacity);
    s.mac.pdu_bits = detail::field<int>(mj, "pdu_bits", "mac", s.mac.pdu_bits);
  }
  if (j.contains("run")) {
    const auto& rj = j.at("run");
    s.run.duration_s = detail::field<double>(rj, "duration_s", "run", s.run.duration_s);
    s.run.drain_s = detail::field<double>(rj, "drain_s", "run", s.run.drain_s);
    s.run.seed = detail::field<std::uint64_t>(rj, "seed", "run", s.run.seed);
    s.run.trace_length_s = detail::field<double>(rj, "trace_length_s", "run", s.run.trace_length_s);
    s.run.shadowing = detail::field<bool>(rj, "shadowing", "run", s.run.shadowing);
    s.run.bucket_width_s = detail::field<double>(rj, "bucket_width_s", "run", s.run.bucket_width_s);
    s.run.out_dir = detail::field<std::string>(rj, "out_dir", "run", s.run.out_dir);
  }
  validate(s);
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("<scenario>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// Simulation inputs ----------------------------------------------------------

/// Trace for one flow: loaded from its trace file, or synthesized from
/// (run seed, ue) for trace_length_s.
inline ChannelTrace trace_for(const Scenario& s, const FlowSpec& f, const std::filesystem::path& base_dir) {
  if (f.trace_path) {
    std::filesystem::path p(*f.trace_path);
    if (p.is_relative()) p = base_dir / p;
    return load_trace(p.string());
  }
  TraceOptions options;
  options.shadowing = s.run.shadowing;
  return generate_trace(f.ue, f.distance_m, environment_preset(f.environment), s.run.trace_length_s, kTtiSeconds,
                        s.run.seed, options);
}

inline ServiceClass service_class_for(const Scenario& s, const FlowSpec& f) {
  if (f.service_class) return *f.service_class;
  Rng rng(derive_seed(s.run.seed, static_cast<std::uint64_t>(f.ue), StreamTag::ServiceClass));
  return static_cast<ServiceClass>(std::min(2, static_cast<int>(rng.uniform() * 3.0)));
}

/// Turns a validated scenario into simulation inputs. Supplying `traces`
/// (one per flow) skips trace loading, so several runs can share them.
inline SimulationSetup prepare_simulation(const Scenario& s, const std::filesystem::path& base_dir = ".",
                                          std::optional<std::vector<ChannelTrace>> traces = std::nullopt) {
  validate(s);
  SimulationSetup setup;
  setup.links = s.links;
  setup.mac.policy = s.mac.policy;
  setup.mac.harq_processes = s.mac.harq_processes;
  setup.mac.harq_feedback_ttis = s.mac.harq_feedback_ttis;
  setup.mac.queue_capacity = s.mac.queue_capacity;
  setup.pdu_bits = s.mac.pdu_bits;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_relative() ? base_dir / path : path).string();
  };
  if (s.mac.tbs_table_path) setup.tbs = load_tbs_table(resolve(*s.mac.tbs_table_path));
  if (s.mac.bler_curve_path) setup.bler = load_bler_curve(resolve(*s.mac.bler_curve_path));
  setup.duration_s = s.run.duration_s;
  setup.drain_s = s.run.drain_s;
  setup.seed = s.run.seed;
  for (const auto& f : s.flows) {
    FlowSetup fs;
    fs.flow = FlowId(f.ue);
    fs.priority = Priority(f.priority);
    fs.distance_m = f.distance_m;
    fs.service_class = service_class_for(s, f);
    fs.traffic = f.traffic;
    setup.flows.push_back(fs);
  }
  if (traces) {
    if (traces->size() != s.flows.size()) throw ConfigError("one trace per flow is required");
    setup.traces = std::move(*traces);
  } else {
    for (const auto& f : s.flows) setup.traces.push_back(trace_for(s, f, base_dir));
  }
  const auto needed = total_slots(setup);
  for (std::size_t i = 0; i < setup.traces.size(); ++i)
    if (static_cast<std::int64_t>(setup.traces[i].samples.size()) < needed)
      throw ValidationError("flows[" + std::to_string(i) + "].trace",
                            "trace shorter than duration plus drain (" + std::to_string(setup.traces[i].samples.size()) +
                                " < " + std::to_string(needed) + " slots)");
  return setup;
}

}  // namespace hsdpa
