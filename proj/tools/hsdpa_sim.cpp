// hsdpa-sim: trace generation, single runs, policy comparisons and
// environment sweeps for the HS-DSCH scheduler simulator.
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hsdpa/commands.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::string scenario_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string policy;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario_path, "Scenario JSON file");
  cmd->add_option("--preset", c.preset_name, "Built-in scenario: table1 or table3");
  cmd->add_option("--seed", c.seed, "Override run.seed");
  cmd->add_option("--out", c.out, "Output directory (default: run.out_dir)");
}

hsdpa::SchedulerKind policy_or_throw(const std::string& name, const std::string& field) {
  const auto kind = hsdpa::parse_scheduler(name);
  if (!kind)
    throw hsdpa::ValidationError(field, "unknown scheduler '" + name + "' (valid: " + hsdpa::scheduler_names() + ")");
  return *kind;
}

struct Loaded {
  hsdpa::Scenario scenario;
  std::filesystem::path base_dir;
  std::filesystem::path out_dir;
};

Loaded load(const Common& c) {
  Loaded l;
  if (!c.scenario_path.empty() && !c.preset_name.empty())
    throw hsdpa::ValidationError("--scenario", "use either --scenario or --preset");
  if (!c.scenario_path.empty()) {
    l.scenario = hsdpa::load_scenario(c.scenario_path);
    l.base_dir = std::filesystem::path(c.scenario_path).parent_path();
    if (l.base_dir.empty()) l.base_dir = ".";
  } else {
    const auto p = hsdpa::preset(c.preset_name.empty() ? "table1" : c.preset_name);
    if (!p) throw hsdpa::ValidationError("--preset", "unknown preset '" + c.preset_name + "' (valid: table1, table3)");
    l.scenario = *p;
    l.base_dir = ".";
  }
  if (c.seed) l.scenario.run.seed = *c.seed;
  if (!c.policy.empty()) l.scenario.mac.policy = policy_or_throw(c.policy, "--policy");
  hsdpa::validate(l.scenario);
  l.out_dir = c.out.empty() ? std::filesystem::path(l.scenario.run.out_dir) : std::filesystem::path(c.out);
  return l;
}

void print_summary(const hsdpa::RunSummary& s) {
  std::printf("policy %s: generated %zu delivered %zu", std::string(hsdpa::to_string(s.policy)).c_str(),
              s.overall.generated, s.overall.delivered);
  if (s.overall.mean_delay_s) std::printf(" mean delay %.6f s", *s.overall.mean_delay_s);
  std::printf("\n");
  for (const auto& f : s.flows) {
    std::printf("  ue %2d  %7.1f m  prio %d  delivered %6zu/%-6zu", f.ue, f.distance_m, f.priority, f.stats.delivered,
                f.stats.generated);
    if (f.stats.mean_delay_s) std::printf("  mean delay %.6f s", *f.stats.mean_delay_s);
    std::printf("  ttis %llu\n", static_cast<unsigned long long>(f.scheduled_ttis));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HS-DSCH MAC-hs scheduler simulator"};
  app.require_subcommand(1);

  Common gen_opts, run_opts, cmp_opts, sweep_opts;
  std::string policy_a, policy_b, preset_name;

  auto* gen = app.add_subcommand("generate-traces", "Write one channel trace file per flow");
  add_common(gen, gen_opts);

  auto* run = app.add_subcommand("run", "Run one scenario and write metrics");
  add_common(run, run_opts);
  run->add_option("--policy", run_opts.policy, "Override mac.policy");

  auto* cmp = app.add_subcommand("compare", "Run one scenario under two policies");
  add_common(cmp, cmp_opts);
  cmp->add_option("--policy-a", policy_a, "First policy")->required();
  cmp->add_option("--policy-b", policy_b, "Second policy")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the scenario in each of the five environments");
  add_common(sweep, sweep_opts);
  sweep->add_option("--policy", sweep_opts.policy, "Override mac.policy");

  auto* show = app.add_subcommand("preset", "Print a built-in scenario as JSON");
  show->add_option("name", preset_name, "table1 or table3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen) {
      const auto l = load(gen_opts);
      for (const auto& p : hsdpa::cmd_generate_traces(l.scenario, l.base_dir, l.out_dir))
        std::printf("%s\n", p.string().c_str());
    } else if (*run) {
      const auto l = load(run_opts);
      const auto outcome = hsdpa::cmd_run(l.scenario, l.base_dir, l.out_dir);
      print_summary(outcome.summary);
    } else if (*cmp) {
      const auto l = load(cmp_opts);
      const auto a = policy_or_throw(policy_a, "--policy-a");
      const auto b = policy_or_throw(policy_b, "--policy-b");
      const auto outcome = hsdpa::cmd_compare(l.scenario, l.base_dir, a, b, l.out_dir);
      std::printf("%-4s %9s %14s %14s %14s\n", "ue", "dist_m", hsdpa::to_string(a).data(), hsdpa::to_string(b).data(),
                  "delta_s");
      for (const auto& r : outcome.rows) {
        std::printf("%-4d %9.1f", r.ue, r.distance_m);
        for (const auto& v : {r.mean_delay_a_s, r.mean_delay_b_s, r.delta_s}) {
          if (v)
            std::printf(" %14.6f", *v);
          else
            std::printf(" %14s", "-");
        }
        std::printf("\n");
      }
    } else if (*sweep) {
      const auto l = load(sweep_opts);
      for (const auto& e : hsdpa::cmd_sweep_environments(l.scenario, l.base_dir, l.out_dir)) {
        std::printf("%-10s %5.0f km/h  ", hsdpa::to_string(e.environment).data(), e.speed_kmh);
        if (e.outcome.summary.overall.mean_delay_s)
          std::printf("mean delay %.6f s\n", *e.outcome.summary.overall.mean_delay_s);
        else
          std::printf("no deliveries\n");
      }
    } else if (*show) {
      const auto p = hsdpa::preset(preset_name);
      if (!p) throw hsdpa::ValidationError("name", "unknown preset '" + preset_name + "' (valid: table1, table3)");
      std::cout << hsdpa::dump_scenario(*p);
    }
  } catch (const hsdpa::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
