// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// The channel-to-MAC calibration used by the scheduler experiments is pinned
// here rather than taken from the shipped defaults:
//   - TBS: 137 bits per CQI step (CQI 0 carries nothing).
//   - BLER: min_snr_db(c) = 1.02 * (c - 16.62) - 2.2 dB, 1 dB transition.
//     A block sent at exactly the SNR that maps to its CQI then fails with
//     probability logistic(-2.2) = 0.10, the usual CQI operating point.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hsdpa/commands.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hsdpa;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;
int max_transmissions_seen = 0;

void report(int id, const char* name, bool pass, double seconds, double limit_s, const std::string& detail) {
  const bool in_time = limit_s <= 0.0 || seconds < limit_s;
  const bool ok = pass && in_time;
  if (!ok) ++failures;
  std::printf("%s  criterion %d  %-34s %7.2f s", ok ? "PASS" : "FAIL", id, name, seconds);
  if (limit_s > 0.0) std::printf(" (limit %.0f s%s)", limit_s, in_time ? "" : ", exceeded");
  std::printf("  %s\n", detail.c_str());
  std::fflush(stdout);
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TbsTable pinned_tbs() {
  std::array<int, kMaxCqi + 1> bits{};
  for (int c = 0; c <= kMaxCqi; ++c) bits[static_cast<std::size_t>(c)] = 137 * c;
  return TbsTable(bits);
}

BlerCurve pinned_bler() {
  std::array<double, kMaxCqi + 1> rows{};
  for (int c = 0; c <= kMaxCqi; ++c) rows[static_cast<std::size_t>(c)] = 1.02 * (c - 16.62) - 2.2;
  return BlerCurve(rows, 1.0);
}

SimulationResult run(SimulationSetup setup, SchedulerKind policy) {
  setup.mac.policy = policy;
  auto r = run_simulation(setup);
  max_transmissions_seen = std::max(max_transmissions_seen, r.ledger.max_block_transmissions);
  return r;
}

double mean_delay(const SimulationResult& r, int flow) {
  const FlowId one[] = {FlowId(flow)};
  const auto s = delay_stats(r.records.records(), one);
  return s.mean_delay_s ? *s.mean_delay_s : std::nan("");
}

double mean_cqi(const ChannelTrace& t, std::int64_t slots) {
  double sum = 0.0;
  for (std::int64_t k = 0; k < slots; ++k) sum += t.at(k).cqi;
  return sum / static_cast<double>(slots);
}

void criterion_1() {
  const auto t0 = Clock::now();
  const auto tally = support::oracle_sweep(100'000, 0xacce97);
  long total = 0;
  for (long m : tally.mismatches) total += m;
  report(1, "scheduler oracle suite", total == 0, since(t0), 10.0,
         std::to_string(tally.states) + " states x 5 policies, " + std::to_string(total) + " mismatches");
}

void criterion_2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(0xc91);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  std::vector<double> xs(10'000);
  for (auto& x : xs) x = dist(rng);
  std::sort(xs.begin(), xs.end());
  bool ok = true;
  int prev = 0;
  double worst = 0.0;
  for (double x : xs) {
    const int c = compute_cqi(x);
    ok = ok && c >= prev && c >= 0 && c <= 30;
    if (x <= -16.0) ok = ok && c == 0;
    if (x >= 14.0) ok = ok && c == 30;
    if (x > -16.0 && x < 14.0) worst = std::max(worst, std::abs(c - (x / 1.02 + 16.62)));
    prev = c;
  }
  ok = ok && worst <= 0.5;
  report(2, "CQI formula conformance", ok, since(t0), 1.0, "max |cqi - formula| = " + fmt("%.4f", worst));
}

struct PairedSeed {
  std::uint64_t seed;
  double prioritized;
  double maxci;
};

void criteria_3_and_5() {
  const auto t0 = Clock::now();
  std::vector<PairedSeed> used;
  bool conserved = true;
  std::string conservation_detail;
  std::uint64_t skipped = 0;
  for (std::uint64_t seed = 1; used.size() < 5 && seed < 100; ++seed) {
    Scenario s = table1_preset();
    s.run.seed = seed;
    s.run.drain_s = 5.0;
    auto setup = prepare_simulation(s);
    setup.tbs = pinned_tbs();
    setup.bler = pinned_bler();
    // Flow 0 is the priority-0 subject; keep only seeds where its mean CQI
    // over the run is not the largest of the ten.
    const auto slots = static_cast<std::int64_t>(std::llround(s.run.duration_s / kTtiSeconds));
    const double subject = mean_cqi(setup.traces[0], slots);
    bool is_max = true;
    for (std::size_t i = 1; i < setup.traces.size(); ++i)
      if (mean_cqi(setup.traces[i], slots) >= subject) is_max = false;
    if (is_max) {
      ++skipped;
      continue;
    }
    const auto prio = run(setup, SchedulerKind::PrioritizedCI);
    const auto maxci = run(setup, SchedulerKind::MaxCI);
    used.push_back({seed, mean_delay(prio, 0), mean_delay(maxci, 0)});
    for (const auto* r : {&prio, &maxci}) {
      if (!r->ledger.balanced()) {
        conserved = false;
        conservation_detail += " seed " + std::to_string(seed) + " ledger unbalanced;";
      }
      for (const auto& f : s.flows) {
        const FlowId one[] = {FlowId(f.ue)};
        const auto st = delay_stats(r->records.records(), one);
        if (st.generated != st.delivered) {
          conserved = false;
          conservation_detail += " seed " + std::to_string(seed) + " flow " + std::to_string(f.ue) + " " +
                                 std::to_string(st.delivered) + "/" + std::to_string(st.generated) + ";";
        }
      }
    }
  }
  bool ok = used.size() >= 5;
  std::string detail;
  for (const auto& u : used) {
    const double reduction = 1.0 - u.prioritized / u.maxci;
    ok = ok && std::isfinite(reduction) && reduction >= 0.05;
    detail += "seed " + std::to_string(u.seed) + " " + fmt("%.1f%%", 100.0 * reduction) + "; ";
  }
  detail += std::to_string(skipped) + " seed(s) skipped";
  report(3, "prioritized C/I beats max C/I", ok, since(t0), 120.0, detail);
  report(5, "conservation and reliability", conserved && !used.empty(), 0.0, 0.0,
         conserved ? "generated = delivered for all flows, ledger balanced in " + std::to_string(2 * used.size()) +
                         " runs"
                   : conservation_detail);
}

void criterion_4() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = table3_preset();
    s.run.seed = seed;
    auto setup = prepare_simulation(s);
    setup.tbs = pinned_tbs();
    setup.bler = pinned_bler();
    const auto mici = run(setup, SchedulerKind::ModifiedInverseCI);
    const auto maxci = run(setup, SchedulerKind::MaxCI);
    const int far = 4;  // 500 m
    const double a = mean_delay(mici, far), b = mean_delay(maxci, far);
    bool largest = true;
    for (int f = 0; f < 4; ++f)
      if (mici.scheduled_ttis[static_cast<std::size_t>(f)] >= mici.scheduled_ttis[far]) largest = false;
    const bool seed_ok = a < b && largest;
    ok = ok && seed_ok;
    detail += "seed " + std::to_string(seed) + " " + fmt("%.2f", a * 1e3) + "<" + fmt("%.2f", b * 1e3) + " ms" +
              (largest ? "" : " share!") + (seed_ok ? "; " : " FAIL; ");
  }
  report(4, "modified inverse C/I, farthest UE", ok, since(t0), 60.0, detail);
}

void criterion_6() {
  const auto t0 = Clock::now();
  Scenario s = table3_preset();
  auto setup = prepare_simulation(s);
  for (auto& t : setup.traces)
    for (auto& sample : t.samples) {
      sample.snr_attempt = {40.0, 43.0, 44.8};
      sample.cqi = compute_cqi(40.0);
    }
  std::array<double, kMaxCqi + 1> never{};
  never.fill(-1000.0);
  setup.bler = BlerCurve(never, 1.0);  // block error probability underflows to 0
  setup.tbs = TbsTable::uniform(1'000'000);
  const auto r = run(setup, SchedulerKind::MaxCI);
  const SimTime floor = 75'400'000;
  bool ok = r.propagation_floor == floor;
  SimTime min_delay = std::numeric_limits<SimTime>::max();
  std::size_t delivered = 0;
  for (const auto& rec : r.records.records()) {
    if (!rec.delivered) continue;
    ++delivered;
    min_delay = std::min(min_delay, *rec.delay());
    ok = ok && *rec.delay() >= floor;
  }
  ok = ok && delivered > 0 && min_delay - floor <= 10'000'000 && r.ledger.harq_failed == 0;
  report(6, "wired-path delay floor", ok, since(t0), 10.0,
         std::to_string(delivered) + " packets, min delay " + fmt("%.4f", time_to_seconds(min_delay) * 1e3) +
             " ms vs floor 75.4 ms");
}

void criterion_7() {
  const auto t0 = Clock::now();
  const auto a = support::scratch("accept-det-a");
  const auto b = support::scratch("accept-det-b");
  Scenario s = table3_preset();
  s.run.seed = 11;
  const auto ra = cmd_run(s, ".", a);
  const auto rb = cmd_run(s, ".", b);
  max_transmissions_seen = std::max({max_transmissions_seen, ra.result.ledger.max_block_transmissions,
                                     rb.result.ledger.max_block_transmissions});
  bool ok = true;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    const auto x = support::slurp(entry.path());
    ok = ok && fs::exists(b / name) && x == support::slurp(b / name) && !x.empty();
    ++compared;
  }
  ok = ok && compared >= 6;
  report(7, "determinism of cmd_run outputs", ok, since(t0), 0.0,
         std::to_string(compared) + " output files byte-identical");
}

void criterion_9() {
  const auto t0 = Clock::now();
  std::array<double, 5> sum{};
  std::array<std::size_t, 5> count{};
  bool reported = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario s = table3_preset();
    s.run.seed = seed;
    s.mac.policy = SchedulerKind::MaxCI;
    for (auto& f : s.flows) f.distance_m = 200.0;
    const auto dir = support::scratch("accept-sweep-" + std::to_string(seed));
    const auto sweep = cmd_sweep_environments(s, ".", dir);
    const auto csv = support::slurp(dir / "sweep.csv");
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const auto& o = sweep[i].outcome;
      max_transmissions_seen = std::max(max_transmissions_seen, o.result.ledger.max_block_transmissions);
      const auto& m = o.summary.overall.mean_delay_s;
      if (!m || !std::isfinite(*m) || csv.find(std::string(to_string(sweep[i].environment)) + ",") == std::string::npos) {
        reported = false;
        continue;
      }
      sum[i] += *m * static_cast<double>(o.summary.overall.delivered);
      count[i] += o.summary.overall.delivered;
    }
  }
  std::array<double, 5> mean{};
  std::size_t worst = 0;
  std::string detail;
  for (std::size_t i = 0; i < 5; ++i) {
    mean[i] = count[i] ? sum[i] / static_cast<double>(count[i]) : std::nan("");
    if (mean[i] > mean[worst]) worst = i;
    detail += std::string(to_string(kAllEnvironments[i])) + " " + fmt("%.2f", mean[i] * 1e3) + " ms; ";
  }
  const bool ok = reported && kAllEnvironments[worst] != Environment::Indoor;
  report(9, "environment sweep, Indoor not worst", ok, since(t0), 0.0, detail);
}

}  // namespace

int main() {
  std::printf("acceptance: 9 criteria\n");
  try {
    criterion_1();
    criterion_2();
    criteria_3_and_5();
    criterion_4();
    criterion_6();
    criterion_7();
    criterion_9();
    report(8, "HARQ budget", max_transmissions_seen <= 3 && max_transmissions_seen >= 1, 0.0, 0.0,
           "max transmissions of any block across all runs = " + std::to_string(max_transmissions_seen));
  } catch (const std::exception& e) {
    std::printf("FAIL  aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
