#pragma once

// Per-UE channel traces (SNR of three HARQ attempts plus CQI per TTI),
// the SNR -> CQI report mapping and the BLER curve used for ACK/NACK.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hsdpa/core.hpp"

namespace hsdpa {

inline constexpr int kMaxCqi = 30;
inline constexpr int kHarqMaxAttempts = 3;

// Environments ---------------------------------------------------------------

enum class Environment { Pedestrian, Rural, Hilly, Indoor, Urban };

inline constexpr std::array<Environment, 5> kAllEnvironments{
    Environment::Pedestrian, Environment::Rural, Environment::Hilly, Environment::Indoor,
    Environment::Urban};

inline std::string_view to_string(Environment e) {
  switch (e) {
    case Environment::Pedestrian: return "Pedestrian";
    case Environment::Rural: return "Rural";
    case Environment::Hilly: return "Hilly";
    case Environment::Indoor: return "Indoor";
    case Environment::Urban: return "Urban";
  }
  return "?";
}

inline std::optional<Environment> parse_environment(std::string_view name) {
  for (auto e : kAllEnvironments) {
    const auto ref = to_string(e);
    if (ref.size() == name.size() &&
        std::equal(ref.begin(), ref.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        }))
      return e;
  }
  return std::nullopt;
}

struct EnvironmentProfile {
  Environment name = Environment::Pedestrian;
  double speed_kmh = 0.0;
  double path_loss_exponent = 3.0;
  double shadowing_stddev_db = 8.0;
  double reference_snr_at_1m_db = 0.0;
  double shadowing_decorrelation_m = 50.0;

  double mean_snr_db(double distance_m) const {
    return reference_snr_at_1m_db - 10.0 * path_loss_exponent * std::log10(distance_m);
  }

  bool operator==(const EnvironmentProfile&) const = default;
};

namespace detail {
// Reference SNR is pinned through the mean SNR at 500 m so every preset
// reaches the cell edge at a comparable operating point.
inline EnvironmentProfile make_profile(Environment e, double speed, double ple, double shadow,
                                       double mean_snr_at_500m) {
  EnvironmentProfile p;
  p.name = e;
  p.speed_kmh = speed;
  p.path_loss_exponent = ple;
  p.shadowing_stddev_db = shadow;
  p.reference_snr_at_1m_db = mean_snr_at_500m + 10.0 * ple * std::log10(500.0);
  return p;
}
}  // namespace detail

/// Preset table. Speeds are fixed; the remaining columns are editable stand-ins.
inline EnvironmentProfile environment_preset(Environment e) {
  switch (e) {
    case Environment::Pedestrian: return detail::make_profile(e, 3.0, 3.8, 8.0, -4.0);
    case Environment::Rural: return detail::make_profile(e, 50.0, 2.8, 6.0, -4.0);
    case Environment::Hilly: return detail::make_profile(e, 90.0, 3.2, 8.0, -4.0);
    case Environment::Indoor: return detail::make_profile(e, 4.0, 4.5, 8.0, -4.0);
    case Environment::Urban: return detail::make_profile(e, 100.0, 3.5, 8.0, -4.0);
  }
  throw InvalidInput("unknown environment");
}

// CQI ------------------------------------------------------------------------

/// Reported CQI for a given SNR: piecewise linear,
/// rounded half-up and clamped to the 5-bit report range.
inline int compute_cqi(double snr_db) {
  if (!std::isfinite(snr_db)) throw InvalidInput("compute_cqi: SNR must be finite");
  if (snr_db <= -16.0) return 0;
  if (snr_db >= 14.0) return kMaxCqi;
  const double raw = snr_db / 1.02 + 16.62;
  return std::clamp(static_cast<int>(std::floor(raw + 0.5)), 0, kMaxCqi);
}

// Traces ---------------------------------------------------------------------

struct TtiSample {
  std::int64_t slot_index = 0;
  std::array<double, kHarqMaxAttempts> snr_attempt{};
  int cqi = 0;

  bool operator==(const TtiSample&) const = default;
};

struct ChannelTrace {
  int ue_id = 0;
  double distance_m = 0.0;
  Environment environment = Environment::Pedestrian;
  double tti_s = kTtiSeconds;
  std::uint64_t seed = 0;
  std::vector<TtiSample> samples;

  double duration_s() const { return static_cast<double>(samples.size()) * tti_s; }
  const TtiSample& at(std::int64_t slot) const { return samples.at(static_cast<std::size_t>(slot)); }

  bool operator==(const ChannelTrace&) const = default;
};

struct TraceOptions {
  /// Chase-combining gains applied to attempt 2 and 3 relative to attempt 1.
  std::array<double, 2> combining_gain_db{3.0, 4.8};
  double carrier_hz = 2.0e9;
  /// When false the trace carries path loss and fast fading only.
  bool shadowing = true;
};

namespace detail {
inline double quantize_snr(double snr_db) { return std::round(snr_db * 1e4) / 1e4; }
}  // namespace detail

/// Lag-one correlation of the fast-fading process: Jakes J0(2*pi*fD*T).
inline double fading_correlation(double speed_kmh, double tti_s, double carrier_hz = 2.0e9) {
  constexpr double kLightSpeed = 299'792'458.0;
  const double doppler_hz = (speed_kmh / 3.6) * carrier_hz / kLightSpeed;
  return std::cyl_bessel_j(0.0, 2.0 * 3.14159265358979323846 * doppler_hz * tti_s);
}

/// Synthesizes a trace: log-distance path loss, AR(1) log-normal shadowing
/// and Rayleigh fading with Jakes lag-one correlation. SNRs carry 4 decimals
/// so a stored trace reloads bit-identically.
inline ChannelTrace generate_trace(int ue_id, double distance_m, const EnvironmentProfile& env,
                                   double duration_s, double tti_s, std::uint64_t seed,
                                   const TraceOptions& options = {}) {
  if (!(distance_m > 0.0)) throw InvalidInput("generate_trace: distance_m must be > 0");
  if (!(duration_s > 0.0)) throw InvalidInput("generate_trace: duration_s must be > 0");
  if (!(tti_s > 0.0)) throw InvalidInput("generate_trace: tti_s must be > 0");

  ChannelTrace trace;
  trace.ue_id = ue_id;
  trace.distance_m = distance_m;
  trace.environment = env.name;
  trace.tti_s = tti_s;
  trace.seed = seed;

  const auto n = static_cast<std::size_t>(std::llround(duration_s / tti_s));
  trace.samples.reserve(n);

  Rng fading_rng(derive_seed(seed, static_cast<std::uint64_t>(ue_id), StreamTag::Fading));
  Rng shadow_rng(derive_seed(seed, static_cast<std::uint64_t>(ue_id), StreamTag::Shadowing));

  const double rho = fading_correlation(env.speed_kmh, tti_s, options.carrier_hz);
  const double innovation = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const double sigma = options.shadowing ? env.shadowing_stddev_db : 0.0;
  const double shadow_corr =
      env.shadowing_decorrelation_m > 0.0
          ? std::exp(-(env.speed_kmh / 3.6) * tti_s / env.shadowing_decorrelation_m)
          : 0.0;
  const double shadow_innovation = std::sqrt(std::max(0.0, 1.0 - shadow_corr * shadow_corr));

  // Unit-power complex Gaussian: each quadrature carries variance 1/2.
  const double half = std::sqrt(0.5);
  double re = half * fading_rng.normal();
  double im = half * fading_rng.normal();
  double shadow = sigma * shadow_rng.normal();
  const double mean_snr = env.mean_snr_db(distance_m);

  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      re = rho * re + innovation * half * fading_rng.normal();
      im = rho * im + innovation * half * fading_rng.normal();
      shadow = shadow_corr * shadow + shadow_innovation * sigma * shadow_rng.normal();
    }
    const double power = std::max(re * re + im * im, 1e-12);
    TtiSample s;
    s.slot_index = static_cast<std::int64_t>(k);
    const double snr1 = detail::quantize_snr(mean_snr + shadow + 10.0 * std::log10(power));
    s.snr_attempt = {snr1, detail::quantize_snr(snr1 + options.combining_gain_db[0]),
                     detail::quantize_snr(snr1 + options.combining_gain_db[1])};
    s.cqi = compute_cqi(snr1);
    trace.samples.push_back(s);
  }
  return trace;
}

namespace detail {
inline std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}
}  // namespace detail

/// Trace text: a `# ue=.. dist=.. env=.. tti=.. seed=..` header, then
/// `slot snr1 snr2 snr3 cqi` rows with SNRs printed to 4 decimals.
inline std::string format_trace(const ChannelTrace& trace) {
  std::string out = "# ue=" + std::to_string(trace.ue_id) + " dist=" + detail::shortest(trace.distance_m) +
                    " env=" + std::string(to_string(trace.environment)) +
                    " tti=" + detail::shortest(trace.tti_s) + " seed=" + std::to_string(trace.seed) + "\n";
  out.reserve(out.size() + trace.samples.size() * 40);
  char row[128];
  for (const auto& s : trace.samples) {
    const int len = std::snprintf(row, sizeof row, "%lld %.4f %.4f %.4f %d\n",
                                  static_cast<long long>(s.slot_index), s.snr_attempt[0],
                                  s.snr_attempt[1], s.snr_attempt[2], s.cqi);
    out.append(row, static_cast<std::size_t>(len));
  }
  return out;
}

inline void store_trace(const ChannelTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write trace file " + path);
  out << format_trace(trace);
  if (!out) throw std::runtime_error("write failed for trace file " + path);
}

inline ChannelTrace parse_trace(const std::vector<std::string>& lines, const std::string& source) {
  ChannelTrace trace;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header || !trace.samples.empty()) continue;
      for (auto tok : detail::split_ws(line.substr(1))) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        bool ok = true;
        if (key == "ue") {
          auto v = detail::parse_number<int>(val);
          ok = v.has_value();
          if (ok) trace.ue_id = *v;
        } else if (key == "dist") {
          auto v = detail::parse_number<double>(val);
          ok = v.has_value();
          if (ok) trace.distance_m = *v;
        } else if (key == "env") {
          auto v = parse_environment(val);
          ok = v.has_value();
          if (ok) trace.environment = *v;
        } else if (key == "tti") {
          auto v = detail::parse_number<double>(val);
          ok = v.has_value() && *v > 0.0;
          if (ok) trace.tti_s = *v;
        } else if (key == "seed") {
          auto v = detail::parse_number<std::uint64_t>(val);
          ok = v.has_value();
          if (ok) trace.seed = *v;
        }
        if (!ok) throw ParseError(source, lineno, "bad header field '" + std::string(tok) + "'");
      }
      have_header = true;
      continue;
    }
    const auto cols = detail::split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != 5)
      throw ParseError(source, lineno,
                       "expected 5 columns (slot snr1 snr2 snr3 cqi), got " + std::to_string(cols.size()));
    TtiSample s;
    auto slot = detail::parse_number<std::int64_t>(cols[0]);
    if (!slot) throw ParseError(source, lineno, "bad slot index");
    s.slot_index = *slot;
    for (int a = 0; a < kHarqMaxAttempts; ++a) {
      auto v = detail::parse_number<double>(cols[static_cast<std::size_t>(a) + 1]);
      if (!v || !std::isfinite(*v)) throw ParseError(source, lineno, "bad SNR value");
      s.snr_attempt[static_cast<std::size_t>(a)] = *v;
    }
    auto cqi = detail::parse_number<int>(cols[4]);
    if (!cqi || *cqi < 0 || *cqi > kMaxCqi) throw ParseError(source, lineno, "CQI outside [0, 30]");
    s.cqi = *cqi;
    const auto expected = static_cast<std::int64_t>(trace.samples.size());
    if (s.slot_index != expected)
      throw ParseError(source, lineno,
                       "slot index must increase by one from 0: expected " + std::to_string(expected) +
                           ", got " + std::to_string(s.slot_index));
    trace.samples.push_back(s);
  }
  return trace;
}

inline ChannelTrace load_trace(const std::string& path) { return parse_trace(detail::read_lines(path), path); }

// BLER curve -----------------------------------------------------------------

enum class Feedback { Ack, Nack };

class BlerCurve {
 public:
  /// `min_snr_db[c]` is the SNR at which a CQI-c block fails with probability 1/2.
  BlerCurve(const std::array<double, kMaxCqi + 1>& min_snr_db, double transition_width_db)
      : min_snr_db_(min_snr_db), transition_width_db_(transition_width_db) {
    if (!(transition_width_db > 0.0)) throw InvalidInput("BLER curve: transition_width must be > 0");
    for (int c = 2; c <= kMaxCqi; ++c)
      if (min_snr_db_[static_cast<std::size_t>(c)] < min_snr_db_[static_cast<std::size_t>(c) - 1])
        throw InvalidInput("BLER curve: min_snr_db must be nondecreasing in CQI (CQI " +
                           std::to_string(c - 1) + " > CQI " + std::to_string(c) + ")");
  }

  /// min_snr(cqi) = -15 + cqi dB, 1 dB transition.
  static BlerCurve default_curve() {
    std::array<double, kMaxCqi + 1> rows{};
    for (int c = 0; c <= kMaxCqi; ++c) rows[static_cast<std::size_t>(c)] = -15.0 + c;
    return BlerCurve(rows, 1.0);
  }

  double min_snr_db(int cqi) const { return min_snr_db_.at(static_cast<std::size_t>(cqi)); }
  double transition_width_db() const { return transition_width_db_; }

  double block_error_probability(int cqi, double snr_db) const {
    const double z = (min_snr_db(cqi) - snr_db) / transition_width_db_;
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }

  bool operator==(const BlerCurve&) const = default;

 private:
  std::array<double, kMaxCqi + 1> min_snr_db_;
  double transition_width_db_;
};

/// NACK iff the uniform draw falls below the block-error probability.
inline Feedback ack_decision(const BlerCurve& curve, int used_cqi, double attempt_snr_db, double rng_draw) {
  if (used_cqi < 1 || used_cqi > kMaxCqi)
    throw InvalidInput("ack_decision: used_cqi " + std::to_string(used_cqi) + " outside [1, 30]");
  if (!(rng_draw >= 0.0 && rng_draw < 1.0)) throw InvalidInput("ack_decision: draw outside [0, 1)");
  return rng_draw < curve.block_error_probability(used_cqi, attempt_snr_db) ? Feedback::Nack : Feedback::Ack;
}

/// Rows `cqi min_snr_db` for CQI 1..30; `# transition_width=<dB>` may
/// appear in a comment, otherwise 1 dB.
inline BlerCurve parse_bler_curve(const std::vector<std::string>& lines, const std::string& source) {
  std::array<double, kMaxCqi + 1> rows{};
  std::array<bool, kMaxCqi + 1> seen{};
  double width = 1.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto tok : detail::split_ws(line.substr(1))) {
        if (tok.rfind("transition_width=", 0) == 0) {
          auto v = detail::parse_number<double>(tok.substr(17));
          if (!v || !(*v > 0.0)) throw ParseError(source, lineno, "bad transition_width");
          width = *v;
        }
      }
      continue;
    }
    const auto cols = detail::split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != 2) throw ParseError(source, lineno, "expected 2 columns (cqi min_snr_db)");
    auto cqi = detail::parse_number<int>(cols[0]);
    auto snr = detail::parse_number<double>(cols[1]);
    if (!cqi || *cqi < 0 || *cqi > kMaxCqi) throw ParseError(source, lineno, "CQI outside [0, 30]");
    if (!snr || !std::isfinite(*snr)) throw ParseError(source, lineno, "bad min_snr_db");
    if (seen[static_cast<std::size_t>(*cqi)])
      throw ParseError(source, lineno, "duplicate row for CQI " + std::to_string(*cqi));
    seen[static_cast<std::size_t>(*cqi)] = true;
    rows[static_cast<std::size_t>(*cqi)] = *snr;
  }
  for (int c = 1; c <= kMaxCqi; ++c)
    if (!seen[static_cast<std::size_t>(c)]) throw ParseError(source, 0, "missing row for CQI " + std::to_string(c));
  if (!seen[0]) rows[0] = rows[1];
  for (int c = 1; c <= kMaxCqi; ++c)
    if (rows[static_cast<std::size_t>(c)] < rows[static_cast<std::size_t>(c) - 1])
      throw ParseError(source, 0,
                       "min_snr_db not monotone: CQI " + std::to_string(c - 1) + " > CQI " + std::to_string(c));
  return BlerCurve(rows, width);
}

inline BlerCurve load_bler_curve(const std::string& path) {
  return parse_bler_curve(detail::read_lines(path), path);
}

}  // namespace hsdpa
