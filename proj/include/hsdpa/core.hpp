#pragma once

// Shared vocabulary: simulation clock, error types and seeded random streams.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hsdpa {

/// Simulation time in integer nanoseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;
inline constexpr SimTime kNanosPerMilli = 1'000'000;
inline constexpr SimTime kTti = 2 * kNanosPerMilli;
inline constexpr double kTtiSeconds = 0.002;

inline SimTime seconds_to_time(double s) {
  return static_cast<SimTime>(std::llround(s * static_cast<double>(kNanosPerSecond)));
}

inline constexpr double time_to_seconds(SimTime t) {
  return static_cast<double>(t) / static_cast<double>(kNanosPerSecond);
}

// Errors ---------------------------------------------------------------------

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file; carries the offending 1-based line when known.
struct ParseError : std::runtime_error {
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Scenario or topology that cannot be simulated.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation invoked outside of its contract (empty backlog, feedback on idle process, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Random streams -------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Purpose tags keep streams for the same (seed, ue) independent.
enum class StreamTag : std::uint64_t { Fading = 1, Shadowing = 2, Traffic = 3, Harq = 4, ServiceClass = 5 };

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t ue, StreamTag tag) {
  return splitmix64(splitmix64(splitmix64(seed) ^ ue) ^ static_cast<std::uint64_t>(tag));
}

/// mt19937_64 with hand-rolled transforms so draws do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// FNV-1a, used for trace checksums in run summaries.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hsdpa
