#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace voss {

/// Seed plus stream selector; identical specs reproduce identical draws.
struct RngSpec {
  std::uint64_t seed = 42;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Random source confined to a single worker.
 *
 * Uniform and exponential variates are derived here from raw 64-bit words
 * rather than through <random> distributions, whose algorithms differ
 * between standard library implementations.
 */
class Rng {
 public:
  explicit Rng(RngSpec spec)
      : engine_(splitmix64(spec.seed ^ splitmix64(spec.stream_id + 1))) {}

  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential, strictly positive.
  double exponential() noexcept { return -std::log(uniform_open()); }

  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace voss
