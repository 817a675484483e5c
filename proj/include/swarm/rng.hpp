#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace swarm {

/// Seeded random stream used by every stochastic operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The transforms on top of it are implemented here rather than
/// with std:: distributions, whose algorithms are implementation-defined,
/// so a log replays bit-exactly on any conforming toolchain.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64;u53;box-muller;lemire-reject";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Normal(mean, stddev) via the basic Box-Muller transform (no caching).
  double normal(double mean, double stddev);

  /// Uniform angle on (-pi, pi].
  double angle();

  /// Uniform heading on [-pi, pi).
  double heading();

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed from a base seed and a salt (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace swarm
