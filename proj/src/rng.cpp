#include "swarm/rng.hpp"

#include <cmath>
#include <numbers>

namespace swarm {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::size_t Rng::index(std::size_t n) {
  // Lemire's multiply-shift with rejection, unbiased for any n.
  const auto range = static_cast<std::uint64_t>(n);
  std::uint64_t x = engine_();
  u128 m = static_cast<u128>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = engine_();
      m = static_cast<u128>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double Rng::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

double Rng::angle() { return std::numbers::pi - 2.0 * std::numbers::pi * uniform(); }

double Rng::heading() { return -std::numbers::pi + 2.0 * std::numbers::pi * uniform(); }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace swarm
