#include "ibrw/rng.hpp"

#include <cmath>
#include <numbers>

namespace ibrw {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

inline void round(Philox4x32::Counter& c, const Philox4x32::Key& k) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kMul0, c[0], lo0, hi0);
  mulhilo(kMul1, c[2], lo1, hi1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round(counter, key);
  }
  return counter;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::pair<double, double> normal_pair(Philox4x32::Counter counter, Philox4x32::Key key) {
  const auto out = Philox4x32::generate(counter, key);
  const double u1 = to_unit_open((static_cast<std::uint64_t>(out[1]) << 32) | out[0]);
  const double u2 = to_unit_open((static_cast<std::uint64_t>(out[3]) << 32) | out[2]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::pair<double, double> edge_normal_pair(std::uint64_t seed, std::uint32_t trial,
                                           std::uint32_t level, std::uint64_t pair) {
  return normal_pair({static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32),
                      level, trial},
                     key_from_seed(seed));
}

double edge_normal(std::uint64_t seed, std::uint32_t trial, std::uint32_t level,
                   std::uint64_t node) {
  const auto [even, odd] = edge_normal_pair(seed, trial, level, node >> 1);
  return (node & 1) ? odd : even;
}

}  // namespace ibrw
