#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace ibrw {

/// Philox4x32-10 counter-based block function.
///
/// A pure function of (counter, key): any block can be recomputed in O(1),
/// which is what lets the simulator regenerate an ancestral increment
/// instead of storing it.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

inline Philox4x32::Key key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Maps 64 random bits to a double in the open interval (0, 1).
inline double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Derives an independent key for a named sub-stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Two independent standard normals from one Philox block.
std::pair<double, double> normal_pair(Philox4x32::Counter counter, Philox4x32::Key key);

/// Standard normal attached to the edge ending at `node` on `level`.
///
/// Nodes 2p and 2p+1 share one block (cosine and sine halves of the same
/// Box-Muller draw), so siblings of a binary tree cost one block.
double edge_normal(std::uint64_t seed, std::uint32_t trial, std::uint32_t level,
                   std::uint64_t node);

/// Both normals of the block shared by nodes 2·pair and 2·pair+1.
std::pair<double, double> edge_normal_pair(std::uint64_t seed, std::uint32_t trial,
                                           std::uint32_t level, std::uint64_t pair);

/// Sequential normals for one (key, trial, lane); independent of threading.
class NormalStream {
 public:
  NormalStream(std::uint64_t key_seed, std::uint32_t trial, std::uint32_t lane = 0)
      : key_(key_from_seed(key_seed)), trial_(trial), lane_(lane) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto [a, b] = normal_pair(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), lane_,
         trial_},
        key_);
    ++block_;
    spare_ = b;
    has_spare_ = true;
    return a;
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t trial_;
  std::uint32_t lane_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ibrw
