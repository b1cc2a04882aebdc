#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

#include "ibrw/prediction.hpp"
#include "ibrw/profile.hpp"

namespace ibrw {

/// Default bound on the number of particles in one generation (b^n).
inline constexpr std::uint64_t kDefaultParticleCap = std::uint64_t{1} << 26;

struct BrwConfig {
  VarianceProfile profile = VarianceProfile::homogeneous();
  int n = 0;
  int branching = 2;
  std::uint64_t seed = 0;
  std::uint32_t trials = 1;
  std::uint64_t cap = kDefaultParticleCap;
  TimeMode time_mode = TimeMode::strict;
  int threads = 0;  // 0: all hardware threads; never changes results
};

/// Throws ValidationError, NonIntegralTime or CapacityExceeded.
void validate(const BrwConfig& config);

/// b^k, or nullopt-like max() on overflow.
std::uint64_t population_size(int branching, int level);

/// σ used by the step ending at time k, for k = 1..n (entry 0 is unused).
Eigen::VectorXd step_sigmas(const BrwConfig& config);

/// One generation of the walk: S_v(level) for every v in D_level, with v
/// enumerated by its base-b digits from the root.
struct PopulationState {
  int level = 0;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(1);
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;

  static PopulationState origin(std::uint64_t seed, std::uint32_t trial) {
    return {0, Eigen::VectorXd::Zero(1), seed, trial};
  }
};

PopulationState step(const PopulationState& state, const BrwConfig& config);

struct MaxSample {
  double max_value = 0.0;
  std::uint64_t argmax_index = 0;
  Eigen::VectorXd lineage;  // S_{v*}(k), k = 0..n
};

struct SimulationStats {
  std::uint64_t peak_live_values = 0;
};

MaxSample run_max(const BrwConfig& config, std::uint32_t trial, SimulationStats* stats = nullptr);

/// Ancestor of leaf v (level n) at level k: drop the last n-k base-b digits.
std::uint64_t ancestor(std::uint64_t v, int n, int k, int branching);

/// S_v(k) for k = 0..n, regenerated edge by edge from the generator.
Eigen::VectorXd trajectory(const BrwConfig& config, std::uint32_t trial, std::uint64_t leaf);

/// Latest generation at which leaves u and v share an ancestor.
int branching_time(std::uint64_t u, std::uint64_t v, int n, int branching);

struct MaxSummary {
  Eigen::VectorXd maxima;      // one per trial, in trial order
  Eigen::VectorXd recentered;  // maxima - prediction
  double prediction = 0.0;     // M_n^*(n)
  CorrectionMode mode = CorrectionMode::restricted;
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;

  double iqr() const { return q75 - q25; }
};

/// Order statistics of the maximum over `config.trials` replicas.
MaxSummary monte_carlo_max(const BrwConfig& config);

/// Closed interval [low, high]; empty when low > high.
struct Window {
  double low = 0.0;
  double high = 0.0;
};

/// A tube around a path proportional to the endpoint: at level k a
/// trajectory ending at x must satisfy |S(k) - ratio[k]·x| <= halfwidth[k].
/// The tube covers levels 0..size()-1.
struct Tube {
  std::vector<double> path_ratio;
  std::vector<double> halfwidth;

  int horizon() const { return static_cast<int>(halfwidth.size()) - 1; }
};

/// Number of particles at level tube.horizon() that end in `window` and stay
/// inside the tube at every level 0 < k < horizon.
std::int64_t count_above_path(const BrwConfig& config, std::uint32_t trial, const Window& window,
                              const Tube& tube);

}  // namespace ibrw
