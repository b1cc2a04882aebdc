#include "ibrw/bridge.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>

#include "ibrw/errors.hpp"
#include "ibrw/parallel.hpp"
#include "ibrw/rng.hpp"
#include "ibrw/stats.hpp"

namespace ibrw {

namespace {

// Sub-stream tags keep the estimators statistically independent of each
// other and of the branching random walk for a shared seed.
enum Stream : std::uint64_t {
  kSampleBridge = 1,
  kSequentialBridge = 2,
  kBridgeSurvival = 3,
  kWalkSurvival = 4,
  kRuinSurvival = 5,
  kFirstPassage = 6,
};

constexpr std::uint64_t kBlock = 4096;

void check_trials(std::uint64_t trials) {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (trials > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("trials must fit in 32 bits");
}

/// Counts trials for which `survives(trial)` holds. Integer sums are
/// order-independent, so the result does not depend on the thread count.
template <class Pred>
std::uint64_t count_hits(std::uint64_t trials, int threads, Pred survives) {
  std::atomic<std::uint64_t> hits{0};
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  parallel_for(
      blocks, threads,
      [&](std::uint64_t block) {
        std::uint64_t local = 0;
        const std::uint64_t end = std::min(trials, (block + 1) * kBlock);
        for (std::uint64_t t = block * kBlock; t < end; ++t)
          if (survives(static_cast<std::uint32_t>(t))) ++local;
        hits.fetch_add(local);
      },
      1);
  return hits.load();
}

}  // namespace

void validate(const BridgeSpec& spec) {
  if (spec.start < 0 || spec.start >= spec.end)
    throw ValidationError("bridge interval needs 0 <= start < end");
  if (!(spec.sigma > 0.0)) throw ValidationError("bridge sigma must be positive");
}

void validate(const LogBarrier& barrier) {
  if (!(barrier.coefficient > 0.0)) throw ValidationError("barrier coefficient D must be positive");
  if (!(barrier.offset > 0.0)) throw ValidationError("barrier offset z must be positive");
}

double log_barrier(const BridgeSpec& spec, double coefficient, std::int64_t k) {
  if (k < spec.start || k > spec.end) throw DomainError("log_barrier: k outside the interval");
  if (k == spec.start || k == spec.end) return 0.0;
  if (2 * k <= spec.start + spec.end)
    return coefficient * std::log(static_cast<double>(k - spec.start));
  return coefficient * std::log(static_cast<double>(spec.end - k));
}

EstimateSample make_estimate(std::uint64_t hits, std::uint64_t trials) {
  const Interval ci = wilson_interval(hits, trials);
  return {hits, trials, static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high};
}

BridgeDraw draw_bridge(const BridgeSpec& spec, std::uint64_t seed, std::uint32_t trial) {
  validate(spec);
  const std::int64_t length = spec.length();
  NormalStream normals(derive_seed(seed, kSampleBridge), trial);
  Eigen::VectorXd walk(length + 1);
  walk[0] = 0.0;
  for (std::int64_t i = 1; i <= length; ++i) walk[i] = walk[i - 1] + spec.sigma * normals.next();

  BridgeDraw draw;
  draw.increment = walk[length] - walk[0];
  draw.bridge.resize(length + 1);
  for (std::int64_t i = 0; i <= length; ++i) {
    const double fraction = static_cast<double>(i) / static_cast<double>(length);
    draw.bridge[i] = (walk[i] - walk[0]) - fraction * draw.increment;
  }
  return draw;
}

Eigen::VectorXd sample_bridge(const BridgeSpec& spec, std::uint64_t seed, std::uint32_t trial) {
  return draw_bridge(spec, seed, trial).bridge;
}

namespace {

/// Advances a bridge with `remaining` steps left to reach 0.
inline double bridge_transition(double value, std::int64_t remaining, double sigma, double z) {
  const double keep = static_cast<double>(remaining - 1) / static_cast<double>(remaining);
  return value * keep + sigma * std::sqrt(keep) * z;
}

}  // namespace

Eigen::VectorXd sample_bridge_sequential(const BridgeSpec& spec, std::uint64_t seed,
                                         std::uint32_t trial) {
  validate(spec);
  NormalStream normals(derive_seed(seed, kSequentialBridge), trial);
  Eigen::VectorXd bridge(spec.length() + 1);
  bridge[0] = 0.0;
  for (std::int64_t i = 1; i <= spec.length(); ++i)
    bridge[i] = bridge_transition(bridge[i - 1], spec.length() - i + 1, spec.sigma, normals.next());
  return bridge;
}

double bridge_covariance(const BridgeSpec& spec, std::int64_t k, std::int64_t k2) {
  validate(spec);
  if (k < spec.start || k > spec.end || k2 < spec.start || k2 > spec.end)
    throw DomainError("bridge_covariance: index outside the interval");
  const auto lo = static_cast<double>(std::min(k, k2) - spec.start);
  const auto hi = static_cast<double>(spec.end - std::max(k, k2));
  return lo * hi / static_cast<double>(spec.length()) * spec.sigma * spec.sigma;
}

EstimateSample bridge_barrier_survival(const BridgeSpec& spec, const LogBarrier& barrier,
                                       std::uint64_t trials, const MonteCarloOptions& options) {
  validate(spec);
  validate(barrier);
  check_trials(trials);
  const std::int64_t length = spec.length();
  std::vector<double> ceiling(length + 1);
  for (std::int64_t i = 0; i <= length; ++i)
    ceiling[i] = log_barrier(spec, barrier.coefficient, spec.start + i) + barrier.offset;
  const std::uint64_t key = derive_seed(options.seed, kBridgeSurvival);

  const auto hits = count_hits(trials, options.threads, [&](std::uint32_t trial) {
    NormalStream normals(key, trial);
    double value = 0.0;
    if (!(value < ceiling[0])) return false;
    for (std::int64_t i = 1; i <= length; ++i) {
      value = bridge_transition(value, length - i + 1, spec.sigma, normals.next());
      if (!(value < ceiling[i])) return false;
    }
    return true;
  });
  return make_estimate(hits, trials);
}

EstimateSample walk_barrier_survival(double sigma, double coefficient, double offset,
                                     std::int64_t t, std::uint64_t trials,
                                     const MonteCarloOptions& options) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (t < 1) throw ValidationError("walk length t must be at least 1");
  validate(LogBarrier{coefficient, offset});
  check_trials(trials);
  std::vector<double> ceiling(t + 1);
  ceiling[0] = offset;
  for (std::int64_t k = 1; k <= t; ++k)
    ceiling[k] = coefficient * std::log(static_cast<double>(k)) + offset;
  const std::uint64_t key = derive_seed(options.seed, kWalkSurvival);

  const auto hits = count_hits(trials, options.threads, [&](std::uint32_t trial) {
    NormalStream normals(key, trial);
    double value = 0.0;
    if (!(value < ceiling[0])) return false;
    for (std::int64_t k = 1; k <= t; ++k) {
      value += sigma * normals.next();
      if (!(value < ceiling[k])) return false;
    }
    return true;
  });
  return make_estimate(hits, trials);
}

EstimateSample gambler_ruin_survival(double sigma, double offset, std::int64_t t,
                                     std::uint64_t trials, const MonteCarloOptions& options) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (t < 1) throw ValidationError("walk length t must be at least 1");
  check_trials(trials);
  const std::uint64_t key = derive_seed(options.seed, kRuinSurvival);

  const auto hits = count_hits(trials, options.threads, [&](std::uint32_t trial) {
    NormalStream normals(key, trial);
    double value = 0.0;
    if (!(value < offset)) return false;
    for (std::int64_t k = 1; k <= t; ++k) {
      value += sigma * normals.next();
      if (!(value < offset)) return false;
    }
    return true;
  });
  return make_estimate(hits, trials);
}

EstimateSample FirstPassageProfile::window(std::int64_t j) const {
  if (j < 1 || j > horizon) throw DomainError("first passage step outside 1..horizon");
  return make_estimate(window_hits[j], trials);
}

FirstPassageProfile first_passage_profile(double sigma, double level, std::int64_t horizon,
                                          std::uint64_t trials, const MonteCarloOptions& options) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (horizon < 1) throw ValidationError("first passage horizon must be at least 1");
  check_trials(trials);
  const std::uint64_t key = derive_seed(options.seed, kFirstPassage);

  FirstPassageProfile profile;
  profile.level = level;
  profile.horizon = horizon;
  profile.trials = trials;
  profile.first_hits.assign(horizon + 1, 0);
  profile.window_hits.assign(horizon + 1, 0);
  std::mutex merge;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  parallel_for(
      blocks, options.threads,
      [&](std::uint64_t block) {
        std::vector<std::uint64_t> first(horizon + 1, 0), inside(horizon + 1, 0);
        std::uint64_t never = 0;
        const std::uint64_t end = std::min(trials, (block + 1) * kBlock);
        for (std::uint64_t t = block * kBlock; t < end; ++t) {
          NormalStream normals(key, static_cast<std::uint32_t>(t));
          double value = 0.0;
          std::int64_t k = 1;
          for (; k <= horizon; ++k) {
            value += sigma * normals.next();
            if (value >= level) break;
          }
          if (k > horizon) {
            ++never;
          } else {
            ++first[k];
            if (value < level + 1.0) ++inside[k];
          }
        }
        std::lock_guard lock(merge);
        for (std::int64_t j = 0; j <= horizon; ++j) {
          profile.first_hits[j] += first[j];
          profile.window_hits[j] += inside[j];
        }
        profile.never_hit += never;
      },
      1);
  return profile;
}

EstimateSample first_passage_window(double sigma, double level, std::int64_t j,
                                    std::uint64_t trials, const MonteCarloOptions& options) {
  if (j < 1) throw ValidationError("first passage step j must be at least 1");
  return first_passage_profile(sigma, level, j, trials, options).window(j);
}

}  // namespace ibrw
