#include "ibrw/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ibrw/errors.hpp"
#include "ibrw/parallel.hpp"
#include "ibrw/rng.hpp"
#include "ibrw/stats.hpp"

namespace ibrw {

std::uint64_t population_size(int branching, int level) {
  std::uint64_t size = 1;
  const auto b = static_cast<std::uint64_t>(branching);
  for (int k = 0; k < level; ++k) {
    if (size > std::numeric_limits<std::uint64_t>::max() / b)
      return std::numeric_limits<std::uint64_t>::max();
    size *= b;
  }
  return size;
}

namespace {

void check_capacity(const BrwConfig& config, int level) {
  const std::uint64_t size = population_size(config.branching, level);
  if (size > config.cap) {
    std::ostringstream msg;
    msg << "generation " << level << " holds " << config.branching << "^" << level
        << " particles, above the cap of " << config.cap;
    throw CapacityExceeded(msg.str());
  }
}

void fill_children(const Eigen::VectorXd& parent, Eigen::VectorXd& child, double sigma,
                   const PopulationState& state, int branching) {
  const auto size = static_cast<std::uint64_t>(child.size());
  const auto b = static_cast<std::uint64_t>(branching);
  const auto level = static_cast<std::uint32_t>(state.level + 1);
  for (std::uint64_t pair = 0; 2 * pair < size; ++pair) {
    const auto [z0, z1] = edge_normal_pair(state.seed, state.trial, level, pair);
    const std::uint64_t v = 2 * pair;
    child[v] = parent[v / b] + sigma * z0;
    if (v + 1 < size) child[v + 1] = parent[(v + 1) / b] + sigma * z1;
  }
}

}  // namespace

namespace {

void validate_shape(const BrwConfig& config) {
  if (config.n < 0) throw ValidationError("n must be non-negative");
  if (config.branching < 2) throw ValidationError("branching factor must be at least 2");
  if (config.trials < 1) throw ValidationError("trials must be at least 1");
  if (config.n > 0) raw_times(config.profile, config.n, config.time_mode);
}

}  // namespace

void validate(const BrwConfig& config) {
  validate_shape(config);
  check_capacity(config, config.n);
}

Eigen::VectorXd step_sigmas(const BrwConfig& config) {
  Eigen::VectorXd sigmas = Eigen::VectorXd::Zero(config.n + 1);
  if (config.n == 0) return sigmas;
  const auto t = raw_times(config.profile, config.n, config.time_mode);
  for (Eigen::Index i = 1; i <= config.profile.size(); ++i)
    for (std::int64_t k = t[i - 1] + 1; k <= t[i]; ++k) sigmas[k] = config.profile.sigma(i);
  return sigmas;
}

namespace {

PopulationState step_with(const PopulationState& state, const BrwConfig& config, double sigma) {
  if (state.level >= config.n) throw DomainError("step: population already at level n");
  check_capacity(config, state.level + 1);
  PopulationState next{state.level + 1, Eigen::VectorXd(state.values.size() * config.branching),
                       state.seed, state.trial};
  fill_children(state.values, next.values, sigma, state, config.branching);
  return next;
}

}  // namespace

PopulationState step(const PopulationState& state, const BrwConfig& config) {
  const Eigen::VectorXd sigmas = step_sigmas(config);
  if (state.level >= config.n) throw DomainError("step: population already at level n");
  return step_with(state, config, sigmas[state.level + 1]);
}

std::uint64_t ancestor(std::uint64_t v, int n, int k, int branching) {
  if (k < 0 || k > n) throw DomainError("ancestor: level must lie in 0..n");
  for (int i = k; i < n; ++i) v /= static_cast<std::uint64_t>(branching);
  return v;
}

namespace {

/// Regenerates S_v(k) for k = 0..n using the same arithmetic as the level fill.
Eigen::VectorXd regenerate(const Eigen::VectorXd& sigmas, std::uint64_t seed,
                           std::uint32_t trial, std::uint64_t leaf, int n, int branching) {
  Eigen::VectorXd path(n + 1);
  path[0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    const std::uint64_t node = ancestor(leaf, n, k, branching);
    path[k] = path[k - 1] + sigmas[k] * edge_normal(seed, trial, static_cast<std::uint32_t>(k), node);
  }
  return path;
}

}  // namespace

MaxSample run_max(const BrwConfig& config, std::uint32_t trial, SimulationStats* stats) {
  validate(config);
  const Eigen::VectorXd sigmas = step_sigmas(config);
  PopulationState state = PopulationState::origin(config.seed, trial);
  std::uint64_t peak = 1;
  while (state.level < config.n) {
    PopulationState next = step_with(state, config, sigmas[state.level + 1]);
    peak = std::max<std::uint64_t>(peak, state.values.size() + next.values.size());
    state = std::move(next);
  }
  if (stats) stats->peak_live_values = peak;

  MaxSample sample;
  Eigen::Index best = 0;
  sample.max_value = state.values.maxCoeff(&best);
  sample.argmax_index = static_cast<std::uint64_t>(best);
  sample.lineage = regenerate(sigmas, config.seed, trial, sample.argmax_index, config.n,
                              config.branching);
  return sample;
}

Eigen::VectorXd trajectory(const BrwConfig& config, std::uint32_t trial, std::uint64_t leaf) {
  validate(config);
  if (leaf >= population_size(config.branching, config.n))
    throw DomainError("trajectory: leaf index out of range");
  return regenerate(step_sigmas(config), config.seed, trial, leaf, config.n, config.branching);
}

int branching_time(std::uint64_t u, std::uint64_t v, int n, int branching) {
  const std::uint64_t size = population_size(branching, n);
  if (u >= size || v >= size) throw DomainError("branching_time: index out of range");
  int k = n;
  while (u != v) {
    u /= static_cast<std::uint64_t>(branching);
    v /= static_cast<std::uint64_t>(branching);
    --k;
  }
  return k;
}

MaxSummary monte_carlo_max(const BrwConfig& config) {
  validate(config);
  const EffectiveProfile eff = concave_hull(config.profile);
  MaxSummary summary;
  summary.mode = default_mode(eff);
  summary.prediction =
      config.n == 0 ? 0.0
                    : predict_max(eff, config.n, summary.mode, config.branching, config.time_mode)
                          .second_order_total;

  summary.maxima.resize(config.trials);
  parallel_for(
      config.trials, config.threads,
      [&](std::uint64_t trial) {
        summary.maxima[static_cast<Eigen::Index>(trial)] =
            run_max(config, static_cast<std::uint32_t>(trial)).max_value;
      },
      1);
  summary.recentered = summary.maxima.array() - summary.prediction;

  std::vector<double> sorted(summary.maxima.begin(), summary.maxima.end());
  std::sort(sorted.begin(), sorted.end());
  summary.mean = summary.maxima.mean();
  summary.median = quantile_sorted(sorted, 0.5);
  summary.q05 = quantile_sorted(sorted, 0.05);
  summary.q25 = quantile_sorted(sorted, 0.25);
  summary.q75 = quantile_sorted(sorted, 0.75);
  summary.q95 = quantile_sorted(sorted, 0.95);
  return summary;
}

std::int64_t count_above_path(const BrwConfig& config, std::uint32_t trial, const Window& window,
                              const Tube& tube) {
  validate_shape(config);
  const int horizon = tube.horizon();
  if (horizon < 1 || horizon > config.n)
    throw DomainError("count_above_path: tube horizon must lie in 1..n");
  check_capacity(config, horizon);
  if (tube.path_ratio.size() != tube.halfwidth.size())
    throw DomainError("count_above_path: tube arrays differ in length");
  if (window.low > window.high) return 0;

  const Eigen::VectorXd sigmas = step_sigmas(config);
  PopulationState state = PopulationState::origin(config.seed, trial);
  while (state.level < horizon) state = step_with(state, config, sigmas[state.level + 1]);

  // Second pass: only leaves inside the window have their history rebuilt.
  std::int64_t count = 0;
  for (Eigen::Index v = 0; v < state.values.size(); ++v) {
    const double x = state.values[v];
    if (x < window.low || x > window.high) continue;
    const Eigen::VectorXd path = regenerate(sigmas, config.seed, trial,
                                            static_cast<std::uint64_t>(v), horizon,
                                            config.branching);
    bool inside = true;
    for (int k = 1; k < horizon && inside; ++k)
      inside = std::abs(path[k] - tube.path_ratio[k] * x) <= tube.halfwidth[k];
    if (inside) ++count;
  }
  return count;
}

}  // namespace ibrw
