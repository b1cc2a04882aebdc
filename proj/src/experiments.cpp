#include "ibrw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibrw/errors.hpp"
#include "ibrw/parallel.hpp"
#include "ibrw/prediction.hpp"

namespace ibrw {

bool below_hull_on_first_segment(const EffectiveProfile& eff) {
  if (eff.delta[0] == 1) return false;
  for (Eigen::Index i = 1; i < eff.pi_at(1); ++i)
    if (eff.breakpoint_coincident[i]) return false;
  return true;
}

LowerBoundSetup make_lower_bound_setup(const VarianceProfile& profile, int n, double cf,
                                       bool require_below_hull, int branching) {
  if (!(cf > 0.0)) throw ValidationError("C_f must be positive");
  LowerBoundSetup setup;
  setup.profile = profile;
  setup.eff = concave_hull(profile);
  if (require_below_hull && !below_hull_on_first_segment(setup.eff))
    throw AssumptionViolated(
        "the cumulative variance touches its concave hull inside the first effective segment");
  setup.n = n;
  setup.branching = branching;
  setup.cf = cf;
  setup.t_first_scale = scaled_time(profile.scale(1), n);
  const auto t = effective_times(setup.eff, n);
  setup.t1 = t[1];
  const double level = optimal_path(setup.eff, n, setup.t1, branching);
  setup.window = {level, level + 1.0};
  return setup;
}

double optimal_subpath(const LowerBoundSetup& setup, std::int64_t k, double x) {
  if (k < 0 || k > setup.t1) throw DomainError("optimal_subpath: k must lie in 0..t^1");
  const double s = std::min(static_cast<double>(k) / setup.n, setup.eff.scale(1));
  return integral_J(setup.profile, s) / integral_J(setup.profile, setup.eff.scale(1)) * x;
}

double tube_halfwidth(const LowerBoundSetup& setup, std::int64_t k) {
  if (k < 0 || k > setup.t1) throw DomainError("tube_halfwidth: k must lie in 0..t^1");
  const double top = setup.eff.scale(1);
  const double s = std::min(static_cast<double>(k) / setup.n, top);
  const double variance = k <= setup.t_first_scale ? integral_J(setup.profile, s)
                                                    : integral_J(setup.profile, s, top);
  return setup.cf * std::pow(variance * setup.n, 2.0 / 3.0);
}

Tube make_tube(const LowerBoundSetup& setup) {
  Tube tube;
  for (std::int64_t k = 0; k <= setup.t1; ++k) {
    tube.path_ratio.push_back(optimal_subpath(setup, k, 1.0));
    tube.halfwidth.push_back(tube_halfwidth(setup, k));
  }
  return tube;
}

SlopeRatios slope_ratios(const VarianceProfile& profile, double tol) {
  const EffectiveProfile eff = concave_hull(profile, tol);
  if (!below_hull_on_first_segment(eff))
    throw AssumptionViolated(
        "slope ratios need the cumulative variance strictly below its hull on the first "
        "segment");
  const double top = eff.scale(1);
  const double hull_slope = integral_J(profile, top) / top;
  SlopeRatios ratios;
  ratios.eta1 = integral_J(profile, profile.scale(1)) / profile.scale(1) / hull_slope;
  // Averages over [r, λ^1) are monotone between breakpoints, so the minimum
  // is attained at one of them.
  ratios.eta2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < eff.pi_at(1); ++i) {
    const double r = profile.scale(i);
    ratios.eta2 = std::min(ratios.eta2, integral_J(profile, r, top) / (top - r) / hull_slope);
  }
  return ratios;
}

std::vector<SlopeRow> slope_table(const VarianceProfile& profile, std::int64_t n, double tol) {
  const EffectiveProfile eff = concave_hull(profile, tol);
  const double top = eff.scale(1);
  const double hull_slope = integral_J(profile, top) / top;
  const std::int64_t t1 = effective_times(eff, n, TimeMode::rounding)[1];
  std::vector<SlopeRow> rows;
  for (std::int64_t r = 1; r < t1; ++r) {
    const double s = static_cast<double>(r) / static_cast<double>(n);
    rows.push_back({r, integral_J(profile, s) / s / hull_slope,
                    integral_J(profile, s, top) / (top - s) / hull_slope});
  }
  return rows;
}

MomentEstimate paley_zygmund_ratio(const LowerBoundSetup& setup, std::uint32_t trials,
                                   std::uint64_t seed, int threads) {
  return paley_zygmund_ratio(setup, setup.window, trials, seed, threads);
}

MomentEstimate paley_zygmund_ratio(const LowerBoundSetup& setup, const Window& window,
                                   std::uint32_t trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  BrwConfig config;
  config.profile = setup.profile;
  config.n = setup.n;
  config.branching = setup.branching;
  config.seed = seed;
  config.trials = trials;
  config.cap = setup.cap;
  const Tube tube = make_tube(setup);

  MomentEstimate est;
  est.trials = trials;
  est.counts.assign(trials, 0);
  parallel_for(
      trials, threads,
      [&](std::uint64_t trial) {
        est.counts[trial] =
            count_above_path(config, static_cast<std::uint32_t>(trial), window, tube);
      },
      1);
  double first = 0.0, second = 0.0;
  for (auto c : est.counts) {
    first += static_cast<double>(c);
    second += static_cast<double>(c) * static_cast<double>(c);
  }
  est.mean = first / trials;
  est.second_moment = second / trials;
  est.degenerate = est.second_moment == 0.0;
  est.ratio = est.degenerate ? 0.0 : est.mean * est.mean / est.second_moment;
  return est;
}

std::vector<TightnessRow> tightness_study(std::span<const BrwConfig> configs) {
  std::vector<TightnessRow> rows;
  for (const BrwConfig& config : configs) {
    const MaxSummary summary = monte_carlo_max(config);
    const EffectiveProfile eff = concave_hull(config.profile);
    const std::vector<int> plain(eff.segments(), 0);
    TightnessRow row;
    row.n = config.n;
    row.trials = config.trials;
    row.median = summary.median;
    row.mean = summary.mean;
    row.iqr = summary.iqr();
    row.prediction = summary.prediction;
    row.recentered_median = summary.median - summary.prediction;
    row.plain_prediction =
        second_order_with_flags(eff, config.n, plain, config.branching, config.time_mode);
    row.plain_recentered_median = summary.median - row.plain_prediction;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ibrw
