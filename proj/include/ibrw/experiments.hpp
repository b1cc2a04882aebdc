#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ibrw/profile.hpp"
#include "ibrw/simulate.hpp"

namespace ibrw {

/// Particle-counting construction on the first effective segment [0, t^1].
struct LowerBoundSetup {
  VarianceProfile profile = VarianceProfile::homogeneous();
  EffectiveProfile eff;
  int n = 0;
  int branching = 2;
  std::int64_t t_first_scale = 0;  // t_1 = λ_1 n
  std::int64_t t1 = 0;             // t^1 = λ^1 n
  double cf = 3.0;
  std::uint64_t cap = kDefaultParticleCap;  // bound on b^{t^1}
  Window window;                   // [M_n^*(t^1), M_n^*(t^1) + 1]
};

/// True when J lies strictly below its hull on the open first segment.
bool below_hull_on_first_segment(const EffectiveProfile& eff);

/// With `require_below_hull` a profile whose first segment touches the hull
/// is rejected with AssumptionViolated; without it, homogeneous first
/// segments are accepted as well.
LowerBoundSetup make_lower_bound_setup(const VarianceProfile& profile, int n, double cf = 3.0,
                                       bool require_below_hull = true, int branching = 2);

/// s_{k,n}(x) = J(k/n) / J(λ^1) · x, for 0 <= k <= t^1.
double optimal_subpath(const LowerBoundSetup& setup, std::int64_t k, double x);

/// f_{k,n}: C_f (J(k/n) n)^{2/3} up to t_1, C_f (J(k/n, λ^1) n)^{2/3} after.
double tube_halfwidth(const LowerBoundSetup& setup, std::int64_t k);

Tube make_tube(const LowerBoundSetup& setup);

struct SlopeRatios {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Ratios of the average slope of J to the hull slope on the first segment,
/// over (0, λ_1] for η₁, and for η₂ the minimum over r in [λ_1, λ^1) of the
/// average over [r, λ^1).
SlopeRatios slope_ratios(const VarianceProfile& profile, double tol = kDefaultTolerance);

/// Average slope of J over (0, r/n] and over [r/n, λ^1), both divided by the
/// hull slope, for every integer r in (0, t^1).
struct SlopeRow {
  std::int64_t r = 0;
  double head = 0.0;
  double tail = 0.0;
};

std::vector<SlopeRow> slope_table(const VarianceProfile& profile, std::int64_t n,
                                  double tol = kDefaultTolerance);

struct MomentEstimate {
  double mean = 0.0;           // E[N]
  double second_moment = 0.0;  // E[N²]
  double ratio = 0.0;          // E[N]² / E[N²], 0 when degenerate
  bool degenerate = false;     // N ≡ 0 over every trial
  std::uint32_t trials = 0;
  std::vector<std::int64_t> counts;
};

MomentEstimate paley_zygmund_ratio(const LowerBoundSetup& setup, std::uint32_t trials,
                                   std::uint64_t seed, int threads = 0);

/// Same estimate with an arbitrary window, e.g. an empty one.
MomentEstimate paley_zygmund_ratio(const LowerBoundSetup& setup, const Window& window,
                                   std::uint32_t trials, std::uint64_t seed, int threads = 0);

struct TightnessRow {
  int n = 0;
  std::uint32_t trials = 0;
  double median = 0.0;
  double mean = 0.0;
  double iqr = 0.0;
  double prediction = 0.0;
  double recentered_median = 0.0;
  /// Prediction with every log coefficient forced to 1 (all δ = 0).
  double plain_prediction = 0.0;
  double plain_recentered_median = 0.0;
};

std::vector<TightnessRow> tightness_study(std::span<const BrwConfig> configs);

}  // namespace ibrw
