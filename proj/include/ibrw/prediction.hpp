#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ibrw/profile.hpp"

namespace ibrw {

/// Which flag multiplies the logarithmic correction of a segment.
enum class CorrectionMode {
  restricted,    ///< 2·δ_j; only valid under the restriction
  unrestricted,  ///< δ_j^left + δ_j^right
};

/// g = sqrt(2 ln b); the natural log is used throughout.
double speed_constant(int branching = 2);

struct SegmentTerm {
  int segment = 0;           // j, 1-based
  std::int64_t length = 0;   // Δt^j
  double sigma_bar = 0.0;    // σ̄_j
  int flags = 0;             // 2δ_j or δ_j^left + δ_j^right
  double first_order = 0.0;  // g σ̄_j Δt^j
  double log_correction = 0.0;
  double contribution = 0.0;
};

struct PredictionReport {
  std::int64_t n = 0;
  int branching = 2;
  CorrectionMode mode = CorrectionMode::restricted;
  double g = 0.0;
  double first_order = 0.0;
  double log_correction = 0.0;
  double second_order_total = 0.0;
  std::vector<SegmentTerm> per_segment;
};

/// Per-segment flag sums; throws RestrictionViolated for restricted mode on
/// a profile that does not satisfy the restriction.
std::vector<int> correction_flags(const EffectiveProfile& eff, CorrectionMode mode);

/// Sum of g σ̄_j Δt^j; zero for n = 0.
double first_order(const EffectiveProfile& eff, std::int64_t n, int branching = 2,
                   TimeMode time_mode = TimeMode::strict);

/// M_n^*(n) with an arbitrary flag per segment: coefficient (1 + flags_j).
double second_order_with_flags(const EffectiveProfile& eff, std::int64_t n,
                               std::span<const int> flags, int branching = 2,
                               TimeMode time_mode = TimeMode::strict);

PredictionReport predict_max(const EffectiveProfile& eff, std::int64_t n, CorrectionMode mode,
                             int branching = 2, TimeMode time_mode = TimeMode::strict);

/// The mode used when the caller does not choose one.
inline CorrectionMode default_mode(const EffectiveProfile& eff) {
  return eff.restricted ? CorrectionMode::restricted : CorrectionMode::unrestricted;
}

/// M_n^*(k): affine on every segment, equal to the partial prediction at
/// each t^j. Uses δ^left + δ^right, which equals 2δ under the restriction.
double optimal_path(const EffectiveProfile& eff, std::int64_t n, std::int64_t k,
                    int branching = 2, TimeMode time_mode = TimeMode::strict);

/// Logarithmic barrier b_n(k), defined for k in T_m and at t^0.
/// Throws BarrierUndefined elsewhere.
double barrier(const EffectiveProfile& eff, std::int64_t n, std::int64_t k, int branching = 2,
               TimeMode time_mode = TimeMode::strict);

/// Same as barrier() but returns nullopt off the effective time set.
std::optional<double> try_barrier(const EffectiveProfile& eff, std::int64_t n, std::int64_t k,
                                  int branching = 2, TimeMode time_mode = TimeMode::strict);

}  // namespace ibrw
