#include "ibrw/prediction.hpp"

#include <cmath>

#include "ibrw/errors.hpp"

namespace ibrw {

double speed_constant(int branching) {
  if (branching < 2) throw DomainError("branching factor must be at least 2");
  return std::sqrt(2.0 * std::log(static_cast<double>(branching)));
}

std::vector<int> correction_flags(const EffectiveProfile& eff, CorrectionMode mode) {
  std::vector<int> flags(eff.segments());
  if (mode == CorrectionMode::restricted) {
    if (!eff.restricted)
      throw RestrictionViolated(
          "restricted prediction requested on a profile that touches its hull on part of a "
          "segment only; use the unrestricted mode");
    for (Eigen::Index j = 0; j < eff.segments(); ++j) flags[j] = 2 * eff.delta[j];
  } else {
    for (Eigen::Index j = 0; j < eff.segments(); ++j)
      flags[j] = eff.delta_left[j] + eff.delta_right[j];
  }
  return flags;
}

namespace {

SegmentTerm segment_term(const EffectiveProfile& eff, const std::vector<std::int64_t>& t,
                         int j, int flags, double g) {
  SegmentTerm term;
  term.segment = j;
  term.length = t[j] - t[j - 1];
  term.sigma_bar = eff.sigmas[j - 1];
  term.flags = flags;
  term.first_order = g * term.sigma_bar * static_cast<double>(term.length);
  term.log_correction =
      -(1.0 + flags) * term.sigma_bar / (2.0 * g) * std::log(static_cast<double>(term.length));
  term.contribution = term.first_order + term.log_correction;
  return term;
}

}  // namespace

double first_order(const EffectiveProfile& eff, std::int64_t n, int branching,
                   TimeMode time_mode) {
  const double g = speed_constant(branching);
  if (n == 0) return 0.0;
  const auto t = effective_times(eff, n, time_mode);
  double total = 0.0;
  for (Eigen::Index j = 1; j <= eff.segments(); ++j)
    total += g * eff.sigmas[j - 1] * static_cast<double>(t[j] - t[j - 1]);
  return total;
}

double second_order_with_flags(const EffectiveProfile& eff, std::int64_t n,
                               std::span<const int> flags, int branching, TimeMode time_mode) {
  if (static_cast<Eigen::Index>(flags.size()) != eff.segments())
    throw DomainError("one flag per effective segment is required");
  const double g = speed_constant(branching);
  const auto t = effective_times(eff, n, time_mode);
  double total = 0.0;
  for (int j = 1; j <= eff.segments(); ++j)
    total += segment_term(eff, t, j, flags[j - 1], g).contribution;
  return total;
}

PredictionReport predict_max(const EffectiveProfile& eff, std::int64_t n, CorrectionMode mode,
                             int branching, TimeMode time_mode) {
  const auto flags = correction_flags(eff, mode);
  PredictionReport report;
  report.n = n;
  report.branching = branching;
  report.mode = mode;
  report.g = speed_constant(branching);
  const auto t = effective_times(eff, n, time_mode);
  for (int j = 1; j <= eff.segments(); ++j) {
    report.per_segment.push_back(segment_term(eff, t, j, flags[j - 1], report.g));
    report.first_order += report.per_segment.back().first_order;
    report.log_correction += report.per_segment.back().log_correction;
  }
  report.second_order_total = report.first_order + report.log_correction;
  return report;
}

double optimal_path(const EffectiveProfile& eff, std::int64_t n, std::int64_t k, int branching,
                    TimeMode time_mode) {
  if (k < 0 || k > n) throw DomainError("optimal_path: k must lie in 0..n");
  const auto t = effective_times(eff, n, time_mode);
  if (k == 0) return 0.0;
  const auto flags = correction_flags(eff, CorrectionMode::unrestricted);
  const double g = speed_constant(branching);
  const int theta = theta_index(t, k);
  double total = 0.0;
  for (int j = 1; j <= theta; ++j) {
    const SegmentTerm term = segment_term(eff, t, j, flags[j - 1], g);
    const double done = static_cast<double>(std::min(k, t[j]) - t[j - 1]);
    total += done / static_cast<double>(term.length) * term.contribution;
  }
  return total;
}

std::optional<double> try_barrier(const EffectiveProfile& eff, std::int64_t n, std::int64_t k,
                                  int branching, TimeMode time_mode) {
  if (k < 0 || k > n) return std::nullopt;
  const auto t = effective_times(eff, n, time_mode);
  for (auto tj : t)
    if (k == tj) return 0.0;
  const int j = theta_index(t, k);
  if (eff.delta[j - 1] != 1) return std::nullopt;
  const double coefficient = 2.5 * eff.sigmas[j - 1] / speed_constant(branching);
  const double mid = 0.5 * static_cast<double>(t[j - 1] + t[j]);
  if (static_cast<double>(k) <= mid)
    return coefficient * std::log(static_cast<double>(k - t[j - 1]));
  return coefficient * std::log(static_cast<double>(t[j] - k));
}

double barrier(const EffectiveProfile& eff, std::int64_t n, std::int64_t k, int branching,
               TimeMode time_mode) {
  const auto value = try_barrier(eff, n, k, branching, time_mode);
  if (!value) throw BarrierUndefined("barrier is defined only on the effective time set");
  return *value;
}

}  // namespace ibrw
