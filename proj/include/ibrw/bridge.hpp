#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ibrw {

/// Discrete σ-Brownian bridge on the integer interval [start, end].
struct BridgeSpec {
  std::int64_t start = 0;
  std::int64_t end = 1;
  double sigma = 1.0;

  std::int64_t length() const { return end - start; }
};

/// Throws ValidationError unless start < end and sigma > 0.
void validate(const BridgeSpec& spec);

/// Barrier D·log(distance to the nearer endpoint), shifted by z > 0.
struct LogBarrier {
  double coefficient = 1.0;  // D
  double offset = 1.0;       // z
};

void validate(const LogBarrier& barrier);

/// b(k): 0 at both endpoints, D log(k - start) up to the midpoint,
/// D log(end - k) after it.
double log_barrier(const BridgeSpec& spec, double coefficient, std::int64_t k);

/// Monte Carlo estimate of a probability with a 95% Wilson interval.
struct EstimateSample {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

EstimateSample make_estimate(std::uint64_t hits, std::uint64_t trials);

struct MonteCarloOptions {
  std::uint64_t seed = 0;
  int threads = 0;
};

/// A bridge built from a Gaussian walk, together with the walk's total
/// increment S_end - S_start that was subtracted out.
struct BridgeDraw {
  Eigen::VectorXd bridge;  // B_k for k = start..end
  double increment = 0.0;
};

/// B_i = S_i - S_start - (i - start)/(end - start) · (S_end - S_start).
BridgeDraw draw_bridge(const BridgeSpec& spec, std::uint64_t seed, std::uint32_t trial);
Eigen::VectorXd sample_bridge(const BridgeSpec& spec, std::uint64_t seed, std::uint32_t trial);

/// Same law, generated left to right from the Markov transition of the
/// bridge; lets barrier estimators stop at the first crossing.
Eigen::VectorXd sample_bridge_sequential(const BridgeSpec& spec, std::uint64_t seed,
                                         std::uint32_t trial);

/// (k∧k' - start)(end - k∨k') σ² / (end - start).
double bridge_covariance(const BridgeSpec& spec, std::int64_t k, std::int64_t k2);

/// P(B_k < b(k) + z for all start <= k <= end).
EstimateSample bridge_barrier_survival(const BridgeSpec& spec, const LogBarrier& barrier,
                                       std::uint64_t trials, const MonteCarloOptions& options);

/// P(S_k < D log k + z for 0 <= k <= t), with the barrier equal to z at k = 0.
EstimateSample walk_barrier_survival(double sigma, double coefficient, double offset,
                                     std::int64_t t, std::uint64_t trials,
                                     const MonteCarloOptions& options);

/// P(max_{0<=k<=t} S_k < z).
EstimateSample gambler_ruin_survival(double sigma, double offset, std::int64_t t,
                                     std::uint64_t trials, const MonteCarloOptions& options);

/// Distribution of the first passage time τ_x = inf{k >= 1 : S_k >= x} up to t.
struct FirstPassageProfile {
  double level = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> first_hits;   // #{τ_x = j}, index j = 0..t
  std::vector<std::uint64_t> window_hits;  // #{τ_x = j, S_τ < x + 1}
  std::uint64_t never_hit = 0;             // #{τ_x > t}

  EstimateSample window(std::int64_t j) const;
};

FirstPassageProfile first_passage_profile(double sigma, double level, std::int64_t horizon,
                                          std::uint64_t trials, const MonteCarloOptions& options);

/// P(τ_x = j, S_{τ_x} < x + 1).
EstimateSample first_passage_window(double sigma, double level, std::int64_t j,
                                    std::uint64_t trials, const MonteCarloOptions& options);

}  // namespace ibrw
