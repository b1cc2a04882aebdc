#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ibrw {

inline constexpr double kDefaultTolerance = 1e-9;

/// How a scale λ is turned into an integer time λ·n.
enum class TimeMode {
  strict,    ///< λ·n must be an integer (within rounding noise)
  rounding,  ///< floor(λ·n), as in the definition of the walk
};

/// Piecewise constant standard deviation σ(s) on [0, 1].
///
/// σ(s) = σ_i on (λ_{i-1}, λ_i], with λ_0 = 0 and λ_M = 1; σ(0) = σ_1.
class VarianceProfile {
 public:
  /// Throws ValidationError when an invariant is violated.
  VarianceProfile(Eigen::VectorXd sigmas, Eigen::VectorXd lambdas);

  static VarianceProfile homogeneous(double sigma = 1.0);

  Eigen::Index size() const { return sigmas_.size(); }
  const Eigen::VectorXd& sigmas() const { return sigmas_; }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }

  /// λ_i for i in 0..M, with λ_0 = 0.
  double scale(Eigen::Index i) const { return i == 0 ? 0.0 : lambdas_[i - 1]; }
  /// σ_i for i in 1..M.
  double sigma(Eigen::Index i) const { return sigmas_[i - 1]; }
  /// Left-continuous step function σ(s).
  double sigma_at(double s) const;

  /// Cumulative integral J(λ_i) at every breakpoint i = 0..M.
  Eigen::VectorXd cumulative() const;

  VarianceProfile scaled(double c) const;

 private:
  Eigen::VectorXd sigmas_;
  Eigen::VectorXd lambdas_;
};

/// ∫_{s1}^{s2} σ²(r) dr, exact for the step function.
double integral_J(const VarianceProfile& profile, double s1, double s2);
inline double integral_J(const VarianceProfile& profile, double s) {
  return integral_J(profile, 0.0, s);
}

/// Concave-hull reduction of a profile.
///
/// Segment j (1-based) spans [λ^{j-1}, λ^j] and has slope σ̄_j². Vectors
/// indexed by segment are stored 0-based, so `sigmas[j - 1]` is σ̄_j.
struct EffectiveProfile {
  Eigen::VectorXd lambdas;  // λ^1..λ^m
  Eigen::VectorXd sigmas;   // σ̄_1..σ̄_m, strictly decreasing
  std::vector<int> delta;
  std::vector<int> delta_left;
  std::vector<int> delta_right;
  std::vector<Eigen::Index> pi;  // π_1..π_m with λ_{π_j} = λ^j
  std::vector<double> coincidence_points;
  std::vector<bool> breakpoint_coincident;  // raw breakpoints 0..M
  bool restricted = true;
  double tol = kDefaultTolerance;

  Eigen::Index segments() const { return lambdas.size(); }
  /// λ^j for j in 0..m.
  double scale(Eigen::Index j) const { return j == 0 ? 0.0 : lambdas[j - 1]; }
  /// π_j for j in 0..m.
  Eigen::Index pi_at(Eigen::Index j) const { return j == 0 ? 0 : pi[j - 1]; }
  /// Hull value J_{σ̄²}(s).
  double hull_value(double s) const;
};

EffectiveProfile concave_hull(const VarianceProfile& profile, double tol = kDefaultTolerance);

/// Restriction: coincidence with the hull on a sub-interval of a segment
/// forces coincidence on the whole segment.
bool check_restriction(const EffectiveProfile& eff);

/// Integer time λ·n. Throws NonIntegralTime in strict mode.
std::int64_t scaled_time(double lambda, std::int64_t n, TimeMode mode = TimeMode::strict);

/// t^0 = 0 < t^1 < ... < t^m = n.
std::vector<std::int64_t> effective_times(const EffectiveProfile& eff, std::int64_t n,
                                          TimeMode mode = TimeMode::strict);

/// Raw times t_0 = 0 < t_1 < ... < t_M = n.
std::vector<std::int64_t> raw_times(const VarianceProfile& profile, std::int64_t n,
                                    TimeMode mode = TimeMode::strict);

struct IndexSets {
  std::vector<int> coincident_segments;  // A_l, 1-based segment indices
  std::vector<std::int64_t> times;       // T_l, sorted
};

IndexSets index_sets(const EffectiveProfile& eff, std::int64_t n, int l,
                     TimeMode mode = TimeMode::strict);

/// ϑ_k: the segment j with t^{j-1} < k <= t^j.
int theta_index(const std::vector<std::int64_t>& times, std::int64_t k);
int theta_index(const EffectiveProfile& eff, std::int64_t n, std::int64_t k,
                TimeMode mode = TimeMode::strict);

}  // namespace ibrw
