#include "ibrw/stats.hpp"

#include <cmath>

#include "ibrw/errors.hpp"

namespace ibrw {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0 || hits > trials) throw DomainError("wilson_interval: need 0 <= hits <= trials, trials > 0");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  // Clamp so the interval brackets the point estimate despite rounding.
  return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (p < 0.0 || p > 1.0) throw DomainError("quantile level must lie in [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double mean(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) throw DomainError("mean of an empty sample");
  return x.mean();
}

double variance(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) throw DomainError("variance needs at least two samples");
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) throw DomainError("kurtosis needs at least two samples");
  const Eigen::ArrayXd c = x.array() - x.mean();
  const double m2 = c.square().mean();
  return c.square().square().mean() / (m2 * m2);
}

CovarianceEstimate sample_covariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("sample_covariance needs two samples of equal size >= 2");
  const Eigen::ArrayXd prod = (x.array() - x.mean()) * (y.array() - y.mean());
  const double n = static_cast<double>(x.size());
  CovarianceEstimate est;
  est.value = prod.sum() / (n - 1.0);
  const double spread = std::sqrt((prod - prod.mean()).square().sum() / (n - 1.0));
  est.standard_error = spread / std::sqrt(n);
  return est;
}

}  // namespace ibrw
