#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>

namespace ibrw {

inline constexpr double kNormal975 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion; always contains hits/trials.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kNormal975);

/// Linear-interpolation quantile of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double p);

double mean(const Eigen::Ref<const Eigen::VectorXd>& x);
/// Unbiased sample variance.
double variance(const Eigen::Ref<const Eigen::VectorXd>& x);
/// Fourth standardized moment (3 for a Gaussian).
double kurtosis(const Eigen::Ref<const Eigen::VectorXd>& x);

struct CovarianceEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Sample covariance with the standard error of the mean of centred products.
CovarianceEstimate sample_covariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                                     const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace ibrw
