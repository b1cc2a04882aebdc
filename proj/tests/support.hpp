#pragma once

#include <Eigen/Core>
#include <vector>

#include "ibrw/profile.hpp"
#include "oracles.hpp"

inline Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline ibrw::VarianceProfile make_profile(const std::vector<double>& sigmas,
                                          const std::vector<double>& lambdas) {
  return ibrw::VarianceProfile(vec(sigmas), vec(lambdas));
}

inline ibrw::VarianceProfile make_profile(const oracle::Profile& p) {
  return make_profile(p.sigmas, p.lambdas);
}
