#include "ibrw/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ibrw/errors.hpp"

namespace ibrw {

namespace {

double slope(double x0, double y0, double x1, double y1) { return (y1 - y0) / (x1 - x0); }

}  // namespace

VarianceProfile::VarianceProfile(Eigen::VectorXd sigmas, Eigen::VectorXd lambdas)
    : sigmas_(std::move(sigmas)), lambdas_(std::move(lambdas)) {
  const Eigen::Index m = sigmas_.size();
  if (m < 1) throw ValidationError("profile needs at least one variance parameter");
  if (lambdas_.size() != m) {
    std::ostringstream msg;
    msg << "sigmas and lambdas must have equal length (got " << m << " and "
        << lambdas_.size() << ")";
    throw ValidationError(msg.str());
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(sigmas_[i]) || sigmas_[i] <= 0.0)
      throw ValidationError("sigmas must be positive and finite");
    if (!std::isfinite(lambdas_[i]) || lambdas_[i] <= 0.0 || lambdas_[i] > 1.0 + 1e-12)
      throw ValidationError("lambdas must lie in (0, 1]");
    if (i > 0 && !(lambdas_[i] > lambdas_[i - 1]))
      throw ValidationError("lambdas must be strictly increasing");
  }
  if (std::abs(lambdas_[m - 1] - 1.0) > 1e-12)
    throw ValidationError("the last lambda must equal 1");
  lambdas_[m - 1] = 1.0;
}

VarianceProfile VarianceProfile::homogeneous(double sigma) {
  return VarianceProfile(Eigen::VectorXd::Constant(1, sigma), Eigen::VectorXd::Ones(1));
}

double VarianceProfile::sigma_at(double s) const {
  if (s < 0.0 || s > 1.0) throw DomainError("sigma_at: s must lie in [0, 1]");
  for (Eigen::Index i = 0; i < size(); ++i)
    if (s <= lambdas_[i]) return sigmas_[i];
  return sigmas_[size() - 1];
}

Eigen::VectorXd VarianceProfile::cumulative() const {
  Eigen::VectorXd out(size() + 1);
  out[0] = 0.0;
  for (Eigen::Index i = 1; i <= size(); ++i)
    out[i] = out[i - 1] + sigma(i) * sigma(i) * (scale(i) - scale(i - 1));
  return out;
}

VarianceProfile VarianceProfile::scaled(double c) const {
  return VarianceProfile(sigmas_ * c, lambdas_);
}

double integral_J(const VarianceProfile& profile, double s1, double s2) {
  if (!(s1 >= 0.0 && s2 <= 1.0 && s1 <= s2))
    throw DomainError("integral_J requires 0 <= s1 <= s2 <= 1");
  double total = 0.0;
  for (Eigen::Index i = 1; i <= profile.size(); ++i) {
    const double lo = std::max(s1, profile.scale(i - 1));
    const double hi = std::min(s2, profile.scale(i));
    if (hi > lo) total += profile.sigma(i) * profile.sigma(i) * (hi - lo);
  }
  return total;
}

double EffectiveProfile::hull_value(double s) const {
  if (s < 0.0 || s > 1.0) throw DomainError("hull_value: s must lie in [0, 1]");
  double value = 0.0;
  for (Eigen::Index j = 1; j <= segments(); ++j) {
    const double lo = scale(j - 1);
    const double hi = std::min(s, scale(j));
    if (hi <= lo) break;
    value += sigmas[j - 1] * sigmas[j - 1] * (hi - lo);
  }
  return value;
}

EffectiveProfile concave_hull(const VarianceProfile& profile, double tol) {
  if (!(tol > 0.0)) throw DomainError("concave_hull: tol must be positive");
  const Eigen::Index M = profile.size();
  const Eigen::VectorXd y = profile.cumulative();
  auto x = [&](Eigen::Index i) { return profile.scale(i); };

  // Upper hull by monotone chain; a middle point is dropped when it does not
  // strictly bend the chain downwards, which merges collinear segments.
  std::vector<Eigen::Index> hull;
  for (Eigen::Index i = 0; i <= M; ++i) {
    while (hull.size() >= 2) {
      const Eigen::Index a = hull[hull.size() - 2];
      const Eigen::Index c = hull.back();
      const double left = slope(x(a), y[a], x(c), y[c]);
      const double right = slope(x(c), y[c], x(i), y[i]);
      if (left <= right + tol * std::max(std::abs(left), std::abs(right)))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  EffectiveProfile eff;
  eff.tol = tol;
  const Eigen::Index m = static_cast<Eigen::Index>(hull.size()) - 1;
  eff.lambdas.resize(m);
  eff.sigmas.resize(m);
  for (Eigen::Index j = 1; j <= m; ++j) {
    const Eigen::Index a = hull[j - 1];
    const Eigen::Index c = hull[j];
    eff.lambdas[j - 1] = x(c);
    eff.sigmas[j - 1] = std::sqrt(slope(x(a), y[a], x(c), y[c]));
    eff.pi.push_back(c);
  }

  // Coincidence is decided at raw breakpoints; both functions are linear
  // between consecutive breakpoints.
  const double scale = tol * y[M];
  eff.breakpoint_coincident.assign(M + 1, false);
  for (Eigen::Index j = 1; j <= m; ++j) {
    const Eigen::Index a = hull[j - 1];
    const Eigen::Index c = hull[j];
    const double s2 = eff.sigmas[j - 1] * eff.sigmas[j - 1];
    for (Eigen::Index i = a; i <= c; ++i) {
      const double chord = y[a] + s2 * (x(i) - x(a));
      if (std::abs(chord - y[i]) <= scale) eff.breakpoint_coincident[i] = true;
    }
  }
  for (Eigen::Index i = 0; i <= M; ++i)
    if (eff.breakpoint_coincident[i]) eff.coincidence_points.push_back(x(i));

  for (Eigen::Index j = 1; j <= m; ++j) {
    const Eigen::Index a = eff.pi_at(j - 1);
    const Eigen::Index c = eff.pi_at(j);
    bool all = true;
    for (Eigen::Index i = a; i <= c; ++i) all = all && eff.breakpoint_coincident[i];
    eff.delta.push_back(all ? 1 : 0);
    eff.delta_left.push_back(eff.breakpoint_coincident[a + 1] ? 1 : 0);
    eff.delta_right.push_back(eff.breakpoint_coincident[c - 1] ? 1 : 0);
  }
  eff.restricted = check_restriction(eff);
  return eff;
}

bool check_restriction(const EffectiveProfile& eff) {
  for (Eigen::Index j = 1; j <= eff.segments(); ++j) {
    const Eigen::Index a = eff.pi_at(j - 1);
    const Eigen::Index c = eff.pi_at(j);
    int touching = 0;
    for (Eigen::Index i = a + 1; i <= c; ++i)
      if (eff.breakpoint_coincident[i - 1] && eff.breakpoint_coincident[i]) ++touching;
    if (touching != 0 && touching != c - a) return false;
  }
  return true;
}

std::int64_t scaled_time(double lambda, std::int64_t n, TimeMode mode) {
  const double exact = lambda * static_cast<double>(n);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, std::abs(exact)))
    return static_cast<std::int64_t>(nearest);
  if (mode == TimeMode::strict) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lambda*n = " << lambda << "*" << n << " is not an integer";
    throw NonIntegralTime(msg.str());
  }
  return static_cast<std::int64_t>(std::floor(exact));
}

namespace {

std::vector<std::int64_t> times_for(const std::vector<double>& scales, std::int64_t n,
                                    TimeMode mode) {
  if (n < 1) throw DomainError("time horizon n must be positive");
  std::vector<std::int64_t> t{0};
  for (double s : scales) {
    t.push_back(scaled_time(s, n, mode));
    if (t.back() <= t[t.size() - 2])
      throw DomainError("degenerate segment: consecutive times coincide");
  }
  return t;
}

}  // namespace

std::vector<std::int64_t> effective_times(const EffectiveProfile& eff, std::int64_t n,
                                          TimeMode mode) {
  return times_for(std::vector<double>(eff.lambdas.begin(), eff.lambdas.end()), n, mode);
}

std::vector<std::int64_t> raw_times(const VarianceProfile& profile, std::int64_t n,
                                    TimeMode mode) {
  const auto& l = profile.lambdas();
  return times_for(std::vector<double>(l.begin(), l.end()), n, mode);
}

IndexSets index_sets(const EffectiveProfile& eff, std::int64_t n, int l, TimeMode mode) {
  if (l < 1 || l > eff.segments()) throw DomainError("index_sets: l must lie in 1..m");
  const auto t = effective_times(eff, n, mode);
  IndexSets sets;
  std::vector<std::int64_t> times(t.begin() + 1, t.begin() + l + 1);
  for (int j = 1; j <= l; ++j) {
    if (eff.delta[j - 1] != 1) continue;
    sets.coincident_segments.push_back(j);
    for (std::int64_t k = t[j - 1]; k <= t[j]; ++k) times.push_back(k);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  sets.times = std::move(times);
  return sets;
}

int theta_index(const std::vector<std::int64_t>& times, std::int64_t k) {
  if (k < 1 || k > times.back()) throw DomainError("theta_index: k must lie in 1..n");
  const auto it = std::lower_bound(times.begin() + 1, times.end(), k);
  return static_cast<int>(it - times.begin());
}

int theta_index(const EffectiveProfile& eff, std::int64_t n, std::int64_t k, TimeMode mode) {
  return theta_index(effective_times(eff, n, mode), k);
}

}  // namespace ibrw
