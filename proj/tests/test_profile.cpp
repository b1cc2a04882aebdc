#include <doctest.h>

#include <cmath>
#include <random>

#include "ibrw/errors.hpp"
#include "ibrw/profile.hpp"
#include "support.hpp"

using namespace ibrw;

TEST_CASE("profile validation") {
  CHECK_NOTHROW(make_profile({1.0}, {1.0}));
  CHECK_THROWS_AS(make_profile({}, {}), ValidationError);
  CHECK_THROWS_AS(make_profile({1.0, 2.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(make_profile({1.0, -2.0}, {0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(make_profile({1.0, 0.0}, {0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(make_profile({1.0, 2.0}, {0.5, 0.9}), ValidationError);
  CHECK_THROWS_WITH_AS(make_profile({1.0, 2.0}, {0.6, 0.5}),
                       doctest::Contains("strictly increasing"), ValidationError);
  CHECK_THROWS_AS(make_profile({1.0, 2.0}, {0.0, 1.0}), ValidationError);
}

TEST_CASE("sigma_at is left continuous") {
  const auto p = make_profile({1.0, 2.0}, {0.5, 1.0});
  CHECK(p.sigma_at(0.0) == 1.0);
  CHECK(p.sigma_at(0.5) == 1.0);
  CHECK(p.sigma_at(0.5000001) == 2.0);
  CHECK(p.sigma_at(1.0) == 2.0);
}

TEST_CASE("integral_J") {
  CHECK(integral_J(VarianceProfile::homogeneous(), 0.0, 1.0) == doctest::Approx(1.0));
  const auto p = make_profile({1.0, 2.0}, {0.5, 1.0});
  CHECK(integral_J(p, 0.0, 1.0) == doctest::Approx(2.5));
  CHECK(integral_J(p, 0.3, 0.3) == 0.0);
  CHECK(integral_J(p, 0.25, 0.75) == doctest::Approx(0.25 + 1.0));
  CHECK_THROWS_AS(integral_J(p, 0.6, 0.4), DomainError);
  CHECK_THROWS_AS(integral_J(p, -0.1, 0.4), DomainError);
  CHECK_THROWS_AS(integral_J(p, 0.1, 1.1), DomainError);
}

TEST_CASE("integral_J additivity on random profiles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto p = make_profile(oracle::random_profile(rng, 6, rep % 2 == 0));
    double pts[3] = {u(rng), u(rng), u(rng)};
    std::sort(pts, pts + 3);
    const double whole = integral_J(p, pts[0], pts[2]);
    const double parts = integral_J(p, pts[0], pts[1]) + integral_J(p, pts[1], pts[2]);
    CHECK(std::abs(whole - parts) <= 1e-12 * std::max(1.0, std::abs(whole)));
  }
}

TEST_CASE("hull of a decreasing profile is itself") {
  const auto eff = concave_hull(make_profile({2.0, 1.0}, {0.5, 1.0}));
  REQUIRE(eff.segments() == 2);
  CHECK(eff.lambdas[0] == 0.5);
  CHECK(eff.lambdas[1] == 1.0);
  CHECK(eff.sigmas[0] == doctest::Approx(2.0));
  CHECK(eff.sigmas[1] == doctest::Approx(1.0));
  CHECK(eff.delta == std::vector<int>{1, 1});
  CHECK(eff.delta_left == std::vector<int>{1, 1});
  CHECK(eff.delta_right == std::vector<int>{1, 1});
  CHECK(eff.pi == std::vector<Eigen::Index>{1, 2});
  CHECK(eff.restricted);
}

TEST_CASE("hull of an increasing profile is one chord") {
  const auto eff = concave_hull(make_profile({1.0, 2.0}, {0.5, 1.0}));
  REQUIRE(eff.segments() == 1);
  CHECK(eff.lambdas[0] == 1.0);
  CHECK(eff.sigmas[0] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
  CHECK(eff.delta == std::vector<int>{0});
  CHECK(eff.restricted);
  CHECK(eff.coincidence_points == std::vector<double>{0.0, 1.0});
}

TEST_CASE("homogeneous hull") {
  const auto eff = concave_hull(VarianceProfile::homogeneous());
  REQUIRE(eff.segments() == 1);
  CHECK(eff.sigmas[0] == doctest::Approx(1.0));
  CHECK(eff.delta == std::vector<int>{1});
  CHECK(eff.restricted);
}

TEST_CASE("restriction checks") {
  CHECK(concave_hull(make_profile({2.0, 1.5, 1.0}, {1.0 / 3, 2.0 / 3, 1.0})).restricted);

  // Touches the hull at 0.5 only: an isolated point, not a sub-interval.
  const auto eff = concave_hull(make_profile({1.0, 3.0, 1.0, 3.0}, {0.25, 0.5, 0.75, 1.0}));
  REQUIRE(eff.segments() == 1);
  CHECK(eff.sigmas[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK(eff.coincidence_points == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(eff.delta == std::vector<int>{0});
  CHECK(eff.restricted);
}

TEST_CASE("partial coincidence breaks the restriction") {
  // σ² = (2, 1, 3): the chord of slope 2 runs along J on the first third
  // only.
  const auto left =
      concave_hull(make_profile({std::sqrt(2.0), 1.0, std::sqrt(3.0)}, {1.0 / 3, 2.0 / 3, 1.0}));
  REQUIRE(left.segments() == 1);
  CHECK(left.delta == std::vector<int>{0});
  CHECK(left.delta_left == std::vector<int>{1});
  CHECK(left.delta_right == std::vector<int>{0});
  CHECK_FALSE(left.restricted);

  // Coincidence on an interior raw interval only.
  const auto mid = concave_hull(
      make_profile({1.0, std::sqrt(3.0), std::sqrt(2.0), 1.0, std::sqrt(3.0)},
                   {0.2, 0.4, 0.6, 0.8, 1.0}));
  CHECK_FALSE(mid.restricted);
  CHECK_FALSE(check_restriction(mid));
}

TEST_CASE("collinear hull pieces are merged") {
  const auto eff = concave_hull(make_profile({2.0, 2.0, 1.0}, {0.3, 0.6, 1.0}));
  REQUIRE(eff.segments() == 2);
  CHECK(eff.lambdas[0] == doctest::Approx(0.6));
  CHECK(eff.pi == std::vector<Eigen::Index>{2, 3});
  CHECK(eff.delta == std::vector<int>{1, 1});
}

TEST_CASE("single raw interval segment has both end flags equal to delta") {
  const auto eff = concave_hull(make_profile({1.0, 2.0, 1.0}, {0.5, 0.75, 1.0}));
  for (Eigen::Index j = 1; j <= eff.segments(); ++j)
    if (eff.pi_at(j) - eff.pi_at(j - 1) == 1) {
      CHECK(eff.delta_left[j - 1] == eff.delta[j - 1]);
      CHECK(eff.delta_right[j - 1] == eff.delta[j - 1]);
    }
}

TEST_CASE("hull agrees with the brute-force oracle") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    const oracle::Profile raw = oracle::random_profile(rng, 6, rep % 2 == 0);
    const auto eff = concave_hull(make_profile(raw));
    const auto ref = oracle::brute_hull(raw);
    REQUIRE(eff.segments() == static_cast<Eigen::Index>(ref.lambdas.size()));
    for (Eigen::Index j = 0; j < eff.segments(); ++j) {
      CHECK(eff.lambdas[j] == ref.lambdas[j]);
      CHECK(std::abs(eff.sigmas[j] - ref.sigmas[j]) <= 1e-9 * ref.sigmas[j]);
    }
    CHECK(eff.delta == ref.delta);
    CHECK(eff.delta_left == ref.delta_left);
    CHECK(eff.delta_right == ref.delta_right);
    CHECK(eff.breakpoint_coincident == ref.coincident);
  }
}

TEST_CASE("hull invariants on random profiles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto p = make_profile(oracle::random_profile(rng, 6, rep % 3 == 0));
    const auto eff = concave_hull(p);
    const double slack = eff.tol * integral_J(p, 1.0);

    for (Eigen::Index j = 1; j < eff.segments(); ++j) CHECK(eff.sigmas[j] < eff.sigmas[j - 1]);
    CHECK(eff.lambdas[eff.segments() - 1] == 1.0);
    CHECK(eff.segments() <= p.size());
    for (int i = 0; i < 100; ++i) {
      const double s = u(rng);
      CHECK(eff.hull_value(s) >= integral_J(p, s) - slack);
    }
    for (Eigen::Index j = 0; j <= eff.segments(); ++j) {
      CHECK(std::abs(eff.hull_value(eff.scale(j)) - integral_J(p, eff.scale(j))) <= slack);
      CHECK(p.scale(eff.pi_at(j)) == eff.scale(j));
      CHECK(std::find(eff.coincidence_points.begin(), eff.coincidence_points.end(),
                      eff.scale(j)) != eff.coincidence_points.end());
    }
    for (Eigen::Index j = 0; j < eff.segments(); ++j) {
      if (eff.delta[j] == 1) {
        CHECK(eff.delta_left[j] == 1);
        CHECK(eff.delta_right[j] == 1);
      }
      if (eff.restricted) {
        const bool whole = eff.delta[j] == 1 && eff.delta_left[j] == 1 && eff.delta_right[j] == 1;
        const bool none = eff.delta_left[j] == 0 && eff.delta_right[j] == 0;
        CHECK((whole || none));
      }
    }

    // The hull of the hull is itself, fully coincident.
    const auto again = concave_hull(VarianceProfile(eff.sigmas, eff.lambdas));
    REQUIRE(again.segments() == eff.segments());
    for (Eigen::Index j = 0; j < eff.segments(); ++j) {
      CHECK(again.lambdas[j] == eff.lambdas[j]);
      CHECK(again.sigmas[j] == doctest::Approx(eff.sigmas[j]).epsilon(1e-12));
      CHECK(again.delta[j] == 1);
    }

    // Scaling σ by c scales σ̄ by c and keeps the combinatorics.
    const auto scaled = concave_hull(p.scaled(1.7));
    REQUIRE(scaled.segments() == eff.segments());
    CHECK(scaled.delta == eff.delta);
    for (Eigen::Index j = 0; j < eff.segments(); ++j)
      CHECK(scaled.sigmas[j] == doctest::Approx(1.7 * eff.sigmas[j]).epsilon(1e-12));
  }
}

TEST_CASE("effective times") {
  const auto eff = concave_hull(make_profile({2.0, 1.0}, {0.5, 1.0}));
  CHECK(effective_times(eff, 10) == std::vector<std::int64_t>{0, 5, 10});
  CHECK_THROWS_AS(effective_times(eff, 11), NonIntegralTime);
  CHECK(effective_times(eff, 11, TimeMode::rounding) == std::vector<std::int64_t>{0, 5, 11});
  CHECK(effective_times(concave_hull(VarianceProfile::homogeneous()), 7) ==
        std::vector<std::int64_t>{0, 7});
  CHECK_THROWS_AS(effective_times(eff, 0), DomainError);
  CHECK_THROWS_AS(effective_times(eff, 1, TimeMode::rounding), DomainError);
  // 0.3 * 10 is 3.0000000000000004 in binary floating point.
  CHECK(scaled_time(0.3, 10) == 3);
}

TEST_CASE("index sets") {
  const auto up = concave_hull(make_profile({1.0, 2.0}, {0.5, 1.0}));
  auto sets = index_sets(up, 10, 1);
  CHECK(sets.coincident_segments.empty());
  CHECK(sets.times == std::vector<std::int64_t>{10});

  sets = index_sets(concave_hull(VarianceProfile::homogeneous()), 4, 1);
  CHECK(sets.coincident_segments == std::vector<int>{1});
  CHECK(sets.times == std::vector<std::int64_t>{0, 1, 2, 3, 4});

  sets = index_sets(concave_hull(make_profile({2.0, 1.0}, {0.5, 1.0})), 4, 2);
  CHECK(sets.coincident_segments == std::vector<int>{1, 2});
  CHECK(sets.times == std::vector<std::int64_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(index_sets(up, 10, 2), DomainError);
}

TEST_CASE("theta index") {
  const std::vector<std::int64_t> t{0, 5, 10};
  CHECK(theta_index(t, 5) == 1);
  CHECK(theta_index(t, 6) == 2);
  CHECK(theta_index(t, 10) == 2);
  CHECK(theta_index(std::vector<std::int64_t>{0, 10}, 1) == 1);
  CHECK_THROWS_AS(theta_index(t, 0), DomainError);
  CHECK_THROWS_AS(theta_index(t, 11), DomainError);
}
