#include <doctest.h>

#include <cmath>
#include <random>

#include "ibrw/errors.hpp"
#include "ibrw/prediction.hpp"
#include "support.hpp"

using namespace ibrw;

namespace {

const double kG = std::sqrt(2.0 * std::log(2.0));

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("speed constant") {
  CHECK(speed_constant(2) == doctest::Approx(1.1774100225154747).epsilon(1e-15));
  CHECK(speed_constant(3) == doctest::Approx(std::sqrt(2 * std::log(3.0))));
  CHECK_THROWS_AS(speed_constant(1), DomainError);
}

TEST_CASE("first order term") {
  const auto hom = concave_hull(VarianceProfile::homogeneous());
  CHECK(first_order(hom, 1000) == doctest::Approx(1177.410).epsilon(1e-6));
  CHECK(first_order(hom, 0) == 0.0);
  // g·sqrt(2.5)·1000 = 1861.649...
  const auto up = concave_hull(make_profile({1.0, 2.0}, {0.5, 1.0}));
  CHECK(first_order(up, 1000) == doctest::Approx(kG * std::sqrt(2.5) * 1000).epsilon(1e-12));
  CHECK(first_order(up, 1000) == doctest::Approx(1861.649).epsilon(1e-6));
}

TEST_CASE("predictions match the independent evaluation") {
  struct Case {
    std::vector<double> sigmas, lambdas;
    long n;
    double approx;
  };
  const Case cases[] = {
      {{1.0}, {1.0}, 1024, 1196.8373},
      {{1.0, 2.0}, {0.5, 1.0}, 1000, 1857.0105},
      {{2.0, 1.0}, {0.5, 1.0}, 1000, 1742.3631},
  };
  for (const auto& c : cases) {
    const auto eff = concave_hull(make_profile(c.sigmas, c.lambdas));
    const auto report = predict_max(eff, c.n, CorrectionMode::restricted);
    const double ref = oracle::prediction({c.sigmas, c.lambdas}, c.n, 2, true);
    CHECK(close(report.second_order_total, ref, 1e-6));
    CHECK(report.second_order_total == doctest::Approx(c.approx).epsilon(1e-7));
    CHECK(report.first_order + report.log_correction == report.second_order_total);
  }
}

TEST_CASE("homogeneous prediction by hand") {
  const auto eff = concave_hull(VarianceProfile::homogeneous());
  const auto report = predict_max(eff, 1024, CorrectionMode::restricted);
  CHECK(report.second_order_total ==
        doctest::Approx(kG * 1024 - 3.0 / (2 * kG) * std::log(1024.0)).epsilon(1e-14));
  REQUIRE(report.per_segment.size() == 1);
  CHECK(report.per_segment[0].flags == 2);
  CHECK(report.per_segment[0].length == 1024);
  CHECK(optimal_path(eff, 1024, 1024) == doctest::Approx(report.second_order_total));
  CHECK(optimal_path(eff, 1024, 512) ==
        doctest::Approx(report.second_order_total / 2).epsilon(1e-14));
  CHECK(optimal_path(eff, 1024, 0) == 0.0);
}

TEST_CASE("restricted mode refuses unrestricted profiles") {
  const auto eff =
      concave_hull(make_profile({std::sqrt(2.0), 1.0, std::sqrt(3.0)}, {1.0 / 3, 2.0 / 3, 1.0}));
  REQUIRE_FALSE(eff.restricted);
  CHECK_THROWS_AS(predict_max(eff, 300, CorrectionMode::restricted), RestrictionViolated);
  const auto report = predict_max(eff, 300, CorrectionMode::unrestricted);
  CHECK(report.per_segment[0].flags == 1);
  CHECK(default_mode(eff) == CorrectionMode::unrestricted);
  CHECK(close(report.second_order_total,
              oracle::prediction({{std::sqrt(2.0), 1.0, std::sqrt(3.0)}, {1.0 / 3, 2.0 / 3, 1.0}},
                                 300, 2, false),
              1e-12));
}

TEST_CASE("modes agree under the restriction") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    const auto raw = oracle::random_profile(rng, 6, true);
    const auto eff = concave_hull(make_profile(raw));
    if (!eff.restricted) continue;
    const auto a = predict_max(eff, 1000, CorrectionMode::restricted).second_order_total;
    const auto b = predict_max(eff, 1000, CorrectionMode::unrestricted).second_order_total;
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
    CHECK(close(a, oracle::prediction(raw, 1000, 2, true), 1e-9));
  }
}

TEST_CASE("optimal path interpolates the partial predictions") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const auto raw = oracle::random_profile(rng, 5, true);
    const auto eff = concave_hull(make_profile(raw));
    const long n = 200;
    const auto t = effective_times(eff, n);
    const auto flags = correction_flags(eff, CorrectionMode::unrestricted);
    double partial = 0.0;
    for (Eigen::Index j = 1; j <= eff.segments(); ++j) {
      const double dt = static_cast<double>(t[j] - t[j - 1]);
      partial += kG * eff.sigmas[j - 1] * dt -
                 (1 + flags[j - 1]) * eff.sigmas[j - 1] / (2 * kG) * std::log(dt);
      CHECK(optimal_path(eff, n, t[j]) == doctest::Approx(partial).epsilon(1e-12));
      // Affine inside the segment.
      for (long k = t[j - 1] + 1; k < t[j]; ++k) {
        const double second = optimal_path(eff, n, k + 1) - 2 * optimal_path(eff, n, k) +
                              optimal_path(eff, n, k - 1);
        CHECK(std::abs(second) <= 1e-9 * std::max(1.0, partial));
      }
    }
  }
}

TEST_CASE("optimal path is concave once segments are long") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 200; ++rep) {
    const auto eff = concave_hull(make_profile(oracle::random_profile(rng, 5, true)));
    const long n = 100000;
    const auto t = effective_times(eff, n);
    for (Eigen::Index j = 1; j < eff.segments(); ++j) {
      const double left = optimal_path(eff, n, t[j]) - optimal_path(eff, n, t[j] - 1);
      const double right = optimal_path(eff, n, t[j] + 1) - optimal_path(eff, n, t[j]);
      CHECK(right < left);
    }
  }
}

TEST_CASE("a short steep segment can break concavity at small n") {
  // The log correction costs the 2-step first segment more per step than the
  // 18-step second one gains from its smaller variance.
  const auto eff = concave_hull(make_profile({2.0, std::sqrt(3.8)}, {0.1, 1.0}));
  REQUIRE(eff.segments() == 2);
  const double left = optimal_path(eff, 20, 2) - optimal_path(eff, 20, 1);
  const double right = optimal_path(eff, 20, 3) - optimal_path(eff, 20, 2);
  CHECK(right > left);
  const double big_left = optimal_path(eff, 2000, 200) - optimal_path(eff, 2000, 199);
  const double big_right = optimal_path(eff, 2000, 201) - optimal_path(eff, 2000, 200);
  CHECK(big_right < big_left);
}

TEST_CASE("prediction scales with sigma and is monotone in the profile") {
  const auto base = make_profile({1.0, 2.0, 1.5}, {0.25, 0.5, 1.0});
  const auto eff = concave_hull(base);
  const double m = predict_max(eff, 400, default_mode(eff)).second_order_total;
  const auto bigger = concave_hull(base.scaled(2.0));
  CHECK(predict_max(bigger, 400, default_mode(bigger)).second_order_total ==
        doctest::Approx(2 * m).epsilon(1e-12));
  CHECK(first_order(concave_hull(make_profile({1.0, 2.5, 1.5}, {0.25, 0.5, 1.0})), 400) >=
        first_order(eff, 400));
}

TEST_CASE("raising any sigma raises the first order term") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> bump(0.01, 0.5);
  for (int rep = 0; rep < 300; ++rep) {
    auto raw = oracle::random_profile(rng, 6, rep % 2 == 0);
    const double before = first_order(concave_hull(make_profile(raw)), 1000, 2, TimeMode::rounding);
    raw.sigmas[rep % raw.sigmas.size()] += bump(rng);
    const double after = first_order(concave_hull(make_profile(raw)), 1000, 2, TimeMode::rounding);
    CHECK(after > before);
  }
}

TEST_CASE("barrier") {
  const auto eff = concave_hull(VarianceProfile::homogeneous());
  CHECK(barrier(eff, 100, 4) == doctest::Approx(2.9436).epsilon(1e-4));
  CHECK(barrier(eff, 100, 4) == doctest::Approx(2.5 / kG * std::log(4.0)).epsilon(1e-14));
  CHECK(barrier(eff, 100, 96) == barrier(eff, 100, 4));
  CHECK(barrier(eff, 100, 0) == 0.0);
  CHECK(barrier(eff, 100, 100) == 0.0);
  for (long k = 0; k <= 100; ++k) CHECK(barrier(eff, 100, k) == barrier(eff, 100, 100 - k));

  const auto up = concave_hull(make_profile({1.0, 2.0}, {0.5, 1.0}));
  CHECK(barrier(up, 10, 10) == 0.0);
  CHECK_THROWS_AS(barrier(up, 10, 5), BarrierUndefined);
  CHECK_FALSE(try_barrier(up, 10, 3).has_value());

  const auto down = concave_hull(make_profile({2.0, 1.0}, {0.5, 1.0}));
  CHECK(barrier(down, 20, 10) == 0.0);
  CHECK(barrier(down, 20, 12) == doctest::Approx(2.5 / kG * std::log(2.0)));
  CHECK(barrier(down, 20, 3) == doctest::Approx(2.5 * 2 / kG * std::log(3.0)));
}

TEST_CASE("time mode and horizon errors") {
  const auto eff = concave_hull(make_profile({2.0, 1.0}, {0.5, 1.0}));
  CHECK_THROWS_AS(predict_max(eff, 11, CorrectionMode::restricted), NonIntegralTime);
  CHECK_NOTHROW(predict_max(eff, 11, CorrectionMode::restricted, 2, TimeMode::rounding));
  CHECK_THROWS_AS(predict_max(eff, 0, CorrectionMode::restricted), DomainError);
  CHECK_THROWS_AS(optimal_path(eff, 10, 11), DomainError);
}
