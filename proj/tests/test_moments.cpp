#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dirlab/error.hpp"
#include "dirlab/moments.hpp"

using namespace dirlab;

TEST_CASE("scan from precomputed values: trapezoid with a partial panel") {
  const auto scan = ModulusScan::from_values(0.5, 1.0, std::vector<double>(11, 1.0));
  CHECK(scan.symmetric());
  CHECK(scan.T_max() == 10.0);
  CHECK(scan.moment(1, std::nullopt, 10.0).value == doctest::Approx(20.0));
  CHECK(scan.moment(3, std::nullopt, 2.5).value == doctest::Approx(5.0));
  CHECK(scan.moment(1, std::nullopt, 0.0).value == 0.0);
  CHECK_THROWS(scan.moment(1, std::nullopt, 10.5));

  // |f| = 1 + t on the right, 1 on the left: k = 1 moment by hand.
  std::vector<double> pos, neg(5, 1.0);
  for (int j = 0; j <= 4; ++j) pos.push_back(1.0 + 0.5 * j);
  const auto two = ModulusScan::from_values(0.5, 0.5, pos, neg);
  CHECK_FALSE(two.symmetric());
  // trapezoid of (1+t)^2 on [0,2] with h = 0.5: 0.25 * (1 + 2*(2.25 + 4 + 6.25) + 9) = 8.75
  CHECK(two.moment(1, std::nullopt, 2.0).value == doctest::Approx(8.75 + 2.0));
  CHECK(two.fraction_above(1.5, 2.0) == doctest::Approx(3.0 / 9.0));
}

TEST_CASE("moments of the single-term series") {
  const auto one = SeriesSpec::polynomial({1.0});
  CHECK(mean_square_moment(one, 1, 0.5, 50.0).value == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(mean_square_moment(one, 4, 0.5, 50.0).value == doctest::Approx(100.0).epsilon(1e-12));
  const auto w = weighted_moment(one, 1, 1.0, 0.5, 1e4);
  CHECK(w.value == doctest::Approx(2.0 * std::atan(1e4)).epsilon(1e-7));
  CHECK(w.quad_error < 1e-6);
}

TEST_CASE("mean value of a two-term polynomial") {
  const auto two = SeriesSpec::polynomial({1.0, -1.0});
  for (double sigma : {0.5, 1.0}) {
    const double T = 5000.0;
    const double target = 1.0 + std::pow(2.0, -2.0 * sigma);
    const auto m = mean_square_moment(two, 1, sigma, T);
    CHECK(m.value / (2.0 * T) == doctest::Approx(target).epsilon(1e-3));
  }
}

TEST_CASE("mean value targets") {
  const auto two = SeriesSpec::polynomial({1.0, -1.0});
  const auto t1 = mean_value_target(two, 1, 0.5);
  CHECK(t1.value == doctest::Approx(1.5));
  CHECK(t1.tail_bound == 0.0);
  // (1 + 2^{-s})^2 has coefficients 1, 2, 1 at n = 1, 2, 4.
  const auto t2 = mean_value_target(SeriesSpec::polynomial({1.0, 1.0}), 2, 0.5);
  CHECK(t2.value == doctest::Approx(3.25));

  const double zeta_3_2 = 2.6123753486854883;
  const auto eta = mean_value_target(SeriesSpec::eta(), 1, 0.75);
  CHECK(eta.value <= zeta_3_2);
  CHECK(eta.value + eta.tail_bound >= zeta_3_2);
  CHECK(eta.tail_bound / eta.value < 0.02);

  const auto unbounded = SeriesSpec::custom("u", [](std::uint64_t) { return cplx(1.0); }, 1.0, 1.0);
  CHECK_THROWS_AS(mean_value_target(unbounded, 1, 0.75), AccuracyError);
  CHECK_THROWS_AS(mean_value_target(SeriesSpec::eta(), 1, 0.5), Error);
}

TEST_CASE("Parseval for finite series") {
  const auto one = SeriesSpec::polynomial({1.0});
  const auto r = parseval_report(one, 0.5, 1.0, 1e4, 1e5);
  CHECK(r.x_side == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.gap < 1e-3);
  const auto two = SeriesSpec::polynomial({1.0, -1.0});
  CHECK(parseval_gap(two, 0.5, 0.5, 1e4, 1e5) < 5e-3);
}

TEST_CASE("tail extrapolation of synthetic moments") {
  std::vector<MomentSample> lin, quad;
  for (int i = 0; i < 12; ++i) {
    const double T = 100.0 * std::pow(1.4, i);
    lin.push_back({1, 1.0, std::nullopt, T, 2.0 * T, 0.0});
    quad.push_back({1, 1.0, std::nullopt, T, T * T, 0.0});
  }
  // A(T) = 2T is |f| = 1: the weighted integral with alpha = 1/2, sigma = 1 is pi.
  const auto r = tail_extrapolate(lin, 0.5, 1.0);
  CHECK_FALSE(r.divergent);
  CHECK(r.rho == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(std::numbers::pi).epsilon(1e-4));
  CHECK(tail_extrapolate(quad, 0.25, 1.0).divergent);

  std::vector<MomentSample> few(lin.begin(), lin.begin() + 5);
  CHECK_THROWS_AS(tail_extrapolate(few, 0.5, 1.0), DataError);
  auto bumpy = lin;
  bumpy[6].value = 1.0;
  CHECK_THROWS_AS(tail_extrapolate(bumpy, 0.5, 1.0), DataError);
}

TEST_CASE("large-value measure and grid step") {
  const auto one = SeriesSpec::polynomial({1.0});
  CHECK(large_value_measure(one, 0.5, 0.5, 20.0).fraction == 1.0);
  CHECK(large_value_measure(one, 0.5, 2.0, 20.0).fraction == 0.0);
  CHECK(default_grid_step(1, 0.75) == doctest::Approx(0.025));
  CHECK(default_grid_step(1, 0.04) == doctest::Approx(0.01));
}

TEST_CASE("moments are monotone in T and deterministic") {
  const auto eta = SeriesSpec::eta();
  const ModulusScan scan(eta, 0.6, 300.0, 0.02);
  double prev = 0.0;
  for (double T : {10.0, 50.0, 120.0, 299.99}) {
    const double v = scan.moment(1, std::nullopt, T).value;
    CHECK(v > prev);
    prev = v;
  }
  const ModulusScan again(eta, 0.6, 300.0, 0.02);
  CHECK(again.moment(2, 0.3, 250.0).value == scan.moment(2, 0.3, 250.0).value);
}
