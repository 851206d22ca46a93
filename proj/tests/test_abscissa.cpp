#include <doctest.h>

#include <cmath>
#include <vector>

#include "dirlab/abscissa.hpp"
#include "dirlab/error.hpp"

using namespace dirlab;

namespace {

std::vector<double> geom(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return out;
}

std::vector<double> sigmas() {
  std::vector<double> out;
  for (int i = 1; i <= 19; ++i) out.push_back(0.05 * i);
  return out;
}

// Moments V(T) = T^{e(sigma)} (divergent) or 5 - T^{-1/2} (convergent), with the
// transition planted at sigma_star.
MomentProvider planted(double sigma_star, bool weighted) {
  return [=](double sigma, int k, std::optional<double> alpha, std::span<const double> Ts) {
    std::vector<MomentSample> out;
    for (double T : Ts) {
      double v;
      if (sigma < sigma_star) v = weighted ? std::pow(T, 0.5) : std::pow(T, 1.5);
      else v = weighted ? 5.0 - std::pow(T, -0.5) : T;
      out.push_back({k, sigma, alpha, T, v, 0.0});
    }
    return out;
  };
}

}  // namespace

TEST_CASE("growth exponents of exact power laws") {
  for (double e : {-1.0, 0.0, 0.37, 2.0}) {
    std::vector<std::pair<double, double>> pts;
    std::vector<MomentSample> samples;
    for (double T : geom(10.0, 1e5, 15)) {
      pts.emplace_back(T, 0.3 * std::pow(T, e));
      samples.push_back({1, 0.5, std::nullopt, T, 0.3 * std::pow(T, e), 0.0});
    }
    const auto f = growth_exponent(pts);
    CHECK(f.exponent == doctest::Approx(e).epsilon(1e-12));
    CHECK(f.log_coeff == doctest::Approx(std::log(0.3)).epsilon(1e-10));
    if (e > 0.0) CHECK(increment_growth_exponent(samples).exponent == doctest::Approx(e).epsilon(1e-10));
  }
}

TEST_CASE("growth-exponent input contracts") {
  std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(growth_exponent(two), DataError);
  std::vector<std::pair<double, double>> zero{{1.0, 1.0}, {2.0, 0.0}, {3.0, 2.0}};
  CHECK_THROWS_AS(growth_exponent(zero), DataError);
  std::vector<std::pair<double, double>> back{{1.0, 1.0}, {3.0, 2.0}, {2.0, 3.0}};
  CHECK_THROWS_AS(growth_exponent(back), DataError);
  std::vector<MomentSample> flat;
  for (double T : {1.0, 2.0, 3.0, 4.0}) flat.push_back({1, 0.5, std::nullopt, T, 1.0, 0.0});
  CHECK_THROWS_AS(increment_growth_exponent(flat), DataError);
}

TEST_CASE("increment growth separates convergent from divergent moments") {
  std::vector<MomentSample> conv;
  for (double T : geom(500.0, 5000.0, 10)) conv.push_back({1, 0.5, 0.2, T, 3.0 - std::pow(T, -0.3), 0.0});
  CHECK(increment_growth_exponent(conv).exponent == doctest::Approx(-0.3).epsilon(1e-6));
}

TEST_CASE("abscissa bracket around a planted transition") {
  const auto s = sigmas();
  const auto Ts = geom(500.0, 5000.0, 10);
  for (double star : {0.22, 0.5, 0.81}) {
    const auto w = estimate_abscissa(planted(star, true), 1, 0.2, s, Ts);
    CHECK(w.bracket.first < star);
    CHECK(w.bracket.second >= star);
    CHECK(w.width() == doctest::Approx(0.05));
    CHECK(w.value == doctest::Approx(0.5 * (w.bracket.first + w.bracket.second)));
    const auto u = estimate_abscissa(planted(star, false), 1, std::nullopt, s, Ts);
    CHECK(u.bracket == w.bracket);
    CHECK(u.fit_lo.exponent > 1.1);
    CHECK(u.fit_hi.exponent <= 1.1);
  }
}

TEST_CASE("abscissa bracket failures") {
  const auto s = sigmas();
  const auto Ts = geom(500.0, 5000.0, 10);
  const auto all_conv = estimate_abscissa(planted(0.01, true), 1, 0.3, s, Ts);
  CHECK(all_conv.clamped);
  CHECK(all_conv.value == 0.0);
  CHECK(all_conv.bracket.second == doctest::Approx(0.05));
  AbscissaOptions strict;
  strict.policy = BracketPolicy::throw_error;
  try {
    estimate_abscissa(planted(0.01, true), 1, 0.3, s, Ts, strict);
    FAIL("expected BracketNotFound");
  } catch (const BracketNotFound& e) {
    CHECK(e.side() == BracketNotFound::Side::all_convergent);
  }
  try {
    estimate_abscissa(planted(0.99, true), 1, 0.3, s, Ts);
    FAIL("expected BracketNotFound");
  } catch (const BracketNotFound& e) {
    CHECK(e.side() == BracketNotFound::Side::all_divergent);
  }
  std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(estimate_abscissa(planted(0.5, true), 1, 0.3, bad, Ts), DomainError);
  std::vector<double> short_T{10.0, 20.0, 30.0};
  CHECK_THROWS_AS(estimate_abscissa(planted(0.5, true), 1, 0.3, s, short_T), DomainError);
  CHECK_THROWS_AS(estimate_sigma_k_alpha(SeriesSpec::eta(), 1, 0.7, s, Ts), DomainError);
}

TEST_CASE("sampler reuses one scan per sigma") {
  MomentSampler sampler(SeriesSpec::eta());
  const auto Ts = geom(50.0, 200.0, 4);
  const auto a = sampler(0.7, 1, std::nullopt, Ts);
  const auto b = sampler(0.7, 1, 0.2, Ts);
  const ModulusScan& scan = sampler.scan(0.7, 1, 200.0);
  CHECK(a.back().value == scan.moment(1, std::nullopt, 200.0).value);
  CHECK(b.back().value == scan.moment(1, 0.2, 200.0).value);
}

TEST_CASE("order-function estimates on synthetic streams") {
  std::vector<double> ts;
  for (double t = 1.0; t <= 1e4; t += 1.0) ts.push_back(t);
  const ModulusFn stream = [](double sigma, std::span<const double> t) {
    std::vector<double> v;
    for (double x : t) v.push_back(2.0 * std::pow(x, 0.3 * (1.0 - sigma / 0.6)));
    return v;
  };
  const auto m = estimate_mu(stream, 0.2, ts);
  CHECK(m.mu_hat == doctest::Approx(0.2).epsilon(1e-9));
  const auto prof = order_function_profile(stream, sigmas(), ts);
  CHECK(prof.sigma_L_hat == doctest::Approx(0.6));
  CHECK(prof.mu0_hat == doctest::Approx(0.3).epsilon(1e-9));
  for (const auto& p : prof.grid) CHECK(std::abs(p.mu_hat - std::max(0.0, 0.3 * (1.0 - p.sigma / 0.6))) < 1e-9);

  std::vector<double> short_t{1.0, 2.0, 900.0};
  CHECK_THROWS_AS(estimate_mu(stream, 0.2, short_t), DomainError);
}

TEST_CASE("order function of eta is non-increasing in sigma") {
  std::vector<double> ts;
  for (double t = 10.0; t <= 3000.0; t += 0.25) ts.push_back(t);
  std::vector<double> s{0.1, 0.3, 0.5, 0.7, 0.9};
  const auto prof = order_function_profile(SeriesSpec::eta(), s, ts);
  for (std::size_t i = 1; i < prof.grid.size(); ++i) CHECK(prof.grid[i].mu_hat <= prof.grid[i - 1].mu_hat);
  CHECK(prof.grid.front().mu_hat > 0.3);
  CHECK(prof.grid.front().mu_hat < 0.6);
}

TEST_CASE("convexity bound") {
  CHECK(convexity_bound(0.5, 0.5, 0.25) == doctest::Approx(0.25));
  CHECK(convexity_bound(1.0, 1.0, 0.3) == doctest::Approx(0.7));
  CHECK_THROWS_AS(convexity_bound(0.5, 0.5, 0.75), DomainError);
}
