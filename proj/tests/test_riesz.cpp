#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dirlab/error.hpp"
#include "dirlab/riesz.hpp"

using namespace dirlab;

namespace {

// sum'_{n<=x} log^{p}(x/n) c_n / Gamma(p+1), half weight at n = x for p = 0,
// zero weight there for p > 0, dropped for p < 0.
cplx brute_kernel(const std::vector<cplx>& c, double alpha, double x) {
  const double p = alpha - 0.5;
  cplx acc = 0.0;
  for (std::size_t n = 1; n <= c.size() && static_cast<double>(n) <= x; ++n) {
    const double v = std::log(x / static_cast<double>(n));
    if (v == 0.0) {
      if (p == 0.0) acc += 0.5 * c[n - 1];
      continue;
    }
    acc += std::pow(v, p) * c[n - 1];
  }
  return acc / std::tgamma(p + 1.0);
}

std::vector<cplx> random_coefficients(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> c(n);
  for (auto& z : c) z = {u(rng), u(rng)};
  return c;
}

}  // namespace

TEST_CASE("kernel modes agree with the direct sum") {
  const auto c = random_coefficients(60, 11);
  for (double alpha : {0.5, 1.5, 2.5, 4.5, 0.8, 1.27, 0.3, 0.05}) {
    RieszKernel k(c, alpha);
    for (double x : {1.0, 1.5, 2.0, 7.0, 7.25, 33.9, 60.0}) {
      CAPTURE(alpha);
      CAPTURE(x);
      const cplx want = brute_kernel(c, alpha, x);
      CHECK(std::abs(k(x) - want) <= 1e-11 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("interval branch and its singular split") {
  const auto c = random_coefficients(20, 5);
  RieszKernel k(c, 0.3);
  for (double x : {5.0, 5.1, 5.9}) {
    const auto [rest, lead] = k.split(5, x);
    const cplx joined = rest + lead * std::pow(std::log(x / 5.0), -0.2);
    if (x > 5.0) CHECK(std::abs(joined - k.on_interval(5, x)) < 1e-12);
  }
  RieszKernel smooth(c, 1.5);
  // on [n, n+1] the branch is continuous and matches the kernel inside
  CHECK(std::abs(smooth.on_interval(4, 4.5) - smooth(4.5)) < 1e-13);
}

TEST_CASE("riesz_sum of eta at s = 1 approaches log 2 + eta'(1) / log x") {
  const auto eta = SeriesSpec::eta();
  const double x = 1e4;
  cplx direct = 0.0;
  for (int n = 1; n <= 10000; ++n) {
    const double w = 1.0 - std::log(static_cast<double>(n)) / std::log(x);
    direct += ((n % 2) ? 1.0 : -1.0) * w / n;
  }
  const cplx got = riesz_sum(eta, 1.5, {1.0, 0.0}, x);
  CHECK(std::abs(got - direct) < 1e-12);
  const double eta_prime_1 = 0.15986890374243097;  // gamma log 2 - log^2 2 / 2
  CHECK(std::abs(got.real() - (std::numbers::ln2 + eta_prime_1 / std::log(x))) < 1e-3);
  CHECK_THROWS_AS(riesz_sum(eta, 0.3, {1.0, 0.0}, x), DomainError);
}

TEST_CASE("Mellin pair for finite series") {
  const auto two = SeriesSpec::polynomial({1.0, -1.0});
  const auto r = mellin_pair(two, 0.5, {2.0, 0.0}, 100.0);
  CHECK(std::abs(r.transform - 0.375) < 1e-14);
  CHECK(r.gap < 1e-10);

  const auto three = SeriesSpec::polynomial({1.0, 0.5, {0.0, -0.25}});
  for (double alpha : {0.5, 1.5, 0.8, 0.3}) {
    CAPTURE(alpha);
    const auto m = mellin_pair(three, alpha, {2.0, 1.0}, 2000.0);
    CHECK(m.gap < 1e-5);
  }
}

TEST_CASE("kernel energy of the single-term series") {
  const auto one = SeriesSpec::polynomial({1.0});
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double X = 1e3;
    const auto e = kernel_energy(one, 0.5, sigma, X);
    CHECK(e.value == doctest::Approx((1.0 - std::pow(X, -2.0 * sigma)) / (2.0 * sigma)).epsilon(1e-9));
  }
}

TEST_CASE("kernel growth of bounded and growing kernels") {
  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(10.0 * std::pow(1e3, i / 199.0));
  const auto flat = g_growth_exponent(SeriesSpec::polynomial({1.0, 1.0}), 1, 0.5, xs);
  CHECK(std::abs(flat.sigma_alpha) < 1e-12);
  const auto lin = kernel_growth_exponent([](double x) { return cplx(3.0 * x); }, 0.5, xs);
  CHECK(lin.sigma_alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.uncertainty() < 1e-10);
  CHECK_THROWS_AS(kernel_growth_exponent([](double) { return cplx(0.0); }, 0.5, xs), DataError);
}
