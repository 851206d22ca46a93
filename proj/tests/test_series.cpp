#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dirlab/characters.hpp"
#include "dirlab/error.hpp"
#include "dirlab/series.hpp"

using namespace dirlab;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Direct partial sum of a polynomial, independent of the library kernels.
cplx direct_sum(const std::vector<cplx>& c, cplx s) {
  cplx acc = 0.0;
  for (std::size_t n = 1; n <= c.size(); ++n) acc += c[n - 1] * std::exp(-s * std::log(static_cast<double>(n)));
  return acc;
}

}  // namespace

TEST_CASE("eta at classical points") {
  const auto eta = SeriesSpec::eta();
  CHECK(std::abs(evaluate(eta, {1.0, 0.0}) - std::numbers::ln2) < 1e-12);
  CHECK(std::abs(evaluate(eta, {0.0, 0.0}) - 0.5) < 1e-12);
  CHECK(std::abs(evaluate(eta, {2.0, 0.0}) - std::numbers::pi * std::numbers::pi / 12.0) < 1e-12);
}

TEST_CASE("eta against frozen high-precision values") {
  // mpmath altzeta at 30 digits.
  const auto eta = SeriesSpec::eta();
  CHECK(close(evaluate(eta, {0.3, 1000.0}), {-4.810382866687134, 2.3341122480080417}, 1e-9));
  CHECK(close(evaluate(eta, {0.75, 10.0}), {0.15805783449292159, 1.0434675262192656}, 1e-10));
  CHECK(close(evaluate(eta, {1.0, 1.0}), {0.72655977506246326, 0.15809586390120732}, 1e-10));
  CHECK(close(evaluate(eta, {0.25, -40.0}), {3.1612019792669771, 3.1686988510540775}, 1e-10));
  CHECK(std::abs(evaluate(eta, {0.5, 14.134725})) < 3e-7);
}

TEST_CASE("batched line evaluation agrees with pointwise evaluation below sigma 1/2") {
  const auto eta = SeriesSpec::eta();
  const auto line = evaluate_line(eta, 0.2, 4000.0, 0.37, 40, 1e-9);
  for (std::size_t j = 0; j < line.size(); j += 7) {
    const cplx p = evaluate(eta, {0.2, 4000.0 + 0.37 * static_cast<double>(j)}, 1e-9);
    CHECK(std::abs(line[j] - p) < 1e-8);
  }
}

TEST_CASE("conjugate symmetry for real coefficients") {
  const auto eta = SeriesSpec::eta();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> sig(0.05, 2.0), t(1.0, 500.0);
  for (int i = 0; i < 25; ++i) {
    const double s = sig(rng), tt = t(rng);
    CHECK(std::abs(evaluate(eta, {s, -tt}) - std::conj(evaluate(eta, {s, tt}))) < 1e-9);
  }
}

TEST_CASE("Dirichlet L-functions mod 4 and mod 5") {
  const auto chi4 = SeriesSpec::character(4, 1);
  CHECK(close(evaluate(chi4, {1.0, 0.0}), std::numbers::pi / 4.0, 1e-10));
  CHECK(close(evaluate(chi4, {0.5, 0.0}), 0.66769145718960918, 1e-10));
  CHECK(close(evaluate(chi4, {2.0, 0.0}), 0.91596559417721902, 1e-10));
  CHECK(close(evaluate(chi4, {0.5, 20.0}), {2.8510651544833458, -0.36483657908491392}, 1e-9));

  // index 1 mod 5: chi(2) = i.
  const auto chi5 = SeriesSpec::character(5, 1);
  CHECK(close(chi5.coefficient(2), {0.0, 1.0}, 1e-15));
  CHECK(close(evaluate(chi5, {0.5, 3.0}), {1.9556802844365871, 0.14081207344324336}, 1e-9));
  CHECK(close(evaluate(chi5, {2.0, 1.0}), {1.0531637016739494, 0.18069817848361785}, 1e-10));
}

TEST_CASE("character enumeration") {
  DirichletCharacter principal(7, 0);
  CHECK(principal.is_principal());
  CHECK_FALSE(principal.is_primitive());
  CHECK(principal(7) == cplx(0.0));
  DirichletCharacter mod3(3, 1);
  CHECK(mod3.is_real());
  CHECK(mod3.is_primitive());
  CHECK(mod3(2) == cplx(-1.0));
  CHECK(mod3.is_odd());
  // every character is completely multiplicative
  for (std::uint32_t idx = 0; idx < 8; ++idx) {
    DirichletCharacter chi(16, idx);
    for (std::uint64_t a = 1; a < 16; ++a) {
      for (std::uint64_t b = 1; b < 16; ++b) CHECK(std::abs(chi(a * b) - chi(a) * chi(b)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(DirichletCharacter(5, 4), ConfigError);
  CHECK_THROWS_AS(DirichletCharacter(0, 0), ConfigError);
}

TEST_CASE("polynomials evaluate as finite sums") {
  const std::vector<cplx> c{1.0, -2.0, {0.5, 1.0}, 3.0};
  const auto p = SeriesSpec::polynomial(c);
  for (cplx s : {cplx(0.5, 0.0), cplx(-1.0, 3.0), cplx(2.0, -50.0)}) {
    CHECK(close(evaluate(p, {s.real(), s.imag()}), direct_sum(c, s), 1e-13));
  }
  const auto line = evaluate_line(p, 0.3, 10.0, 0.5, 5);
  for (std::size_t j = 0; j < line.size(); ++j) {
    CHECK(close(line[j], direct_sum(c, {0.3, 10.0 + 0.5 * static_cast<double>(j)}), 1e-12));
  }
}

TEST_CASE("power coefficients of eta against brute force") {
  const std::size_t N = 200;
  const auto p2 = power_coefficients(SeriesSpec::eta(), 2, N);
  const auto p3 = power_coefficients(SeriesSpec::eta(), 3, N);
  REQUIRE(p2.exact);
  auto sign = [](std::uint64_t n) { return (n % 2) ? 1 : -1; };
  for (std::uint64_t n = 1; n <= N; ++n) {
    long s2 = 0, s3 = 0;
    for (std::uint64_t a = 1; a <= n; ++a) {
      if (n % a) continue;
      s2 += sign(a) * sign(n / a);
      const std::uint64_t m = n / a;
      for (std::uint64_t b = 1; b <= m; ++b) {
        if (m % b == 0) s3 += sign(a) * sign(b) * sign(m / b);
      }
    }
    CHECK((*p2.exact)[n - 1] == s2);
    CHECK(p3[n].real() == doctest::Approx(static_cast<double>(s3)));
  }
  CHECK((*p2.exact)[3] == -1);  // c_{4,2}
}

TEST_CASE("exact convolution detects overflow") {
  const std::vector<std::int64_t> big{1, std::int64_t(1) << 62, 1, 1};
  CHECK_THROWS_AS(dirichlet_convolve_exact(big, big), OverflowError);
}

TEST_CASE("parse_series round-trips descriptors and rejects junk") {
  for (const char* d : {"eta", "chi:3:1", "chi:5:2", "poly:1,-1"}) {
    CHECK(parse_series(d).descriptor() == d);
  }
  const auto ones = parse_series("ones:5");
  CHECK(ones.coefficient(5) == cplx(1.0));
  CHECK(ones.coefficient(6) == cplx(0.0));
  CHECK_THROWS_AS(parse_series("zeta"), ConfigError);
  CHECK_THROWS_AS(parse_series("chi:4"), ConfigError);
  CHECK_THROWS_AS(parse_series("poly:"), ConfigError);
}

TEST_CASE("custom streams converge above their abscissa and refuse hopeless requests") {
  const auto custom = SeriesSpec::custom(
      "squares", [](std::uint64_t n) { return cplx(1.0 / static_cast<double>(n)); }, 0.0, 0.0, true, 1.0);
  CHECK(close(evaluate(custom, {1.0, 0.0}, 1e-6), std::numbers::pi * std::numbers::pi / 6.0, 2e-6));
  const auto slow = SeriesSpec::custom("ones", [](std::uint64_t) { return cplx(1.0); }, 1.0, 1.0, true, 1.0);
  CHECK_THROWS_AS(evaluate(slow, {1.05, 0.0}, 1e-12), AccuracyError);
}

TEST_CASE("alternating weights decrease from 1 to 0") {
  const auto w = alternating_weights(30);
  CHECK(w.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] <= w[i - 1]);
  CHECK(w.back() >= 0.0);
}
