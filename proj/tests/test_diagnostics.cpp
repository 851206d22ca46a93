#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dirlab/diagnostics.hpp"
#include "dirlab/error.hpp"

using namespace dirlab;

using Points = std::vector<std::pair<double, double>>;

TEST_CASE("convexity in alpha: hand-computed triples") {
  Points line;
  for (double a : {0.0, 0.25, 0.5, 1.0}) line.emplace_back(a, 1.0 - a);
  auto r = check_convexity_in_alpha(line, 0.0);
  CHECK(r.holds);
  CHECK(r.max_violation <= 1e-15);

  r = check_convexity_in_alpha(Points{{0, 1}, {1, 0.4}, {2, 0}}, 0.0);
  CHECK(r.holds);

  r = check_convexity_in_alpha(Points{{0, 0}, {1, 0.5}, {2, 0.6}}, 1e-12);
  CHECK_FALSE(r.holds);
  CHECK(r.max_violation == doctest::Approx(0.4));
  CHECK(r.worst_index == 1.0);
  CHECK(r.property == Shape::convex);

  CHECK_THROWS_AS(check_convexity_in_alpha(Points{{0, 0}, {1, 1}}, 0.0), DataError);
  CHECK_THROWS_AS(check_convexity_in_alpha(Points{{0, 0}, {1, 1}, {1, 2}}, 0.0), DataError);
}

TEST_CASE("concavity in k") {
  // sigma_L (1 - alpha / (k mu0)) with mu0 = sigma_L = 1/2, alpha = 1/4
  Points p;
  for (int k = 1; k <= 3; ++k) p.emplace_back(k, lindelof_form(k, 0.25, 0.5, 0.5));
  CHECK(p[0].second == doctest::Approx(0.25));
  CHECK(p[1].second == doctest::Approx(0.375));
  CHECK(p[2].second == doctest::Approx(0.416666666667));
  CHECK(check_concavity_in_k(p, 1e-12).holds);
  CHECK(check_concavity_in_k(Points{{1, 0.1}, {2, 0.2}, {3, 0.3}}, 0.0).holds);
  const auto bad = check_concavity_in_k(Points{{1, 0}, {2, 0.1}, {3, 0.3}}, 1e-12);
  CHECK_FALSE(bad.holds);
  CHECK(bad.max_violation == doctest::Approx(0.1));
}

TEST_CASE("convexity and concavity are dual under negation") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Points p, neg;
    double x = 0.0;
    for (int i = 0; i < 6; ++i) {
      x += 0.1 + std::abs(u(rng));
      const double y = u(rng);
      p.emplace_back(x, y);
      neg.emplace_back(x, -y);
    }
    const auto a = check_convexity_in_alpha(p, 1e-3);
    const auto b = check_concavity_in_k(neg, 1e-3);
    CHECK(a.holds == b.holds);
    CHECK(a.max_violation == doctest::Approx(b.max_violation));
  }
}

TEST_CASE("linear prediction and the Lindelof form") {
  const std::vector<double> s{0.25, 0.75};
  const auto pred = predict_linear_mu(0.5, 0.5, s);
  CHECK(pred[0].second == doctest::Approx(0.25));
  CHECK(pred[1].second == 0.0);
  const std::vector<double> s2{0.3};
  CHECK(predict_linear_mu(1.0, 1.0, s2)[0].second == doctest::Approx(0.7));

  CHECK(lindelof_form(1, 0.5, 0.5, 0.5) == 0.0);
  CHECK(lindelof_form(1, 0.25, 0.5, 0.5) == doctest::Approx(0.25));
  CHECK(std::abs(lindelof_form(1e6, 0.25, 0.5, 0.5) - 0.5) < 1e-6);
  CHECK_THROWS_AS(lindelof_form(1, 0.6, 0.5, 0.5), DomainError);
}

TEST_CASE("upper-bound check flags and strict witnesses") {
  auto make = [](double alpha, double value, double half) {
    AbscissaEstimate e;
    e.k = 1;
    e.alpha = alpha;
    e.value = value;
    e.bracket = {value - half, value + half};
    return e;
  };
  const double bound = lindelof_form(1, 0.2, 0.5, 0.5);
  std::vector<AbscissaEstimate> exact{make(0.2, bound, 0.0), make(0.1, lindelof_form(1, 0.1, 0.5, 0.5), 0.0)};
  auto r = upper_bound_check(exact, 0.5, 0.5, 1e-12);
  CHECK(r.flagged == 0);
  CHECK(r.strict == 0);
  std::vector<AbscissaEstimate> off{make(0.2, bound + 0.2, 0.025), make(0.2, bound - 0.2, 0.025)};
  r = upper_bound_check(off, 0.5, 0.5, 1e-12);
  CHECK(r.entries[0].flagged);
  CHECK(r.entries[1].strict);
  CHECK(r.flagged == 1);
  CHECK(r.strict == 1);
  std::vector<AbscissaEstimate> unweighted{make(0.0, 0.525, 0.025)};
  CHECK(upper_bound_check(unweighted, 0.5, 0.5, 1e-12).entries[0].bound == 0.5);
}

TEST_CASE("theorem chain ordinates and the interpolated inequality") {
  const auto c = make_theorem_chain(0.2, 0.3, 0.5, 0.5, 1, 3, 0.2, 0.5);
  CHECK(c.phi == doctest::Approx(0.6));
  CHECK(c.theta == doctest::Approx(0.4));
  CHECK(c.k == c.phi * c.l + (1.0 - c.phi) * c.m);
  CHECK(c.gamma == c.theta * c.alpha + (1.0 - c.theta) * c.beta);
  const std::vector<double> ks{1, 2, 3, 4, 5}, as{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto table = lindelof_table(ks, as, 0.5, 0.5);
  const auto check = check_theorem_chain(table, c, 1e-12);
  CHECK(check.holds);
  CHECK_FALSE(check.extrapolated);
  CHECK_THROWS_AS(make_theorem_chain(0.2, 0.7, 0.5, 0.5, 1, 3, 0.2, 0.5), DomainError);
}

TEST_CASE("interpolation is exact on Lindelof tables inside the grid") {
  const std::vector<double> ks{1, 2, 4}, as{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto table = lindelof_table(ks, as, 0.5, 0.5);
  bool ex = false;
  CHECK(interpolate_table(table, 2, 0.25, &ex) == doctest::Approx(lindelof_form(2, 0.25, 0.5, 0.5)));
  CHECK_FALSE(ex);
  interpolate_table(table, 6, 0.25, &ex);
  CHECK(ex);
}

TEST_CASE("pipeline on an exact table") {
  const std::vector<double> ks{1, 2, 3, 4, 5}, as{0.1, 0.2, 0.3, 0.4, 0.5};
  const double mu0 = 0.5, sigma_L = 0.5;
  auto table = lindelof_table(ks, as, mu0, sigma_L);
  const auto rep = theorem_pipeline(table, mu0, sigma_L);
  CHECK(rep.all_hold);
  CHECK(rep.verdict == "all checks hold; predicted μ linear");
  REQUIRE(rep.prediction);
  for (auto [s, m] : *rep.prediction) CHECK(std::abs(m - mu0 * std::max(0.0, 1.0 - s / sigma_L)) <= 1e-12);
  for (const auto& s : rep.concavity) CHECK(s.max_violation <= 1e-12);
  for (const auto& s : rep.convexity) CHECK(s.max_violation <= 1e-12);
  for (const auto& b : rep.ratio) {
    CHECK(b.monotone);
    REQUIRE(b.limit);
    CHECK(std::abs(*b.limit - b.upper) <= 1e-12);
    CHECK(std::abs(b.middle - b.upper) <= 1e-12);
    CHECK(b.upper == doctest::Approx(-1.0));
  }

  table[{3.0, 0.2}].value += 0.05;
  const auto bad = theorem_pipeline(table, mu0, sigma_L);
  CHECK_FALSE(bad.all_hold);
  CHECK_FALSE(bad.prediction);
  CHECK(bad.verdict.find("alpha=0.2") != std::string::npos);
  CHECK(bad.verdict.find("k=(") != std::string::npos);

  table.erase({2.0, 0.3});
  try {
    theorem_pipeline(table, mu0, sigma_L);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("(k=2, alpha=0.3)") != std::string::npos);
  }
}

TEST_CASE("pipeline refuses sequences that are too short") {
  const std::vector<double> ks{1, 2}, as{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(theorem_pipeline(lindelof_table(ks, as, 0.5, 0.5), 0.5, 0.5), DataError);
}

TEST_CASE("functional-equation spread") {
  std::vector<double> ts;
  for (double t = 10.0; t <= 1000.0; t += 2.5) ts.push_back(t);
  const auto half = functional_equation_gap(SeriesSpec::eta(), 0.5, ts, 0.5);
  CHECK(half.spread == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<double> wide;
  for (double t = 50.0; t <= 2000.0; t += 5.0) wide.push_back(t);
  const auto r = functional_equation_gap(SeriesSpec::eta(), 0.3, wide, 0.5);
  CHECK(std::isfinite(r.spread));
  CHECK(r.fraction_in_band >= 0.95);

  const auto chi = SeriesSpec::character(4, 1);
  CHECK(functional_equation_gap(chi, 0.5, ts, 0.5).spread == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(functional_equation_gap(SeriesSpec::polynomial({1.0, 1.0}), 0.3, ts, 0.5), UnsupportedError);
  CHECK_THROWS_AS(functional_equation_gap(SeriesSpec::character(5, 1), 0.3, ts, 0.5), UnsupportedError);
}
