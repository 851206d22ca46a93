#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "cache.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "dirlab/abscissa.hpp"
#include "dirlab/diagnostics.hpp"
#include "dirlab/error.hpp"
#include "dirlab/moments.hpp"
#include "dirlab/riesz.hpp"
#include "dirlab/series.hpp"

namespace dirlab::app {

namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kEvalTol = 1e-10;
constexpr double kParsevalAbsTol = 1e-3;
constexpr double kParsevalRelTol = 0.01;
constexpr double kMeanValueRelTol = 0.05;
constexpr double kSigma1Lo = 0.45, kSigma1Hi = 0.55;
constexpr double kExactTol = 1e-12;
constexpr double kPowerLawTol = 1e-6;
constexpr double kProfileTol = 0.02;
constexpr double kSigmaLTol = 0.05;
constexpr double kGrowthFloor = 0.1;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Euler transform of the partial sums of sum (-1)^(n-1) n^{-s}, in long double.
long double eta_direct(long double s) {
  constexpr int N = 64;
  std::vector<long double> S(N);
  long double acc = 0.0L;
  for (int n = 1; n <= N; ++n) {
    acc += ((n % 2) ? 1.0L : -1.0L) * std::pow(static_cast<long double>(n), -s);
    S[n - 1] = acc;
  }
  for (int len = N; len > 1; --len) {
    for (int i = 0; i + 1 < len; ++i) S[i] = 0.5L * (S[i] + S[i + 1]);
  }
  return S[0];
}

struct Shared {
  SeriesSpec eta = SeriesSpec::eta();
  std::vector<double> sigma_grid = arithmetic_grid(0.05, 0.95, 0.05);
  std::vector<double> T_grid = geometric_grid(500.0, 5000.0, 10);
  MomentSampler sampler{SeriesSpec::eta()};
  std::optional<AbscissaEstimate> sigma1;
  std::map<double, AbscissaEstimate> sigma1_alpha;

  const AbscissaEstimate& unweighted() {
    if (!sigma1) sigma1 = estimate_sigma_k(sampler, 1, sigma_grid, T_grid);
    return *sigma1;
  }
  const AbscissaEstimate& weighted(double alpha) {
    auto it = sigma1_alpha.find(alpha);
    if (it == sigma1_alpha.end()) {
      it = sigma1_alpha.emplace(alpha, estimate_sigma_k_alpha(sampler, 1, alpha, sigma_grid, T_grid)).first;
    }
    return it->second;
  }
};

CriterionResult c1_evaluation() {
  CriterionResult r{1, "evaluation accuracy", true, "", 0.0, 1.0};
  const SeriesSpec eta = SeriesSpec::eta();
  const struct {
    double s;
    long double closed;
  } cases[] = {{1.0, std::numbers::ln2_v<long double>},
               {0.0, 0.5L},
               {2.0, std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 12.0L}};
  std::ostringstream d;
  for (const auto& c : cases) {
    const double fast = evaluate(eta, {c.s, 0.0}).real();
    const long double direct = eta_direct(c.s);
    const double err = std::abs(static_cast<long double>(fast) - c.closed);
    const double err_direct = std::abs(static_cast<long double>(fast) - direct);
    const double oracle_gap = std::abs(direct - c.closed);
    r.pass = r.pass && err < kEvalTol && err_direct < kEvalTol && oracle_gap < 1e-15;
    d << fmt("eta(%g) err %.2e (vs direct %.2e); ", c.s, err, err_direct);
  }
  r.detail = d.str();
  return r;
}

CriterionResult c2_parseval() {
  CriterionResult r{2, "parseval identity", true, "", 0.0, 30.0};
  std::ostringstream d;
  const SeriesSpec one = SeriesSpec::polynomial({1.0});
  for (double s : {0.5, 1.0, 2.0}) {
    const auto p = parseval_report(one, 0.5, s, 1e4, 1e5);
    const double exact = 1.0 / (2.0 * s);
    const bool ok = p.gap < kParsevalAbsTol && std::abs(p.t_side - exact) < kParsevalAbsTol &&
                    std::abs(p.x_side - exact) < kParsevalAbsTol;
    r.pass = r.pass && ok;
    d << fmt("single term sigma=%g gap %.2e; ", s, p.gap);
  }
  const SeriesSpec two = SeriesSpec::polynomial({1.0, -1.0});
  const auto p = parseval_report(two, 0.5, 0.5, 1e4, 1e5);
  const double rel = p.gap / 0.5;
  r.pass = r.pass && rel < kParsevalRelTol && std::abs(p.x_side - 0.5) < 1e-9;
  d << fmt("two terms x-side %.10f rel gap %.2e", p.x_side, rel);
  r.detail = d.str();
  return r;
}

CriterionResult c3_mean_value() {
  CriterionResult r{3, "mean value theorem", false, "", 0.0, 60.0};
  const SeriesSpec eta = SeriesSpec::eta();
  const double T = 5000.0;
  const auto m = mean_square_moment(eta, 1, 0.75, T);
  const auto target = mean_value_target(eta, 1, 0.75);
  const double avg = m.value / (2.0 * T);
  const double rel = std::abs(avg - target.value) / target.value;
  r.pass = rel < kMeanValueRelTol;
  r.detail = fmt("average %.6f target %.6f (+tail <= %.2e) rel %.3f%%", avg, target.value, target.tail_bound,
                 100.0 * rel);
  return r;
}

CriterionResult c4_abscissa(Shared& sh) {
  CriterionResult r{4, "abscissa recovery", false, "", 0.0, 180.0};
  const auto& e = sh.unweighted();
  const bool bracket_ok = !e.clamped && e.fit_lo.exponent > 1.1 && e.fit_hi.exponent <= 1.1 &&
                          e.bracket.first < e.value && e.value < e.bracket.second;
  r.pass = bracket_ok && e.value >= kSigma1Lo && e.value <= kSigma1Hi;
  r.detail = fmt("sigma_1 = %.3f in [%.2f, %.2f], exponents %.3f / %.3f", e.value, e.bracket.first, e.bracket.second,
                 e.fit_lo.exponent, e.fit_hi.exponent);
  return r;
}

CriterionResult c5_convexity(Shared& sh) {
  CriterionResult r{5, "convexity in alpha", false, "", 0.0, 0.0};
  std::vector<std::pair<double, double>> pts;
  std::vector<double> widths;
  std::ostringstream d;
  for (double a : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    const auto& e = sh.weighted(a);
    pts.emplace_back(a, e.value);
    widths.push_back(e.width());
    d << fmt("%.3f ", e.value);
  }
  double tol = 0.0;
  for (std::size_t i = 0; i + 2 < widths.size(); ++i) tol = std::max(tol, widths[i] + widths[i + 1] + widths[i + 2]);
  const auto rep = check_convexity_in_alpha(pts, tol);
  r.pass = rep.holds;
  r.detail = "sigma_1(alpha) = " + d.str() + fmt("violation %.3g tol %.3g", rep.max_violation, tol);
  return r;
}

CriterionResult c6_holder(Shared& sh) {
  CriterionResult r{6, "monotonicity in k", false, "", 0.0, 0.0};
  const auto& one = sh.weighted(0.1);
  const auto two = estimate_sigma_k_alpha(sh.sampler, 2, 0.1, sh.sigma_grid, sh.T_grid);
  const double slack = one.half_width() + two.half_width();
  r.pass = one.value <= two.value + slack;
  r.detail = fmt("sigma_1(0.1) = %.3f, sigma_2(0.1) = %.3f, slack %.3f", one.value, two.value, slack);
  return r;
}

CriterionResult c7_exact_pipeline() {
  CriterionResult r{7, "exact theorem pipeline", false, "", 0.0, 1.0};
  const double mu0 = 0.5, sigma_L = 0.5;
  const std::vector<double> ks{1, 2, 3, 4, 5}, alphas{0.1, 0.2, 0.3, 0.4, 0.5};
  AbscissaTable table = lindelof_table(ks, alphas, mu0, sigma_L);
  PipelineOptions opts;
  opts.sigma_grid = arithmetic_grid(0.0, 1.0, 0.05);
  const auto rep = theorem_pipeline(table, mu0, sigma_L, opts);
  double violation = 0.0;
  for (const auto& s : rep.concavity) violation = std::max(violation, s.max_violation);
  for (const auto& s : rep.convexity) violation = std::max(violation, s.max_violation);
  double pred_err = rep.prediction ? 0.0 : INFINITY;
  if (rep.prediction) {
    for (auto [s, m] : *rep.prediction) {
      const double expect = s <= sigma_L ? mu0 * (1.0 - s / sigma_L) : 0.0;
      pred_err = std::max(pred_err, std::abs(m - expect));
    }
  }
  double ratio_err = rep.ratio.empty() ? INFINITY : 0.0;
  bool monotone = true;
  for (const auto& b : rep.ratio) {
    monotone = monotone && b.monotone;
    ratio_err = std::max(ratio_err, std::abs(b.middle - b.upper));
    if (b.limit) ratio_err = std::max(ratio_err, std::abs(*b.limit - b.upper));
    else ratio_err = INFINITY;
  }

  table[{3.0, 0.2}].value += 0.05;
  const auto bad = theorem_pipeline(table, mu0, sigma_L, opts);
  const bool named = bad.verdict.find("refused") != std::string::npos && bad.verdict.find("k=(") != std::string::npos;
  r.pass = rep.all_hold && violation <= kExactTol && pred_err <= kExactTol && ratio_err <= kExactTol && monotone &&
           !bad.all_hold && !bad.prediction && named;
  r.detail = fmt("violation %.2e, prediction err %.2e, bracket err %.2e; injected: ", violation, pred_err, ratio_err) +
             bad.verdict;
  return r;
}

CriterionResult c8_growth() {
  CriterionResult r{8, "growth-exponent regression", true, "", 0.0, 0.0};
  const auto Ts = geometric_grid(10.0, 1e4, 20);
  double worst = 0.0;
  for (double e : {-0.5, 0.0, 0.7, 1.3, 2.0}) {
    std::vector<std::pair<double, double>> pts;
    std::vector<MomentSample> samples;
    for (double T : Ts) {
      pts.emplace_back(T, 3.7 * std::pow(T, e));
      samples.push_back({1, 0.5, std::nullopt, T, 3.7 * std::pow(T, e), 0.0});
    }
    worst = std::max(worst, std::abs(growth_exponent(pts).exponent - e));
    if (e > 0.0) worst = std::max(worst, std::abs(increment_growth_exponent(samples).exponent - e));
  }
  const ModulusFn synthetic = [](double sigma, std::span<const double> ts) {
    std::vector<double> v;
    for (double t : ts) v.push_back(std::pow(t, 0.3 * (1.0 - sigma / 0.6)));
    return v;
  };
  const auto prof = order_function_profile(synthetic, arithmetic_grid(0.05, 0.95, 0.05), arithmetic_grid(1.0, 1e4, 1.0));
  double profile_err = 0.0;
  for (const auto& p : prof.grid) {
    profile_err = std::max(profile_err, std::abs(p.mu_hat - std::max(0.0, 0.3 * (1.0 - p.sigma / 0.6))));
  }
  r.pass = worst <= kPowerLawTol && profile_err <= kProfileTol && std::abs(prof.sigma_L_hat - 0.6) <= kSigmaLTol;
  r.detail = fmt("power-law err %.2e; profile err %.2e; sigma_L_hat %.3f", worst, profile_err, prof.sigma_L_hat);
  return r;
}

CriterionResult c9_kernel_growth(Shared& sh) {
  CriterionResult r{9, "summability vs moment abscissa", true, "", 0.0, 0.0};
  const auto xs = geometric_grid(10.0, 1e5, 3000);
  std::ostringstream d;
  int compared = 0;
  for (double a : {0.5, 1.0}) {
    const auto g = g_growth_exponent(sh.eta, 1, a, xs);
    auto provider = [&](double s, int k, std::optional<double> al, std::span<const double> Ts) {
      return sh.sampler(s, k, al, Ts);
    };
    const auto m = estimate_abscissa(provider, 1, a, sh.sigma_grid, sh.T_grid);
    d << fmt("alpha=%g: G growth %.3f +- %.3f, moments %.3f +- %.3f; ", a, g.sigma_alpha, g.uncertainty(), m.value,
             m.half_width());
    if (g.sigma_alpha > kGrowthFloor && m.value > kGrowthFloor) {
      ++compared;
      r.pass = r.pass && std::abs(g.sigma_alpha - m.value) <= g.uncertainty() + m.half_width();
    }
  }
  if (compared == 0) d << "no case with both above 0.1 (vacuous)";
  r.detail = d.str();
  return r;
}

CriterionResult c10_determinism(const fs::path& scratch) {
  CriterionResult r{10, "warm-cache determinism", true, "", 0.0, 0.0};
  std::error_code ec;
  fs::remove_all(scratch, ec);
  fs::create_directories(scratch);
  const Cache cache(scratch);

  const json configs[] = {
      {{"series", "eta"}, {"k", 1}, {"sigma", {0.6, 0.75}}, {"T", "geom:100:1000:5"}},
      {{"series", "eta"}, {"k", 1}, {"alpha", 0.2}, {"unweighted", true}, {"sigma", "0.3:0.8:0.1"},
       {"T", "geom:200:2000:6"}},
      {{"series", "eta"}, {"sigma", {0.25, 0.5, 0.75}}, {"t", "10:2000:0.25"}},
  };
  const char* commands[] = {"moments", "abscissa", "mu"};
  std::ostringstream d;
  for (int i = 0; i < 3; ++i) {
    const auto cfg = ExperimentConfig::from_json(commands[i], configs[i]);
    const std::string plain = run_command(cfg, nullptr).csv;
    const std::string cold = run_command(cfg, &cache).csv;
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(scratch)) ++files;
    const std::string warm = run_command(cfg, &cache).csv;
    std::size_t files_after = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(scratch)) ++files_after;
    const bool same = plain == cold && cold == warm && files == files_after;
    r.pass = r.pass && same;
    d << commands[i] << (same ? " identical" : " DIFFERS") << fmt(" (%zu bytes); ", warm.size());
  }
  fs::remove_all(scratch, ec);
  r.detail = d.str();
  return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::string limit = r.limit_seconds > 0.0 ? fmt(", limit %.0f s", r.limit_seconds) : std::string();
  return fmt("[%s] %2d %s: ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str()) + r.detail +
         fmt(" (%.2f s%s)", r.seconds, limit.c_str());
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  Shared shared;
  fs::path scratch = opts.scratch;
  if (scratch.empty()) scratch = fs::temp_directory_path() / ("dirlab-accept-" + std::to_string(::getpid()));

  const std::function<CriterionResult()> criteria[] = {
      c1_evaluation,
      c2_parseval,
      c3_mean_value,
      [&] { return c4_abscissa(shared); },
      [&] { return c5_convexity(shared); },
      [&] { return c6_holder(shared); },
      c7_exact_pipeline,
      c8_growth,
      [&] { return c9_kernel_growth(shared); },
      [&] { return c10_determinism(scratch); },
  };
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!opts.only.empty() && !opts.only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = criteria[id - 1]();
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.limit_seconds > 0.0 && r.seconds > r.limit_seconds) {
      r.pass = false;
      r.detail += "; over the runtime limit";
    }
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dirlab::app
