#include "dirlab/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kLogBorweinRate = std::log(3.0 + std::sqrt(8.0));

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_integral(cplx c) {
  return c.imag() == 0.0 && std::isfinite(c.real()) && c.real() == std::round(c.real()) &&
         std::abs(c.real()) < 9.0e15;
}

std::size_t default_budget(const SeriesSpec& series, double t) {
  const auto base = static_cast<std::size_t>(std::ceil(10.0 * (std::abs(t) + 10.0)));
  switch (series.kind()) {
    case SeriesKind::eta: return base;
    case SeriesKind::character: return base * series.character_ptr()->modulus();
    case SeriesKind::polynomial: return std::numeric_limits<std::size_t>::max();
    case SeriesKind::custom: return std::size_t{1} << 22;
  }
  return base;
}

// log of the Borwein error bound 3 (1 + 2|t|) / (|Gamma(s)| (3 + sqrt 8)^n), without the n term.
double eta_bound_log_prefactor(ComplexPoint s) {
  const double inv_gamma = -log_gamma(s.value()).real();
  return std::log(3.0 * (1.0 + 2.0 * std::abs(s.t))) + std::max(inv_gamma, 0.0);
}

double eta_truncation_bound(ComplexPoint s, std::size_t n) {
  return std::exp(eta_bound_log_prefactor(s) - static_cast<double>(n) * kLogBorweinRate);
}

// Evaluates sum_k amp_k exp(-i t log_k) at t_j = t0 + j h for j < count, by
// phase recurrence across j. Loops run over k innermost so they vectorize.
void phase_kernel(std::span<const double> amp_re, std::span<const double> amp_im,
                  std::span<const double> logs, double t0, double h, std::size_t count,
                  std::span<cplx> out) {
  const std::size_t n = logs.size();
  std::vector<double> zr(n), zi(n), rr(n), ri(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = -t0 * logs[k];
    const double c = std::cos(ph), s = std::sin(ph);
    zr[k] = amp_re[k] * c - amp_im[k] * s;
    zi[k] = amp_re[k] * s + amp_im[k] * c;
    rr[k] = std::cos(-h * logs[k]);
    ri[k] = std::sin(-h * logs[k]);
  }
  for (std::size_t j = 0; j < count; ++j) {
    std::array<double, 4> sr{}, si{};
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
      for (std::size_t u = 0; u < 4; ++u) {
        sr[u] += zr[k + u];
        si[u] += zi[k + u];
      }
    }
    for (; k < n; ++k) {
      sr[0] += zr[k];
      si[0] += zi[k];
    }
    out[j] = {(sr[0] + sr[1]) + (sr[2] + sr[3]), (si[0] + si[1]) + (si[2] + si[3])};
    if (j + 1 == count) break;
    for (std::size_t m = 0; m < n; ++m) {
      const double a = zr[m] * rr[m] - zi[m] * ri[m];
      const double b = zr[m] * ri[m] + zi[m] * rr[m];
      zr[m] = a;
      zi[m] = b;
    }
  }
}

EvalResult evaluate_eta(ComplexPoint s, const EvalOptions& opts, std::size_t budget) {
  std::size_t n = eta_terms_for(s, opts.tol);
  const bool short_budget = n > budget;
  if (short_budget) n = std::max<std::size_t>(budget, 1);
  const auto w = alternating_weights(n);
  cplx sum{};
  double mag = 0.0;
  const cplx sv = s.value();
  for (std::size_t k = 0; k < n; ++k) {
    const double lg = std::log(static_cast<double>(k + 1));
    const cplx term = w[k] * std::exp(-sv * lg);
    mag += std::abs(term);
    sum += (k % 2 == 0) ? term : -term;
  }
  EvalResult r{sum, eta_truncation_bound(s, n) + 4.0 * kEps * mag * std::sqrt(static_cast<double>(n)), n};
  if (short_budget && r.error_bound > opts.tol) {
    throw AccuracyError("eta: tolerance unattainable within term budget", r.value, r.error_bound);
  }
  return r;
}

cplx expm1_over_z(cplx z) {
  if (std::abs(z) < 0.1) {
    // 1 + z/2! + z^2/3! + ...
    cplx term = 1.0, sum = 1.0;
    for (int j = 2; j < 16; ++j) {
      term *= z / static_cast<double>(j);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// B_{2j} / (2j)! for j = 1..15.
const std::array<double, 15>& bernoulli_over_factorial() {
  static const std::array<double, 15> table = [] {
    constexpr std::array<double, 15> b2j = {
        1.0 / 6,           -1.0 / 30,          1.0 / 42,           -1.0 / 30,
        5.0 / 66,          -691.0 / 2730,      7.0 / 6,            -3617.0 / 510,
        43867.0 / 798,     -174611.0 / 330,    854513.0 / 138,     -236364091.0 / 2730,
        8553103.0 / 6,     -23749461029.0 / 870, 8615841276005.0 / 14322};
    std::array<double, 15> out{};
    double fact = 1.0;
    for (int j = 1; j <= 15; ++j) {
      fact *= static_cast<double>(2 * j - 1) * static_cast<double>(2 * j);
      out[j - 1] = b2j[j - 1] / fact;
    }
    return out;
  }();
  return table;
}

EvalResult evaluate_character(const SeriesSpec& series, ComplexPoint s, const EvalOptions& opts,
                              std::size_t budget) {
  const DirichletCharacter& chi = *series.character_ptr();
  const std::uint32_t q = chi.modulus();
  const cplx sv = s.value();
  if (chi.is_principal() && sv == cplx{1.0, 0.0}) {
    throw DomainError("principal character L-function has a pole at s = 1");
  }
  auto N = static_cast<std::size_t>(std::ceil((std::abs(sv) + 30.0) / std::numbers::pi));
  N = std::max<std::size_t>(N, 10);
  bool short_budget = false;
  if (N * q > budget) {
    N = std::max<std::size_t>(budget / q, 1);
    short_budget = true;
  }

  cplx head{};
  double mag = 0.0;
  for (std::size_t n = 1; n <= N * q; ++n) {
    const cplx c = chi(n);
    if (c == cplx{}) continue;
    const cplx term = c * std::exp(-sv * std::log(static_cast<double>(n)));
    mag += std::abs(term);
    head += term;
  }

  const auto& bf = bernoulli_over_factorial();
  const cplx q_pow = std::exp(-sv * std::log(static_cast<double>(q)));
  cplx tail{};
  double bound = 0.0;
  for (std::uint32_t a = 1; a <= q; ++a) {
    const cplx c = chi(a);
    if (c == cplx{}) continue;
    const double y = static_cast<double>(N) + static_cast<double>(a) / q;
    const double ly = std::log(y);
    const cplx y_ms = std::exp(-sv * ly);  // y^{-s}
    // ((y^{1-s} - 1) / (s - 1)); the 1/(s-1) pieces cancel over a nonprincipal group.
    cplx t_a = -ly * expm1_over_z((1.0 - sv) * ly) + 0.5 * y_ms;
    cplx rising = sv;                      // s (s+1) ... (s+2j-2)
    cplx ypow = y_ms / y;                  // y^{-s-2j+1} at j = 1
    double last = 0.0;
    for (int j = 1; j <= 15; ++j) {
      const cplx term = bf[j - 1] * rising * ypow;
      t_a += term;
      last = std::abs(term);
      if (last < opts.tol * 1e-3) break;
      rising *= (sv + static_cast<double>(2 * j - 1)) * (sv + static_cast<double>(2 * j));
      ypow /= y * y;
    }
    tail += c * t_a;
    bound += last;
  }
  tail *= q_pow;
  if (chi.is_principal()) tail += q_pow * static_cast<double>(chi.group_order()) / (sv - 1.0);
  bound *= std::abs(q_pow);

  EvalResult r{head + tail, bound + 4.0 * kEps * mag * std::sqrt(static_cast<double>(N * q)), N * q};
  if (r.error_bound > opts.tol && short_budget) {
    throw AccuracyError("character: tolerance unattainable within term budget", r.value, r.error_bound);
  }
  return r;
}

EvalResult evaluate_polynomial(const SeriesSpec& series, ComplexPoint s) {
  const auto deg = *series.degree();
  cplx sum{};
  double mag = 0.0;
  const cplx sv = s.value();
  for (std::uint64_t n = 1; n <= deg; ++n) {
    const cplx c = series.coefficient(n);
    if (c == cplx{}) continue;
    const cplx term = c * std::exp(-sv * std::log(static_cast<double>(n)));
    mag += std::abs(term);
    sum += term;
  }
  return {sum, 4.0 * kEps * mag * std::max(1.0, std::sqrt(static_cast<double>(deg))),
          static_cast<std::size_t>(deg)};
}

// Order-1 Riesz means R(x) = sum_{n<=x} (1 - n/x) c_n n^{-s}; two cutoffs x, 2x are
// combined as 2 R(2x) - R(x), which removes the 1/x bias term.
EvalResult evaluate_custom(const SeriesSpec& series, ComplexPoint s, const EvalOptions& opts,
                           std::size_t budget) {
  if (!(s.sigma > series.sigma_c())) {
    throw DomainError("custom stream evaluated at sigma <= sigma_c");
  }
  const cplx sv = s.value();
  std::size_t done = 0;
  cplx s0{}, s1{};
  double mag = 0.0;
  auto advance = [&](std::size_t upto) {
    for (std::size_t n = done + 1; n <= upto; ++n) {
      const cplx c = series.coefficient(n);
      if (c == cplx{}) continue;
      const double dn = static_cast<double>(n);
      const cplx term = c * std::exp(-sv * std::log(dn));
      mag += std::abs(term);
      s0 += term;
      s1 += dn * term;
    }
    done = upto;
  };
  auto riesz = [&](std::size_t x) {
    advance(x);
    return s0 - s1 / static_cast<double>(x);
  };

  std::size_t x = 64;
  while (x < 8 * (static_cast<std::size_t>(std::abs(s.t)) + 1)) x *= 2;
  x = std::min(x, std::max<std::size_t>(budget / 4, 1));
  cplx r_prev = riesz(x);
  cplx r_cur = riesz(2 * x);
  cplx e_prev = 2.0 * r_cur - r_prev;
  double err = std::numeric_limits<double>::infinity();
  cplx best = e_prev;
  while (4 * x <= budget) {
    x *= 2;
    r_prev = r_cur;
    r_cur = riesz(2 * x);
    const cplx e_cur = 2.0 * r_cur - r_prev;
    err = std::abs(e_cur - e_prev) + 4.0 * kEps * mag;
    best = e_cur;
    e_prev = e_cur;
    if (err <= opts.tol) return {best, err, done};
  }
  throw AccuracyError("custom stream: tolerance unattainable within term budget", best, err);
}

}  // namespace

// ---------------------------------------------------------------- SeriesSpec

SeriesSpec SeriesSpec::eta() {
  SeriesSpec s;
  s.kind_ = SeriesKind::eta;
  s.sigma_c_ = 0.0;
  s.sigma_a_ = 1.0;
  s.mu0_hint_ = 0.5;
  s.sigma_L_hint_ = 0.5;
  s.descriptor_ = "eta";
  s.bound_ = 1.0;
  return s;
}

SeriesSpec SeriesSpec::character(std::uint32_t modulus, std::uint32_t index) {
  SeriesSpec s;
  s.kind_ = SeriesKind::character;
  s.character_ = std::make_shared<const DirichletCharacter>(modulus, index);
  s.descriptor_ = "chi:" + std::to_string(modulus) + ":" + std::to_string(index);
  s.real_ = s.character_->is_real();
  s.integer_ = s.real_;
  s.bound_ = 1.0;
  if (s.character_->is_principal()) {
    s.sigma_c_ = 1.0;
    s.sigma_a_ = 1.0;
  } else {
    s.sigma_c_ = 0.0;
    s.sigma_a_ = 1.0;
    s.mu0_hint_ = 0.5;
    s.sigma_L_hint_ = 0.5;
  }
  return s;
}

SeriesSpec SeriesSpec::polynomial(std::vector<cplx> coefficients) {
  while (!coefficients.empty() && coefficients.back() == cplx{}) coefficients.pop_back();
  SeriesSpec s;
  s.kind_ = SeriesKind::polynomial;
  s.sigma_c_ = 0.0;
  s.sigma_a_ = 0.0;
  std::string d = "poly:";
  double bound = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const cplx c = coefficients[i];
    if (i) d += ",";
    d += c.imag() == 0.0 ? format_real(c.real())
                         : "(" + format_real(c.real()) + "," + format_real(c.imag()) + ")";
    if (c.imag() != 0.0) s.real_ = false;
    if (!is_integral(c)) s.integer_ = false;
    bound = std::max(bound, std::abs(c));
  }
  s.descriptor_ = d;
  s.bound_ = bound;
  s.poly_ = std::make_shared<const std::vector<cplx>>(std::move(coefficients));
  return s;
}

SeriesSpec SeriesSpec::custom(std::string name, CoefficientFn fn, double sigma_c, double sigma_a,
                              bool real_coefficients, std::optional<double> coefficient_bound) {
  if (!(0.0 <= sigma_c && sigma_c <= sigma_a)) {
    throw ConfigError("custom series: need 0 <= sigma_c <= sigma_a");
  }
  SeriesSpec s;
  s.kind_ = SeriesKind::custom;
  s.sigma_c_ = sigma_c;
  s.sigma_a_ = sigma_a;
  s.descriptor_ = "custom:" + name;
  s.real_ = real_coefficients;
  s.integer_ = false;
  s.bound_ = coefficient_bound;
  s.custom_ = std::make_shared<const CoefficientFn>(std::move(fn));
  return s;
}

SeriesSpec SeriesSpec::with_hints(std::optional<double> mu0, std::optional<double> sigma_L) const {
  SeriesSpec s = *this;
  s.mu0_hint_ = mu0;
  s.sigma_L_hint_ = sigma_L;
  return s;
}

SeriesSpec SeriesSpec::with_abscissae(double sigma_c, double sigma_a) const {
  if (!(0.0 <= sigma_c && sigma_c <= sigma_a)) throw ConfigError("need 0 <= sigma_c <= sigma_a");
  SeriesSpec s = *this;
  s.sigma_c_ = sigma_c;
  s.sigma_a_ = sigma_a;
  return s;
}

cplx SeriesSpec::coefficient(std::uint64_t n) const {
  switch (kind_) {
    case SeriesKind::eta: return (n % 2 == 1) ? 1.0 : -1.0;
    case SeriesKind::character: return (*character_)(n);
    case SeriesKind::polynomial: return n >= 1 && n <= poly_->size() ? (*poly_)[n - 1] : cplx{};
    case SeriesKind::custom: return (*custom_)(n);
  }
  return {};
}

std::optional<std::uint64_t> SeriesSpec::degree() const {
  if (kind_ != SeriesKind::polynomial) return std::nullopt;
  return poly_->size();
}

SeriesSpec parse_series(const std::string& text) {
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError("series '" + text + "': " + why);
  };
  auto parse_uint = [&](const std::string& field) -> std::uint64_t {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos) {
      throw fail("expected a nonnegative integer, got '" + field + "'");
    }
    return std::stoull(field);
  };
  if (text == "eta") return SeriesSpec::eta();
  if (text.rfind("chi:", 0) == 0) {
    const auto rest = text.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw fail("expected chi:<modulus>:<index>");
    const auto q = parse_uint(rest.substr(0, colon));
    const auto idx = parse_uint(rest.substr(colon + 1));
    if (q == 0 || q > 1000000) throw fail("modulus out of range");
    return SeriesSpec::character(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(idx));
  }
  if (text.rfind("poly:", 0) == 0) {
    std::vector<cplx> coeffs;
    std::stringstream ss(text.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw fail("bad coefficient '" + item + "'");
        coeffs.emplace_back(v, 0.0);
      } catch (const std::invalid_argument&) {
        throw fail("bad coefficient '" + item + "'");
      } catch (const std::out_of_range&) {
        throw fail("coefficient out of range '" + item + "'");
      }
    }
    if (coeffs.empty()) throw fail("empty coefficient list");
    return SeriesSpec::polynomial(std::move(coeffs));
  }
  if (text.rfind("ones:", 0) == 0) {
    const auto N = parse_uint(text.substr(5));
    if (N == 0) throw fail("ones:N needs N >= 1");
    return SeriesSpec::custom(
        "ones:" + std::to_string(N), [N](std::uint64_t n) { return n <= N ? cplx{1.0} : cplx{}; }, 0.0,
        0.0, true, 1.0);
  }
  throw fail("unknown series kind (expected eta, chi:q:i, poly:c1,c2,..., ones:N)");
}

// ------------------------------------------------------------- coefficients

std::vector<cplx> coefficients(const SeriesSpec& series, std::size_t n_max) {
  if (n_max < 1) throw DomainError("coefficients: n_max must be >= 1");
  std::vector<cplx> out(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out[n - 1] = series.coefficient(n);
  return out;
}

std::vector<cplx> dirichlet_convolve(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t N = std::min(a.size(), b.size());
  std::vector<cplx> out(N);
  for (std::size_t i = 1; i <= N; ++i) {
    const cplx x = a[i - 1];
    if (x == cplx{}) continue;
    for (std::size_t j = 1; i * j <= N; ++j) out[i * j - 1] += x * b[j - 1];
  }
  return out;
}

std::vector<std::int64_t> dirichlet_convolve_exact(std::span<const std::int64_t> a,
                                                   std::span<const std::int64_t> b) {
  const std::size_t N = std::min(a.size(), b.size());
  std::vector<std::int64_t> out(N, 0);
  for (std::size_t i = 1; i <= N; ++i) {
    const std::int64_t x = a[i - 1];
    if (x == 0) continue;
    for (std::size_t j = 1; i * j <= N; ++j) {
      std::int64_t prod = 0;
      if (__builtin_mul_overflow(x, b[j - 1], &prod) ||
          __builtin_add_overflow(out[i * j - 1], prod, &out[i * j - 1])) {
        throw OverflowError("Dirichlet convolution overflowed 64-bit integers at n = " +
                            std::to_string(i * j));
      }
    }
  }
  return out;
}

PowerCoefficients power_coefficients(const SeriesSpec& series, int k, std::size_t n_max) {
  if (k < 1) throw DomainError("power_coefficients: k must be >= 1");
  if (n_max < 1) throw DomainError("power_coefficients: n_max must be >= 1");
  const auto base = coefficients(series, n_max);
  PowerCoefficients out;
  out.k = k;
  out.n_max = n_max;
  const bool exact = std::all_of(base.begin(), base.end(), is_integral);
  if (exact) {
    std::vector<std::int64_t> b(n_max);
    for (std::size_t i = 0; i < n_max; ++i) b[i] = static_cast<std::int64_t>(base[i].real());
    std::vector<std::int64_t> acc = b;
    for (int step = 1; step < k; ++step) acc = dirichlet_convolve_exact(acc, b);
    out.table.resize(n_max);
    for (std::size_t i = 0; i < n_max; ++i) out.table[i] = static_cast<double>(acc[i]);
    out.exact = std::move(acc);
  } else {
    std::vector<cplx> acc = base;
    for (int step = 1; step < k; ++step) acc = dirichlet_convolve(acc, base);
    out.table = std::move(acc);
  }
  return out;
}

// ---------------------------------------------------------------- evaluation

std::vector<double> alternating_weights(std::size_t n) {
  // a_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), a_0 = 1; d_k = sum_{i<=k} a_i.
  std::vector<double> log_a(n + 1);
  log_a[0] = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    log_a[i + 1] = log_a[i] + std::log(4.0 * (dn + di) * (dn - di)) -
                   std::log((2.0 * di + 1.0) * (2.0 * di + 2.0));
  }
  const double top = *std::max_element(log_a.begin(), log_a.end());
  std::vector<double> suffix(n + 2, 0.0);
  for (std::size_t i = n + 1; i-- > 0;) suffix[i] = suffix[i + 1] + std::exp(log_a[i] - top);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = suffix[k + 1] / suffix[0];
  return w;
}

std::size_t eta_terms_for(ComplexPoint s, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  // Keep the truncation bound an order of magnitude under tol; rounding is separate.
  const double need = (eta_bound_log_prefactor(s) - std::log(0.1 * tol)) / kLogBorweinRate;
  const auto floor_terms = static_cast<std::size_t>(std::ceil(std::log(30.0 / tol) / kLogBorweinRate)) + 4;
  return std::max<std::size_t>(floor_terms, static_cast<std::size_t>(std::ceil(std::max(need, 1.0))));
}

EvalResult evaluate_detailed(const SeriesSpec& series, ComplexPoint s, const EvalOptions& opts) {
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t)) throw DomainError("evaluate: non-finite point");
  if (!(opts.tol > 0.0)) throw DomainError("evaluate: tolerance must be positive");
  const std::size_t budget = opts.term_budget.value_or(default_budget(series, s.t));
  switch (series.kind()) {
    case SeriesKind::eta: return evaluate_eta(s, opts, budget);
    case SeriesKind::character: return evaluate_character(series, s, opts, budget);
    case SeriesKind::polynomial: return evaluate_polynomial(series, s);
    case SeriesKind::custom: return evaluate_custom(series, s, opts, budget);
  }
  return {};
}

cplx evaluate(const SeriesSpec& series, ComplexPoint s, double tol) {
  return evaluate_detailed(series, s, EvalOptions{tol, std::nullopt}).value;
}

cplx evaluate_power(const SeriesSpec& series, int k, ComplexPoint s, double tol) {
  if (k < 1) throw DomainError("evaluate_power: k must be >= 1");
  double base_tol = tol / k;
  cplx v = evaluate(series, s, base_tol);
  // |f^k - g^k| <= k (|g| + e)^{k-1} e
  const double needed = tol / (k * std::pow(std::abs(v) + base_tol, k - 1));
  if (needed < base_tol) v = evaluate(series, s, needed);
  cplx p = 1.0;
  for (int i = 0; i < k; ++i) p *= v;
  return p;
}

std::vector<cplx> evaluate_line(const SeriesSpec& series, double sigma, double t0, double step,
                                std::size_t count, double tol) {
  std::vector<cplx> out(count);
  if (count == 0) return out;
  const bool batched = series.kind() == SeriesKind::eta || series.kind() == SeriesKind::polynomial;
  if (!batched) {
    for (std::size_t j = 0; j < count; ++j) {
      const double t = t0 + static_cast<double>(j) * step;
      try {
        out[j] = evaluate(series, {sigma, t}, tol);
      } catch (const AccuracyError& e) {
        throw EvaluationError(std::string(e.what()), t);
      }
    }
    return out;
  }

  constexpr std::size_t kBlock = 128;
  const std::size_t n_blocks = (count + kBlock - 1) / kBlock;

  auto run_block = [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t len = std::min(kBlock, count - first);
    const double ta = t0 + static_cast<double>(first) * step;
    const double tb = t0 + static_cast<double>(first + len - 1) * step;
    const double tmax = std::max(std::abs(ta), std::abs(tb));
    std::vector<double> are, aim, logs;
    if (series.kind() == SeriesKind::eta) {
      // Rounding in the recurrence grows with the block length; budget for it.
      const std::size_t n = eta_terms_for({sigma, tmax}, 0.5 * tol);
      const std::size_t budget = default_budget(series, tmax);
      if (n > budget) throw EvaluationError("eta: term budget exhausted in batch evaluation", tmax);
      const auto w = alternating_weights(n);
      are.resize(n);
      aim.assign(n, 0.0);
      logs.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        logs[k] = std::log(static_cast<double>(k + 1));
        const double a = w[k] * std::exp(-sigma * logs[k]);
        are[k] = (k % 2 == 0) ? a : -a;
      }
    } else {
      const auto deg = *series.degree();
      for (std::uint64_t n = 1; n <= deg; ++n) {
        const cplx c = series.coefficient(n);
        if (c == cplx{}) continue;
        const double lg = std::log(static_cast<double>(n));
        const double mag = std::exp(-sigma * lg);
        are.push_back(c.real() * mag);
        aim.push_back(c.imag() * mag);
        logs.push_back(lg);
      }
    }
    phase_kernel(are, aim, logs, ta, step, len, std::span<cplx>(out).subspan(first, len));
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || n_blocks < 8) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    // Blocks write disjoint slices, so the result does not depend on scheduling.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(hw);
    for (unsigned w = 0; w < hw; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < n_blocks; b += hw) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return out;
}

std::vector<cplx> evaluate_many(const SeriesSpec& series, double sigma, std::span<const double> ts,
                                double tol) {
  if (ts.size() >= 3) {
    const double h = ts[1] - ts[0];
    bool uniform = h > 0.0;
    for (std::size_t i = 1; uniform && i < ts.size(); ++i) {
      const double expected = ts[0] + static_cast<double>(i) * h;
      uniform = std::abs(ts[i] - expected) <= 1e-9 * std::max(1.0, std::abs(expected));
    }
    if (uniform) return evaluate_line(series, sigma, ts[0], h, ts.size(), tol);
  }
  std::vector<cplx> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    try {
      out[i] = evaluate(series, {sigma, ts[i]}, tol);
    } catch (const AccuracyError& e) {
      throw EvaluationError(e.what(), ts[i]);
    }
  }
  return out;
}

}  // namespace dirlab
