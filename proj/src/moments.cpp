#include "dirlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirlab/error.hpp"
#include "dirlab/riesz.hpp"

namespace dirlab {

namespace {

double int_pow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

void check_moment_args(int k, double sigma, double T) {
  if (k < 1) throw DomainError("moment order k must be a positive integer");
  if (!(sigma > 0.0)) throw DomainError("moment: sigma must be > 0");
  if (!(T >= 0.0)) throw DomainError("moment: T must be >= 0");
}

std::size_t grid_count(double T, double step) {
  return static_cast<std::size_t>(std::ceil(T / step - 1e-9));
}

}  // namespace

double default_grid_step(int k, double sigma) { return std::min(0.05 / (1.0 + k), sigma / 4.0); }

// ------------------------------------------------------------------ ModulusScan

ModulusScan::ModulusScan(const SeriesSpec& series, double sigma, double T_max, double step, double tol)
    : sigma_(sigma), step_(step) {
  if (!(step > 0.0)) throw DomainError("scan: grid step must be > 0");
  if (!(T_max >= 0.0)) throw DomainError("scan: T must be >= 0");
  const std::size_t count = grid_count(T_max, step) + 1;
  auto moduli = [&](double direction) {
    const auto values = evaluate_line(series, sigma, 0.0, direction * step, count, tol);
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](cplx z) { return std::abs(z); });
    return out;
  };
  pos_ = moduli(1.0);
  if (!series.real_coefficients()) neg_ = moduli(-1.0);
}

ModulusScan ModulusScan::from_values(double sigma, double step, std::vector<double> positive,
                                     std::vector<double> negative) {
  if (positive.empty()) throw DataError("scan: no samples");
  if (!negative.empty() && negative.size() != positive.size()) {
    throw DataError("scan: positive and negative halves differ in length");
  }
  if (!(step > 0.0)) throw DomainError("scan: grid step must be > 0");
  ModulusScan scan;
  scan.sigma_ = sigma;
  scan.step_ = step;
  scan.pos_ = std::move(positive);
  scan.neg_ = std::move(negative);
  return scan;
}

ModulusScan::HalfLine ModulusScan::half_line(std::span<const double> moduli, int k, std::optional<double> alpha,
                                             double T) const {
  const double h = step_;
  const std::size_t M = moduli.size() - 1;
  const std::size_t J = std::min<std::size_t>(M, static_cast<std::size_t>(std::floor(T / h * (1.0 + 1e-12))));
  const double s2 = sigma_ * sigma_;
  const double power = alpha ? -(*alpha + 0.5) : 0.0;
  auto integrand = [&](std::size_t j) {
    const double t = h * static_cast<double>(j);
    const double g = int_pow(moduli[j] * moduli[j], k);
    return alpha ? g * std::pow(s2 + t * t, power) : g;
  };

  std::vector<double> g(J + 1);
  for (std::size_t j = 0; j <= J; ++j) g[j] = integrand(j);

  // Partial panel [t_J, T] with the integrand interpolated linearly.
  double partial = 0.0;
  const double r = T - h * static_cast<double>(J);
  if (r > 0.0 && J < M) {
    const double gT = g[J] + (integrand(J + 1) - g[J]) * (r / h);
    partial = 0.5 * r * (g[J] + gT);
  }
  if (J == 0) return {partial, 0.0};

  const double fine = h * (pairwise_sum(std::span<const double>(g)) - 0.5 * (g.front() + g.back()));

  const std::size_t J2 = J - (J % 2);
  std::vector<double> even;
  even.reserve(J2 / 2 + 1);
  for (std::size_t j = 0; j <= J2; j += 2) even.push_back(g[j]);
  double coarse = 0.0;
  if (J2 > 0) coarse = 2.0 * h * (pairwise_sum(std::span<const double>(even)) - 0.5 * (even.front() + even.back()));
  if (J2 != J) coarse += 0.5 * h * (g[J2] + g[J]);

  return {fine + partial, std::abs(fine - coarse) / 3.0};
}

MomentSample ModulusScan::moment(int k, std::optional<double> alpha, double T) const {
  if (k < 0) throw DomainError("moment order k must be >= 0");
  if (!(T >= 0.0)) throw DomainError("moment: T must be >= 0");
  if (T > T_max() * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("moment: T = " + std::to_string(T) + " beyond the scanned range " + std::to_string(T_max()));
  }
  if (alpha && !(*alpha > 0.0)) throw DomainError("weighted moment: alpha must be > 0");
  MomentSample out{k, sigma_, alpha, T, 0.0, 0.0};
  if (T == 0.0) return out;
  const HalfLine p = half_line(pos_, k, alpha, T);
  if (symmetric()) {
    out.value = 2.0 * p.value;
    out.quad_error = 2.0 * p.error;
  } else {
    const HalfLine n = half_line(neg_, k, alpha, T);
    out.value = p.value + n.value;
    out.quad_error = p.error + n.error;
  }
  return out;
}

double ModulusScan::fraction_above(double delta, double T) const {
  const std::size_t M = pos_.size() - 1;
  const std::size_t J = std::min<std::size_t>(M, static_cast<std::size_t>(std::floor(T / step_ * (1.0 + 1e-12))));
  std::size_t above = pos_[0] > delta ? 1 : 0;
  const auto neg = negative();
  for (std::size_t j = 1; j <= J; ++j) {
    above += pos_[j] > delta;
    above += neg[j] > delta;
  }
  return static_cast<double>(above) / static_cast<double>(2 * J + 1);
}

// ------------------------------------------------------------------ operations

MomentSample mean_square_moment(const SeriesSpec& series, int k, double sigma, double T,
                                std::optional<double> grid_step) {
  check_moment_args(k, sigma, T);
  const double h = grid_step.value_or(default_grid_step(k, sigma));
  if (!(h > 0.0)) throw DomainError("moment: grid step must be > 0");
  return ModulusScan(series, sigma, T, h).moment(k, std::nullopt, T);
}

MomentSample weighted_moment(const SeriesSpec& series, int k, double sigma, double alpha, double T,
                             std::optional<double> grid_step) {
  check_moment_args(k, sigma, T);
  if (!(alpha > 0.0)) throw DomainError("weighted moment: alpha must be > 0");
  const double h = grid_step.value_or(default_grid_step(k, sigma));
  if (!(h > 0.0)) throw DomainError("moment: grid step must be > 0");
  return ModulusScan(series, sigma, T, h).moment(k, alpha, T);
}

ParsevalReport parseval_report(const SeriesSpec& series, double alpha, double sigma, double T, double x_max,
                               std::optional<double> grid_step) {
  if (!(sigma > 0.0)) throw DomainError("parseval: sigma must be > 0");
  const MomentSample m = weighted_moment(series, 1, sigma, alpha, T, grid_step);
  const KernelEnergy e = kernel_energy(series, alpha, sigma, x_max);
  ParsevalReport r;
  r.t_side = m.value / (2.0 * std::numbers::pi);
  r.x_side = e.value;
  r.gap = std::abs(r.t_side - r.x_side);
  r.quad_error = m.quad_error / (2.0 * std::numbers::pi) + e.quad_error;
  return r;
}

double parseval_gap(const SeriesSpec& series, double alpha, double sigma, double T, double x_max,
                    std::optional<double> grid_step) {
  return parseval_report(series, alpha, sigma, T, x_max, grid_step).gap;
}

// ------------------------------------------------------------------ tail extrapolation

TailExtrapolation tail_extrapolate(std::span<const MomentSample> samples, double alpha, double sigma) {
  if (samples.size() < 8) throw DataError("tail extrapolation needs at least 8 samples");
  if (!(alpha > 0.0)) throw DomainError("tail extrapolation: alpha must be > 0");
  if (!(sigma > 0.0)) throw DomainError("tail extrapolation: sigma must be > 0");
  std::vector<double> T, A, lT, lA;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.alpha) throw DataError("tail extrapolation expects unweighted samples");
    if (!(s.T > 0.0) || !(s.value > 0.0)) throw DataError("tail extrapolation: samples need T > 0 and value > 0");
    if (i > 0 && !(s.T > T.back())) throw DataError("tail extrapolation: T must be strictly increasing");
    if (i > 0 && s.value < A.back()) throw DataError("tail extrapolation: samples are not monotone in T");
    T.push_back(s.T);
    A.push_back(s.value);
    lT.push_back(std::log(s.T));
    lA.push_back(std::log(s.value));
  }
  TailExtrapolation out;
  out.rho = fit_line(lT, lA).slope;
  const double p = alpha + 1.5;
  const double s2 = sigma * sigma;
  const double Tm = T.back();
  const double Am = A.back();
  out.boundary = Am * std::pow(s2 + Tm * Tm, -(alpha + 0.5));
  if (out.rho >= 1.0 + 2.0 * alpha) {
    out.divergent = true;
    return out;
  }

  auto kernel = [&](double t) { return t * std::pow(s2 + t * t, -p); };
  const double scale = (2.0 * alpha + 1.0);
  double body = 0.0;
  double err_budget = 1e-10 * Am * std::max(1.0, std::pow(std::max(s2, 1.0), -p));
  // [0, T_0]: A linear through the origin.
  {
    auto f = [&](double t) { return cplx{A[0] * (t / T[0]) * kernel(t), 0.0}; };
    const QuadResult r = adaptive_simpson(f, 0.0, T[0], err_budget);
    body += r.value.real();
  }
  // Between samples: power law through neighbouring points, integrated in log t.
  for (std::size_t i = 0; i + 1 < T.size(); ++i) {
    const double e = (lA[i + 1] - lA[i]) / (lT[i + 1] - lT[i]);
    auto f = [&](double u) {
      const double t = std::exp(u);
      return cplx{A[i] * std::exp(e * (u - lT[i])) * kernel(t) * t, 0.0};
    };
    body += adaptive_simpson(f, lT[i], lT[i + 1], err_budget).value.real();
  }
  // Beyond the last sample: A(T_m) (t / T_m)^rho, numerically to a cutoff and in closed
  // form past it, where (sigma^2 + t^2) ~ t^2.
  const double cutoff = 1e4 * std::max(Tm, sigma);
  auto ftail = [&](double u) {
    const double t = std::exp(u);
    return cplx{Am * std::exp(out.rho * (u - lT.back())) * kernel(t) * t, 0.0};
  };
  double tail = adaptive_simpson(ftail, lT.back(), std::log(cutoff), err_budget).value.real();
  const double q = 2.0 * alpha + 1.0 - out.rho;  // > 0
  tail += Am * std::pow(Tm, -out.rho) * std::pow(cutoff, -q) / q;
  out.tail = scale * tail;
  out.value = scale * (body + tail);
  return out;
}

// ------------------------------------------------------------------ mean value target

namespace {

// Gamma(p + 1, z) for integer p >= 0.
double upper_gamma_int(int p, double z) {
  double term = 1.0, sum = 1.0, fact = 1.0;
  for (int j = 1; j <= p; ++j) {
    term *= z / j;
    sum += term;
    fact *= j;
  }
  return fact * std::exp(-z) * sum;
}

}  // namespace

MeanValueTarget mean_value_target(const SeriesSpec& series, int k, double sigma, std::size_t n_max, double rel_tol) {
  if (k < 1) throw DomainError("mean value target: k must be >= 1");
  if (n_max < 1) throw DomainError("mean value target: n_max must be >= 1");
  const auto deg = series.degree();
  // f^k is a Dirichlet polynomial of length deg^k.
  double len = INFINITY;
  if (deg) {
    len = 1.0;
    for (int i = 0; i < k; ++i) len *= static_cast<double>(*deg);
  }
  const bool finite = len <= static_cast<double>(n_max);
  if (!finite && !(sigma > 0.5)) throw DomainError("mean value target: sigma must be > 1/2");
  const auto table = power_coefficients(series, k, n_max);
  std::vector<double> terms(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    terms[n - 1] = std::norm(table[n]) * std::exp(-2.0 * sigma * std::log(static_cast<double>(n)));
  }
  MeanValueTarget out;
  out.n_max = n_max;
  out.value = pairwise_sum(std::span<const double>(terms));

  if (finite) return out;
  const auto bound = series.coefficient_bound();
  if (!bound) {
    throw AccuracyError("mean value target: no coefficient bound known, tail cannot be bounded", out.value,
                        std::numeric_limits<double>::infinity());
  }
  const double N = static_cast<double>(n_max);
  const double s = 2.0 * sigma;
  const double B2k = std::pow(*bound, 2.0 * k);
  if (k == 1) {
    out.tail_bound = B2k * std::pow(N, 1.0 - s) / (s - 1.0);
  } else {
    // |c_{n,k}|^2 <= B^{2k} d_k(n)^2 <= B^{2k} d_{k^2}(n), and sum_{n<=x} d_m(n) <= x (1 + log x)^{m-1}.
    const int pw = k * k - 1;
    const double u0 = 1.0 + std::log(N);
    out.tail_bound = B2k * s * std::exp(s - 1.0) * std::pow(s - 1.0, -pw - 1.0) * upper_gamma_int(pw, (s - 1.0) * u0);
  }
  if (out.tail_bound > rel_tol * out.value) {
    throw AccuracyError("mean value target: tail bound " + std::to_string(out.tail_bound) + " exceeds tolerance at n_max = " +
                            std::to_string(n_max),
                        out.value, out.tail_bound);
  }
  return out;
}

LargeValueMeasure large_value_measure(const SeriesSpec& series, double sigma, double delta, double T,
                                      std::optional<double> grid_step) {
  if (!(delta > 0.0)) throw DomainError("large value measure: delta must be > 0");
  if (!(T >= 0.0)) throw DomainError("large value measure: T must be >= 0");
  const double h = grid_step.value_or(default_grid_step(1, std::max(sigma, 1e-3)));
  const ModulusScan scan(series, sigma, T, h);
  return {sigma, delta, T, scan.fraction_above(delta, T)};
}

}  // namespace dirlab
