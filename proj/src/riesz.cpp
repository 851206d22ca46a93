#include "dirlab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

constexpr int kMaxIntegerPower = 8;

bool is_integer_value(double x) { return x == std::floor(x); }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Applies `per_interval(n, a, b)` on [1, x_max] split at the integers.
template <class F>
void for_each_unit_interval(double x_max, F&& per_interval) {
  const auto last = static_cast<std::size_t>(std::floor(x_max));
  for (std::size_t n = 1; n <= last; ++n) {
    const double a = static_cast<double>(n);
    const double b = std::min(a + 1.0, x_max);
    if (b > a) per_interval(n, a, b);
  }
}

// int_0^V v^p h(v) dv for p > -1 and smooth h. With v = w^c and c = m/(p+1) the
// weight becomes c w^{m-1}; m is picked so c >= 4 and the integrand is C^3 at 0.
template <class H>
QuadResult integrate_log_power(double p, double V, H&& h, double tol) {
  const double m = std::ceil(4.0 * (p + 1.0));
  const double c = m / (p + 1.0);
  return adaptive_simpson([&](double w) { return c * std::pow(w, m - 1.0) * h(std::pow(w, c)); }, 0.0,
                          std::pow(V, 1.0 / c), tol);
}

}  // namespace

// ------------------------------------------------------------------ RieszKernel

RieszKernel::RieszKernel(std::vector<cplx> coefficients, double alpha)
    : alpha_(alpha), exponent_(alpha - 0.5), coeffs_(std::move(coefficients)) {
  if (!(alpha > 0.0)) throw DomainError("Riesz kernel needs alpha > 0");
  inv_gamma_ = 1.0 / std::tgamma(alpha + 0.5);
  logs_.resize(coeffs_.size());
  for (std::size_t m = 1; m <= coeffs_.size(); ++m) logs_[m - 1] = std::log(static_cast<double>(m));

  if (exponent_ == 0.0) {
    mode_ = Mode::step;
  } else if (exponent_ > 0.0 && is_integer_value(exponent_) && exponent_ <= kMaxIntegerPower) {
    mode_ = Mode::integer_power;
    int_power_ = static_cast<int>(exponent_);
  } else {
    mode_ = Mode::general;
  }

  const int powers = mode_ == Mode::step ? 1 : (mode_ == Mode::integer_power ? int_power_ + 1 : 0);
  prefix_.assign(powers, std::vector<cplx>(coeffs_.size() + 1));
  for (int j = 0; j < powers; ++j) {
    for (std::size_t m = 1; m <= coeffs_.size(); ++m) {
      prefix_[j][m] = prefix_[j][m - 1] + coeffs_[m - 1] * std::pow(logs_[m - 1], j);
    }
  }
}

cplx RieszKernel::sum_upto(std::size_t n, double x, bool include_last) const {
  if (n > coeffs_.size()) {
    throw DomainError("Riesz kernel evaluated beyond its coefficient table (n = " + std::to_string(n) + ")");
  }
  const std::size_t upto = include_last ? n : n - 1;
  switch (mode_) {
    case Mode::step: return prefix_[0][upto] * inv_gamma_;
    case Mode::integer_power: {
      const double L = std::log(x);
      cplx acc{};
      for (int j = 0; j <= int_power_; ++j) {
        const double c = binomial(int_power_, j) * std::pow(L, int_power_ - j) * ((j % 2) ? -1.0 : 1.0);
        acc += c * prefix_[j][upto];
      }
      return acc * inv_gamma_;
    }
    case Mode::general: {
      const double L = std::log(x);
      cplx acc{};
      for (std::size_t m = 1; m <= upto; ++m) {
        const cplx a = coeffs_[m - 1];
        if (a == cplx{}) continue;
        acc += a * std::pow(L - logs_[m - 1], exponent_);
      }
      return acc * inv_gamma_;
    }
  }
  return {};
}

cplx RieszKernel::operator()(double x) const {
  if (x < 1.0) return {};
  const auto n = static_cast<std::size_t>(std::floor(x));
  if (!is_integer_value(x)) return sum_upto(n, x, true);
  if (mode_ == Mode::step) return sum_upto(n, x, false) + 0.5 * coeffs_.at(n - 1) * inv_gamma_;
  // exponent > 0: the last weight is 0^p = 0; exponent < 0: singular term dropped.
  return sum_upto(n, x, exponent_ > 0.0);
}

cplx RieszKernel::on_interval(std::size_t n, double x) const { return sum_upto(n, x, true); }

std::pair<cplx, cplx> RieszKernel::split(std::size_t n, double x) const {
  return {sum_upto(n, x, false), coeffs_.at(n - 1) * inv_gamma_};
}

// ------------------------------------------------------------------ operations

RieszMeanSample riesz_kernel(const SeriesSpec& series, double alpha, double x) {
  if (!(alpha > 0.0)) throw DomainError("riesz_kernel: alpha must be > 0");
  if (x < 1.0) return {alpha, x, {}};
  const auto n = static_cast<std::size_t>(std::floor(x));
  RieszKernel kernel(coefficients(series, n), alpha);
  return {alpha, x, kernel(x)};
}

cplx riesz_sum(const SeriesSpec& series, double alpha, ComplexPoint s, double x) {
  if (!(alpha >= 0.5)) throw DomainError("riesz_sum: alpha must be >= 1/2");
  if (!(x > 1.0)) throw DomainError("riesz_sum: x must be > 1");
  const double lx = std::log(x);
  const double e = alpha - 0.5;
  const cplx sv = s.value();
  const auto N = static_cast<std::size_t>(std::floor(x));
  std::vector<cplx> terms;
  terms.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    const cplx c = series.coefficient(n);
    if (c == cplx{}) continue;
    const double ln = std::log(static_cast<double>(n));
    const double base = 1.0 - ln / lx;
    const double w = e == 0.0 ? 1.0 : std::pow(std::max(base, 0.0), e);
    if (w == 0.0) continue;
    terms.push_back(w * c * std::exp(-sv * ln));
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

MellinPairReport mellin_pair(const SeriesSpec& series, double alpha, ComplexPoint s, double x_max) {
  if (!(alpha > 0.0)) throw DomainError("mellin_pair: alpha must be > 0");
  if (!(s.sigma > series.sigma_c()) && series.kind() != SeriesKind::polynomial) {
    throw DomainError("mellin_pair: need sigma > sigma_c");
  }
  if (!(x_max > 1.0)) throw DomainError("mellin_pair: x_max must be > 1");

  MellinPairReport report;
  const cplx sv = s.value();
  report.transform = evaluate(series, s, 1e-12) * std::exp(-(alpha + 0.5) * std::log(sv));

  const auto N = static_cast<std::size_t>(std::floor(x_max));
  RieszKernel kernel(coefficients(series, N), alpha);
  const double tol = 1e-11 / static_cast<double>(N);
  std::vector<cplx> pieces;
  pieces.reserve(N);
  double err = 0.0;

  const bool singular = !is_integer_value(alpha - 0.5);
  for_each_unit_interval(x_max, [&](std::size_t n, double a, double b) {
    const double V = std::log(b / a);
    QuadResult r;
    if (!singular) {
      r = adaptive_simpson([&](double v) {
        const double x = a * std::exp(v);
        return kernel.on_interval(n, x) * std::exp(-sv * std::log(x));
      }, 0.0, V, tol);
    } else {
      r = adaptive_simpson([&](double v) {
        const double x = a * std::exp(v);
        return kernel.split(n, x).first * std::exp(-sv * std::log(x));
      }, 0.0, V, 0.5 * tol);
      const cplx lead = kernel.split(n, a).second;
      if (lead != cplx{}) {
        const QuadResult s2 = integrate_log_power(alpha - 0.5, V, [&](double v) {
          return lead * std::exp(-sv * (std::log(a) + v));
        }, 0.5 * tol);
        r.value += s2.value;
        r.error += s2.error;
        r.converged = r.converged && s2.converged;
      }
    }
    pieces.push_back(r.value);
    err += r.error;
    if (!r.converged) {
      throw QuadratureError("mellin_pair: quadrature did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            pairwise_sum(std::span<const cplx>(pieces)));
    }
  });
  report.integral = pairwise_sum(std::span<const cplx>(pieces));
  report.quad_error = err;
  report.gap = std::abs(report.transform - report.integral);
  return report;
}

double mellin_pair_gap(const SeriesSpec& series, double alpha, ComplexPoint s, double x_max) {
  return mellin_pair(series, alpha, s, x_max).gap;
}

KernelEnergy kernel_energy(const RieszKernel& kernel, double sigma, double x_max) {
  if (!(x_max > 1.0)) throw DomainError("kernel_energy: x_max must be > 1");
  const double alpha = kernel.alpha();
  const auto N = static_cast<std::size_t>(std::floor(x_max));
  const double tol = 1e-12 / static_cast<double>(N);
  std::vector<double> pieces;
  pieces.reserve(N);
  double err = 0.0;
  const bool singular = !is_integer_value(alpha - 0.5);
  for_each_unit_interval(x_max, [&](std::size_t n, double a, double b) {
    const double V = std::log(b / a);
    const double la = std::log(a);
    QuadResult r;
    if (!singular) {
      r = adaptive_simpson([&](double v) {
        return cplx{std::norm(kernel.on_interval(n, a * std::exp(v))) * std::exp(-2.0 * sigma * (la + v)), 0.0};
      }, 0.0, V, tol);
    } else {
      // |rest + lead v^p|^2: each power of v integrated on its own.
      const double p = alpha - 0.5;
      const cplx lead = kernel.split(n, a).second;
      r = adaptive_simpson([&](double v) {
        return cplx{std::norm(kernel.split(n, a * std::exp(v)).first) * std::exp(-2.0 * sigma * (la + v)), 0.0};
      }, 0.0, V, tol / 3.0);
      if (lead != cplx{}) {
        const QuadResult cross = integrate_log_power(p, V, [&](double v) {
          const cplx rest = kernel.split(n, a * std::exp(v)).first;
          return cplx{2.0 * (std::conj(rest) * lead).real() * std::exp(-2.0 * sigma * (la + v)), 0.0};
        }, tol / 3.0);
        const QuadResult square = integrate_log_power(2.0 * p, V, [&](double v) {
          return cplx{std::norm(lead) * std::exp(-2.0 * sigma * (la + v)), 0.0};
        }, tol / 3.0);
        r.value += cross.value + square.value;
        r.error += cross.error + square.error;
        r.converged = r.converged && cross.converged && square.converged;
      }
    }
    pieces.push_back(r.value.real());
    err += r.error;
    if (!r.converged) {
      throw QuadratureError("kernel_energy: quadrature did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            pairwise_sum(std::span<const double>(pieces)));
    }
  });
  return {pairwise_sum(std::span<const double>(pieces)), err};
}

KernelEnergy kernel_energy(const SeriesSpec& series, double alpha, double sigma, double x_max) {
  const auto N = static_cast<std::size_t>(std::floor(x_max));
  return kernel_energy(RieszKernel(coefficients(series, std::max<std::size_t>(N, 1)), alpha), sigma, x_max);
}

SummabilityAbscissaEstimate kernel_growth_exponent(const std::function<cplx(double)>& kernel, double alpha,
                                                   std::span<const double> x_grid) {
  if (x_grid.size() < 8) throw DataError("growth exponent: x grid needs at least 8 points");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) throw DataError("growth exponent: x grid must be increasing");
  }
  std::vector<double> lx, ly;
  double running = 0.0;
  for (double x : x_grid) {
    running = std::max(running, std::abs(kernel(x)));
    if (running > 0.0 && x > 0.0) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(running));
    }
  }
  if (running == 0.0) throw DataError("growth exponent: every G value is zero");
  if (lx.size() < 3) throw DataError("growth exponent: fewer than three nonzero envelope points");
  const LineFit fit = fit_line(lx, ly);
  SummabilityAbscissaEstimate est;
  est.alpha = alpha;
  est.sigma_alpha = fit.slope;
  est.x_range = {x_grid.front(), x_grid.back()};
  est.residual = fit.residual;
  est.slope_stderr = fit.slope_stderr;
  return est;
}

SummabilityAbscissaEstimate g_growth_exponent(const SeriesSpec& series, int k, double alpha,
                                              std::span<const double> x_grid) {
  if (x_grid.empty()) throw DataError("growth exponent: empty x grid");
  const auto N = static_cast<std::size_t>(std::max(1.0, std::floor(x_grid.back())));
  const auto table = power_coefficients(series, k, N);
  RieszKernel kernel(table.table, alpha);
  auto est = kernel_growth_exponent([&](double x) { return kernel(x); }, alpha, x_grid);
  est.k = k;
  return est;
}

}  // namespace dirlab
