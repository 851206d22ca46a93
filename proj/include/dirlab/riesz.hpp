#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dirlab/numeric.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

struct RieszMeanSample {
  double alpha = 0.0;
  double x = 0.0;
  cplx value{};
};

/// Growth exponent of |G_alpha(x)|, the limsup of log|G| / log x read off the
/// running-maximum envelope.
struct SummabilityAbscissaEstimate {
  int k = 1;
  double alpha = 0.0;
  double sigma_alpha = 0.0;
  std::pair<double, double> x_range{};
  double residual = 0.0;
  double slope_stderr = 0.0;

  /// residual + 2 * slope_stderr
  double uncertainty() const { return residual + 2.0 * slope_stderr; }
};

/// G_alpha(x) = sum'_{n<=x} log^{alpha-1/2}(x/n) a_n / Gamma(alpha+1/2) over a fixed
/// coefficient table a_1..a_N.
///
/// Evaluation is O(1) for alpha = 1/2 (prefix sums), O(alpha - 1/2) when alpha - 1/2
/// is a positive integer (binomial expansion over prefix log-power sums), and O(x)
/// otherwise. For alpha < 1/2 the n = x term at an integer x is singular; it is
/// dropped, which gives the left limit there.
class RieszKernel {
 public:
  RieszKernel(std::vector<cplx> coefficients, double alpha);

  double alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// G_alpha(x) with the half-weight rule at integer x. Requires 1 <= x <= size()+1.
  cplx operator()(double x) const;

  /// Smooth branch of G on [n, n+1]: the sum over m <= n with full weights, so the
  /// right limit at n and the left limit at n+1 are both attained.
  cplx on_interval(std::size_t n, double x) const;

  /// For alpha < 1/2: on_interval(n, x) = rest + lead * log(x/n)^{alpha-1/2}.
  std::pair<cplx, cplx> split(std::size_t n, double x) const;

 private:
  enum class Mode { step, integer_power, general };

  cplx sum_upto(std::size_t n, double x, bool include_last) const;

  double alpha_;
  double exponent_;   // alpha - 1/2
  double inv_gamma_;  // 1 / Gamma(alpha + 1/2)
  Mode mode_;
  int int_power_ = 0;
  std::vector<cplx> coeffs_;
  std::vector<double> logs_;
  std::vector<std::vector<cplx>> prefix_;  // prefix_[j][n] = sum_{m<=n} a_m log^j m
};

RieszMeanSample riesz_kernel(const SeriesSpec& series, double alpha, double x);

/// sum_{n<=x} (1 - log n / log x)^{alpha-1/2} c_n n^{-s}.
cplx riesz_sum(const SeriesSpec& series, double alpha, ComplexPoint s, double x);

struct MellinPairReport {
  double gap = 0.0;
  cplx transform{};   // g(s) / s^{alpha+1/2}
  cplx integral{};    // int_1^{x_max} G(x) x^{-s-1} dx
  double quad_error = 0.0;
};

/// |g(s)/s^{alpha+1/2} - int_1^{x_max} G_alpha(x) x^{-s-1} dx| with principal
/// branch powers. The integral runs per unit interval with adaptive Simpson.
MellinPairReport mellin_pair(const SeriesSpec& series, double alpha, ComplexPoint s, double x_max);
double mellin_pair_gap(const SeriesSpec& series, double alpha, ComplexPoint s, double x_max);

/// int_1^{x_max} |G_alpha(x)|^2 x^{-2 sigma - 1} dx, the x-side of Parseval.
struct KernelEnergy {
  double value = 0.0;
  double quad_error = 0.0;
};
KernelEnergy kernel_energy(const SeriesSpec& series, double alpha, double sigma, double x_max);
KernelEnergy kernel_energy(const RieszKernel& kernel, double sigma, double x_max);

/// Least-squares slope of log(running max |G|) against log x.
SummabilityAbscissaEstimate kernel_growth_exponent(const std::function<cplx(double)>& kernel,
                                                   double alpha, std::span<const double> x_grid);

/// The same estimator applied to G_alpha built from the coefficients of f^k.
SummabilityAbscissaEstimate g_growth_exponent(const SeriesSpec& series, int k, double alpha,
                                              std::span<const double> x_grid);

}  // namespace dirlab
