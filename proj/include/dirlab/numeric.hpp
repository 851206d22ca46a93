#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dirlab {

using cplx = std::complex<double>;

/// Pairwise (cascade) summation in a fixed order. Serial and parallel callers
/// that hand in the same array get bitwise-identical results.
double pairwise_sum(std::span<const double> values);
cplx pairwise_sum(std::span<const cplx> values);

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;      // RMS of the fit residuals
  double slope_stderr = 0.0;  // standard error of the slope (0 when n <= 2)
  int n_points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// log Gamma(z) for complex z, principal branch continuous off the negative axis.
cplx log_gamma(cplx z);

/// Result of an adaptive quadrature on one interval.
struct QuadResult {
  cplx value{};
  double error = 0.0;
  bool converged = true;
};

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
/// Never throws; `converged` is false when `max_depth` was exhausted somewhere.
QuadResult adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                            double tol, int max_depth = 40);

}  // namespace dirlab
