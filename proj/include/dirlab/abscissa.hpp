#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dirlab/moments.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

/// log value = log_coeff + exponent * log T, least squares.
struct GrowthFit {
  double exponent = 0.0;
  double log_coeff = 0.0;
  double residual = 0.0;
  int n_points = 0;
};

/// Samples are (T, value) with T increasing and value > 0; at least 3.
GrowthFit growth_exponent(std::span<const std::pair<double, double>> samples);
GrowthFit growth_exponent(std::span<const MomentSample> samples);

/// Growth of the mass a moment gains per unit of log T: fits
/// (V(T_i) - V(T_{i-1})) / log(T_i / T_{i-1}) against sqrt(T_{i-1} T_i).
/// For V ~ C T^e this recovers e; for a convergent V = C - c T^{-d} it recovers -d,
/// where the cumulative fit would creep towards 0 only as slowly as T^{-d}.
/// Needs at least 4 samples with V increasing.
GrowthFit increment_growth_exponent(std::span<const MomentSample> samples);

struct SigmaScanPoint {
  double sigma = 0.0;
  GrowthFit fit;
  bool divergent = false;
};

struct AbscissaEstimate {
  int k = 1;
  double alpha = 0.0;  // 0 encodes the unweighted abscissa
  double value = 0.0;
  std::pair<double, double> bracket{};
  GrowthFit fit_lo;  // at bracket.first (absent when the bracket was clamped to 0)
  GrowthFit fit_hi;  // at bracket.second
  bool clamped = false;
  std::vector<SigmaScanPoint> scan;

  double half_width() const { return 0.5 * (bracket.second - bracket.first); }
  double width() const { return bracket.second - bracket.first; }
};

/// Moment samples at one sigma for every T in the grid.
using MomentProvider = std::function<std::vector<MomentSample>(double sigma, int k, std::optional<double> alpha,
                                                                std::span<const double> T_grid)>;

/// Keeps one ModulusScan per sigma and serves every (k, alpha, T) from it.
class MomentSampler {
 public:
  explicit MomentSampler(SeriesSpec series, std::optional<double> grid_step = std::nullopt);

  std::vector<MomentSample> operator()(double sigma, int k, std::optional<double> alpha,
                                       std::span<const double> T_grid);
  const ModulusScan& scan(double sigma, int k, double T_max);
  const SeriesSpec& series() const noexcept { return series_; }

 private:
  SeriesSpec series_;
  std::optional<double> grid_step_;
  std::map<std::pair<double, double>, std::shared_ptr<const ModulusScan>> scans_;  // (sigma, step)
};

/// What to do when no sigma in the grid shows divergence.
enum class BracketPolicy {
  clamp_to_zero,  // bracket [0, first sigma], value 0
  throw_error,    // BracketNotFound(all_convergent)
};

struct AbscissaOptions {
  /// Growth exponent above which a sigma counts as divergent.
  /// Default 0.1 for weighted moments and 1.1 for unweighted ones.
  std::optional<double> threshold;
  BracketPolicy policy = BracketPolicy::clamp_to_zero;
  std::optional<double> grid_step;
};

/// Scans sigma_grid (increasing) and brackets the divergent/convergent transition:
/// (largest divergent sigma, next grid sigma). Divergence is read from
/// increment_growth_exponent over T_grid. All-divergent throws BracketNotFound.
AbscissaEstimate estimate_abscissa(const MomentProvider& moments, int k, std::optional<double> alpha,
                                   std::span<const double> sigma_grid, std::span<const double> T_grid,
                                   const AbscissaOptions& opts = {});

/// sigma_k(alpha) from the weighted moments.
AbscissaEstimate estimate_sigma_k_alpha(const SeriesSpec& series, int k, double alpha,
                                        std::span<const double> sigma_grid, std::span<const double> T_grid,
                                        const AbscissaOptions& opts = {});
AbscissaEstimate estimate_sigma_k_alpha(MomentSampler& sampler, int k, double alpha,
                                        std::span<const double> sigma_grid, std::span<const double> T_grid,
                                        const AbscissaOptions& opts = {});

/// sigma_k from the unweighted moments ("<< T" read as exponent <= 1.1).
AbscissaEstimate estimate_sigma_k(const SeriesSpec& series, int k, std::span<const double> sigma_grid,
                                  std::span<const double> T_grid, const AbscissaOptions& opts = {});
AbscissaEstimate estimate_sigma_k(MomentSampler& sampler, int k, std::span<const double> sigma_grid,
                                  std::span<const double> T_grid, const AbscissaOptions& opts = {});

/// |f(sigma + i t)|; the seam through which order-function estimates read a series.
using ModulusFn = std::function<std::vector<double>(double sigma, std::span<const double> ts)>;

ModulusFn series_modulus(const SeriesSpec& series, double tol = 1e-8);

struct MuEstimate {
  double mu_hat = 0.0;
  GrowthFit fit;
};

/// Slope of log(running max |f|) against log t, clamped at 0. The running max is
/// taken over the whole grid; the fit reads it at points spaced >= 0.02 apart in log t.
MuEstimate estimate_mu(const SeriesSpec& series, double sigma, std::span<const double> t_grid);
MuEstimate estimate_mu(const ModulusFn& modulus, double sigma, std::span<const double> t_grid);

struct OrderFunctionPoint {
  double sigma = 0.0;
  double mu_hat = 0.0;
  GrowthFit fit;
};

struct OrderFunctionEstimate {
  std::vector<OrderFunctionPoint> grid;
  double mu0_hat = 0.0;
  double sigma_L_hat = 0.0;
};

struct ProfileOptions {
  double zero_threshold = 0.02;
  /// sigma_L_hat when no grid point falls below the threshold.
  double sigma_L_fallback = 1.0;
};

OrderFunctionEstimate order_function_profile(const SeriesSpec& series, std::span<const double> sigma_grid,
                                             std::span<const double> t_grid, ProfileOptions opts = {});
OrderFunctionEstimate order_function_profile(const ModulusFn& modulus, std::span<const double> sigma_grid,
                                             std::span<const double> t_grid, ProfileOptions opts = {});

/// mu0 (1 - sigma / sigma_L) for 0 <= sigma <= sigma_L.
double convexity_bound(double mu0, double sigma_L, double sigma);

}  // namespace dirlab
