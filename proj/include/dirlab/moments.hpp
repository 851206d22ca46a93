#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dirlab/series.hpp"

namespace dirlab {

/// Finite-T moment of |f|^{2k} over [-T, T], optionally weighted by
/// |sigma + i t|^{-(2 alpha + 1)} (alpha present).
struct MomentSample {
  int k = 1;
  double sigma = 0.0;
  std::optional<double> alpha;
  double T = 0.0;
  double value = 0.0;
  double quad_error = 0.0;
};

struct LargeValueMeasure {
  double sigma = 0.0;
  double delta = 0.0;
  double T = 0.0;
  double fraction = 0.0;
};

/// min(0.05 / (1 + k), sigma / 4).
double default_grid_step(int k, double sigma);

/// |f(sigma + i t)| sampled once on t_j = j * step, j = 0..M, for both signs of t
/// (one side only when the coefficients are real). Every moment, weight and T
/// up to T_max is read off the same samples.
class ModulusScan {
 public:
  ModulusScan(const SeriesSpec& series, double sigma, double T_max, double step, double tol = 1e-9);

  /// Builds a scan from precomputed moduli; `negative` empty means |f| is even in t.
  static ModulusScan from_values(double sigma, double step, std::vector<double> positive,
                                 std::vector<double> negative = {});

  double sigma() const noexcept { return sigma_; }
  double step() const noexcept { return step_; }
  double T_max() const noexcept { return step_ * static_cast<double>(pos_.size() - 1); }
  bool symmetric() const noexcept { return neg_.empty(); }
  std::span<const double> positive() const noexcept { return pos_; }
  std::span<const double> negative() const noexcept { return symmetric() ? std::span<const double>(pos_) : neg_; }

  /// Trapezoid rule on [-T, T]; quad_error = |I_h - I_2h| / 3. k = 0 integrates the
  /// weight alone. Requires 0 <= T <= T_max.
  MomentSample moment(int k, std::optional<double> alpha, double T) const;

  /// Fraction of grid points in [-T, T] with |f| > delta.
  double fraction_above(double delta, double T) const;

 private:
  ModulusScan() = default;

  struct HalfLine {
    double value;
    double error;
  };
  HalfLine half_line(std::span<const double> moduli, int k, std::optional<double> alpha, double T) const;

  double sigma_ = 0.0;
  double step_ = 0.0;
  std::vector<double> pos_;
  std::vector<double> neg_;
};

/// int_{-T}^{T} |f(sigma + i t)|^{2k} dt.
MomentSample mean_square_moment(const SeriesSpec& series, int k, double sigma, double T,
                                std::optional<double> grid_step = std::nullopt);

/// int_{-T}^{T} |f(sigma + i t)|^{2k} / |sigma + i t|^{2 alpha + 1} dt, without a 1/2pi factor.
MomentSample weighted_moment(const SeriesSpec& series, int k, double sigma, double alpha, double T,
                             std::optional<double> grid_step = std::nullopt);

struct ParsevalReport {
  double t_side = 0.0;  // (1/2pi) weighted_moment(k = 1)
  double x_side = 0.0;  // int_1^{x_max} |G_alpha|^2 x^{-2 sigma - 1} dx
  double gap = 0.0;
  double quad_error = 0.0;
};

ParsevalReport parseval_report(const SeriesSpec& series, double alpha, double sigma, double T, double x_max,
                               std::optional<double> grid_step = std::nullopt);
double parseval_gap(const SeriesSpec& series, double alpha, double sigma, double T, double x_max,
                    std::optional<double> grid_step = std::nullopt);

struct TailExtrapolation {
  bool divergent = false;
  double rho = 0.0;          // fitted exponent of A(T)
  double value = 0.0;        // extrapolated weighted integral over the whole line (finite case)
  double boundary = 0.0;     // A(T_last) w(T_last), the boundary term at the last sample
  double tail = 0.0;         // part of the value contributed beyond the last sample
};

/// From unweighted samples A(T) over increasing T, the weighted integral
/// int |f|^{2k} w dt with w = (sigma^2 + t^2)^{-(alpha + 1/2)}, written after
/// integration by parts as (2 alpha + 1) int_0^inf A(t) t (sigma^2 + t^2)^{-(alpha + 3/2)} dt.
/// A is interpolated piecewise as a power law and continued with the fitted
/// C T^rho; rho >= 1 + 2 alpha is reported as divergent.
TailExtrapolation tail_extrapolate(std::span<const MomentSample> samples, double alpha, double sigma);

struct MeanValueTarget {
  double value = 0.0;       // sum_{n <= n_max} |c_{n,k}|^2 n^{-2 sigma}
  double tail_bound = 0.0;  // bound on the omitted terms
  std::size_t n_max = 0;
};

/// Truncated mean value sum_{n <= n_max} |c_{n,k}|^2 n^{-2 sigma}. Throws
/// AccuracyError when the tail bound exceeds rel_tol * value, or when no
/// coefficient bound is known for a custom stream. Needs sigma > 1/2 unless f^k is a
/// polynomial of length <= n_max, whose sum is exact at any sigma.
MeanValueTarget mean_value_target(const SeriesSpec& series, int k, double sigma, std::size_t n_max = 100000,
                                  double rel_tol = 0.02);

LargeValueMeasure large_value_measure(const SeriesSpec& series, double sigma, double delta, double T,
                                      std::optional<double> grid_step = std::nullopt);

}  // namespace dirlab
