#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/characters.hpp"
#include "dirlab/numeric.hpp"

namespace dirlab {

/// s = sigma + i t.
struct ComplexPoint {
  double sigma = 0.0;
  double t = 0.0;

  cplx value() const { return {sigma, t}; }
};

enum class SeriesKind { eta, character, polynomial, custom };

using CoefficientFn = std::function<cplx(std::uint64_t n)>;

/// An ordinary Dirichlet series sum c_n n^{-s}: a coefficient stream plus the
/// convergence metadata the estimators rely on. Cheap to copy; immutable.
class SeriesSpec {
 public:
  /// c_n = (-1)^(n-1), sigma_c = 0, sigma_a = 1, mu(0) = 1/2 under Lindelof.
  static SeriesSpec eta();
  /// c_n = chi(n) for the indexed character mod q (see DirichletCharacter).
  static SeriesSpec character(std::uint32_t modulus, std::uint32_t index);
  /// c_1..c_d as listed, zero beyond. Entire, so sigma_c = sigma_a = 0.
  static SeriesSpec polynomial(std::vector<cplx> coefficients);
  /// Arbitrary stream. `name` must identify the stream uniquely (it is part of
  /// cache keys). `coefficient_bound`, when given, is a bound on |c_n| used for
  /// tail estimates.
  static SeriesSpec custom(std::string name, CoefficientFn fn, double sigma_c, double sigma_a,
                           bool real_coefficients = false,
                           std::optional<double> coefficient_bound = std::nullopt);

  SeriesKind kind() const noexcept { return kind_; }
  double sigma_c() const noexcept { return sigma_c_; }
  double sigma_a() const noexcept { return sigma_a_; }
  std::optional<double> mu0_hint() const noexcept { return mu0_hint_; }
  std::optional<double> sigma_L_hint() const noexcept { return sigma_L_hint_; }

  SeriesSpec with_hints(std::optional<double> mu0, std::optional<double> sigma_L) const;
  /// Overrides the declared abscissae (0 <= sigma_c <= sigma_a required).
  SeriesSpec with_abscissae(double sigma_c, double sigma_a) const;

  /// Canonical text form: "eta", "chi:3:1", "poly:1,-1", or "custom:<name>".
  const std::string& descriptor() const noexcept { return descriptor_; }

  cplx coefficient(std::uint64_t n) const;

  /// True when every coefficient is real (conjugate symmetry in t holds).
  bool real_coefficients() const noexcept { return real_; }
  /// True when every coefficient is an integer (exact convolution applies).
  bool integer_coefficients() const noexcept { return integer_; }
  /// Known bound on |c_n|, if any.
  std::optional<double> coefficient_bound() const noexcept { return bound_; }
  /// Number of nonzero-capable coefficients for polynomials, nullopt otherwise.
  std::optional<std::uint64_t> degree() const;

  const DirichletCharacter* character_ptr() const noexcept { return character_.get(); }

 private:
  SeriesSpec() = default;

  SeriesKind kind_ = SeriesKind::eta;
  double sigma_c_ = 0.0;
  double sigma_a_ = 1.0;
  std::optional<double> mu0_hint_;
  std::optional<double> sigma_L_hint_;
  std::string descriptor_;
  bool real_ = true;
  bool integer_ = true;
  std::optional<double> bound_;
  std::shared_ptr<const DirichletCharacter> character_;
  std::shared_ptr<const std::vector<cplx>> poly_;
  std::shared_ptr<const CoefficientFn> custom_;
};

/// Parses the descriptor forms produced by SeriesSpec::descriptor() plus
/// "ones:N" (c_n = 1 for n <= N, a custom stream with sigma_c = sigma_a = 0).
/// Throws ConfigError on malformed input.
SeriesSpec parse_series(const std::string& text);

/// [c_1, ..., c_{n_max}].
std::vector<cplx> coefficients(const SeriesSpec& series, std::size_t n_max);

/// Dirichlet coefficients c_{n,k} of f^k for n <= n_max.
struct PowerCoefficients {
  int k = 1;
  std::size_t n_max = 0;
  std::vector<cplx> table;                          // table[n-1] = c_{n,k}
  std::optional<std::vector<std::int64_t>> exact;   // present for integer inputs

  cplx operator[](std::size_t n) const { return table[n - 1]; }
};

/// Iterated Dirichlet convolution. Integer inputs are convolved in checked
/// 64-bit arithmetic (OverflowError instead of wraparound).
PowerCoefficients power_coefficients(const SeriesSpec& series, int k, std::size_t n_max);

/// One Dirichlet-convolution step: (a * b)_n for n <= min(a.size(), b.size()).
std::vector<cplx> dirichlet_convolve(std::span<const cplx> a, std::span<const cplx> b);
std::vector<std::int64_t> dirichlet_convolve_exact(std::span<const std::int64_t> a,
                                                   std::span<const std::int64_t> b);

struct EvalOptions {
  double tol = 1e-10;
  /// Maximum number of series terms. Default: 10 (|t| + 10) for eta and
  /// characters, 2^22 for custom streams.
  std::optional<std::size_t> term_budget;
};

struct EvalResult {
  cplx value{};
  double error_bound = 0.0;
  std::size_t terms = 0;
};

/// f(s) with a reported error bound. Throws AccuracyError (carrying the best
/// estimate) when `tol` is out of reach within the term budget.
EvalResult evaluate_detailed(const SeriesSpec& series, ComplexPoint s, const EvalOptions& opts = {});

cplx evaluate(const SeriesSpec& series, ComplexPoint s, double tol = 1e-10);

/// f(s)^k with the base tolerance tightened so the power is within `tol`.
cplx evaluate_power(const SeriesSpec& series, int k, ComplexPoint s, double tol = 1e-10);

/// f(sigma + i t_j) for t_j = t0 + j * step, j < count. Uses a blocked
/// phase-recurrence kernel for eta and polynomials; other kinds fall back to
/// pointwise evaluation. Each value is within `tol`.
std::vector<cplx> evaluate_line(const SeriesSpec& series, double sigma, double t0, double step,
                                std::size_t count, double tol = 1e-10);

/// f(sigma + i t) at arbitrary t values (uniform grids are detected and batched).
std::vector<cplx> evaluate_many(const SeriesSpec& series, double sigma, std::span<const double> ts,
                                double tol = 1e-10);

/// Alternating-series acceleration weights w_0..w_{n-1} with
/// eta(s) ~ sum_k (-1)^k w_k (k+1)^{-s}; w_k = 1 - d_k/d_n in scaled form.
std::vector<double> alternating_weights(std::size_t n);

/// Number of accelerated eta terms that brings the error bound below `tol` at s.
std::size_t eta_terms_for(ComplexPoint s, double tol);

}  // namespace dirlab
