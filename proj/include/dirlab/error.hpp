#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dirlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid series descriptor, character index, or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input samples that violate an operation's data contract
/// (non-monotone, nonpositive, duplicated abscissae, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Exact coefficient arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Operation not available for this kind of series.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A requested accuracy could not be reached. Carries the best value found
/// and its error bound so callers can decide whether to use it anyway.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, std::complex<double> best, double bound)
      : Error(what), best_(best), bound_(bound) {}

  std::complex<double> best_estimate() const noexcept { return best_; }
  double error_bound() const noexcept { return bound_; }

 private:
  std::complex<double> best_;
  double bound_;
};

/// Adaptive quadrature hit its subdivision limit.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::complex<double> partial)
      : Error(what), partial_(partial) {}

  std::complex<double> partial_value() const noexcept { return partial_; }

 private:
  std::complex<double> partial_;
};

/// Scanning a grid of sigma values found no divergent/convergent transition.
class BracketNotFound : public Error {
 public:
  enum class Side { all_convergent, all_divergent };

  BracketNotFound(const std::string& what, Side side) : Error(what), side_(side) {}

  Side side() const noexcept { return side_; }

 private:
  Side side_;
};

/// A pointwise evaluation failed inside a t-scan.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double t) : Error(what), t_(t) {}

  double t() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace dirlab
