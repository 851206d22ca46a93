#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cache.hpp"
#include "config.hpp"
#include "dirlab/abscissa.hpp"
#include "dirlab/series.hpp"

namespace dirlab::app {

struct CommandOutput {
  std::string csv;   // main table, fixed header per command
  std::string text;  // human-readable summary for stdout
  std::string svg;
  std::vector<std::pair<std::string, std::string>> extra;  // (file suffix, csv)
};

/// Column sets, one per command.
extern const char* const kEvalColumns;
extern const char* const kMomentsColumns;
extern const char* const kAbscissaColumns;
extern const char* const kMuColumns;
extern const char* const kParsevalColumns;
extern const char* const kDiagnoseColumns;

std::string csv_real(double v);

/// Moment provider that reads and fills the cache, one entry per
/// (series, sigma, k, alpha, grid step, T grid).
MomentProvider cached_moments(MomentSampler& sampler, const Cache* cache, std::optional<double> step);
/// |f| on a t grid, one cache entry per (series, sigma, t grid, tol).
ModulusFn cached_modulus(const SeriesSpec& series, const Cache* cache, double tol);

CommandOutput run_eval(const ExperimentConfig& c);
CommandOutput run_moments(const ExperimentConfig& c, const Cache* cache);
CommandOutput run_abscissa(const ExperimentConfig& c, const Cache* cache);
CommandOutput run_mu(const ExperimentConfig& c, const Cache* cache);
CommandOutput run_parseval(const ExperimentConfig& c, const Cache* cache);
CommandOutput run_diagnose(const ExperimentConfig& c, const Cache* cache);

/// Dispatch on c.command (everything except "accept").
CommandOutput run_command(const ExperimentConfig& c, const Cache* cache);

}  // namespace dirlab::app
