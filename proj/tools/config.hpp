#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dirlab::app {

using json = nlohmann::json;

/// Grid text: "a,b,c", "lo:hi:step" (inclusive) or "geom:lo:hi:n".
std::vector<double> parse_grid(const std::string& text);
std::vector<double> geometric_grid(double lo, double hi, int n);
std::vector<double> arithmetic_grid(double lo, double hi, double step);

struct ExperimentConfig {
  std::string command;
  std::string series = "eta";
  std::vector<int> k;
  std::vector<double> alpha;
  bool unweighted = false;
  std::vector<double> sigma;
  std::vector<double> T;
  std::vector<double> t;
  std::optional<double> step;
  double tol = 1e-10;
  double x_max = 1e5;
  std::optional<double> threshold;
  std::optional<double> mu0;
  std::optional<double> sigma_L;
  std::string table;  // diagnose: CSV path, "lindelof", or empty for a series-driven table
  std::string cache_dir;
  std::string output;
  bool emit_svg = false;

  /// Fills command defaults for absent fields, then validates. Throws
  /// ConfigError naming the offending field.
  static ExperimentConfig from_json(const std::string& command, const json& cfg);
};

}  // namespace dirlab::app
