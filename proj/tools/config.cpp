#include "config.hpp"

#include <cmath>
#include <sstream>

#include "dirlab/error.hpp"

namespace dirlab::app {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

double parse_real(const std::string& field, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    field_error(field, "'" + s + "' is not a number");
  }
  if (used != s.size()) field_error(field, "'" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> grid_from_text(const std::string& field, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 4 && parts[0] == "geom") {
    const double n = parse_real(field, parts[3]);
    if (n < 2 || n != std::floor(n)) field_error(field, "geometric grid needs an integer count >= 2");
    return geometric_grid(parse_real(field, parts[1]), parse_real(field, parts[2]), static_cast<int>(n));
  }
  if (parts.size() == 3) {
    const double lo = parse_real(field, parts[0]);
    const double hi = parse_real(field, parts[1]);
    const double step = parse_real(field, parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) field_error(field, "range needs lo <= hi and step > 0");
    if ((hi - lo) / step > 1e7) field_error(field, "range has more than 1e7 points");
    return arithmetic_grid(lo, hi, step);
  }
  if (parts.size() != 1) field_error(field, "unrecognised grid '" + text + "'");
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(field, item));
  return out;
}

std::vector<double> real_list(const json& cfg, const std::string& field) {
  const json& v = cfg.at(field);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_string()) return grid_from_text(field, v.get<std::string>());
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) field_error(field, "array entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  field_error(field, "expected a number, an array, or a grid string");
}

double real_value(const json& cfg, const std::string& field) {
  const json& v = cfg.at(field);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_real(field, v.get<std::string>());
  field_error(field, "expected a number");
}

std::string string_value(const json& cfg, const std::string& field) {
  const json& v = cfg.at(field);
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

bool bool_value(const json& cfg, const std::string& field) {
  const json& v = cfg.at(field);
  if (!v.is_boolean()) field_error(field, "expected true or false");
  return v.get<bool>();
}

void require_increasing(const std::string& field, const std::vector<double>& xs) {
  if (xs.empty()) field_error(field, "grid is empty");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) field_error(field, "grid must be strictly increasing");
  }
}

void require_positive(const std::string& field, const std::vector<double>& xs) {
  for (double x : xs) {
    if (!(x > 0.0)) field_error(field, "values must be > 0");
  }
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("geometric grid needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double r = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(r * i);
  out.back() = hi;
  return out;
}

std::vector<double> arithmetic_grid(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

std::vector<double> parse_grid(const std::string& text) { return grid_from_text("grid", text); }

ExperimentConfig ExperimentConfig::from_json(const std::string& command, const json& cfg) {
  static const char* known[] = {"series", "k", "alpha", "unweighted", "sigma", "T", "t", "step", "tol", "x_max",
                                "threshold", "mu0", "sigma_L", "table", "cache_dir", "output", "emit_svg"};
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [name, _] : cfg.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || name == k;
    if (!ok) field_error(name, "unknown field");
  }

  ExperimentConfig c;
  c.command = command;
  const auto has = [&](const char* f) { return cfg.contains(f) && !cfg.at(f).is_null(); };

  if (has("series")) c.series = string_value(cfg, "series");
  if (has("k")) {
    for (double v : real_list(cfg, "k")) {
      if (v < 1 || v != std::floor(v) || v > 64) field_error("k", "entries must be integers in [1, 64]");
      c.k.push_back(static_cast<int>(v));
    }
  }
  if (has("alpha")) c.alpha = real_list(cfg, "alpha");
  if (has("unweighted")) c.unweighted = bool_value(cfg, "unweighted");
  if (has("sigma")) c.sigma = real_list(cfg, "sigma");
  if (has("T")) c.T = real_list(cfg, "T");
  if (has("t")) c.t = real_list(cfg, "t");
  if (has("step")) c.step = real_value(cfg, "step");
  if (has("tol")) c.tol = real_value(cfg, "tol");
  if (has("x_max")) c.x_max = real_value(cfg, "x_max");
  if (has("threshold")) c.threshold = real_value(cfg, "threshold");
  if (has("mu0")) c.mu0 = real_value(cfg, "mu0");
  if (has("sigma_L")) c.sigma_L = real_value(cfg, "sigma_L");
  if (has("table")) c.table = string_value(cfg, "table");
  if (has("cache_dir")) c.cache_dir = string_value(cfg, "cache_dir");
  if (has("output")) c.output = string_value(cfg, "output");
  if (has("emit_svg")) c.emit_svg = bool_value(cfg, "emit_svg");

  const auto default_T = [] { return geometric_grid(500.0, 5000.0, 10); };
  if (command == "eval") {
    if (c.sigma.empty()) c.sigma = {1.0};
    if (c.t.empty()) c.t = {0.0};
    if (c.sigma.size() != 1) field_error("sigma", "eval takes a single sigma");
  } else if (command == "moments") {
    if (c.k.empty()) c.k = {1};
    if (c.alpha.empty()) c.unweighted = true;
    if (c.sigma.empty()) c.sigma = {0.75};
    if (c.T.empty()) c.T = default_T();
  } else if (command == "abscissa") {
    if (c.k.empty()) c.k = {1};
    if (c.alpha.empty()) c.unweighted = true;
    if (c.sigma.empty()) c.sigma = arithmetic_grid(0.05, 0.95, 0.05);
    if (c.T.empty()) c.T = default_T();
  } else if (command == "mu") {
    if (c.sigma.empty()) c.sigma = arithmetic_grid(0.1, 0.9, 0.1);
    if (c.t.empty()) c.t = arithmetic_grid(10.0, 10000.0, 0.1);
    if (!has("tol")) c.tol = 1e-8;
  } else if (command == "parseval") {
    if (c.alpha.empty()) c.alpha = {0.5};
    if (c.sigma.empty()) c.sigma = {0.5, 1.0, 2.0};
    if (c.T.empty()) c.T = {1e4};
  } else if (command == "diagnose") {
    if (c.table == "lindelof") {
      if (c.k.empty()) c.k = {1, 2, 3, 4, 5};
      if (c.alpha.empty()) c.alpha = {0.1, 0.2, 0.3, 0.4, 0.5};
      if (!c.mu0) c.mu0 = 0.5;
      if (!c.sigma_L) c.sigma_L = 0.5;
    } else {
      if (c.k.empty()) c.k = {1, 2, 3};
      if (c.alpha.empty()) c.alpha = {0.05, 0.1, 0.2};
    }
    if (c.sigma.empty()) c.sigma = arithmetic_grid(0.05, 0.95, 0.05);
    if (c.T.empty()) c.T = default_T();
    if (c.t.empty()) c.t = arithmetic_grid(10.0, 10000.0, 0.1);
  } else if (command != "accept") {
    throw ConfigError("unknown command '" + command + "'");
  }

  if (command != "eval" && command != "accept") {
    if (command == "parseval" || command == "moments") {
      if (c.sigma.empty()) field_error("sigma", "list is empty");
    } else {
      require_increasing("sigma", c.sigma);
    }
    require_positive("sigma", c.sigma);
  }
  if (command == "moments" || command == "abscissa" || command == "diagnose" || command == "parseval") {
    require_increasing("T", c.T);
    require_positive("T", c.T);
  }
  if (command == "abscissa" || command == "diagnose") {
    if (c.T.size() < 4) field_error("T", "needs at least 4 points");
  }
  if (command == "mu") {
    require_increasing("t", c.t);
    if (c.t.back() < 1e3) field_error("t", "grid must reach at least 1000");
  }
  if (command == "eval" && c.t.empty()) field_error("t", "list is empty");
  require_positive("alpha", c.alpha);
  if (c.step && !(*c.step > 0.0)) field_error("step", "must be > 0");
  if (!(c.tol > 0.0)) field_error("tol", "must be > 0");
  if (!(c.x_max > 1.0)) field_error("x_max", "must be > 1");
  if (c.mu0 && !(*c.mu0 > 0.0)) field_error("mu0", "must be > 0");
  if (c.sigma_L && !(*c.sigma_L > 0.0 && *c.sigma_L <= 1.0)) field_error("sigma_L", "must lie in (0, 1]");
  return c;
}

}  // namespace dirlab::app
