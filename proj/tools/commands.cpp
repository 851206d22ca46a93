#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dirlab/diagnostics.hpp"
#include "dirlab/error.hpp"
#include "dirlab/moments.hpp"
#include "svg.hpp"

namespace dirlab::app {

const char* const kEvalColumns = "series,sigma,t,re,im,abs";
const char* const kMomentsColumns = "series,k,alpha,sigma,T,value,quad_error";
const char* const kAbscissaColumns = "series,k,alpha,sigma_lo,sigma_hi,value,exponent_lo,exponent_hi,residual";
const char* const kMuColumns = "series,sigma,mu_hat,exponent,residual,n_points";
const char* const kParsevalColumns = "series,alpha,sigma,T,x_max,t_side,x_side,gap,rel_gap,quad_error";
const char* const kDiagnoseColumns =
    "check,fixed_name,fixed,property,holds,max_violation,tolerance,worst_lo,worst_mid,worst_hi";

namespace {

constexpr const char* kPredictionColumns = "sigma,mu_predicted,mu_hat";
constexpr const char* kRatioColumns = "sigma,k,gamma,m,sigma_m,bound,upper,middle,limit,extrapolated,monotone";
constexpr const char* kTableColumns = "k,alpha,value,half_width";

json sample_to_json(const MomentSample& s) {
  return {{"k", s.k}, {"sigma", s.sigma}, {"alpha", s.alpha ? json(*s.alpha) : json(nullptr)},
          {"T", s.T}, {"value", s.value}, {"quad_error", s.quad_error}};
}

MomentSample sample_from_json(const json& j) {
  MomentSample s;
  s.k = j.at("k").get<int>();
  s.sigma = j.at("sigma").get<double>();
  if (!j.at("alpha").is_null()) s.alpha = j.at("alpha").get<double>();
  s.T = j.at("T").get<double>();
  s.value = j.at("value").get<double>();
  s.quad_error = j.at("quad_error").get<double>();
  return s;
}

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += c;
    }
    first = false;
  }
  out += '\n';
  return out;
}

std::string csv_opt(std::optional<double> v) { return v ? csv_real(*v) : std::string(); }

double check_alpha_domain(const SeriesSpec& series, int k, double alpha, std::optional<double> mu0) {
  if (!mu0) mu0 = series.mu0_hint();
  if (mu0 && alpha > k * *mu0 * (1.0 + 1e-12)) {
    std::ostringstream s;
    s << "config field 'alpha': alpha=" << alpha << " exceeds k mu(0) = " << k * *mu0 << " for k=" << k;
    throw ConfigError(s.str());
  }
  return alpha;
}

AbscissaOptions abscissa_options(const ExperimentConfig& c) {
  AbscissaOptions o;
  o.threshold = c.threshold;
  o.grid_step = c.step;
  return o;
}

std::string abscissa_row(const std::string& series, const AbscissaEstimate& e) {
  const bool has_lo = !e.clamped;
  const double residual = has_lo ? std::max(e.fit_lo.residual, e.fit_hi.residual) : e.fit_hi.residual;
  return row({series, std::to_string(e.k), csv_real(e.alpha), csv_real(e.bracket.first), csv_real(e.bracket.second),
              csv_real(e.value), has_lo ? csv_real(e.fit_lo.exponent) : std::string(), csv_real(e.fit_hi.exponent),
              csv_real(residual)});
}

AbscissaTable read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config field 'table': cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("k,alpha,value", 0) != 0) {
    throw ConfigError("config field 'table': " + path + " must start with header k,alpha,value[,half_width]");
  }
  AbscissaTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    try {
      while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("config field 'table': " + path + " line " + std::to_string(line_no) + " is not numeric");
    }
    if (cells.size() < 3) {
      throw ConfigError("config field 'table': " + path + " line " + std::to_string(line_no) + " has too few cells");
    }
    table[{cells[0], cells[1]}] = {cells[2], cells.size() > 3 ? cells[3] : 0.0};
  }
  return table;
}

}  // namespace

std::string csv_real(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

MomentProvider cached_moments(MomentSampler& sampler, const Cache* cache, std::optional<double> step) {
  return [&sampler, cache, step](double sigma, int k, std::optional<double> alpha, std::span<const double> Ts) {
    const double h = step.value_or(default_grid_step(k, sigma));
    KeyBuilder key(sampler.series().descriptor(), "moments");
    key.add("sigma", sigma).add("k", k).add("alpha", alpha.value_or(0.0)).add("step", h).add("T", Ts);
    if (cache) {
      if (auto hit = cache->lookup(key.str())) {
        try {
          std::vector<MomentSample> out;
          for (const auto& j : *hit) out.push_back(sample_from_json(j));
          if (out.size() == Ts.size()) return out;
        } catch (const std::exception&) {
        }
        std::fprintf(stderr, "warning: cache entry for %s malformed; recomputing\n", key.str().c_str());
      }
    }
    auto out = sampler(sigma, k, alpha, Ts);
    if (cache) {
      json arr = json::array();
      for (const auto& s : out) arr.push_back(sample_to_json(s));
      cache->store(key.str(), arr);
    }
    return out;
  };
}

ModulusFn cached_modulus(const SeriesSpec& series, const Cache* cache, double tol) {
  ModulusFn direct = series_modulus(series, tol);
  return [series, cache, tol, direct](double sigma, std::span<const double> ts) {
    KeyBuilder key(series.descriptor(), "modulus");
    key.add("sigma", sigma).add("tol", tol).add("t", ts);
    if (cache) {
      if (auto hit = cache->lookup(key.str())) {
        try {
          auto v = hit->get<std::vector<double>>();
          if (v.size() == ts.size()) return v;
        } catch (const std::exception&) {
        }
        std::fprintf(stderr, "warning: cache entry for %s malformed; recomputing\n", key.str().c_str());
      }
    }
    auto v = direct(sigma, ts);
    if (cache) cache->store(key.str(), json(v));
    return v;
  };
}

CommandOutput run_eval(const ExperimentConfig& c) {
  const SeriesSpec series = parse_series(c.series);
  CommandOutput out;
  out.csv = std::string(kEvalColumns) + "\n";
  const double sigma = c.sigma.front();
  for (double t : c.t) {
    const cplx z = evaluate(series, {sigma, t}, c.tol);
    out.csv += row({series.descriptor(), csv_real(sigma), csv_real(t), csv_real(z.real()), csv_real(z.imag()),
                    csv_real(std::abs(z))});
    char buf[96];
    if (t == 0.0 && series.real_coefficients()) {
      std::snprintf(buf, sizeof buf, "%.10f\n", z.real());
    } else {
      std::snprintf(buf, sizeof buf, "%.10f %+.10fi\n", z.real(), z.imag());
    }
    out.text += buf;
  }
  return out;
}

CommandOutput run_moments(const ExperimentConfig& c, const Cache* cache) {
  const SeriesSpec series = parse_series(c.series);
  MomentSampler sampler(series, c.step);
  const MomentProvider moments = cached_moments(sampler, cache, c.step);
  CommandOutput out;
  out.csv = std::string(kMomentsColumns) + "\n";
  std::vector<std::optional<double>> alphas;
  if (c.unweighted) alphas.push_back(std::nullopt);
  for (double a : c.alpha) alphas.push_back(a);
  for (int k : c.k) {
    for (const auto& a : alphas) {
      for (double s : c.sigma) {
        for (const auto& m : moments(s, k, a, c.T)) {
          out.csv += row({series.descriptor(), std::to_string(k), csv_real(m.alpha.value_or(0.0)), csv_real(s),
                          csv_real(m.T), csv_real(m.value), csv_real(m.quad_error)});
        }
      }
    }
  }
  return out;
}

CommandOutput run_abscissa(const ExperimentConfig& c, const Cache* cache) {
  const SeriesSpec series = parse_series(c.series);
  MomentSampler sampler(series, c.step);
  const MomentProvider moments = cached_moments(sampler, cache, c.step);
  const AbscissaOptions opts = abscissa_options(c);
  CommandOutput out;
  out.csv = std::string(kAbscissaColumns) + "\n";
  for (int k : c.k) {
    if (c.unweighted) {
      const auto e = estimate_abscissa(moments, k, std::nullopt, c.sigma, c.T, opts);
      out.csv += abscissa_row(series.descriptor(), e);
    }
    for (double a : c.alpha) {
      check_alpha_domain(series, k, a, c.mu0);
      const auto e = estimate_abscissa(moments, k, a, c.sigma, c.T, opts);
      out.csv += abscissa_row(series.descriptor(), e);
    }
  }
  return out;
}

CommandOutput run_mu(const ExperimentConfig& c, const Cache* cache) {
  const SeriesSpec series = parse_series(c.series);
  const auto profile = order_function_profile(cached_modulus(series, cache, c.tol), c.sigma, c.t);
  CommandOutput out;
  out.csv = std::string(kMuColumns) + "\n";
  for (const auto& p : profile.grid) {
    out.csv += row({series.descriptor(), csv_real(p.sigma), csv_real(p.mu_hat), csv_real(p.fit.exponent),
                    csv_real(p.fit.residual), std::to_string(p.fit.n_points)});
  }
  out.text = "mu0_hat=" + csv_real(profile.mu0_hat) + " sigma_L_hat=" + csv_real(profile.sigma_L_hat) + "\n";
  if (c.emit_svg) {
    Panel p{"order function estimate", "sigma", "mu", {}};
    Line l{"mu_hat", {}, false};
    for (const auto& g : profile.grid) l.points.emplace_back(g.sigma, g.mu_hat);
    p.lines.push_back(std::move(l));
    out.svg = render_svg({p});
  }
  return out;
}

CommandOutput run_parseval(const ExperimentConfig& c, const Cache* cache) {
  const SeriesSpec series = parse_series(c.series);
  CommandOutput out;
  out.csv = std::string(kParsevalColumns) + "\n";
  for (double a : c.alpha) {
    for (double s : c.sigma) {
      for (double T : c.T) {
        KeyBuilder key(series.descriptor(), "parseval");
        key.add("alpha", a).add("sigma", s).add("T", T).add("x_max", c.x_max).add("step", c.step.value_or(0.0));
        std::optional<ParsevalReport> r;
        if (cache) {
          if (auto hit = cache->lookup(key.str())) {
            try {
              r = ParsevalReport{hit->at("t_side").get<double>(), hit->at("x_side").get<double>(),
                                 hit->at("gap").get<double>(), hit->at("quad_error").get<double>()};
            } catch (const std::exception&) {
              std::fprintf(stderr, "warning: cache entry for %s malformed; recomputing\n", key.str().c_str());
            }
          }
        }
        if (!r) {
          r = parseval_report(series, a, s, T, c.x_max, c.step);
          if (cache) {
            cache->store(key.str(),
                         {{"t_side", r->t_side}, {"x_side", r->x_side}, {"gap", r->gap}, {"quad_error", r->quad_error}});
          }
        }
        out.csv += row({series.descriptor(), csv_real(a), csv_real(s), csv_real(T), csv_real(c.x_max),
                        csv_real(r->t_side), csv_real(r->x_side), csv_real(r->gap),
                        csv_real(r->gap / std::abs(r->x_side)), csv_real(r->quad_error)});
      }
    }
  }
  return out;
}

CommandOutput run_diagnose(const ExperimentConfig& c, const Cache* cache) {
  CommandOutput out;
  AbscissaTable table;
  double mu0 = 0.0, sigma_L = 0.0;
  std::string source;
  std::optional<OrderFunctionEstimate> profile;

  if (c.table == "lindelof") {
    mu0 = *c.mu0;
    sigma_L = *c.sigma_L;
    std::vector<double> ks(c.k.begin(), c.k.end());
    table = lindelof_table(ks, c.alpha, mu0, sigma_L);
    source = "exact Lindelof-form fixture";
  } else if (!c.table.empty()) {
    if (!c.mu0 || !c.sigma_L) throw ConfigError("config field 'mu0': a table file needs mu0 and sigma_L");
    mu0 = *c.mu0;
    sigma_L = *c.sigma_L;
    table = read_table_csv(c.table);
    source = "table " + c.table;
  } else {
    const SeriesSpec series = parse_series(c.series);
    const std::vector<double> profile_sigma = arithmetic_grid(0.1, 0.9, 0.1);
    profile = order_function_profile(cached_modulus(series, cache, 1e-8), profile_sigma, c.t);
    std::string mu0_src = "option", sl_src = "option";
    if (c.mu0) mu0 = *c.mu0;
    else if (series.mu0_hint()) mu0 = *series.mu0_hint(), mu0_src = "series hint";
    else mu0 = profile->mu0_hat, mu0_src = "order-function profile";
    if (c.sigma_L) sigma_L = *c.sigma_L;
    else if (series.sigma_L_hint()) sigma_L = *series.sigma_L_hint(), sl_src = "series hint";
    else sigma_L = profile->sigma_L_hat, sl_src = "order-function profile";
    out.text += "mu0=" + csv_real(mu0) + " (" + mu0_src + "), sigma_L=" + csv_real(sigma_L) + " (" + sl_src + ")\n";

    MomentSampler sampler(series, c.step);
    const MomentProvider moments = cached_moments(sampler, cache, c.step);
    std::vector<AbscissaEstimate> estimates;
    for (int k : c.k) {
      for (double a : c.alpha) {
        if (a > k * mu0 * (1.0 + 1e-12)) continue;
        estimates.push_back(estimate_abscissa(moments, k, a, c.sigma, c.T, abscissa_options(c)));
      }
    }
    table = table_from_estimates(estimates);
    source = "estimates for " + series.descriptor();
  }

  const PipelineReport rep = theorem_pipeline(table, mu0, sigma_L);
  out.text = "source: " + source + "\n" + out.text + rep.verdict + "\n";

  out.csv = std::string(kDiagnoseColumns) + "\n";
  auto emit = [&](const char* check, const char* fixed_name, double fixed, const SequenceReport& r) {
    out.csv += row({check, fixed_name, csv_real(fixed), to_string(r.property), r.holds ? "1" : "0",
                    csv_real(r.max_violation), csv_real(r.tolerance), csv_real(r.worst_triple[0]),
                    csv_real(r.worst_triple[1]), csv_real(r.worst_triple[2])});
  };
  std::vector<double> alphas, ks;
  for (const auto& [key, cell] : table) {
    if (std::find(ks.begin(), ks.end(), key.first) == ks.end()) ks.push_back(key.first);
    if (std::find(alphas.begin(), alphas.end(), key.second) == alphas.end()) alphas.push_back(key.second);
  }
  std::sort(alphas.begin(), alphas.end());
  for (std::size_t i = 0; i < rep.concavity.size(); ++i) emit("concavity_in_k", "alpha", alphas[i], rep.concavity[i]);
  for (std::size_t i = 0; i < rep.convexity.size(); ++i) emit("convexity_in_alpha", "k", ks[i], rep.convexity[i]);

  std::string tab = std::string(kTableColumns) + "\n";
  for (const auto& [key, cell] : table) {
    tab += row({csv_real(key.first), csv_real(key.second), csv_real(cell.value), csv_real(cell.half_width)});
  }
  out.extra.emplace_back("_table", tab);

  std::string pred = std::string(kPredictionColumns) + "\n";
  std::map<double, double> mu_hat;
  if (profile) {
    for (const auto& g : profile->grid) mu_hat[g.sigma] = g.mu_hat;
  }
  if (rep.prediction) {
    for (auto [s, m] : *rep.prediction) {
      auto it = mu_hat.find(s);
      pred += row({csv_real(s), csv_real(m), it == mu_hat.end() ? std::string() : csv_real(it->second)});
    }
  }
  out.extra.emplace_back("_prediction", pred);

  std::string ratio = std::string(kRatioColumns) + "\n";
  for (const auto& b : rep.ratio) {
    for (const auto& t : b.terms) {
      ratio += row({csv_real(b.sigma), csv_real(b.k), csv_real(b.gamma), csv_real(t.m), csv_real(t.sigma_m),
                    csv_real(t.bound), csv_real(b.upper), csv_real(b.middle), csv_opt(b.limit),
                    t.extrapolated ? "1" : "0", b.monotone ? "1" : "0"});
    }
  }
  out.extra.emplace_back("_ratio", ratio);

  if (c.emit_svg) {
    Panel curves{"abscissa estimates", "alpha", "sigma_k(alpha)", {}};
    for (double k : ks) {
      Line l{"k=" + csv_real(k), {}, false};
      for (const auto& [key, cell] : table) {
        if (key.first == k) l.points.emplace_back(key.second, cell.value);
      }
      curves.lines.push_back(std::move(l));
    }
    Panel mu{"order function", "sigma", "mu", {}};
    const auto line = predict_linear_mu(mu0, sigma_L, arithmetic_grid(0.0, 1.0, 0.05));
    mu.lines.push_back({"predicted", {line.begin(), line.end()}, true});
    if (profile) {
      Line l{"mu_hat", {}, false};
      for (const auto& g : profile->grid) l.points.emplace_back(g.sigma, g.mu_hat);
      mu.lines.push_back(std::move(l));
    }
    out.svg = render_svg({curves, mu});
  }
  return out;
}

CommandOutput run_command(const ExperimentConfig& c, const Cache* cache) {
  if (c.command == "eval") return run_eval(c);
  if (c.command == "moments") return run_moments(c, cache);
  if (c.command == "abscissa") return run_abscissa(c, cache);
  if (c.command == "mu") return run_mu(c, cache);
  if (c.command == "parseval") return run_parseval(c, cache);
  if (c.command == "diagnose") return run_diagnose(c, cache);
  throw ConfigError("unknown command '" + c.command + "'");
}

}  // namespace dirlab::app
