#include "dirlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

std::vector<std::pair<double, double>> sorted_points(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DataError("sequence check needs at least 3 points");
  std::vector<std::pair<double, double>> out(points.begin(), points.end());
  std::sort(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].first == out[i - 1].first) {
      std::ostringstream msg;
      msg << "duplicate index " << out[i].first << " in sequence";
      throw DataError(msg.str());
    }
  }
  return out;
}

// 2 (chord at x1 - y1); y0 - 2 y1 + y2 when x1 is the midpoint.
double second_difference(const std::pair<double, double>& a, const std::pair<double, double>& b,
                         const std::pair<double, double>& c) {
  const double span = c.first - a.first;
  const double chord = (a.second * (c.first - b.first) + c.second * (b.first - a.first)) / span;
  return 2.0 * (chord - b.second);
}

SequenceReport check_shape(std::span<const std::pair<double, double>> points, double tol, Shape shape) {
  if (!(tol >= 0.0)) throw DomainError("sequence check: tolerance must be >= 0");
  SequenceReport r;
  r.points = sorted_points(points);
  r.property = shape;
  r.tolerance = tol;
  double worst = -1.0;
  for (std::size_t i = 0; i + 2 < r.points.size(); ++i) {
    const double d = second_difference(r.points[i], r.points[i + 1], r.points[i + 2]);
    const double violation = shape == Shape::convex ? -d : d;
    if (violation > worst) {
      worst = violation;
      r.worst_index = r.points[i + 1].first;
      r.worst_triple = {r.points[i].first, r.points[i + 1].first, r.points[i + 2].first};
    }
  }
  r.max_violation = std::max(0.0, worst);
  r.holds = r.max_violation <= tol;
  return r;
}

// Linear interpolation through (xs, ys), extrapolating with the end segments.
double piecewise_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x, bool* extrapolated) {
  if (xs.empty()) throw DataError("interpolation over an empty table");
  if (xs.size() == 1) {
    if (x != xs[0] && extrapolated) *extrapolated = true;
    return ys[0];
  }
  if ((x < xs.front() || x > xs.back()) && extrapolated) *extrapolated = true;
  std::size_t i = 0;
  while (i + 2 < xs.size() && x > xs[i + 1]) ++i;
  const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

std::string describe(const SequenceReport& r, const char* fixed_name, double fixed) {
  std::ostringstream s;
  const char* idx = r.property == Shape::concave ? "k" : "alpha";
  s << to_string(r.property) << " in " << idx << " fails at " << fixed_name << "=" << fixed << " on " << idx << "=("
    << r.worst_triple[0] << ", " << r.worst_triple[1] << ", " << r.worst_triple[2] << "), violation "
    << r.max_violation << " > tol " << r.tolerance;
  return s.str();
}

double sequence_tolerance(const std::vector<double>& half_widths) {
  double tol = 0.0;
  for (std::size_t i = 0; i + 2 < half_widths.size(); ++i) {
    tol = std::max(tol, half_widths[i] + half_widths[i + 1] + half_widths[i + 2]);
  }
  return std::max(tol, 1e-12);
}

bool in_domain(double k, double alpha, double mu0) { return alpha <= k * mu0 * (1.0 + 1e-12); }

}  // namespace

const char* to_string(Shape s) { return s == Shape::convex ? "convexity" : "concavity"; }

SequenceReport check_convexity_in_alpha(std::span<const std::pair<double, double>> points, double tol) {
  return check_shape(points, tol, Shape::convex);
}

SequenceReport check_concavity_in_k(std::span<const std::pair<double, double>> points, double tol) {
  return check_shape(points, tol, Shape::concave);
}

std::vector<std::pair<double, double>> predict_linear_mu(double mu0, double sigma_L, std::span<const double> sigma_grid) {
  if (!(mu0 > 0.0)) throw DomainError("predict_linear_mu: mu0 must be > 0");
  if (!(sigma_L > 0.0 && sigma_L <= 1.0)) throw DomainError("predict_linear_mu: sigma_L must lie in (0, 1]");
  std::vector<std::pair<double, double>> out;
  out.reserve(sigma_grid.size());
  for (double s : sigma_grid) out.emplace_back(s, std::max(0.0, mu0 * (1.0 - s / sigma_L)));
  return out;
}

double lindelof_form(double k, double alpha, double mu0, double sigma_L) {
  if (!(mu0 > 0.0)) throw DomainError("lindelof_form: mu0 must be > 0");
  if (!(k > 0.0)) throw DomainError("lindelof_form: k must be > 0");
  if (!(alpha > 0.0)) throw DomainError("lindelof_form: alpha must be > 0");
  if (!in_domain(k, alpha, mu0)) throw DomainError("lindelof_form: alpha exceeds k * mu0");
  return sigma_L * (1.0 - alpha / (k * mu0));
}

UpperBoundReport upper_bound_check(std::span<const AbscissaEstimate> estimates, double mu0, double sigma_L,
                                   double tol) {
  UpperBoundReport out;
  for (const auto& e : estimates) {
    UpperBoundEntry u;
    u.k = e.k;
    u.alpha = e.alpha;
    u.value = e.value;
    u.half_width = e.half_width();
    u.bound = e.alpha > 0.0 ? lindelof_form(e.k, e.alpha, mu0, sigma_L) : sigma_L;
    u.flagged = u.value > u.bound + u.half_width + tol;
    u.strict = u.value < u.bound - e.width();
    out.flagged += u.flagged;
    out.strict += u.strict;
    out.entries.push_back(u);
  }
  return out;
}

TheoremChain make_theorem_chain(double sigma, double mu_sigma, double mu0, double sigma_L, double l, double m,
                                double alpha, double beta) {
  if (!(mu0 > 0.0) || !(sigma_L > 0.0)) throw DomainError("theorem chain: mu0 and sigma_L must be > 0");
  if (!(sigma >= 0.0 && sigma <= sigma_L)) throw DomainError("theorem chain: sigma outside [0, sigma_L]");
  if (!(l <= m)) throw DomainError("theorem chain: need l <= m");
  if (!(alpha > 0.0 && alpha <= beta)) throw DomainError("theorem chain: need 0 < alpha <= beta");
  TheoremChain c;
  c.sigma = sigma;
  c.phi = mu_sigma / mu0;
  c.theta = sigma / sigma_L;
  if (!(c.phi >= 0.0 && c.phi <= 1.0)) throw DomainError("theorem chain: mu(sigma)/mu0 outside [0, 1]");
  c.l = l;
  c.m = m;
  c.alpha = alpha;
  c.beta = beta;
  c.k = c.phi * l + (1.0 - c.phi) * m;
  c.gamma = c.theta * alpha + (1.0 - c.theta) * beta;
  return c;
}

AbscissaTable table_from_estimates(std::span<const AbscissaEstimate> estimates) {
  AbscissaTable t;
  for (const auto& e : estimates) t[{static_cast<double>(e.k), e.alpha}] = {e.value, e.half_width()};
  return t;
}

AbscissaTable lindelof_table(std::span<const double> ks, std::span<const double> alphas, double mu0, double sigma_L) {
  AbscissaTable t;
  for (double k : ks) {
    for (double a : alphas) {
      if (in_domain(k, a, mu0)) t[{k, a}] = {lindelof_form(k, a, mu0, sigma_L), 0.0};
    }
  }
  return t;
}

double interpolate_table(const AbscissaTable& table, double k, double alpha, bool* extrapolated) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> rows;
  for (const auto& [key, cell] : table) {
    rows[key.first].first.push_back(key.second);
    rows[key.first].second.push_back(cell.value);
  }
  if (rows.empty()) throw DataError("interpolation over an empty table");
  std::vector<double> ks, vs;
  for (const auto& [kk, row] : rows) {
    ks.push_back(kk);
    vs.push_back(piecewise_linear(row.first, row.second, alpha, extrapolated));
  }
  return piecewise_linear(ks, vs, k, extrapolated);
}

ChainCheck check_theorem_chain(const AbscissaTable& table, const TheoremChain& chain, double tol) {
  ChainCheck c;
  c.chain = chain;
  bool ex = false;
  c.lhs = chain.phi * interpolate_table(table, chain.l, chain.gamma, &ex) +
          (1.0 - chain.phi) * interpolate_table(table, chain.m, chain.gamma, &ex);
  c.rhs = chain.theta * interpolate_table(table, chain.k, chain.alpha, &ex) +
          (1.0 - chain.theta) * interpolate_table(table, chain.k, chain.beta, &ex);
  c.extrapolated = ex;
  c.holds = c.lhs <= c.rhs + tol;
  return c;
}

PipelineReport theorem_pipeline(const AbscissaTable& table, double mu0, double sigma_L, const PipelineOptions& opts) {
  if (!(mu0 > 0.0)) throw DomainError("theorem pipeline: mu0 must be > 0");
  if (!(sigma_L > 0.0 && sigma_L <= 1.0)) throw DomainError("theorem pipeline: sigma_L must lie in (0, 1]");
  std::set<double> ks, alphas;
  for (const auto& [key, cell] : table) {
    ks.insert(key.first);
    alphas.insert(key.second);
  }

  std::ostringstream missing;
  int n_missing = 0;
  for (double k : ks) {
    for (double a : alphas) {
      if (in_domain(k, a, mu0) && !table.count({k, a})) {
        missing << (n_missing++ ? ", " : "") << "(k=" << k << ", alpha=" << a << ")";
      }
    }
  }
  if (n_missing) throw DataError("theorem pipeline: table is missing cells " + missing.str());

  PipelineReport out;
  std::vector<std::string> failures;
  for (double a : alphas) {
    std::vector<std::pair<double, double>> seq;
    std::vector<double> hw;
    for (double k : ks) {
      if (!in_domain(k, a, mu0)) continue;
      const auto& cell = table.at({k, a});
      seq.emplace_back(k, cell.value);
      hw.push_back(cell.half_width);
    }
    if (seq.size() < 3) {
      std::ostringstream s;
      s << "theorem pipeline: alpha=" << a << " has " << seq.size()
        << " k values with alpha <= k mu0; at least 3 are needed";
      throw DataError(s.str());
    }
    out.concavity.push_back(check_concavity_in_k(seq, opts.tol.value_or(sequence_tolerance(hw))));
    if (!out.concavity.back().holds) failures.push_back(describe(out.concavity.back(), "alpha", a));
  }
  for (double k : ks) {
    std::vector<std::pair<double, double>> seq;
    std::vector<double> hw;
    for (double a : alphas) {
      if (!in_domain(k, a, mu0)) continue;
      const auto& cell = table.at({k, a});
      seq.emplace_back(a, cell.value);
      hw.push_back(cell.half_width);
    }
    if (seq.size() < 3) {
      std::ostringstream s;
      s << "theorem pipeline: k=" << k << " has " << seq.size() << " alpha values in its domain; at least 3 are needed";
      throw DataError(s.str());
    }
    out.convexity.push_back(check_convexity_in_alpha(seq, opts.tol.value_or(sequence_tolerance(hw))));
    if (!out.convexity.back().holds) failures.push_back(describe(out.convexity.back(), "k", k));
  }

  out.all_hold = failures.empty();
  std::vector<double> grid = opts.sigma_grid;
  if (grid.empty()) {
    for (int i = 0; i <= 10; ++i) grid.push_back(sigma_L * i / 10.0);
  }
  if (out.all_hold) {
    out.prediction = predict_linear_mu(mu0, sigma_L, grid);
    out.verdict = "all checks hold; predicted μ linear";
  } else {
    std::ostringstream s;
    s << "prediction refused: ";
    for (std::size_t i = 0; i < failures.size(); ++i) s << (i ? "; " : "") << failures[i];
    out.verdict = s.str();
  }

  std::vector<double> probes = opts.probe_sigma;
  if (probes.empty()) probes = {0.25 * sigma_L, 0.5 * sigma_L, 0.75 * sigma_L};
  const double k0 = *ks.begin();
  for (double s : probes) {
    if (!(s > 0.0 && s < sigma_L)) throw DomainError("theorem pipeline: ratio probes must lie in (0, sigma_L)");
    RatioBracket b;
    b.sigma = s;
    b.k = k0;
    b.gamma = (1.0 - s / sigma_L) * k0 * mu0;
    b.upper = -mu0 / sigma_L;
    b.middle = (mu0 * (1.0 - s / sigma_L) - mu0) / s;
    for (double m : ks) {
      if (m <= k0) continue;
      RatioTerm t;
      t.m = m;
      bool ex = false;
      t.sigma_m = interpolate_table(table, m, b.gamma, &ex);
      t.extrapolated = ex;
      t.bound = -mu0 / t.sigma_m;
      b.terms.push_back(t);
    }
    for (std::size_t i = 2; i < b.terms.size(); ++i) {
      const double d0 = b.terms[i - 1].bound - b.terms[i - 2].bound;
      const double d1 = b.terms[i].bound - b.terms[i - 1].bound;
      if (d0 * d1 < 0.0) b.monotone = false;
    }
    if (b.terms.size() >= 2) {
      const auto& p = b.terms[b.terms.size() - 2];
      const auto& q = b.terms.back();
      // sigma_m(gamma) = a + c / m through the two largest m; a is the m -> infinity value.
      const double a = (q.m * q.sigma_m - p.m * p.sigma_m) / (q.m - p.m);
      b.limit = -mu0 / a;
    }
    out.ratio.push_back(std::move(b));
  }
  return out;
}

FunctionalEquationReport functional_equation_gap(const SeriesSpec& series, double sigma, std::span<const double> t_grid,
                                                 double mu0, std::pair<double, double> band) {
  if (!(sigma > 0.0 && sigma <= 0.5)) throw DomainError("functional equation: sigma must lie in (0, 1/2]");
  if (!(band.first > 0.0 && band.first < band.second)) throw DomainError("functional equation: invalid band");
  bool supported = series.kind() == SeriesKind::eta;
  if (series.kind() == SeriesKind::character) {
    const auto* chi = series.character_ptr();
    supported = chi->is_real() && chi->is_primitive();
  }
  if (!supported) {
    throw UnsupportedError("functional equation: no reflection partner for series " + series.descriptor());
  }
  if (t_grid.empty()) throw DataError("functional equation: empty t grid");
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DataError("functional equation: t grid must be positive");
  }
  std::vector<double> neg(t_grid.size());
  std::transform(t_grid.begin(), t_grid.end(), neg.begin(), [](double t) { return -t; });
  const auto top = evaluate_many(series, sigma, t_grid);
  // 1 - sigma - i t on the reversed grid keeps it increasing for evaluate_many.
  std::vector<double> rev(neg.rbegin(), neg.rend());
  auto bottom = evaluate_many(series, 1.0 - sigma, rev);
  std::reverse(bottom.begin(), bottom.end());

  FunctionalEquationReport r;
  r.ratio_min = INFINITY;
  r.ratio_max = 0.0;
  std::size_t in_band = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double den_f = std::abs(bottom[i]);
    if (den_f < 1e-8) {
      ++r.excluded;
      continue;
    }
    const double ratio = std::abs(top[i]) / (std::pow(t_grid[i], mu0 * (1.0 - 2.0 * sigma)) * den_f);
    ++r.included;
    r.ratio_min = std::min(r.ratio_min, ratio);
    r.ratio_max = std::max(r.ratio_max, ratio);
    in_band += ratio >= band.first && ratio <= band.second;
  }
  if (r.included == 0) throw DataError("functional equation: every grid point was excluded");
  r.spread = r.ratio_max / r.ratio_min;
  r.fraction_in_band = static_cast<double>(in_band) / static_cast<double>(r.included);
  return r;
}

}  // namespace dirlab
