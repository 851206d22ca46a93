#include "dirlab/abscissa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

void require_increasing(std::span<const double> xs, const char* what, std::size_t min_size) {
  if (xs.size() < min_size) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(min_size) + " points");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError(std::string(what) + " must be strictly increasing");
  }
}

void require_unit_interval(std::span<const double> sigmas, const char* what) {
  for (double s : sigmas) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

GrowthFit growth_exponent(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw DataError("growth exponent needs at least 3 samples");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [T, v] = samples[i];
    if (!(T > 0.0)) throw DataError("growth exponent: T must be > 0");
    if (i > 0 && !(T > samples[i - 1].first)) throw DataError("growth exponent: T must be increasing");
    if (!(v > 0.0)) throw DataError("growth exponent: values must be > 0 (got " + std::to_string(v) + ")");
    lx.push_back(std::log(T));
    ly.push_back(std::log(v));
  }
  const LineFit f = fit_line(lx, ly);
  return {f.slope, f.intercept, f.residual, f.n_points};
}

GrowthFit growth_exponent(std::span<const MomentSample> samples) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.emplace_back(s.T, s.value);
  return growth_exponent(pts);
}

GrowthFit increment_growth_exponent(std::span<const MomentSample> samples) {
  if (samples.size() < 4) throw DataError("increment growth exponent needs at least 4 samples");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    if (!(a.T > 0.0) || !(b.T > a.T)) throw DataError("increment growth exponent: T must be positive and increasing");
    const double gain = b.value - a.value;
    if (!(gain > 0.0)) throw DataError("increment growth exponent: moment did not increase between T samples");
    pts.emplace_back(std::sqrt(a.T * b.T), gain / std::log(b.T / a.T));
  }
  return growth_exponent(pts);
}

// ------------------------------------------------------------------ MomentSampler

MomentSampler::MomentSampler(SeriesSpec series, std::optional<double> grid_step)
    : series_(std::move(series)), grid_step_(grid_step) {}

const ModulusScan& MomentSampler::scan(double sigma, int k, double T_max) {
  const double step = grid_step_.value_or(default_grid_step(k, sigma));
  // Keyed by step as well so results never depend on the order of requests.
  const std::pair<double, double> key{sigma, step};
  auto it = scans_.find(key);
  if (it == scans_.end() || it->second->T_max() < T_max * (1.0 - 1e-12)) {
    auto fresh = std::make_shared<const ModulusScan>(series_, sigma, T_max, step);
    it = scans_.insert_or_assign(key, std::move(fresh)).first;
  }
  return *it->second;
}

std::vector<MomentSample> MomentSampler::operator()(double sigma, int k, std::optional<double> alpha,
                                                    std::span<const double> T_grid) {
  if (T_grid.empty()) return {};
  const ModulusScan& s = scan(sigma, k, T_grid.back());
  std::vector<MomentSample> out;
  out.reserve(T_grid.size());
  for (double T : T_grid) out.push_back(s.moment(k, alpha, T));
  return out;
}

// ------------------------------------------------------------------ abscissae

AbscissaEstimate estimate_abscissa(const MomentProvider& moments, int k, std::optional<double> alpha,
                                   std::span<const double> sigma_grid, std::span<const double> T_grid,
                                   const AbscissaOptions& opts) {
  if (k < 1) throw DomainError("abscissa: k must be a positive integer");
  if (alpha && !(*alpha > 0.0)) throw DomainError("abscissa: alpha must be > 0");
  require_increasing(sigma_grid, "sigma grid", 1);
  require_unit_interval(sigma_grid, "sigma grid");
  require_increasing(T_grid, "T grid", 4);
  const double threshold = opts.threshold.value_or(alpha ? 0.1 : 1.1);

  AbscissaEstimate est;
  est.k = k;
  est.alpha = alpha.value_or(0.0);
  std::optional<std::size_t> last_divergent;
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const auto samples = moments(sigma_grid[i], k, alpha, T_grid);
    SigmaScanPoint p{sigma_grid[i], increment_growth_exponent(samples), false};
    p.divergent = p.fit.exponent > threshold;
    if (p.divergent) last_divergent = i;
    est.scan.push_back(p);
  }

  if (!last_divergent) {
    if (opts.policy == BracketPolicy::throw_error) {
      throw BracketNotFound("every sigma in the grid is convergent; extend the grid towards 0",
                            BracketNotFound::Side::all_convergent);
    }
    est.clamped = true;
    est.bracket = {0.0, sigma_grid.front()};
    est.value = 0.0;
    est.fit_hi = est.scan.front().fit;
    return est;
  }
  const std::size_t i = *last_divergent;
  if (i + 1 == sigma_grid.size()) {
    throw BracketNotFound("every sigma up to " + std::to_string(sigma_grid.back()) +
                              " is divergent; extend the grid upwards",
                          BracketNotFound::Side::all_divergent);
  }
  est.bracket = {sigma_grid[i], sigma_grid[i + 1]};
  est.value = 0.5 * (est.bracket.first + est.bracket.second);
  est.fit_lo = est.scan[i].fit;
  est.fit_hi = est.scan[i + 1].fit;
  return est;
}

AbscissaEstimate estimate_sigma_k_alpha(MomentSampler& sampler, int k, double alpha,
                                        std::span<const double> sigma_grid, std::span<const double> T_grid,
                                        const AbscissaOptions& opts) {
  if (!(alpha > 0.0)) throw DomainError("sigma_k(alpha): alpha must be > 0");
  if (const auto mu0 = sampler.series().mu0_hint(); mu0 && alpha > k * *mu0 * (1.0 + 1e-12)) {
    throw DomainError("sigma_k(alpha): alpha exceeds k * mu(0)");
  }
  auto provider = [&](double s, int kk, std::optional<double> a, std::span<const double> Ts) {
    return sampler(s, kk, a, Ts);
  };
  return estimate_abscissa(provider, k, alpha, sigma_grid, T_grid, opts);
}

AbscissaEstimate estimate_sigma_k_alpha(const SeriesSpec& series, int k, double alpha,
                                        std::span<const double> sigma_grid, std::span<const double> T_grid,
                                        const AbscissaOptions& opts) {
  MomentSampler sampler(series, opts.grid_step);
  return estimate_sigma_k_alpha(sampler, k, alpha, sigma_grid, T_grid, opts);
}

AbscissaEstimate estimate_sigma_k(MomentSampler& sampler, int k, std::span<const double> sigma_grid,
                                  std::span<const double> T_grid, const AbscissaOptions& opts) {
  auto provider = [&](double s, int kk, std::optional<double> a, std::span<const double> Ts) {
    return sampler(s, kk, a, Ts);
  };
  return estimate_abscissa(provider, k, std::nullopt, sigma_grid, T_grid, opts);
}

AbscissaEstimate estimate_sigma_k(const SeriesSpec& series, int k, std::span<const double> sigma_grid,
                                  std::span<const double> T_grid, const AbscissaOptions& opts) {
  MomentSampler sampler(series, opts.grid_step);
  return estimate_sigma_k(sampler, k, sigma_grid, T_grid, opts);
}

// ------------------------------------------------------------------ order function

ModulusFn series_modulus(const SeriesSpec& series, double tol) {
  return [series, tol](double sigma, std::span<const double> ts) {
    const auto values = evaluate_many(series, sigma, ts, tol);
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](cplx z) { return std::abs(z); });
    return out;
  };
}

MuEstimate estimate_mu(const ModulusFn& modulus, double sigma, std::span<const double> t_grid) {
  if (!(sigma > 0.0)) throw DomainError("estimate_mu: sigma must be > 0");
  require_increasing(t_grid, "t grid", 3);
  if (t_grid.back() < 1e3) throw DomainError("estimate_mu: t grid must reach at least 1000");
  const auto values = modulus(sigma, t_grid);
  if (values.size() != t_grid.size()) throw DataError("estimate_mu: modulus returned the wrong number of values");

  std::vector<std::pair<double, double>> pts;
  double running = 0.0;
  double last_log = -1e300;
  const double lo = std::max(t_grid.front(), 1.0);
  const double t_fit = std::sqrt(lo * t_grid.back());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    running = std::max(running, values[j]);
    const double t = t_grid[j];
    if (t < t_fit || running <= 0.0) continue;
    const double lt = std::log(t);
    if (lt - last_log < 0.02 && j + 1 != t_grid.size()) continue;
    pts.emplace_back(t, running);
    last_log = lt;
  }
  if (running <= 0.0) throw DataError("estimate_mu: |f| vanishes on the whole grid");
  MuEstimate out;
  out.fit = growth_exponent(pts);
  out.mu_hat = std::max(0.0, out.fit.exponent);
  return out;
}

MuEstimate estimate_mu(const SeriesSpec& series, double sigma, std::span<const double> t_grid) {
  return estimate_mu(series_modulus(series), sigma, t_grid);
}

OrderFunctionEstimate order_function_profile(const ModulusFn& modulus, std::span<const double> sigma_grid,
                                             std::span<const double> t_grid, ProfileOptions opts) {
  require_increasing(sigma_grid, "sigma grid", 1);
  require_unit_interval(sigma_grid, "sigma grid");
  OrderFunctionEstimate out;
  for (double s : sigma_grid) {
    const MuEstimate m = estimate_mu(modulus, s, t_grid);
    out.grid.push_back({s, m.mu_hat, m.fit});
  }
  double top = 0.0;
  for (const auto& p : out.grid) top = std::max(top, p.mu_hat);
  if (out.grid.size() >= 2) {
    const auto& a = out.grid[0];
    const auto& b = out.grid[1];
    const double extrapolated = a.mu_hat - a.sigma * (b.mu_hat - a.mu_hat) / (b.sigma - a.sigma);
    out.mu0_hat = std::max(extrapolated, top);
  } else {
    out.mu0_hat = top;
  }
  out.sigma_L_hat = opts.sigma_L_fallback;
  for (const auto& p : out.grid) {
    if (p.mu_hat <= opts.zero_threshold) {
      out.sigma_L_hat = p.sigma;
      break;
    }
  }
  return out;
}

OrderFunctionEstimate order_function_profile(const SeriesSpec& series, std::span<const double> sigma_grid,
                                             std::span<const double> t_grid, ProfileOptions opts) {
  return order_function_profile(series_modulus(series), sigma_grid, t_grid, opts);
}

double convexity_bound(double mu0, double sigma_L, double sigma) {
  if (!(mu0 > 0.0)) throw DomainError("convexity bound: mu0 must be > 0");
  if (!(sigma_L > 0.0)) throw DomainError("convexity bound: sigma_L must be > 0");
  if (!(sigma >= 0.0 && sigma <= sigma_L)) throw DomainError("convexity bound: sigma outside [0, sigma_L]");
  return mu0 * (1.0 - sigma / sigma_L);
}

}  // namespace dirlab
