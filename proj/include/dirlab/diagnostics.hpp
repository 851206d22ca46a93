#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dirlab/abscissa.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

enum class Shape { convex, concave };

const char* to_string(Shape s);

struct SequenceReport {
  std::vector<std::pair<double, double>> points;  // (index, value), sorted by index
  Shape property = Shape::convex;
  double tolerance = 0.0;
  bool holds = true;
  double max_violation = 0.0;
  double worst_index = 0.0;                 // middle index of the worst triple
  std::array<double, 3> worst_triple{};     // indices of the worst triple
};

/// Scaled second difference 2 (chord(x1) - y1) on each consecutive triple; it is
/// y0 - 2 y1 + y2 on a uniform grid. Convex iff every value >= -tol.
SequenceReport check_convexity_in_alpha(std::span<const std::pair<double, double>> points, double tol);
/// Concave iff every scaled second difference <= tol (successive differences non-increasing).
SequenceReport check_concavity_in_k(std::span<const std::pair<double, double>> points, double tol);

/// mu0 (1 - sigma / sigma_L), clamped to 0 beyond sigma_L.
std::vector<std::pair<double, double>> predict_linear_mu(double mu0, double sigma_L,
                                                         std::span<const double> sigma_grid);

/// sigma_L (1 - alpha / (k mu0)) for 0 < alpha <= k mu0.
double lindelof_form(double k, double alpha, double mu0, double sigma_L);

struct UpperBoundEntry {
  int k = 1;
  double alpha = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double half_width = 0.0;
  bool flagged = false;  // value > bound + half_width + tol
  bool strict = false;   // value < bound - width: witness that the bound is not attained
};

struct UpperBoundReport {
  std::vector<UpperBoundEntry> entries;
  int flagged = 0;
  int strict = 0;
};

/// Compares each estimate with lindelof_form(k, alpha, mu0, sigma_L); alpha = 0
/// (the unweighted abscissa) is compared with sigma_L.
UpperBoundReport upper_bound_check(std::span<const AbscissaEstimate> estimates, double mu0, double sigma_L,
                                   double tol);

/// Intermediate ordinates k = phi l + (1 - phi) m and gamma = theta alpha + (1 - theta) beta
/// with phi = mu(sigma) / mu0 and theta = sigma / sigma_L.
struct TheoremChain {
  double phi = 0.0;
  double theta = 0.0;
  double l = 0.0;
  double m = 0.0;
  double k = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
};

TheoremChain make_theorem_chain(double sigma, double mu_sigma, double mu0, double sigma_L, double l, double m,
                                double alpha, double beta);

/// sigma estimates indexed by (k, alpha). half_width carries the bracket half-width.
struct TableCell {
  double value = 0.0;
  double half_width = 0.0;
};
using AbscissaTable = std::map<std::pair<double, double>, TableCell>;

AbscissaTable table_from_estimates(std::span<const AbscissaEstimate> estimates);
/// Exact Lindelof-form table on ks x alphas (cells outside alpha <= k mu0 omitted).
AbscissaTable lindelof_table(std::span<const double> ks, std::span<const double> alphas, double mu0,
                             double sigma_L);

/// sigma_k(alpha) from the table: linear in alpha at each tabulated k, then linear in k.
/// Sets *extrapolated when alpha or k falls outside the tabulated range.
double interpolate_table(const AbscissaTable& table, double k, double alpha, bool* extrapolated = nullptr);

struct ChainCheck {
  TheoremChain chain;
  double lhs = 0.0;  // phi sigma_l(gamma) + (1 - phi) sigma_m(gamma)
  double rhs = 0.0;  // theta sigma_k(alpha) + (1 - theta) sigma_k(beta)
  bool holds = true;
  bool extrapolated = false;
};

ChainCheck check_theorem_chain(const AbscissaTable& table, const TheoremChain& chain, double tol);

struct RatioTerm {
  double m = 0.0;
  double sigma_m = 0.0;  // sigma_m(gamma)
  double bound = 0.0;    // -mu0 / sigma_m(gamma)
  bool extrapolated = false;
};

/// Bracket -mu0/sigma_L >= (mu(sigma) - mu0)/sigma >= -mu0/sigma_m(gamma) at one sigma,
/// with gamma = (1 - sigma/sigma_L) k mu0 for the smallest tabulated k.
struct RatioBracket {
  double sigma = 0.0;
  double k = 0.0;
  double gamma = 0.0;
  double upper = 0.0;   // -mu0 / sigma_L
  double middle = 0.0;  // (mu_pred(sigma) - mu0) / sigma
  std::vector<RatioTerm> terms;
  bool monotone = true;          // bounds move monotonically in m
  std::optional<double> limit;   // m -> infinity, fitted linearly in 1/m on the two largest m
};

struct PipelineOptions {
  /// Verdict tolerance. Default: for each sequence, the largest sum of half-widths
  /// over its triples, and 1e-12 for exact tables.
  std::optional<double> tol;
  std::vector<double> sigma_grid;   // prediction grid; default 11 points on [0, sigma_L]
  std::vector<double> probe_sigma;  // ratio probes; default sigma_L/4, sigma_L/2, 3 sigma_L/4
};

struct PipelineReport {
  std::vector<SequenceReport> concavity;  // one per alpha
  std::vector<SequenceReport> convexity;  // one per k
  bool all_hold = false;
  std::optional<std::vector<std::pair<double, double>>> prediction;
  std::vector<RatioBracket> ratio;
  std::string verdict;                    // human-readable summary, names the violating triple
};

/// Runs check_concavity_in_k per alpha and check_convexity_in_alpha per k over the
/// domain alpha <= k mu0, predicts mu only if every check holds, and evaluates the
/// ratio bracket. Throws DataError naming missing cells when coverage is incomplete.
PipelineReport theorem_pipeline(const AbscissaTable& table, double mu0, double sigma_L,
                                const PipelineOptions& opts = {});

struct FunctionalEquationReport {
  double spread = 0.0;        // max / min of the ratio over included points
  double fraction_in_band = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;   // points where |f(1 - sigma - i t)| < 1e-8
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

/// Ratio |f(sigma + i t)| / (t^{mu0 (1 - 2 sigma)} |f(1 - sigma - i t)|) over t_grid.
/// Supported: eta and real primitive characters (their own reflection partners).
FunctionalEquationReport functional_equation_gap(const SeriesSpec& series, double sigma,
                                                 std::span<const double> t_grid, double mu0,
                                                 std::pair<double, double> band = {0.1, 10.0});

}  // namespace dirlab
