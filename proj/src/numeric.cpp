#include "dirlab/numeric.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

template <class T>
T pairwise(std::span<const T> v) {
  constexpr std::size_t kBlock = 32;
  if (v.size() <= kBlock) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

// Lanczos g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_lanczos(cplx z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

struct Panel {
  double a, b;
  cplx fa, fm, fb, whole;
};

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise(values); }
cplx pairwise_sum(std::span<const cplx> values) { return pairwise(values); }

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("fit_line: x and y differ in length");
  const auto n = x.size();
  if (n < 2) throw DataError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DataError("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = static_cast<int>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.slope_stderr = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

cplx log_gamma(cplx z) {
  if (z.real() >= 0.5) return log_gamma_lanczos(z);
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z), with
  // log sin w = -i w + log(1 - e^{2iw}) + log(i/2), stable for Im w >= 0.
  const cplx w = std::numbers::pi * z;
  const cplx i{0.0, 1.0};
  const cplx log_sin = -i * w + std::log(1.0 - std::exp(2.0 * i * w)) + std::log(0.5 * i);
  return std::log(std::numbers::pi) - log_sin - log_gamma_lanczos(1.0 - z);
}

QuadResult adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                            double tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  const double m = 0.5 * (a + b);
  const cplx fa = f(a), fm = f(m), fb = f(b);
  const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

  // Explicit stack keeps deep refinements off the call stack.
  struct Item {
    Panel p;
    double tol;
    int depth;
  };
  std::vector<Item> stack{{Panel{a, b, fa, fm, fb, whole}, tol, 0}};
  cplx total{};
  double err = 0.0;
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Panel& p = it.p;
    const double mid = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + mid), rm = 0.5 * (mid + p.b);
    const cplx flm = f(lm), frm = f(rm);
    const cplx left = (mid - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const cplx right = (p.b - mid) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const cplx delta = left + right - p.whole;
    // Below the rounding floor further halving only chases noise.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    const double accept = std::max(15.0 * it.tol, floor);
    if (std::abs(delta) <= accept || it.depth >= max_depth) {
      if (std::abs(delta) > accept) out.converged = false;
      total += left + right + delta / 15.0;
      err += std::abs(delta) / 15.0;
      continue;
    }
    stack.push_back({Panel{mid, p.b, p.fm, frm, p.fb, right}, 0.5 * it.tol, it.depth + 1});
    stack.push_back({Panel{p.a, mid, p.fa, flm, p.fm, left}, 0.5 * it.tol, it.depth + 1});
  }
  out.value = total;
  out.error = err;
  return out;
}

}  // namespace dirlab
