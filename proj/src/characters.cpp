#include "dirlab/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dirlab/error.hpp"

namespace dirlab {

namespace {

struct PrimePower {
  std::uint32_t p;
  std::uint32_t e;
  std::uint32_t pe;
};

std::vector<PrimePower> factor(std::uint32_t q) {
  std::vector<PrimePower> out;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= q; ++p) {
    if (q % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (q % p == 0) {
      q /= p;
      ++pp.e;
      pp.pe *= p;
    }
    out.push_back(pp);
  }
  if (q > 1) out.push_back({q, 1, q});
  return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a * b % m; }

// Cyclic factor of (Z/p^e Z)^*: generator, order, and discrete-log table over residues mod p^e.
struct CyclicFactor {
  std::uint32_t modulus;     // p^e (or 2^e for the 2-part)
  std::uint32_t order;
  std::vector<std::int64_t> log;  // -1 for residues outside the factor's domain
  // Primitive-ness test parameters.
  std::uint32_t conductor_prime = 0;
  bool two_minus_one = false;
  bool two_five = false;
};

std::uint32_t least_primitive_root(std::uint32_t pe, std::uint32_t phi) {
  // Prime divisors of phi.
  std::vector<std::uint32_t> primes;
  std::uint32_t m = phi;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= m; ++d) {
    if (m % d) continue;
    primes.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) primes.push_back(m);
  auto powmod = [](std::uint64_t b, std::uint64_t x, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    b %= mod;
    while (x) {
      if (x & 1) r = mulmod(r, b, mod);
      b = mulmod(b, b, mod);
      x >>= 1;
    }
    return r;
  };
  for (std::uint32_t g = 2; g < pe; ++g) {
    if (std::gcd(g, pe) != 1) continue;
    bool ok = true;
    for (auto r : primes) {
      if (powmod(g, phi / r, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // only reached for pe == 2
}

std::vector<std::int64_t> dlog_table(std::uint32_t modulus, std::uint32_t gen, std::uint32_t order) {
  std::vector<std::int64_t> log(modulus, -1);
  std::uint64_t x = 1;
  for (std::uint32_t j = 0; j < order; ++j) {
    log[x] = j;
    x = mulmod(x, gen, modulus);
  }
  return log;
}

}  // namespace

std::complex<double> root_of_unity(std::int64_t num, std::int64_t den) {
  num %= den;
  if (num < 0) num += den;
  if ((4 * num) % den == 0) {
    switch ((4 * num) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(theta), std::sin(theta)};
}

DirichletCharacter::DirichletCharacter(std::uint32_t modulus, std::uint32_t index)
    : modulus_(modulus), index_(index) {
  if (modulus == 0) throw ConfigError("character modulus must be positive");

  std::vector<CyclicFactor> factors;
  for (const auto& pp : factor(modulus)) {
    if (pp.p == 2) {
      if (pp.e == 1) continue;  // (Z/2Z)^* is trivial
      // -1 component
      CyclicFactor minus{pp.pe, 2, std::vector<std::int64_t>(pp.pe, -1)};
      minus.two_minus_one = true;
      CyclicFactor five{pp.pe, pp.e >= 3 ? (1u << (pp.e - 2)) : 1u, std::vector<std::int64_t>(pp.pe, -1)};
      five.two_five = true;
      // n = (-1)^a 5^b mod 2^e
      std::uint64_t x = 1;
      for (std::uint32_t b = 0; b < five.order; ++b) {
        minus.log[x] = 0;
        five.log[x] = b;
        const std::uint64_t neg = (pp.pe - x) % pp.pe;
        minus.log[neg] = 1;
        five.log[neg] = b;
        x = mulmod(x, 5, pp.pe);
      }
      factors.push_back(std::move(minus));
      if (pp.e >= 3) factors.push_back(std::move(five));
    } else {
      const std::uint32_t phi = pp.pe / pp.p * (pp.p - 1);
      const std::uint32_t g = least_primitive_root(pp.pe, phi);
      CyclicFactor f{pp.pe, phi, dlog_table(pp.pe, g, phi)};
      f.conductor_prime = pp.e >= 2 ? pp.p : 0;
      factors.push_back(std::move(f));
    }
  }

  phi_ = 1;
  for (const auto& f : factors) phi_ *= f.order;
  if (index >= phi_) {
    throw ConfigError("character index " + std::to_string(index) + " out of range for modulus " +
                      std::to_string(modulus) + " (group order " + std::to_string(phi_) + ")");
  }

  std::vector<std::uint32_t> exps;
  std::uint32_t rest = index;
  std::int64_t lcm = 1;
  primitive_ = true;
  for (const auto& f : factors) {
    const std::uint32_t j = rest % f.order;
    rest /= f.order;
    exps.push_back(j);
    if (j != 0) lcm = std::lcm(lcm, static_cast<std::int64_t>(f.order / std::gcd(j, f.order)));
    if (f.two_minus_one) {
      // 4 | q: primitive needs the 2-part to be nontrivial; for 2^e (e >= 3) the
      // 5-component decides, checked below.
      if (f.modulus == 4 && j == 0) primitive_ = false;
    } else if (f.two_five) {
      if (j % 2 == 0) primitive_ = false;
    } else if (j == 0 || (f.conductor_prime != 0 && j % f.conductor_prime == 0)) {
      primitive_ = false;
    }
  }
  // A factor of exactly 2 in the modulus can never be part of a primitive conductor.
  if (modulus % 2 == 0 && modulus % 4 != 0) primitive_ = false;
  if (modulus == 1) primitive_ = true;
  real_ = lcm <= 2;

  values_.assign(modulus, {0.0, 0.0});
  for (std::uint32_t n = 0; n < modulus; ++n) {
    if (std::gcd(n, modulus) != 1) continue;
    std::int64_t num = 0;  // exponent numerator over `lcm`-independent common denominator
    std::int64_t den = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = factors[i];
      const std::int64_t lg = f.log[n % f.modulus];
      const std::int64_t term_num = static_cast<std::int64_t>(exps[i]) * lg;
      const std::int64_t term_den = f.order;
      // num/den += term_num/term_den, reduced
      const std::int64_t l = std::lcm(den, term_den);
      num = (num * (l / den) + term_num % term_den * (l / term_den)) % l;
      den = l;
    }
    values_[n] = root_of_unity(num, den);
  }
  if (modulus == 1) values_[0] = {1.0, 0.0};
}

bool DirichletCharacter::is_odd() const {
  if (modulus_ <= 2) return false;
  return values_[modulus_ - 1].real() < 0.0;
}

}  // namespace dirlab
