#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dirlab {

/// A Dirichlet character modulo q, selected by an index into the character group.
///
/// Enumeration order: (Z/qZ)^* is split by CRT into cyclic factors, taken in
/// ascending prime order. An odd prime power p^e contributes one factor generated
/// by the least primitive root mod p^e. 2^2 contributes the factor generated by -1;
/// 2^e with e >= 3 contributes two factors, first the one generated by -1 (order 2)
/// and then the one generated by 5 (order 2^(e-2)). Writing the index in mixed radix
/// with the first factor least significant gives exponents j_i, and
///   chi(g_i) = exp(2 pi i j_i / ord_i).
/// Index 0 is always the principal character.
///
/// Example: modulus 3, index 1 is the real character with chi(2) = -1.
class DirichletCharacter {
 public:
  /// Throws ConfigError for modulus 0 or index >= phi(modulus).
  DirichletCharacter(std::uint32_t modulus, std::uint32_t index);

  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t index() const noexcept { return index_; }
  std::uint32_t group_order() const noexcept { return phi_; }

  std::complex<double> operator()(std::uint64_t n) const { return values_[n % modulus_]; }

  bool is_principal() const noexcept { return index_ == 0; }
  bool is_real() const noexcept { return real_; }
  bool is_primitive() const noexcept { return primitive_; }
  /// chi(-1) = -1.
  bool is_odd() const;

 private:
  std::uint32_t modulus_;
  std::uint32_t index_;
  std::uint32_t phi_ = 0;
  bool real_ = true;
  bool primitive_ = false;
  std::vector<std::complex<double>> values_;
};

/// exp(2 pi i num / den), exact at multiples of a quarter turn.
std::complex<double> root_of_unity(std::int64_t num, std::int64_t den);

}  // namespace dirlab
