#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fsrkit/bitvec.hpp"
#include "fsrkit/fsr.hpp"

namespace fsrkit {

/// Polynomial over GF(2) of degree at most 127; bit i is the coefficient of x^i.
class GF2Poly {
 public:
  using Bits = unsigned __int128;
  static constexpr int kMaxDegree = 127;

  GF2Poly() = default;
  explicit GF2Poly(Bits bits) : bits_(bits) {}
  static GF2Poly monomial(int k);
  static GF2Poly one() { return GF2Poly(1); }

  /// -1 for the zero polynomial.
  int degree() const;
  bool coeff(int i) const { return i >= 0 && i <= kMaxDegree && ((bits_ >> i) & 1u); }
  Bits bits() const { return bits_; }
  bool is_zero() const { return bits_ == 0; }

  friend GF2Poly operator+(GF2Poly a, GF2Poly b) { return GF2Poly(a.bits_ ^ b.bits_); }
  friend bool operator==(const GF2Poly&, const GF2Poly&) = default;

  /// "x^4 + x^2 + 1"; "0" for zero.
  std::string to_string() const;
  /// Lowercase hex of the coefficient bits, "0x" prefixed.
  std::string to_hex() const;

 private:
  Bits bits_ = 0;
};

GF2Poly poly_mul(GF2Poly a, GF2Poly b);
/// Quotient and remainder; throws on division by zero.
std::pair<GF2Poly, GF2Poly> poly_divmod(GF2Poly a, GF2Poly b);
GF2Poly poly_mod(GF2Poly a, GF2Poly b);
GF2Poly poly_gcd(GF2Poly a, GF2Poly b);

/// Trial division by every polynomial of degree <= deg/2. Degree <= 36.
bool poly_is_irreducible(GF2Poly p);

/// Accepts "x^a + x^b + ... + 1" (terms in any order, "x" alone allowed) or
/// "0x"-prefixed hex coefficients.
GF2Poly parse_poly(const std::string& text);

struct LfsrFamily {
  std::size_t ell;
  GF2Poly p0;  // x^{2l} + x^l + 1
  GF2Poly p1;  // (x + 1) p0
  GF2Poly p2;  // x^{4l} + x^{2l} + 1
};
LfsrFamily lfsr_family(std::size_t ell);

/// Register x_n = c_{n-1} x_{n-1} + ... + c_0 x_0 for monic p of degree n.
Fsr lfsr_of(GF2Poly p);

/// One step of the linear state map of p (companion form).
std::uint64_t lfsr_step(GF2Poly p, std::uint64_t state);

/// L^t(s). Small t is stepped, large t uses companion-matrix powering.
BitVec transform_pow(GF2Poly p, std::uint64_t t, const BitVec& s);
BitVec transform_pow_stepping(GF2Poly p, std::uint64_t t, const BitVec& s);
BitVec transform_pow_matrix(GF2Poly p, std::uint64_t t, const BitVec& s);

/// Least i > 0 with modulus | 2^i - 1; modulus must be odd.
std::uint64_t multiplicative_order_of_two(std::uint64_t modulus);

/// Number of cycles per period.
std::map<std::size_t, std::size_t> period_histogram(const CycleStructure& cs);

struct FamilyCycleCounts {
  std::size_t ell;
  CycleStructure p0;
  CycleStructure p1;
  /// Absent when deg p2 exceeds the exhaustive bound.
  std::optional<CycleStructure> p2;
};
FamilyCycleCounts family_cycle_counts(std::size_t ell);

}  // namespace fsrkit
