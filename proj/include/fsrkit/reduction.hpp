#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsrkit/circuit.hpp"
#include "fsrkit/fsr.hpp"
#include "fsrkit/lfsr.hpp"

namespace fsrkit {

struct EllChoice {
  std::size_t k;
  std::size_t ell;
};

/// Least integer k with 3^k >= r/2, and ell = 3^k.
EllChoice ell_for(std::size_t r);

/// 0 at 0^r; f0(1^r) or f0(0^r) at 1^r; f0 elsewhere.
Circuit f2_transform(const Circuit& f0);
TruthTable f2_table(const TruthTable& f0);

enum class ReductionKind { Irreducibility, Indecomposability };

struct SizeReport {
  std::size_t f0_size;
  std::size_t f3_size;
  std::size_t f1_size;
  /// 37908 |f0|^4 or 264 |f0|^3.
  double bound;
  /// Strict for the irreducibility reduction, non-strict otherwise.
  bool within_bound;
};

struct ReductionInstance {
  ReductionKind kind;
  std::size_t r;
  std::size_t k;
  std::size_t ell;
  Circuit f3_circuit;
  /// The emitted feedback logic.
  Circuit f1_circuit;
  Fsr fsr;
  /// Pseudocode evaluation of f3 over every input; absent past the exhaustive bound.
  std::optional<TruthTable> f3_semantic;
  SizeReport size;
};

/// 4l-stage FSR x_0 + x_{2l} + f3(x_1, ..., x_{4l-1}).
ReductionInstance build_irreducibility_fsr(const Circuit& f0);
/// (2l+1)-stage FSR x_0 + x_1 + x_l + x_{l+1} + x_{2l} + f3(x_1, ..., x_{2l}).
ReductionInstance build_indecomposability_fsr(const Circuit& f0);

/// Line-by-line evaluation of the pseudocode f3 at one input.
bool alg1_f3_semantic(const TruthTable& f0, std::size_t ell, std::uint64_t x);
bool alg2_f3_semantic(const TruthTable& f2, std::size_t ell, std::uint64_t x);
TruthTable alg1_f3_table(const TruthTable& f0, std::size_t ell);
TruthTable alg2_f3_table(const TruthTable& f2, std::size_t ell);

/// The cycle bookkeeping behind the irreducibility reduction: cycles of the
/// p2 register, the set D, the representative map rho and the predicate lambda.
class Alg1Oracle {
 public:
  explicit Alg1Oracle(std::size_t ell);

  std::size_t ell() const { return ell_; }
  const LfsrFamily& family() const { return family_; }
  const StateCycles& p2_cycles() const { return p2_; }
  std::size_t cycle_of(std::uint64_t v) const { return p2_.cycle_of[v]; }
  /// Period 6l, i.e. not a p0 cycle.
  bool in_c6(std::size_t c) const { return p2_.cycles[c].period() == 6 * ell_; }
  bool in_d(std::size_t c) const { return in_d_[c]; }
  std::uint64_t rho(std::size_t c) const { return rho_[c]; }
  bool lambda(std::uint64_t v) const;

  /// Failed assertions of the D / rho statements; empty when all hold.
  std::vector<std::string> check_rho_statements() const;
  /// Three-case characterization of f3 through rho and lambda.
  TruthTable f3_reference(const TruthTable& f0) const;

 private:
  std::size_t ell_;
  std::size_t n_;
  LfsrFamily family_;
  StateCycles p2_;
  std::vector<bool> in_d_;
  std::vector<std::uint64_t> rho_;
};

/// The maps pi, chi and lambda on (2l+1)-bit states used by the
/// indecomposability reduction.
class Alg2Maps {
 public:
  explicit Alg2Maps(std::size_t ell);

  std::size_t ell() const { return ell_; }
  const LfsrFamily& family() const { return family_; }
  /// (v0+v1, v1+v2, ..., v_{2l-1}+v_{2l})
  std::uint64_t pi(std::uint64_t v) const;
  /// v0 + v_l + v_{2l}
  bool chi(std::uint64_t v) const;
  bool lambda(std::uint64_t v) const;

  /// f3(x) = lambda(y) and some state on y's p1 cycle has f2(lbit_r(pi(.))) = 1,
  /// where y = (x_{2l} + x_l, x_1, ..., x_{2l}).
  TruthTable f3_reference(const TruthTable& f2) const;
  /// Exhaustive check of the five conjugate properties; empty when all hold.
  std::vector<std::string> check_conjugate_properties() const;

 private:
  std::size_t ell_;
  std::size_t width_;
  LfsrFamily family_;
  StateCycles p1_;
};

/// Rejects ell outside {1, 3}.
void require_oracle_ell(std::size_t ell);

}  // namespace fsrkit
