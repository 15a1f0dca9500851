#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "fsrkit/bitvec.hpp"
#include "fsrkit/circuit.hpp"

namespace fsrkit {

/// n-stage feedback shift register with feedback logic f1; the
/// characteristic function is x_n xor f1(x_0, ..., x_{n-1}).
///
/// States are integers (bit j = x_j). The feedback is held as a truth table
/// whenever the stage is within the exhaustive bound; larger registers (the
/// reductions at ell = 9) keep only their circuit.
class Fsr {
 public:
  explicit Fsr(TruthTable feedback);
  /// Tabulates the circuit when its arity is within the exhaustive bound.
  explicit Fsr(Circuit feedback);

  std::size_t stage() const { return stage_; }
  bool has_table() const { return table_.has_value(); }
  /// Throws BoundExceeded when the register is circuit-only.
  const TruthTable& table() const;
  const Circuit* circuit() const { return circuit_.get(); }

  bool feedback(std::uint64_t state) const;
  std::uint64_t step(std::uint64_t state) const {
    return (state >> 1) | (static_cast<std::uint64_t>(feedback(state)) << (stage_ - 1));
  }
  BitVec step(const BitVec& s) const;

  friend bool operator==(const Fsr& a, const Fsr& b) { return a.stage_ == b.stage_ && a.table() == b.table(); }

 private:
  std::size_t stage_ = 0;
  std::optional<TruthTable> table_;
  std::shared_ptr<const Circuit> circuit_;
};

/// Periodic binary sequence in canonical form: the rotation whose LSB-first
/// integer is least, at its minimal period.
class Cycle {
 public:
  Cycle() = default;
  /// Canonicalizes any rotation; repetitions are collapsed to the minimal period.
  explicit Cycle(std::vector<std::uint8_t> bits);
  static Cycle from_bits(std::initializer_list<int> bits);

  std::size_t period() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::uint8_t operator[](std::size_t i) const { return bits_[i % bits_.size()]; }

  /// Canonical integer; requires period <= 64.
  std::uint64_t value() const;
  /// Canonical integer in hex, most significant digit first.
  std::string hex() const;
  /// period(), a space, then the canonical integer as a period-digit binary numeral.
  std::string to_string() const;

  Cycle complement() const;

  friend bool operator==(const Cycle&, const Cycle&) = default;
  /// Period first, then canonical integer.
  friend std::strong_ordering operator<=>(const Cycle& a, const Cycle& b);

 private:
  std::vector<std::uint8_t> bits_;
};

/// Sorted, duplicate-free set of cycles.
class CycleStructure {
 public:
  CycleStructure() = default;
  explicit CycleStructure(std::vector<Cycle> cycles);

  std::span<const Cycle> cycles() const { return cycles_; }
  std::size_t size() const { return cycles_.size(); }
  std::uint64_t total() const { return total_; }
  bool contains(const Cycle& c) const;
  /// Index in cycles(), if present.
  std::optional<std::size_t> find(const Cycle& c) const;
  /// Number of cycles with the given period.
  std::size_t count_period(std::size_t p) const;
  bool includes(const CycleStructure& sub) const;

  const Cycle& operator[](std::size_t i) const { return cycles_[i]; }
  auto begin() const { return cycles_.begin(); }
  auto end() const { return cycles_.end(); }

  friend bool operator==(const CycleStructure& a, const CycleStructure& b) { return a.cycles_ == b.cycles_; }

 private:
  std::vector<Cycle> cycles_;
  std::uint64_t total_ = 0;
};

/// Cycle structure together with the cycle index of every state.
struct StateCycles {
  CycleStructure cycles;
  std::vector<std::uint32_t> cycle_of;
  /// Least state on each cycle, aligned with cycles.
  std::vector<std::uint64_t> min_state;
};

BitVec step(const Fsr& f, const BitVec& s);

/// Bijectivity of the state map, cross-checked against the
/// f1(x) xor f1(conjugate x) == 1 criterion.
bool is_nonsingular(const Fsr& f);
bool is_nonsingular_by_criterion(const Fsr& f);

/// OpenMP sweep; each cycle is claimed by its least state.
CycleStructure cycle_structure(const Fsr& f);
/// Visited-bitmap reference.
CycleStructure cycle_structure_serial(const Fsr& f);
StateCycles state_cycles(const Fsr& f);

/// All k-windows of c with wrap-around, sorted and de-duplicated.
std::vector<BitVec> windows(const Cycle& c, std::size_t k);

bool realizable_as_fsr(std::span<const Cycle> cs, std::size_t m);
Fsr fsr_from_cycles(std::span<const Cycle> cs, std::size_t m);

struct WindowEquivalence {
  bool window_count;
  bool lbit_injective;
  bool hbit_injective;
};
WindowEquivalence window_injectivity_equiv_check(std::span<const Cycle> cs, std::size_t m);

/// Flips f1 at both states whose last stage-1 bits equal u.
Fsr toggle_feedback(const Fsr& f, const BitVec& u);

/// Product register outer ⋈ inner of stage n + m.
Fsr product_fsr(const Fsr& outer, const Fsr& inner);
/// Runs outer cascaded into inner and collects the inner output sequences.
CycleStructure simulate_cascade(const Fsr& outer, const Fsr& inner);

/// (b_i, b_{i+l}, ..., b_{i+(k-1)l}) of a sequence of period k*l.
BitVec ell_sampling(std::span<const std::uint8_t> seq, std::size_t ell, std::size_t i);
BitVec ell_sampling(const Cycle& c, std::size_t ell, std::size_t i);

/// Cycles of the sequences a periodic state map produces; the state map is
/// arbitrary, states on tails are ignored.
CycleStructure functional_cycles(std::uint64_t state_count, const std::function<std::uint64_t(std::uint64_t)>& next,
                                 const std::function<std::uint8_t(std::uint64_t)>& output);

/// STAGE / FEEDBACK text. Relative FEEDBACK CIRCUIT paths resolve against base_dir.
Fsr parse_fsr(std::istream& in, const std::string& base_dir = ".");
Fsr read_fsr_file(const std::string& path);
std::string format_fsr(const Fsr& f);
std::string format_cycles(const CycleStructure& cs);

}  // namespace fsrkit
