#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsrkit/fsr.hpp"

namespace fsrkit {

struct SubFsr {
  std::size_t stage;
  CycleStructure cycles;
  Fsr fsr;
};

struct SubFsrReport {
  std::vector<SubFsr> entries;
  /// Stages whose period multiset admits no subset summing to 2^m.
  std::vector<std::size_t> pruned_stages;
  /// Search nodes expanded across all stages.
  std::uint64_t nodes = 0;
};

/// Every subFSR of a nonsingular f of stage <= 12, ordered by stage, then by
/// cycle set. A subFSR's cycles must tile B^m by their m-windows, so each
/// stage is an exact-cover search over f's cycles.
SubFsrReport find_subfsrs(const Fsr& f);
/// Stops at the first subFSR found.
bool is_irreducible(const Fsr& f);

struct Decomposition {
  Fsr outer;
  Fsr inner;
  /// Outer feedback entries left unconstrained (set to 0).
  std::uint64_t free_entries = 0;
};

/// Solves product_fsr(h, g) = f for h; none on any conflict.
std::optional<Decomposition> decompose_with_inner(const Fsr& f, const Fsr& g);

enum class DecomposeStrategy { Brute, Guided };

struct DecomposeOptions {
  DecomposeStrategy strategy = DecomposeStrategy::Brute;
  /// BRUTE: largest inner stage tried.
  std::size_t max_inner = 3;
  /// BRUTE: accept registers whose largest split exceeds max_inner.
  bool allow_partial = false;
  /// BRUTE: false runs the table sweep on one thread (the serial reference).
  bool parallel = true;
};

struct DecompositionReport {
  std::optional<Decomposition> witness;
  /// False when some split was skipped, so a missing witness proves nothing.
  bool complete = true;
  std::uint64_t candidates_tried = 0;
  std::vector<std::string> log;
};

DecompositionReport is_decomposable(const Fsr& f, const DecomposeOptions& opts = {});

using StatePredicate = std::function<bool(std::uint64_t)>;

struct CycleJoinArc {
  std::size_t from;
  std::size_t to;
  /// Least state v on `from` with f3(lbit(v)) = 1, lambda(v) = 1 and conj(v) on `to`.
  BitVec witness;
};

class CycleJoinGraph {
 public:
  const CycleStructure& vertices() const { return vertices_; }
  const std::vector<CycleJoinArc>& arcs() const { return arcs_; }
  bool acyclic() const { return acyclic_; }
  std::size_t component_count() const { return component_count_; }
  std::size_t component_of(std::size_t v) const { return component_of_[v]; }
  bool isolated(std::size_t v) const;
  /// Each weakly connected component's windows are exactly those of one cycle of f.
  bool union_property() const { return union_property_; }

  std::string to_dot() const;

 private:
  friend CycleJoinGraph cycle_join_graph(const Fsr& g, const Fsr& f, const StatePredicate& lambda);
  CycleStructure vertices_;
  std::vector<CycleJoinArc> arcs_;
  std::vector<std::size_t> component_of_;
  std::size_t component_count_ = 0;
  bool acyclic_ = true;
  bool union_property_ = false;
};

/// Builds D_g^f. Throws std::invalid_argument if f xor g depends on x_0, the
/// stages differ, or lambda breaks one of the three admissibility conditions.
CycleJoinGraph cycle_join_graph(const Fsr& g, const Fsr& f, const StatePredicate& lambda);

/// Empty when lambda is admissible for (g, f3); otherwise the first violated condition.
std::optional<std::string> check_lambda(const Fsr& g, const TruthTable& f3, const StatePredicate& lambda);

}  // namespace fsrkit
