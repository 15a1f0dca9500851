#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fsrkit/circuit.hpp"
#include "fsrkit/fsr.hpp"

namespace fsrkit {

/// One assertion outcome. `tag` groups lines across suites (for example
/// "biconditional", "subfsr-stage", "f3-agree", "size-bound").
struct CheckLine {
  std::string tag;
  std::string name;
  bool pass;
  std::string detail;
};

struct SuiteOptions {
  std::size_t ell = 1;
  /// Restricts the truth-table sweeps at ell = 1 to one input count.
  std::optional<std::size_t> r;
  std::uint64_t seed = 1;
  /// Sample count for randomized sweeps; 0 picks the suite default.
  std::size_t samples = 0;
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckLine> run_suite(const std::string& name, const SuiteOptions& opts);

/// Random single-sink circuit on r inputs. With `unsat` the sink is
/// c and not c' where c' is a separate copy of c.
Circuit random_circuit(std::size_t r, std::size_t gates, bool unsat, std::mt19937_64& rng);

/// Either min(S(c) u S(d)) < min(u, conj u) or u is 0 or e1, for every state u
/// with u on c and conj u on d. Returns the first offending state.
std::optional<std::uint64_t> conjugate_min_violation(const Fsr& f);

}  // namespace fsrkit
