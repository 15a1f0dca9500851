#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsrkit/bitvec.hpp"

namespace fsrkit {

enum class GateKind : std::uint8_t { Input, And, Or, Not };

using NodeId = std::uint32_t;

/// One vertex of a circuit. For Input vertices `a` is the input index;
/// otherwise `a` (and `b` for AND/OR) reference earlier vertices.
struct Gate {
  GateKind kind = GateKind::Input;
  NodeId a = 0;
  NodeId b = 0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Output column of an r-input Boolean function, indexed by the integer
/// encoding of the input vector. Bits are packed 64 per word.
class TruthTable {
 public:
  static constexpr std::size_t kMaxArity = 30;

  TruthTable() = default;
  explicit TruthTable(std::size_t arity);
  TruthTable(std::size_t arity, std::initializer_list<int> bits);

  /// Hex form used by the FSR file format: digit j holds entries 4j..4j+3,
  /// entry 4j in its least significant bit; digits are written j = 0, 1, ...
  static TruthTable from_hex(std::size_t arity, const std::string& hex);
  std::string to_hex() const;

  std::size_t arity() const { return arity_; }
  std::uint64_t size() const { return std::uint64_t{1} << arity_; }
  bool get(std::uint64_t index) const { return (words_[index >> 6] >> (index & 63)) & 1u; }
  void set(std::uint64_t index, bool bit);
  void flip(std::uint64_t index) { words_[index >> 6] ^= std::uint64_t{1} << (index & 63); }

  bool any() const;
  std::uint64_t count() const;
  std::optional<std::uint64_t> first_one() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::size_t arity_ = 0;
  std::vector<std::uint64_t> words_ = std::vector<std::uint64_t>(1, 0);
};

/// Directed acyclic graph of INPUT/AND/OR/NOT vertices in topological order.
/// Immutable once built; every input index 0..arity-1 appears as exactly one
/// INPUT vertex. Most circuits have one sink; gadget blocks such as the
/// integer minimum expose several outputs.
class Circuit {
 public:
  /// Validates and wraps a vertex list (used by the parser and tests).
  static Circuit from_vertices(std::vector<Gate> vertices, std::vector<NodeId> outputs);

  std::size_t arity() const { return input_vertex_.size(); }
  /// Number of vertices, inputs included.
  std::size_t size() const { return vertices_.size(); }
  /// Number of non-input vertices.
  std::size_t gate_count() const { return vertices_.size() - input_vertex_.size(); }

  std::span<const Gate> vertices() const { return vertices_; }
  std::span<const NodeId> outputs() const { return outputs_; }
  NodeId input_vertex(std::size_t i) const { return input_vertex_.at(i); }
  /// The designated sink; throws if the circuit has several outputs.
  NodeId sink() const;

  bool evaluate(const BitVec& x) const;
  bool evaluate(std::span<const std::uint8_t> x) const;
  /// All outputs packed LSB-first (output 0 is bit 0).
  BitVec evaluate_outputs(const BitVec& x) const;

  /// Bit-sliced evaluation: lane j of `inputs[i]` is input i of the j-th
  /// assignment. `values` is scratch of at least size() words and receives
  /// every vertex's lanes.
  void evaluate_lanes(std::span<const std::uint64_t> inputs, std::span<std::uint64_t> values) const;

 private:
  friend class CircuitBuilder;
  Circuit() = default;

  std::vector<Gate> vertices_;
  std::vector<NodeId> outputs_;
  std::vector<NodeId> input_vertex_;
};

/// Incremental construction of circuits and gadget blocks. Inputs occupy
/// vertices 0..arity-1. No hash-consing: each call adds fresh vertices.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t arity);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return vertices_.size(); }
  NodeId input(std::size_t i) const;
  std::vector<NodeId> inputs() const;

  NodeId and_gate(NodeId a, NodeId b);
  NodeId or_gate(NodeId a, NodeId b);
  NodeId not_gate(NodeId a);
  /// ((not a) and b) or ((not b) and a): five gates.
  NodeId xor_gate(NodeId a, NodeId b);

  /// input(0) and not input(0); cached after the first call.
  NodeId const0();
  /// not const0(); cached.
  NodeId const1();

  /// Left-to-right AND/OR chains; a single operand is returned as is.
  NodeId and_all(std::span<const NodeId> xs);
  NodeId or_any(std::span<const NodeId> xs);

  /// not((x0 xor y0) or ... or (x_{m-1} xor y_{m-1})): 6m gates.
  NodeId equal(std::span<const NodeId> x, std::span<const NodeId> y);
  /// (a and w_0, ..., a and w_{m-1}): m gates.
  std::vector<NodeId> multiply(NodeId a, std::span<const NodeId> w);
  /// Integer minimum of two LSB-first words via the selector recursion on
  /// the top bit; adds 10 + 13m gates per level and one gate at m = 1.
  std::vector<NodeId> min_word(std::span<const NodeId> x, std::span<const NodeId> y);

  /// Copies the non-input vertices of `sub`, wiring its input i to
  /// `inputs[i]`. Returns the images of sub's outputs.
  std::vector<NodeId> embed(const Circuit& sub, std::span<const NodeId> inputs);

  Circuit finish(NodeId sink) &&;
  Circuit finish(std::vector<NodeId> outputs) &&;

 private:
  NodeId push(Gate g);

  std::size_t arity_;
  std::vector<Gate> vertices_;
  std::optional<NodeId> const0_;
  std::optional<NodeId> const1_;
};

/// Table of the (single-sink) circuit over all 2^arity inputs. Bit-sliced
/// and OpenMP-parallel over 64-input batches.
TruthTable truth_table(const Circuit& c);
/// Scalar reference: one evaluate() per input.
TruthTable truth_table_serial(const Circuit& c);

/// Least satisfying input in integer order, or nullopt.
std::optional<BitVec> is_satisfiable(const Circuit& c);

/// Minterm expansion joined by an OR chain; the all-zero table becomes
/// x0 and not x0. Requires arity >= 1.
Circuit from_truth_table(const TruthTable& t);

/// Single-sink circuit equal to input i of an `arity`-input bus.
Circuit projection(std::size_t arity, std::size_t i);

Circuit gadget_xor();
Circuit gadget_equal(std::size_t m);
/// 2m inputs (x = inputs 0..m-1, y = inputs m..2m-1), m outputs.
Circuit gadget_min(std::size_t m);

/// outer(inner_0(x), ..., inner_{k-1}(x)) on the inners' shared input bus.
Circuit compose(const Circuit& outer, std::span<const Circuit> inners);

Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_text(const std::string& text);
Circuit read_circuit_file(const std::string& path);
std::string format_circuit(const Circuit& c);

}  // namespace fsrkit
