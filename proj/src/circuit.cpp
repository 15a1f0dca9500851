#include "fsrkit/circuit.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fsrkit/error.hpp"

namespace fsrkit {

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(std::size_t arity) : arity_(arity) {
  if (arity > kMaxArity) throw BoundExceeded("TruthTable: arity " + std::to_string(arity) + " too large");
  words_.assign(arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1, 0);
}

TruthTable::TruthTable(std::size_t arity, std::initializer_list<int> bits) : TruthTable(arity) {
  if (bits.size() != size()) throw std::invalid_argument("TruthTable: expected 2^arity bits");
  std::uint64_t i = 0;
  for (int b : bits) set(i++, b != 0);
}

void TruthTable::set(std::uint64_t index, bool bit) {
  const std::uint64_t m = std::uint64_t{1} << (index & 63);
  if (bit) {
    words_[index >> 6] |= m;
  } else {
    words_[index >> 6] &= ~m;
  }
}

bool TruthTable::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::uint64_t TruthTable::count() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::optional<std::uint64_t> TruthTable::first_one() const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k]) return k * 64 + static_cast<std::uint64_t>(std::countr_zero(words_[k]));
  }
  return std::nullopt;
}

std::string TruthTable::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint64_t n = size();
  const std::uint64_t digits = (n + 3) / 4;
  std::string s;
  s.reserve(digits);
  for (std::uint64_t j = 0; j < digits; ++j) {
    unsigned d = 0;
    for (unsigned b = 0; b < 4 && 4 * j + b < n; ++b) d |= static_cast<unsigned>(get(4 * j + b)) << b;
    s += kDigits[d];
  }
  return s;
}

TruthTable TruthTable::from_hex(std::size_t arity, const std::string& hex) {
  TruthTable t(arity);
  const std::uint64_t n = t.size();
  const std::uint64_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("truth table hex: expected " + std::to_string(digits) + " digits, got " +
                                std::to_string(hex.size()));
  }
  for (std::uint64_t j = 0; j < digits; ++j) {
    const char ch = hex[j];
    unsigned d;
    if (ch >= '0' && ch <= '9') {
      d = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      d = static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      d = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw std::invalid_argument(std::string("truth table hex: bad digit '") + ch + "'");
    }
    for (unsigned b = 0; b < 4; ++b) {
      const bool bit = (d >> b) & 1u;
      if (4 * j + b < n) {
        t.set(4 * j + b, bit);
      } else if (bit) {
        throw std::invalid_argument("truth table hex: padding bits must be zero");
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Circuit

Circuit Circuit::from_vertices(std::vector<Gate> vertices, std::vector<NodeId> outputs) {
  Circuit c;
  std::vector<NodeId> inputs;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Gate& g = vertices[k];
    switch (g.kind) {
      case GateKind::Input:
        if (g.a >= inputs.size()) inputs.resize(g.a + 1, NodeId(-1));
        if (inputs[g.a] != NodeId(-1)) {
          throw std::invalid_argument("circuit: input " + std::to_string(g.a) + " declared twice");
        }
        inputs[g.a] = static_cast<NodeId>(k);
        break;
      case GateKind::And:
      case GateKind::Or:
        if (g.a >= k || g.b >= k) throw std::invalid_argument("circuit: operand does not precede gate");
        break;
      case GateKind::Not:
        if (g.a >= k) throw std::invalid_argument("circuit: operand does not precede gate");
        break;
    }
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i] == NodeId(-1)) throw std::invalid_argument("circuit: input " + std::to_string(i) + " missing");
  }
  if (outputs.empty()) throw std::invalid_argument("circuit: no sink");
  for (NodeId o : outputs) {
    if (o >= vertices.size()) throw std::invalid_argument("circuit: sink out of range");
  }
  c.vertices_ = std::move(vertices);
  c.outputs_ = std::move(outputs);
  c.input_vertex_ = std::move(inputs);
  return c;
}

NodeId Circuit::sink() const {
  if (outputs_.size() != 1) throw std::logic_error("circuit has " + std::to_string(outputs_.size()) + " outputs");
  return outputs_.front();
}

namespace {

template <class Word, class InputFn>
void forward_pass(std::span<const Gate> vertices, std::span<Word> values, InputFn input_value) {
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Gate& g = vertices[k];
    switch (g.kind) {
      case GateKind::Input:
        values[k] = input_value(g.a);
        break;
      case GateKind::And:
        values[k] = values[g.a] & values[g.b];
        break;
      case GateKind::Or:
        values[k] = values[g.a] | values[g.b];
        break;
      case GateKind::Not:
        values[k] = static_cast<Word>(~values[g.a]);
        break;
    }
  }
}

}  // namespace

bool Circuit::evaluate(std::span<const std::uint8_t> x) const {
  if (x.size() != arity()) {
    throw std::invalid_argument("evaluate: expected " + std::to_string(arity()) + " inputs, got " +
                                std::to_string(x.size()));
  }
  const NodeId out = sink();
  std::vector<std::uint8_t> values(vertices_.size());
  forward_pass<std::uint8_t>(vertices_, values, [&](NodeId i) { return static_cast<std::uint8_t>(x[i] ? 0xff : 0); });
  return values[out] & 1u;
}

bool Circuit::evaluate(const BitVec& x) const {
  if (x.size() != arity()) {
    throw std::invalid_argument("evaluate: expected " + std::to_string(arity()) + " inputs, got " +
                                std::to_string(x.size()));
  }
  const NodeId out = sink();
  std::vector<std::uint8_t> values(vertices_.size());
  forward_pass<std::uint8_t>(vertices_, values, [&](NodeId i) { return static_cast<std::uint8_t>(x[i] ? 0xff : 0); });
  return values[out] & 1u;
}

BitVec Circuit::evaluate_outputs(const BitVec& x) const {
  if (x.size() != arity()) throw std::invalid_argument("evaluate_outputs: arity mismatch");
  if (outputs_.size() > BitVec::kMaxBits) throw std::invalid_argument("evaluate_outputs: too many outputs");
  std::vector<std::uint8_t> values(vertices_.size());
  forward_pass<std::uint8_t>(vertices_, values, [&](NodeId i) { return static_cast<std::uint8_t>(x[i] ? 0xff : 0); });
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < outputs_.size(); ++j) {
    if (values[outputs_[j]] & 1u) v |= std::uint64_t{1} << j;
  }
  return BitVec(outputs_.size(), v);
}

void Circuit::evaluate_lanes(std::span<const std::uint64_t> inputs, std::span<std::uint64_t> values) const {
  if (inputs.size() != arity()) throw std::invalid_argument("evaluate_lanes: arity mismatch");
  if (values.size() < vertices_.size()) throw std::invalid_argument("evaluate_lanes: scratch too small");
  forward_pass<std::uint64_t>(vertices_, values, [&](NodeId i) { return inputs[i]; });
}

// ---------------------------------------------------------------------------
// CircuitBuilder

CircuitBuilder::CircuitBuilder(std::size_t arity) : arity_(arity) {
  vertices_.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) vertices_.push_back(Gate{GateKind::Input, static_cast<NodeId>(i), 0});
}

NodeId CircuitBuilder::input(std::size_t i) const {
  if (i >= arity_) throw std::out_of_range("CircuitBuilder::input");
  return static_cast<NodeId>(i);
}

std::vector<NodeId> CircuitBuilder::inputs() const {
  std::vector<NodeId> v(arity_);
  for (std::size_t i = 0; i < arity_; ++i) v[i] = static_cast<NodeId>(i);
  return v;
}

NodeId CircuitBuilder::push(Gate g) {
  vertices_.push_back(g);
  return static_cast<NodeId>(vertices_.size() - 1);
}

NodeId CircuitBuilder::and_gate(NodeId a, NodeId b) { return push({GateKind::And, a, b}); }
NodeId CircuitBuilder::or_gate(NodeId a, NodeId b) { return push({GateKind::Or, a, b}); }
NodeId CircuitBuilder::not_gate(NodeId a) { return push({GateKind::Not, a, 0}); }

NodeId CircuitBuilder::xor_gate(NodeId a, NodeId b) {
  const NodeId na = not_gate(a);
  const NodeId left = and_gate(na, b);
  const NodeId nb = not_gate(b);
  const NodeId right = and_gate(nb, a);
  return or_gate(left, right);
}

NodeId CircuitBuilder::const0() {
  if (!const0_) {
    if (arity_ == 0) throw std::logic_error("const0 needs at least one input");
    const NodeId x = input(0);
    const0_ = and_gate(x, not_gate(x));
  }
  return *const0_;
}

NodeId CircuitBuilder::const1() {
  if (!const1_) const1_ = not_gate(const0());
  return *const1_;
}

NodeId CircuitBuilder::and_all(std::span<const NodeId> xs) {
  if (xs.empty()) throw std::invalid_argument("and_all: empty");
  NodeId acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = and_gate(acc, xs[i]);
  return acc;
}

NodeId CircuitBuilder::or_any(std::span<const NodeId> xs) {
  if (xs.empty()) throw std::invalid_argument("or_any: empty");
  NodeId acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = or_gate(acc, xs[i]);
  return acc;
}

NodeId CircuitBuilder::equal(std::span<const NodeId> x, std::span<const NodeId> y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("equal: width mismatch");
  std::vector<NodeId> diffs;
  diffs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diffs.push_back(xor_gate(x[i], y[i]));
  return not_gate(or_any(diffs));
}

std::vector<NodeId> CircuitBuilder::multiply(NodeId a, std::span<const NodeId> w) {
  std::vector<NodeId> out;
  out.reserve(w.size());
  for (NodeId wi : w) out.push_back(and_gate(a, wi));
  return out;
}

std::vector<NodeId> CircuitBuilder::min_word(std::span<const NodeId> x, std::span<const NodeId> y) {
  const std::size_t m = x.size();
  if (m == 0 || y.size() != m) throw std::invalid_argument("min_word: width mismatch");
  if (m == 1) return {and_gate(x[0], y[0])};

  const NodeId top_x = x[m - 1];
  const NodeId top_y = y[m - 1];
  const NodeId differ = xor_gate(top_x, top_y);
  const NodeId same = not_gate(differ);
  const NodeId pick_x = and_gate(differ, not_gate(top_x));
  const NodeId pick_y = and_gate(differ, not_gate(top_y));

  std::vector<NodeId> low = min_word(x.first(m - 1), y.first(m - 1));
  low.push_back(top_x);

  const std::vector<NodeId> a = multiply(same, low);
  const std::vector<NodeId> b = multiply(pick_x, x);
  const std::vector<NodeId> c = multiply(pick_y, y);
  std::vector<NodeId> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = xor_gate(xor_gate(a[j], b[j]), c[j]);
  return out;
}

std::vector<NodeId> CircuitBuilder::embed(const Circuit& sub, std::span<const NodeId> inputs) {
  if (inputs.size() != sub.arity()) throw std::invalid_argument("embed: arity mismatch");
  const auto verts = sub.vertices();
  std::vector<NodeId> image(verts.size());
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Gate& g = verts[k];
    switch (g.kind) {
      case GateKind::Input:
        image[k] = inputs[g.a];
        break;
      case GateKind::And:
        image[k] = and_gate(image[g.a], image[g.b]);
        break;
      case GateKind::Or:
        image[k] = or_gate(image[g.a], image[g.b]);
        break;
      case GateKind::Not:
        image[k] = not_gate(image[g.a]);
        break;
    }
  }
  std::vector<NodeId> outs;
  outs.reserve(sub.outputs().size());
  for (NodeId o : sub.outputs()) outs.push_back(image[o]);
  return outs;
}

Circuit CircuitBuilder::finish(NodeId sink) && { return std::move(*this).finish(std::vector<NodeId>{sink}); }

Circuit CircuitBuilder::finish(std::vector<NodeId> outputs) && {
  for (NodeId o : outputs) {
    if (o >= vertices_.size()) throw std::invalid_argument("finish: sink out of range");
  }
  Circuit c;
  c.vertices_ = std::move(vertices_);
  c.outputs_ = std::move(outputs);
  c.input_vertex_.resize(arity_);
  for (std::size_t i = 0; i < arity_; ++i) c.input_vertex_[i] = static_cast<NodeId>(i);
  return c;
}

// ---------------------------------------------------------------------------
// Tables and satisfiability

namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

void fill_batch_inputs(std::size_t arity, std::uint64_t batch, std::span<std::uint64_t> in) {
  for (std::size_t i = 0; i < arity; ++i) {
    if (i < 6) {
      in[i] = kLanePattern[i];
    } else {
      in[i] = ((batch >> (i - 6)) & 1u) ? ~std::uint64_t{0} : 0;
    }
  }
}

}  // namespace

TruthTable truth_table(const Circuit& c) {
  require_within_bound(c.arity(), "truth_table arity");
  const NodeId out = c.sink();
  const std::size_t arity = c.arity();
  TruthTable t(arity);
  const std::int64_t batches = arity >= 6 ? (std::int64_t{1} << (arity - 6)) : 1;
  const std::uint64_t lane_mask = arity >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::uint64_t{1} << arity)) - 1);
  auto words = t.words();

#pragma omp parallel
  {
    std::vector<std::uint64_t> in(arity);
    std::vector<std::uint64_t> values(c.size());
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < batches; ++b) {
      fill_batch_inputs(arity, static_cast<std::uint64_t>(b), in);
      c.evaluate_lanes(in, values);
      words[static_cast<std::size_t>(b)] = values[out] & lane_mask;
    }
  }
  return t;
}

TruthTable truth_table_serial(const Circuit& c) {
  require_within_bound(c.arity(), "truth_table arity");
  TruthTable t(c.arity());
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, c.evaluate(BitVec(c.arity(), x)));
  return t;
}

std::optional<BitVec> is_satisfiable(const Circuit& c) {
  const TruthTable t = truth_table(c);
  if (auto idx = t.first_one()) return BitVec(c.arity(), *idx);
  return std::nullopt;
}

Circuit from_truth_table(const TruthTable& t) {
  const std::size_t r = t.arity();
  if (r == 0) throw std::invalid_argument("from_truth_table: arity must be at least 1");
  CircuitBuilder b(r);
  std::vector<std::optional<NodeId>> negated(r);
  auto literal = [&](std::size_t i, bool positive) -> NodeId {
    if (positive) return b.input(i);
    if (!negated[i]) negated[i] = b.not_gate(b.input(i));
    return *negated[i];
  };
  std::vector<NodeId> terms;
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    if (!t.get(x)) continue;
    std::vector<NodeId> lits(r);
    for (std::size_t i = 0; i < r; ++i) lits[i] = literal(i, (x >> i) & 1u);
    terms.push_back(b.and_all(lits));
  }
  if (terms.empty()) return std::move(b).finish(b.const0());
  return std::move(b).finish(b.or_any(terms));
}

Circuit projection(std::size_t arity, std::size_t i) {
  CircuitBuilder b(arity);
  return std::move(b).finish(b.input(i));
}

Circuit gadget_xor() {
  CircuitBuilder b(2);
  return std::move(b).finish(b.xor_gate(b.input(0), b.input(1)));
}

Circuit gadget_equal(std::size_t m) {
  if (m == 0) throw std::invalid_argument("gadget_equal: width must be positive");
  CircuitBuilder b(2 * m);
  const auto in = b.inputs();
  const std::span<const NodeId> all(in);
  return std::move(b).finish(b.equal(all.first(m), all.subspan(m)));
}

Circuit gadget_min(std::size_t m) {
  if (m == 0) throw std::invalid_argument("gadget_min: width must be positive");
  CircuitBuilder b(2 * m);
  const auto in = b.inputs();
  const std::span<const NodeId> all(in);
  auto out = b.min_word(all.first(m), all.subspan(m));
  return std::move(b).finish(std::move(out));
}

Circuit compose(const Circuit& outer, std::span<const Circuit> inners) {
  if (inners.size() != outer.arity()) {
    throw std::invalid_argument("compose: outer has " + std::to_string(outer.arity()) + " inputs but " +
                                std::to_string(inners.size()) + " inner circuits were given");
  }
  if (inners.empty()) throw std::invalid_argument("compose: no inner circuits");
  const std::size_t bus = inners.front().arity();
  for (const Circuit& c : inners) {
    if (c.arity() != bus) throw std::invalid_argument("compose: inner circuits disagree on input width");
  }
  CircuitBuilder b(bus);
  const auto in = b.inputs();
  std::vector<NodeId> feed;
  feed.reserve(inners.size());
  for (const Circuit& c : inners) feed.push_back(b.embed(c, in).at(0));
  auto outs = b.embed(outer, feed);
  return std::move(b).finish(std::move(outs));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

NodeId parse_vertex_ref(const std::string& tok, std::size_t line) {
  if (tok.size() < 2 || tok[0] != 'v') throw ParseError(line, "expected vertex reference, got '" + tok + "'");
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok.substr(1), &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "bad vertex reference '" + tok + "'");
  }
  if (pos != tok.size() - 1) throw ParseError(line, "bad vertex reference '" + tok + "'");
  return static_cast<NodeId>(v);
}

}  // namespace

Circuit parse_circuit(std::istream& in) {
  std::vector<Gate> vertices;
  std::optional<NodeId> sink;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);

    if (tok[0] == "SINK") {
      if (sink) throw ParseError(line, "multiple SINK lines");
      if (tok.size() != 2) throw ParseError(line, "SINK takes one vertex");
      const NodeId s = parse_vertex_ref(tok[1], line);
      if (s >= vertices.size()) throw ParseError(line, "SINK references undefined vertex " + tok[1]);
      sink = s;
      continue;
    }
    if (sink) throw ParseError(line, "vertex after SINK");

    const NodeId id = parse_vertex_ref(tok[0], line);
    if (id != vertices.size()) {
      throw ParseError(line, "vertex ids must be consecutive from v0; expected v" + std::to_string(vertices.size()));
    }
    if (tok.size() < 2) throw ParseError(line, "missing gate kind");
    const std::string& kind = tok[1];
    auto operand = [&](std::size_t k) {
      const NodeId a = parse_vertex_ref(tok[k], line);
      if (a >= id) throw ParseError(line, "forward reference to " + tok[k]);
      return a;
    };
    if (kind == "INPUT") {
      if (tok.size() != 3) throw ParseError(line, "INPUT takes one index");
      std::size_t pos = 0;
      unsigned long idx = 0;
      try {
        idx = std::stoul(tok[2], &pos);
      } catch (const std::exception&) {
        throw ParseError(line, "bad input index '" + tok[2] + "'");
      }
      if (pos != tok[2].size()) throw ParseError(line, "bad input index '" + tok[2] + "'");
      vertices.push_back({GateKind::Input, static_cast<NodeId>(idx), 0});
    } else if (kind == "AND" || kind == "OR") {
      if (tok.size() != 4) throw ParseError(line, kind + " takes two operands");
      vertices.push_back({kind == "AND" ? GateKind::And : GateKind::Or, operand(2), operand(3)});
    } else if (kind == "NOT") {
      if (tok.size() != 3) throw ParseError(line, "NOT takes one operand");
      vertices.push_back({GateKind::Not, operand(2), 0});
    } else {
      throw ParseError(line, "unknown gate kind '" + kind + "'");
    }
  }
  if (!sink) throw ParseError(line, "missing SINK line");
  try {
    return Circuit::from_vertices(std::move(vertices), {*sink});
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

Circuit parse_circuit_text(const std::string& text) {
  std::istringstream in(text);
  return parse_circuit(in);
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file '" + path + "'");
  return parse_circuit(in);
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream out;
  const auto verts = c.vertices();
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Gate& g = verts[k];
    out << 'v' << k << ' ';
    switch (g.kind) {
      case GateKind::Input:
        out << "INPUT " << g.a;
        break;
      case GateKind::And:
        out << "AND v" << g.a << " v" << g.b;
        break;
      case GateKind::Or:
        out << "OR v" << g.a << " v" << g.b;
        break;
      case GateKind::Not:
        out << "NOT v" << g.a;
        break;
    }
    out << '\n';
  }
  out << "SINK v" << c.sink() << '\n';
  return out.str();
}

}  // namespace fsrkit
