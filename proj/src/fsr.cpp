#include "fsrkit/fsr.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fsrkit/error.hpp"

namespace fsrkit {

// ---------------------------------------------------------------------------
// Fsr

Fsr::Fsr(TruthTable feedback) : stage_(feedback.arity()) {
  if (stage_ == 0) throw std::invalid_argument("FSR stage must be at least 1");
  table_ = std::move(feedback);
}

Fsr::Fsr(Circuit feedback) : stage_(feedback.arity()) {
  if (stage_ == 0) throw std::invalid_argument("FSR stage must be at least 1");
  if (feedback.outputs().size() != 1) throw std::invalid_argument("FSR feedback must have a single sink");
  if (stage_ <= exhaustive_bound()) table_ = truth_table(feedback);
  circuit_ = std::make_shared<const Circuit>(std::move(feedback));
}

const TruthTable& Fsr::table() const {
  if (!table_) {
    throw BoundExceeded("stage " + std::to_string(stage_) + " FSR has no feedback table (exhaustive bound " +
                        std::to_string(exhaustive_bound()) + ")");
  }
  return *table_;
}

bool Fsr::feedback(std::uint64_t state) const {
  if (table_) return table_->get(state);
  return circuit_->evaluate(BitVec(stage_, state));
}

BitVec Fsr::step(const BitVec& s) const {
  if (s.size() != stage_) {
    throw std::invalid_argument("step: state has length " + std::to_string(s.size()) + ", stage is " +
                                std::to_string(stage_));
  }
  return BitVec(stage_, step(s.value()));
}

BitVec step(const Fsr& f, const BitVec& s) { return f.step(s); }

// ---------------------------------------------------------------------------
// Cycle

namespace {

std::size_t minimal_period(const std::vector<std::uint8_t>& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  const std::size_t p = n - pi[n - 1];
  return n % p == 0 ? p : n;
}

// Booth's least rotation: start index of the lexicographically least rotation.
std::size_t least_rotation(const std::vector<std::uint8_t>& s) {
  const std::size_t n = s.size();
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const std::uint8_t sj = s[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != s[k % n]) {
      if (sj < s[k % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

}  // namespace

Cycle::Cycle(std::vector<std::uint8_t> bits) {
  if (bits.empty()) throw std::invalid_argument("Cycle: empty sequence");
  for (auto& b : bits) b = b ? 1 : 0;
  bits.resize(minimal_period(bits));
  // Least LSB-first integer = lexicographically least reversed string.
  std::vector<std::uint8_t> rev(bits.rbegin(), bits.rend());
  const std::size_t k = least_rotation(rev);
  std::rotate(rev.begin(), rev.begin() + static_cast<std::ptrdiff_t>(k), rev.end());
  bits_.assign(rev.rbegin(), rev.rend());
}

Cycle Cycle::from_bits(std::initializer_list<int> bits) {
  std::vector<std::uint8_t> v;
  v.reserve(bits.size());
  for (int b : bits) v.push_back(b ? 1 : 0);
  return Cycle(std::move(v));
}

std::uint64_t Cycle::value() const {
  if (bits_.size() > 64) throw std::out_of_range("Cycle::value: period exceeds 64");
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < bits_.size(); ++j) v |= static_cast<std::uint64_t>(bits_[j]) << j;
  return v;
}

std::string Cycle::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t j = 0; j < bits_.size(); j += 4) {
    unsigned d = 0;
    for (std::size_t b = 0; b < 4 && j + b < bits_.size(); ++b) d |= static_cast<unsigned>(bits_[j + b]) << b;
    s += kDigits[d];
  }
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  return {s.rbegin(), s.rend()};
}

std::string Cycle::to_string() const {
  std::string s = std::to_string(bits_.size()) + ' ';
  for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) s += static_cast<char>('0' + *it);
  return s;
}

Cycle Cycle::complement() const {
  std::vector<std::uint8_t> c(bits_);
  for (auto& b : c) b ^= 1;
  return Cycle(std::move(c));
}

std::strong_ordering operator<=>(const Cycle& a, const Cycle& b) {
  if (auto c = a.period() <=> b.period(); c != 0) return c;
  for (std::size_t j = a.period(); j-- > 0;) {
    if (auto c = a.bits_[j] <=> b.bits_[j]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// CycleStructure

CycleStructure::CycleStructure(std::vector<Cycle> cycles) : cycles_(std::move(cycles)) {
  std::sort(cycles_.begin(), cycles_.end());
  cycles_.erase(std::unique(cycles_.begin(), cycles_.end()), cycles_.end());
  for (const auto& c : cycles_) total_ += c.period();
}

std::optional<std::size_t> CycleStructure::find(const Cycle& c) const {
  auto it = std::lower_bound(cycles_.begin(), cycles_.end(), c);
  if (it == cycles_.end() || !(*it == c)) return std::nullopt;
  return static_cast<std::size_t>(it - cycles_.begin());
}

bool CycleStructure::contains(const Cycle& c) const { return find(c).has_value(); }

std::size_t CycleStructure::count_period(std::size_t p) const {
  return static_cast<std::size_t>(
      std::count_if(cycles_.begin(), cycles_.end(), [p](const Cycle& c) { return c.period() == p; }));
}

bool CycleStructure::includes(const CycleStructure& sub) const {
  return std::includes(cycles_.begin(), cycles_.end(), sub.cycles_.begin(), sub.cycles_.end());
}

// ---------------------------------------------------------------------------
// Nonsingularity and cycle sweeps

namespace {

void require_table_bound(const Fsr& f, const char* what) {
  require_within_bound(f.stage(), what);
  (void)f.table();
}

std::vector<std::uint8_t> orbit_bits(const Fsr& f, std::uint64_t start) {
  std::vector<std::uint8_t> bits;
  std::uint64_t s = start;
  do {
    bits.push_back(static_cast<std::uint8_t>(s & 1u));
    s = f.step(s);
  } while (s != start);
  return bits;
}

}  // namespace

bool is_nonsingular_by_criterion(const Fsr& f) {
  require_table_bound(f, "nonsingularity check");
  const TruthTable& t = f.table();
  for (std::uint64_t x = 0; x < t.size(); x += 2) {
    if (t.get(x) == t.get(x | 1u)) return false;
  }
  return true;
}

bool is_nonsingular(const Fsr& f) {
  require_table_bound(f, "nonsingularity check");
  const std::uint64_t n = std::uint64_t{1} << f.stage();
  std::vector<bool> hit(n, false);
  bool bijective = true;
  for (std::uint64_t s = 0; s < n && bijective; ++s) {
    const std::uint64_t t = f.step(s);
    if (hit[t]) bijective = false;
    hit[t] = true;
  }
  if (bijective != is_nonsingular_by_criterion(f)) {
    throw std::logic_error("nonsingularity criteria disagree");
  }
  return bijective;
}

namespace {

StateCycles sweep(const Fsr& f, bool with_map) {
  require_table_bound(f, "cycle structure");
  if (!is_nonsingular_by_criterion(f)) throw std::invalid_argument("cycle structure of a singular FSR");
  const std::int64_t n = std::int64_t{1} << f.stage();

  struct Found {
    std::uint64_t min_state;
    std::vector<std::uint8_t> bits;
  };
  std::vector<Found> found;

#pragma omp parallel
  {
    std::vector<Found> local;
#pragma omp for schedule(dynamic, 1024)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::uint64_t>(i);
      std::uint64_t t = f.step(s);
      bool owner = true;
      while (t != s) {
        if (t < s) {
          owner = false;
          break;
        }
        t = f.step(t);
      }
      if (owner) local.push_back({s, orbit_bits(f, s)});
    }
#pragma omp critical
    for (auto& x : local) found.push_back(std::move(x));
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.min_state < b.min_state; });
  std::vector<Cycle> cycles;
  cycles.reserve(found.size());
  for (auto& x : found) cycles.emplace_back(std::move(x.bits));

  // Order states-of-cycles along the canonical cycle order.
  std::vector<std::size_t> perm(cycles.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return cycles[a] < cycles[b]; });

  StateCycles out;
  std::vector<Cycle> sorted;
  sorted.reserve(cycles.size());
  out.min_state.reserve(cycles.size());
  for (std::size_t i : perm) {
    sorted.push_back(std::move(cycles[i]));
    out.min_state.push_back(found[i].min_state);
  }
  out.cycles = CycleStructure(std::move(sorted));
  if (out.cycles.size() != out.min_state.size()) throw std::logic_error("cycle sweep produced duplicate cycles");

  if (with_map) {
    out.cycle_of.assign(static_cast<std::size_t>(n), 0);
    const auto count = static_cast<std::int64_t>(out.min_state.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t c = 0; c < count; ++c) {
      const std::uint64_t start = out.min_state[static_cast<std::size_t>(c)];
      std::uint64_t s = start;
      do {
        out.cycle_of[s] = static_cast<std::uint32_t>(c);
        s = f.step(s);
      } while (s != start);
    }
  }
  return out;
}

}  // namespace

CycleStructure cycle_structure(const Fsr& f) { return sweep(f, false).cycles; }

StateCycles state_cycles(const Fsr& f) { return sweep(f, true); }

CycleStructure cycle_structure_serial(const Fsr& f) {
  require_table_bound(f, "cycle structure");
  if (!is_nonsingular_by_criterion(f)) throw std::invalid_argument("cycle structure of a singular FSR");
  const std::uint64_t n = std::uint64_t{1} << f.stage();
  std::vector<bool> seen(n, false);
  std::vector<Cycle> cycles;
  for (std::uint64_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint8_t> bits;
    std::uint64_t t = s;
    do {
      seen[t] = true;
      bits.push_back(static_cast<std::uint8_t>(t & 1u));
      t = f.step(t);
    } while (t != s);
    cycles.emplace_back(std::move(bits));
  }
  return CycleStructure(std::move(cycles));
}

CycleStructure functional_cycles(std::uint64_t state_count, const std::function<std::uint64_t(std::uint64_t)>& next,
                                 const std::function<std::uint8_t(std::uint64_t)>& output) {
  // 0 = unvisited, 1 = on the current walk, 2 = finished.
  std::vector<std::uint8_t> color(state_count, 0);
  std::vector<Cycle> cycles;
  std::vector<std::uint64_t> path;
  for (std::uint64_t s = 0; s < state_count; ++s) {
    if (color[s]) continue;
    path.clear();
    std::uint64_t t = s;
    while (color[t] == 0) {
      color[t] = 1;
      path.push_back(t);
      t = next(t);
    }
    if (color[t] == 1) {
      std::vector<std::uint8_t> bits;
      std::uint64_t u = t;
      do {
        bits.push_back(output(u) & 1u);
        u = next(u);
      } while (u != t);
      cycles.emplace_back(std::move(bits));
    }
    for (auto p : path) color[p] = 2;
  }
  return CycleStructure(std::move(cycles));
}

// ---------------------------------------------------------------------------
// Windows and realizability

namespace {

std::vector<std::uint64_t> window_values(const Cycle& c, std::size_t k) {
  const std::size_t p = c.period();
  std::vector<std::uint64_t> out(p);
  for (std::size_t i = 0; i < p; ++i) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < k; ++j) v |= static_cast<std::uint64_t>(c[i + j]) << j;
    out[i] = v;
  }
  return out;
}

std::vector<std::uint64_t> union_windows(std::span<const Cycle> cs, std::size_t k) {
  std::vector<std::uint64_t> all;
  for (const auto& c : cs) {
    auto w = window_values(c, k);
    all.insert(all.end(), w.begin(), w.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

bool injective_under(const std::vector<std::uint64_t>& ws, std::uint64_t (*proj)(std::uint64_t, std::size_t),
                     std::size_t m) {
  std::vector<std::uint64_t> img;
  img.reserve(ws.size());
  for (auto w : ws) img.push_back(proj(w, m));
  std::sort(img.begin(), img.end());
  return std::adjacent_find(img.begin(), img.end()) == img.end();
}

std::uint64_t proj_lbit(std::uint64_t w, std::size_t) { return w >> 1; }
std::uint64_t proj_hbit(std::uint64_t w, std::size_t m) { return w & BitVec::mask(m); }

std::vector<Cycle> distinct(std::span<const Cycle> cs) {
  CycleStructure s(std::vector<Cycle>(cs.begin(), cs.end()));
  return {s.begin(), s.end()};
}

std::uint64_t period_sum(std::span<const Cycle> cs) {
  std::uint64_t t = 0;
  for (const auto& c : cs) t += c.period();
  return t;
}

void require_width(std::size_t m) {
  if (m == 0 || m >= 64) throw std::invalid_argument("stage must be in 1..63");
}

}  // namespace

std::vector<BitVec> windows(const Cycle& c, std::size_t k) {
  if (k == 0 || k > 64) throw std::invalid_argument("windows: width must be in 1..64");
  auto vals = window_values(c, k);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::vector<BitVec> out;
  out.reserve(vals.size());
  for (auto v : vals) out.emplace_back(k, v);
  return out;
}

bool realizable_as_fsr(std::span<const Cycle> cs, std::size_t m) {
  require_width(m);
  const auto set = distinct(cs);
  if (period_sum(set) != (std::uint64_t{1} << m)) return false;
  return injective_under(union_windows(set, m + 1), proj_lbit, m);
}

Fsr fsr_from_cycles(std::span<const Cycle> cs, std::size_t m) {
  if (!realizable_as_fsr(cs, m)) throw std::invalid_argument("cycle set is not the cycle structure of a " +
                                                             std::to_string(m) + "-stage FSR");
  require_within_bound(m, "fsr_from_cycles");
  TruthTable t(m);
  for (auto w : union_windows(distinct(cs), m + 1)) t.set(w & BitVec::mask(m), (w >> m) & 1u);
  return Fsr(std::move(t));
}

WindowEquivalence window_injectivity_equiv_check(std::span<const Cycle> cs, std::size_t m) {
  require_width(m);
  const auto set = distinct(cs);
  const auto wide = union_windows(set, m + 1);
  return {
      union_windows(set, m).size() == period_sum(set),
      injective_under(wide, proj_lbit, m),
      injective_under(wide, proj_hbit, m),
  };
}

// ---------------------------------------------------------------------------
// Constructions

Fsr toggle_feedback(const Fsr& f, const BitVec& u) {
  const std::size_t n = f.stage();
  if (n < 2) throw std::invalid_argument("toggle_feedback: stage must be at least 2");
  if (u.size() != n - 1) throw std::invalid_argument("toggle_feedback: expected a word of length stage-1");
  TruthTable t = f.table();
  t.flip(u.value() << 1);
  t.flip((u.value() << 1) | 1u);
  return Fsr(std::move(t));
}

Fsr product_fsr(const Fsr& outer, const Fsr& inner) {
  const std::size_t n = outer.stage();
  const std::size_t m = inner.stage();
  const std::size_t big = n + m;
  require_within_bound(big, "product FSR stage");
  const TruthTable& h = outer.table();
  const TruthTable& g = inner.table();
  TruthTable t(big);
  const std::uint64_t gm = BitVec::mask(m);
  const auto count = static_cast<std::int64_t>(t.size());
  auto words = t.words();

#pragma omp parallel for schedule(static)
  for (std::int64_t wi = 0; wi < (count + 63) / 64; ++wi) {
    std::uint64_t word = 0;
    for (std::int64_t b = 0; b < 64 && wi * 64 + b < count; ++b) {
      const auto x = static_cast<std::uint64_t>(wi * 64 + b);
      std::uint64_t y = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t w = x >> i;
        const std::uint64_t gi = ((w >> m) & 1u) ^ static_cast<std::uint64_t>(g.get(w & gm));
        y |= gi << i;
      }
      const bool bit = g.get((x >> n) & gm) ^ h.get(y);
      word |= static_cast<std::uint64_t>(bit) << b;
    }
    words[static_cast<std::size_t>(wi)] = word;
  }
  return Fsr(std::move(t));
}

CycleStructure simulate_cascade(const Fsr& outer, const Fsr& inner) {
  const std::size_t n = outer.stage();
  const std::size_t m = inner.stage();
  if (n + m > 20) throw BoundExceeded("simulate_cascade: joint stage exceeds 20");
  const TruthTable& h = outer.table();
  const TruthTable& g = inner.table();
  const std::uint64_t gm = BitVec::mask(m);
  // Joint state: inner register in the low m bits, outer register above.
  auto next = [&](std::uint64_t s) {
    const std::uint64_t b = s & gm;
    const std::uint64_t a = s >> m;
    const std::uint64_t fed = static_cast<std::uint64_t>(g.get(b)) ^ (a & 1u);
    const std::uint64_t b2 = (b >> 1) | (fed << (m - 1));
    const std::uint64_t a2 = (a >> 1) | (static_cast<std::uint64_t>(h.get(a)) << (n - 1));
    return (a2 << m) | b2;
  };
  auto output = [](std::uint64_t s) { return static_cast<std::uint8_t>(s & 1u); };
  return functional_cycles(std::uint64_t{1} << (n + m), next, output);
}

BitVec ell_sampling(std::span<const std::uint8_t> seq, std::size_t ell, std::size_t i) {
  const std::size_t p = seq.size();
  if (ell == 0 || p == 0 || p % ell != 0) throw std::invalid_argument("ell_sampling: period not divisible by stride");
  if (i >= p) throw std::out_of_range("ell_sampling: offset outside the period");
  const std::size_t k = p / ell;
  if (k > BitVec::kMaxBits) throw std::invalid_argument("ell_sampling: sample longer than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < k; ++j) v |= static_cast<std::uint64_t>(seq[(i + j * ell) % p] & 1u) << j;
  return BitVec(k, v);
}

BitVec ell_sampling(const Cycle& c, std::size_t ell, std::size_t i) { return ell_sampling(c.bits(), ell, i); }

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string strip(const std::string& s) {
  std::string t = s;
  if (auto hash = t.find('#'); hash != std::string::npos) t.resize(hash);
  const auto a = t.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = t.find_last_not_of(" \t\r");
  return t.substr(a, b - a + 1);
}

}  // namespace

Fsr parse_fsr(std::istream& in, const std::string& base_dir) {
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);

  std::size_t i = 0;
  auto next_content = [&]() -> std::optional<std::string> {
    while (i < lines.size()) {
      std::string s = strip(lines[i++]);
      if (!s.empty()) return s;
    }
    return std::nullopt;
  };

  auto first = next_content();
  if (!first) throw ParseError(i, "empty FSR file");
  std::istringstream head(*first);
  std::string kw;
  long long n = -1;
  std::string extra;
  if (!(head >> kw >> n) || kw != "STAGE" || (head >> extra)) throw ParseError(i, "expected 'STAGE <n>'");
  if (n < 1) throw ParseError(i, "stage must be at least 1");
  const auto stage = static_cast<std::size_t>(n);

  auto second = next_content();
  if (!second) throw ParseError(i, "missing FEEDBACK line");
  const std::size_t feedback_line = i;
  std::istringstream fb(*second);
  std::string kind;
  if (!(fb >> kw >> kind) || kw != "FEEDBACK") throw ParseError(i, "expected 'FEEDBACK TABLE|CIRCUIT ...'");

  if (kind == "TABLE") {
    std::string hex;
    if (!(fb >> hex) || (fb >> extra)) throw ParseError(i, "FEEDBACK TABLE takes one hex string");
    if (stage > TruthTable::kMaxArity) throw ParseError(i, "stage too large for a feedback table");
    if (next_content()) throw ParseError(i, "trailing content after FEEDBACK TABLE");
    try {
      return Fsr(TruthTable::from_hex(stage, hex));
    } catch (const std::invalid_argument& e) {
      throw ParseError(feedback_line, e.what());
    }
  }
  if (kind != "CIRCUIT") throw ParseError(i, "unknown feedback kind '" + kind + "'");

  std::string path;
  Circuit c = [&] {
    if (fb >> path) {
      if (fb >> extra) throw ParseError(feedback_line, "FEEDBACK CIRCUIT takes one path");
      std::filesystem::path p(path);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      try {
        return read_circuit_file(p.string());
      } catch (const ParseError& e) {
        throw ParseError(feedback_line, p.string() + ": " + e.what());
      }
    }
    std::string rest;
    for (std::size_t k = i; k < lines.size(); ++k) rest += lines[k] + '\n';
    try {
      return parse_circuit_text(rest);
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      const auto colon = msg.find(": ");
      throw ParseError(feedback_line + e.line(), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
  }();
  if (c.arity() != stage) {
    throw ParseError(feedback_line, "feedback circuit has " + std::to_string(c.arity()) + " inputs, stage is " +
                                        std::to_string(stage));
  }
  return Fsr(std::move(c));
}

Fsr read_fsr_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FSR file '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_fsr(in, dir.empty() ? "." : dir.string());
}

std::string format_fsr(const Fsr& f) {
  std::string s = "STAGE " + std::to_string(f.stage()) + '\n';
  if (f.has_table()) return s + "FEEDBACK TABLE " + f.table().to_hex() + '\n';
  return s + "FEEDBACK CIRCUIT\n" + format_circuit(*f.circuit());
}

std::string format_cycles(const CycleStructure& cs) {
  std::string s;
  for (const auto& c : cs) s += c.to_string() + '\n';
  return s;
}

}  // namespace fsrkit
