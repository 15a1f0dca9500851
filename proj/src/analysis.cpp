#include "fsrkit/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fsrkit/error.hpp"

namespace fsrkit {

namespace {

constexpr std::size_t kSubFsrMaxStage = 12;

// Exact cover of B^m by the m-window sets of f's cycles (Algorithm X with
// incremental liveness counts).
class WindowCover {
 public:
  WindowCover(const CycleStructure& cycles, std::size_t m) : m_(m), cells_(std::size_t{1} << m) {
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      const Cycle& c = cycles[i];
      if (c.period() > cells_) continue;
      std::vector<std::uint64_t> ws(c.period());
      for (std::size_t j = 0; j < c.period(); ++j) {
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < m; ++k) v |= static_cast<std::uint64_t>(c[j + k]) << k;
        ws[j] = v;
      }
      std::sort(ws.begin(), ws.end());
      if (std::adjacent_find(ws.begin(), ws.end()) != ws.end()) continue;
      source_.push_back(i);
      windows_.push_back(std::move(ws));
      periods_.push_back(c.period());
    }
    holders_.resize(cells_);
    for (std::size_t c = 0; c < windows_.size(); ++c) {
      for (auto w : windows_[c]) holders_[w].push_back(c);
    }
  }

  // Some subset of eligible periods sums to 2^m.
  bool sum_feasible() const {
    std::vector<bool> reach(cells_ + 1, false);
    reach[0] = true;
    for (auto p : periods_) {
      for (std::size_t s = cells_; s >= p; --s) {
        if (reach[s - p]) reach[s] = true;
        if (s == p) break;
      }
    }
    return reach[cells_];
  }

  // Calls on_solution with indices into the original cycle list; stops when it returns false.
  std::uint64_t run(const std::function<bool(const std::vector<std::size_t>&)>& on_solution) {
    covered_.assign(cells_, false);
    blocked_.assign(windows_.size(), 0);
    live_.assign(cells_, 0);
    for (std::size_t w = 0; w < cells_; ++w) live_[w] = holders_[w].size();
    chosen_.clear();
    nodes_ = 0;
    remaining_ = cells_;
    stop_ = false;
    search(on_solution);
    return nodes_;
  }

 private:
  void select(std::size_t c) {
    for (auto x : windows_[c]) {
      covered_[x] = true;
      for (auto d : holders_[x]) {
        if (blocked_[d]++ == 0) {
          for (auto y : windows_[d]) --live_[y];
        }
      }
    }
    remaining_ -= windows_[c].size();
    chosen_.push_back(c);
  }

  void unselect(std::size_t c) {
    chosen_.pop_back();
    remaining_ += windows_[c].size();
    for (auto it = windows_[c].rbegin(); it != windows_[c].rend(); ++it) {
      for (auto d : holders_[*it]) {
        if (--blocked_[d] == 0) {
          for (auto y : windows_[d]) ++live_[y];
        }
      }
      covered_[*it] = false;
    }
  }

  void search(const std::function<bool(const std::vector<std::size_t>&)>& on_solution) {
    ++nodes_;
    if (remaining_ == 0) {
      std::vector<std::size_t> out;
      out.reserve(chosen_.size());
      for (auto c : chosen_) out.push_back(source_[c]);
      std::sort(out.begin(), out.end());
      if (!on_solution(out)) stop_ = true;
      return;
    }
    std::size_t best = cells_;
    std::size_t best_live = ~std::size_t{0};
    for (std::size_t w = 0; w < cells_; ++w) {
      if (covered_[w] || live_[w] >= best_live) continue;
      best = w;
      best_live = live_[w];
      if (best_live == 0) return;
    }
    const std::vector<std::size_t> options = holders_[best];
    for (auto c : options) {
      if (blocked_[c]) continue;
      select(c);
      search(on_solution);
      unselect(c);
      if (stop_) return;
    }
  }

  std::size_t m_;
  std::size_t cells_;
  std::vector<std::size_t> source_;
  std::vector<std::vector<std::uint64_t>> windows_;
  std::vector<std::size_t> periods_;
  std::vector<std::vector<std::size_t>> holders_;

  std::vector<bool> covered_;
  std::vector<std::size_t> blocked_;
  std::vector<std::size_t> live_;
  std::vector<std::size_t> chosen_;
  std::size_t remaining_ = 0;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
};

void require_subfsr_bounds(const Fsr& f) {
  if (f.stage() > kSubFsrMaxStage) {
    throw BoundExceeded("subFSR search supports stage <= " + std::to_string(kSubFsrMaxStage));
  }
  if (!is_nonsingular(f)) throw std::invalid_argument("subFSR search needs a nonsingular FSR");
}

SubFsrReport subfsr_search(const Fsr& f, bool first_only) {
  require_subfsr_bounds(f);
  const CycleStructure cycles = cycle_structure(f);
  SubFsrReport report;
  for (std::size_t m = 1; m < f.stage(); ++m) {
    WindowCover cover(cycles, m);
    if (!cover.sum_feasible()) {
      report.pruned_stages.push_back(m);
      continue;
    }
    std::vector<SubFsr> found;
    report.nodes += cover.run([&](const std::vector<std::size_t>& idx) {
      std::vector<Cycle> cs;
      for (auto i : idx) cs.push_back(cycles[i]);
      CycleStructure set(cs);
      Fsr g = fsr_from_cycles(set.cycles(), m);
      found.push_back({m, std::move(set), std::move(g)});
      return !first_only;
    });
    std::sort(found.begin(), found.end(), [](const SubFsr& a, const SubFsr& b) {
      return std::lexicographical_compare(a.cycles.begin(), a.cycles.end(), b.cycles.begin(), b.cycles.end());
    });
    for (auto& s : found) report.entries.push_back(std::move(s));
    if (first_only && !report.entries.empty()) break;
  }
  return report;
}

}  // namespace

SubFsrReport find_subfsrs(const Fsr& f) { return subfsr_search(f, false); }

bool is_irreducible(const Fsr& f) { return subfsr_search(f, true).entries.empty(); }

// ---------------------------------------------------------------------------
// Decomposition

std::optional<Decomposition> decompose_with_inner(const Fsr& f, const Fsr& g) {
  const std::size_t big = f.stage();
  const std::size_t m = g.stage();
  if (m >= big) throw std::invalid_argument("decompose_with_inner: inner stage must be below the outer stage");
  require_within_bound(big, "decompose_with_inner");
  const std::size_t n = big - m;
  const TruthTable& ft = f.table();
  const TruthTable& gt = g.table();
  const std::uint64_t gm = BitVec::mask(m);

  // 0 = free, 1 = forced 0, 2 = forced 1.
  std::vector<std::uint8_t> h(std::size_t{1} << n, 0);
  for (std::uint64_t x = 0; x < ft.size(); ++x) {
    std::uint64_t y = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t w = x >> i;
      y |= (((w >> m) & 1u) ^ static_cast<std::uint64_t>(gt.get(w & gm))) << i;
    }
    const auto want = static_cast<std::uint8_t>(1 + (ft.get(x) ^ gt.get((x >> n) & gm)));
    if (h[y] == 0) {
      h[y] = want;
    } else if (h[y] != want) {
      return std::nullopt;
    }
  }
  TruthTable outer(n);
  std::uint64_t free_entries = 0;
  for (std::uint64_t y = 0; y < h.size(); ++y) {
    if (h[y] == 0) ++free_entries;
    outer.set(y, h[y] == 2);
  }
  return Decomposition{Fsr(std::move(outer)), g, free_entries};
}

namespace {

DecompositionReport brute(const Fsr& f, const DecomposeOptions& opts) {
  const std::size_t big = f.stage();
  DecompositionReport report;
  if (big < 2) {
    report.log.push_back("stage 1 admits no split");
    return report;
  }
  const std::size_t top = std::min(big - 1, opts.max_inner);
  if (top < big - 1) {
    if (!opts.allow_partial) {
      throw std::invalid_argument("BRUTE decomposition: inner stages up to " + std::to_string(big - 1) +
                                  " exceed the limit " + std::to_string(opts.max_inner));
    }
    report.complete = false;
  }
  for (std::size_t k = 1; k <= top; ++k) {
    const auto count = static_cast<std::int64_t>(std::uint64_t{1} << (std::uint64_t{1} << k));
    std::int64_t best = count;
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best) if (opts.parallel)
    for (std::int64_t code = 0; code < count; ++code) {
      if (code >= best) continue;
      TruthTable t(k);
      t.words()[0] = static_cast<std::uint64_t>(code);
      if (decompose_with_inner(f, Fsr(std::move(t)))) best = std::min(best, code);
    }
    report.candidates_tried += static_cast<std::uint64_t>(best < count ? best + 1 : count);
    report.log.push_back("inner stage " + std::to_string(k) + ": " + std::to_string(count) + " tables, " +
                         (best < count ? "witness found" : "none"));
    if (best < count) {
      TruthTable t(k);
      t.words()[0] = static_cast<std::uint64_t>(best);
      report.witness = decompose_with_inner(f, Fsr(std::move(t)));
      return report;
    }
  }
  if (!report.complete) {
    report.log.push_back("inner stages " + std::to_string(top + 1) + ".." + std::to_string(big - 1) + " not searched");
  }
  return report;
}

DecompositionReport guided(const Fsr& f) {
  if (f.table().get(0)) throw std::invalid_argument("GUIDED decomposition needs f(0,...,0) = 0");
  if (!is_nonsingular(f)) throw std::invalid_argument("GUIDED decomposition needs a nonsingular FSR");
  DecompositionReport report;
  const SubFsrReport subs = find_subfsrs(f);
  report.log.push_back(std::to_string(subs.entries.size()) + " subFSRs");
  const Cycle zero = Cycle::from_bits({0});
  for (const SubFsr& s : subs.entries) {
    if (!s.cycles.contains(zero)) continue;
    TruthTable flipped = s.fsr.table();
    for (auto& w : flipped.words()) w = ~w;
    if (flipped.size() < 64) flipped.words()[0] &= BitVec::mask(flipped.size());
    for (const Fsr& g : {s.fsr, Fsr(std::move(flipped))}) {
      ++report.candidates_tried;
      if (auto d = decompose_with_inner(f, g)) {
        report.log.push_back("inner stage " + std::to_string(g.stage()) + " subFSR factors f");
        report.witness = std::move(d);
        return report;
      }
    }
  }
  report.log.push_back("no subFSR through [0] factors f");
  return report;
}

}  // namespace

DecompositionReport is_decomposable(const Fsr& f, const DecomposeOptions& opts) {
  return opts.strategy == DecomposeStrategy::Brute ? brute(f, opts) : guided(f);
}

// ---------------------------------------------------------------------------
// Cycle-join graph

bool CycleJoinGraph::isolated(std::size_t v) const {
  return std::none_of(arcs_.begin(), arcs_.end(), [v](const CycleJoinArc& a) { return a.from == v || a.to == v; });
}

std::optional<std::string> check_lambda(const Fsr& g, const TruthTable& f3, const StatePredicate& lambda) {
  const std::size_t m = g.stage();
  const StateCycles sc = state_cycles(g);
  std::vector<std::uint32_t> marked(sc.cycles.size(), 0);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
    if (!lambda(v)) continue;
    if (++marked[sc.cycle_of[v]] > 1) return "two lambda states on cycle " + sc.cycles[sc.cycle_of[v]].to_string();
    if (lambda(v ^ 1u)) return "lambda holds on both " + BitVec(m, v).to_string() + " and its conjugate";
  }
  for (std::uint64_t u = 0; u < f3.size(); ++u) {
    if (f3.get(u) && !lambda(u << 1) && !lambda((u << 1) | 1u)) {
      return "f3(" + BitVec(m - 1, u).to_string() + ") = 1 but lambda vanishes on both extensions";
    }
  }
  return std::nullopt;
}

CycleJoinGraph cycle_join_graph(const Fsr& g, const Fsr& f, const StatePredicate& lambda) {
  const std::size_t m = g.stage();
  if (f.stage() != m) throw std::invalid_argument("cycle_join_graph: f and g have different stages");
  if (m < 2) throw std::invalid_argument("cycle_join_graph: stage must be at least 2");
  const TruthTable& gt = g.table();
  const TruthTable& ft = f.table();
  TruthTable f3(m - 1);
  for (std::uint64_t x = 0; x < ft.size(); x += 2) {
    const bool d0 = ft.get(x) ^ gt.get(x);
    const bool d1 = ft.get(x | 1u) ^ gt.get(x | 1u);
    if (d0 != d1) throw std::invalid_argument("f - g depends on x0");
    f3.set(x >> 1, d0);
  }
  if (auto bad = check_lambda(g, f3, lambda)) throw std::invalid_argument("lambda is not admissible: " + *bad);

  const StateCycles gs = state_cycles(g);
  CycleJoinGraph out;
  out.vertices_ = gs.cycles;
  const std::size_t nv = gs.cycles.size();

  std::vector<CycleJoinArc> arcs;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
    if (!f3.get(v >> 1) || !lambda(v)) continue;
    arcs.push_back({gs.cycle_of[v], gs.cycle_of[v ^ 1u], BitVec(m, v)});
  }
  std::sort(arcs.begin(), arcs.end(), [](const CycleJoinArc& a, const CycleJoinArc& b) {
    return std::tie(a.from, a.to, a.witness) < std::tie(b.from, b.to, b.witness);
  });
  arcs.erase(std::unique(arcs.begin(), arcs.end(),
                         [](const CycleJoinArc& a, const CycleJoinArc& b) { return a.from == b.from && a.to == b.to; }),
             arcs.end());
  out.arcs_ = std::move(arcs);

  // Kahn's algorithm; loops and cycles leave vertices unprocessed.
  std::vector<std::size_t> indeg(nv, 0);
  std::vector<std::vector<std::size_t>> succ(nv);
  for (const auto& a : out.arcs_) {
    succ[a.from].push_back(a.to);
    ++indeg[a.to];
  }
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < nv; ++v) {
    if (indeg[v] == 0) queue.push_back(v);
  }
  std::size_t processed = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    ++processed;
    for (auto w : succ[v]) {
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }
  out.acyclic_ = processed == nv;

  std::vector<std::size_t> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : out.arcs_) parent[find(a.from)] = find(a.to);
  out.component_of_.assign(nv, 0);
  std::vector<std::size_t> label(nv, nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t r = find(v);
    if (label[r] == nv) label[r] = out.component_count_++;
    out.component_of_[v] = label[r];
  }

  // Each component's states must be exactly one cycle of f.
  const StateCycles fs = state_cycles(f);
  std::vector<std::int64_t> target(out.component_count_, -1);
  std::vector<std::uint64_t> mass(out.component_count_, 0);
  bool ok = true;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m) && ok; ++v) {
    const std::size_t comp = out.component_of_[gs.cycle_of[v]];
    const auto d = static_cast<std::int64_t>(fs.cycle_of[v]);
    if (target[comp] == -1) target[comp] = d;
    ok = target[comp] == d;
    ++mass[comp];
  }
  for (std::size_t c = 0; c < out.component_count_ && ok; ++c) {
    ok = mass[c] == fs.cycles[static_cast<std::size_t>(target[c])].period();
  }
  out.union_property_ = ok;
  return out;
}

std::string CycleJoinGraph::to_dot() const {
  static constexpr const char* kPalette[] = {"lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon",
                                             "lightcyan", "wheat"};
  std::ostringstream out;
  out << "digraph D {\n";
  out << "  label=\"" << (acyclic_ ? "acyclic" : "cyclic") << ", " << component_count_ << " components\";\n";
  out << "  node [style=filled];\n";
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const Cycle& c = vertices_[v];
    out << "  c" << v << " [label=\"" << c.period() << '@' << c.hex() << "\", fillcolor="
        << kPalette[component_of_[v] % std::size(kPalette)] << "];\n";
  }
  for (const auto& a : arcs_) {
    std::ostringstream hex;
    hex << std::hex << a.witness.value();
    out << "  c" << a.from << " -> c" << a.to << " [label=\"" << hex.str() << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fsrkit
