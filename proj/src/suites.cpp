#include "fsrkit/suites.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "fsrkit/analysis.hpp"
#include "fsrkit/error.hpp"
#include "fsrkit/lfsr.hpp"
#include "fsrkit/reduction.hpp"

namespace fsrkit {

namespace {

using Lines = std::vector<CheckLine>;

struct Sample {
  std::string name;
  Circuit f0;
};

TruthTable table_of(std::size_t r, std::uint64_t code) {
  TruthTable t(r);
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, (code >> x) & 1u);
  return t;
}

Fsr random_nonsingular(std::size_t n, std::mt19937_64& rng) {
  TruthTable t(n);
  for (std::uint64_t x = 0; x < t.size(); x += 2) {
    const bool b = rng() & 1u;
    t.set(x, b);
    t.set(x + 1, !b);
  }
  return Fsr(std::move(t));
}

/// All truth tables at r = 1 and 2 for ell = 1; random circuits at r in {5, 6}
/// for ell = 3, alternating forced-unsat and free instances.
std::vector<Sample> population(const SuiteOptions& o, std::size_t default_samples) {
  std::vector<Sample> out;
  std::mt19937_64 rng(o.seed);
  const std::size_t count = o.samples ? o.samples : default_samples;
  if (o.r && *o.r > 2) {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back({"circuit[" + std::to_string(i) + "] r=" + std::to_string(*o.r),
                     random_circuit(*o.r, 6 + rng() % 6, i % 2 == 0, rng)});
    return out;
  }
  if (o.r || o.ell == 1) {
    std::vector<std::size_t> rs = o.r ? std::vector<std::size_t>{*o.r} : std::vector<std::size_t>{1, 2};
    for (std::size_t r : rs) {
      if (r == 0) throw std::invalid_argument("r must be positive");
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << r)); ++code) {
        const TruthTable t = table_of(r, code);
        out.push_back({"table r=" + std::to_string(r) + " hex=" + t.to_hex(), from_truth_table(t)});
      }
    }
    return out;
  }
  require_oracle_ell(o.ell);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = 5 + i % 2;
    out.push_back({"circuit[" + std::to_string(i) + "] r=" + std::to_string(r),
                   random_circuit(r, 6 + rng() % 6, (i / 2) % 2 == 0, rng)});
  }
  return out;
}

std::string size_detail(const SizeReport& s) {
  std::ostringstream os;
  os << "|f0|=" << s.f0_size << " |f3|=" << s.f3_size << " |f1|=" << s.f1_size << " bound=" << std::fixed
     << static_cast<unsigned long long>(s.bound);
  return os.str();
}

void summary(Lines& lines, const std::string& tag, const std::string& unit) {
  std::size_t total = 0, ok = 0;
  for (const auto& l : lines)
    if (l.tag == tag) {
      ++total;
      ok += l.pass;
    }
  lines.push_back({tag, "summary", ok == total, std::to_string(ok) + "/" + std::to_string(total) + " " + unit + " consistent"});
}

Lines suite_family_cycles(const SuiteOptions& o) {
  const std::size_t ell = o.ell;
  const FamilyCycleCounts c = family_cycle_counts(ell);
  const std::size_t big = 3 * ell;
  const std::uint64_t p0_big = ((std::uint64_t{1} << (2 * ell)) - 1) / big;
  auto hist = [](std::initializer_list<std::pair<const std::size_t, std::size_t>> v) {
    return std::map<std::size_t, std::size_t>(v);
  };
  auto line = [](const std::string& name, const std::map<std::size_t, std::size_t>& got,
                 const std::map<std::size_t, std::size_t>& want) {
    std::string counts;
    for (auto [p, k] : got) counts += (counts.empty() ? "" : "+") + std::to_string(k);
    std::string per;
    for (auto [p, k] : got) per += (per.empty() ? "" : ", ") + std::to_string(k) + "x per-" + std::to_string(p);
    return CheckLine{"family-cycles", name, got == want, counts + " cycles " + (got == want ? "OK" : "MISMATCH") + " (" + per + ")"};
  };
  Lines lines;
  lines.push_back(line("p0", period_histogram(c.p0), hist({{1, 1}, {big, p0_big}})));
  lines.push_back(line("p1", period_histogram(c.p1), hist({{1, 2}, {big, 2 * p0_big}})));
  if (c.p2) {
    const std::uint64_t six = ((std::uint64_t{1} << (4 * ell)) - (std::uint64_t{1} << (2 * ell))) / (6 * ell);
    lines.push_back(line("p2", period_histogram(*c.p2), hist({{1, 1}, {big, p0_big}, {6 * ell, six}})));
  } else {
    lines.push_back({"family-cycles", "p2", true, "p2: skipped, 4l stages exceed the exhaustive bound"});
  }
  return lines;
}

Lines suite_biconditional_irr(const SuiteOptions& o) {
  Lines lines;
  std::map<std::size_t, std::unique_ptr<Alg1Oracle>> oracles;
  for (const auto& s : population(o, 20)) {
    const TruthTable t0 = truth_table(s.f0);
    const bool sat = t0.any();
    const ReductionInstance inst = build_irreducibility_fsr(s.f0);
    auto& oracle = oracles[inst.ell];
    if (!oracle) oracle = std::make_unique<Alg1Oracle>(inst.ell);
    const SubFsrReport rep = find_subfsrs(inst.fsr);
    const bool irreducible = rep.entries.empty();
    lines.push_back({"biconditional", s.name, irreducible == sat,
                     std::string("sat=") + (sat ? "yes" : "no") + " irreducible=" + (irreducible ? "yes" : "no") +
                         " stage=" + std::to_string(inst.fsr.stage()) + " l=" + std::to_string(inst.ell)});
    bool stages_ok = true;
    std::string stages;
    for (const auto& e : rep.entries) {
      stages_ok = stages_ok && e.stage == 2 * inst.ell;
      stages += (stages.empty() ? "" : ",") + std::to_string(e.stage);
    }
    lines.push_back({"subfsr-stage", s.name, stages_ok,
                     rep.entries.empty() ? "no subFSR" : "subFSR stages " + stages + " (want " + std::to_string(2 * inst.ell) + ")"});
    const TruthTable circ = truth_table(inst.f3_circuit);
    const TruthTable ref = oracle->f3_reference(t0);
    const bool agree = inst.f3_semantic && *inst.f3_semantic == circ && circ == ref;
    lines.push_back({"f3-agree", s.name, agree,
                     std::to_string(circ.size()) + " inputs, semantic/circuit/reference " + (agree ? "equal" : "differ")});
    lines.push_back({"size-bound", s.name, inst.size.within_bound, size_detail(inst.size) + " (strict)"});
  }
  summary(lines, "biconditional", "instances");
  return lines;
}

Lines suite_biconditional_dec(const SuiteOptions& o) {
  Lines lines;
  std::map<std::size_t, std::unique_ptr<Alg2Maps>> maps;
  const Fsr x1x0(TruthTable(1, {0, 1}));
  const Cycle zero = Cycle::from_bits({0});
  for (const auto& s : population(o, 10)) {
    const TruthTable t0 = truth_table(s.f0);
    const bool sat = t0.any();
    const ReductionInstance inst = build_indecomposability_fsr(s.f0);
    auto& m = maps[inst.ell];
    if (!m) m = std::make_unique<Alg2Maps>(inst.ell);

    bool decomposable = false;
    std::string how;
    bool consistent = true;
    if (inst.fsr.stage() - 1 <= 3) {
      const auto rep = is_decomposable(inst.fsr, {DecomposeStrategy::Brute});
      decomposable = rep.witness.has_value();
      consistent = rep.complete;
      how = "brute";
    } else {
      const auto guided = is_decomposable(inst.fsr, {DecomposeStrategy::Guided});
      const auto brute = is_decomposable(inst.fsr, {DecomposeStrategy::Brute, 3, true});
      decomposable = guided.witness.has_value();
      consistent = brute.witness.has_value() == decomposable;
      how = std::string("guided, brute k<=3 ") + (brute.witness ? "found" : "none");
    }
    lines.push_back({"biconditional", s.name, consistent && decomposable == !sat,
                     std::string("sat=") + (sat ? "yes" : "no") + " decomposable=" + (decomposable ? "yes" : "no") + " (" +
                         how + ") stage=" + std::to_string(inst.fsr.stage())});
    if (!sat) {
      const bool exact = inst.fsr.table() == lfsr_of(m->family().p1).table();
      lines.push_back({"p1-exact", s.name, exact, exact ? "table equals lfsr p1" : "table differs from lfsr p1"});
    } else {
      const SubFsrReport rep = find_subfsrs(inst.fsr);
      bool ok = true;
      std::size_t with_zero = 0;
      for (const auto& e : rep.entries)
        if (e.cycles.contains(zero)) {
          ++with_zero;
          ok = ok && e.fsr == x1x0;
        }
      lines.push_back({"subfsr-01", s.name, ok,
                       std::to_string(with_zero) + " subFSR(s) through [0], all x1+x0: " + (ok ? "yes" : "no")});
    }
    const TruthTable circ = truth_table(inst.f3_circuit);
    const TruthTable ref = m->f3_reference(f2_table(t0));
    const bool agree = inst.f3_semantic && *inst.f3_semantic == circ && circ == ref;
    lines.push_back({"f3-agree", s.name, agree,
                     std::to_string(circ.size()) + " inputs, semantic/circuit/reference " + (agree ? "equal" : "differ")});
    lines.push_back({"size-bound", s.name, inst.size.within_bound, size_detail(inst.size) + " (non-strict)"});
  }
  summary(lines, "biconditional", "instances");
  return lines;
}

Lines suite_cycle_join(const SuiteOptions& o) {
  require_oracle_ell(o.ell);
  SuiteOptions po = o;
  po.r.reset();
  const Alg1Oracle oracle(o.ell);
  const Fsr p2 = lfsr_of(oracle.family().p2);
  Lines lines;
  const auto stmts = oracle.check_rho_statements();
  lines.push_back({"rho", "D and rho statements", stmts.empty(), stmts.empty() ? "all hold" : stmts.front()});
  const auto lambda = [&](std::uint64_t v) { return oracle.lambda(v); };
  for (const auto& s : population(po, 4)) {
    const TruthTable t0 = truth_table(s.f0);
    const ReductionInstance inst = build_irreducibility_fsr(s.f0);
    if (inst.ell != o.ell) continue;
    const auto bad = check_lambda(p2, oracle.f3_reference(t0), lambda);
    lines.push_back({"lambda", s.name, !bad, bad ? *bad : "admissible"});
    if (bad) continue;
    const CycleJoinGraph g = cycle_join_graph(p2, inst.fsr, lambda);
    std::size_t c6_isolated = 0;
    bool p0_isolated = true;
    const auto& cs = oracle.p2_cycles().cycles;
    for (std::size_t c = 0; c < cs.size(); ++c) {
      if (oracle.in_c6(c))
        c6_isolated += g.isolated(c);
      else
        p0_isolated = p0_isolated && g.isolated(c);
    }
    const bool sat = t0.any();
    lines.push_back({"graph-acyclic", s.name, g.acyclic(), std::to_string(g.arcs().size()) + " arcs, " +
                                                                std::to_string(g.component_count()) + " components"});
    lines.push_back({"graph-c6", s.name, c6_isolated == 0, std::to_string(c6_isolated) + " isolated 6l-cycles"});
    lines.push_back({"graph-p0", s.name, p0_isolated == !sat,
                     std::string("p0-cycles all isolated=") + (p0_isolated ? "yes" : "no") + " sat=" + (sat ? "yes" : "no")});
  }
  return lines;
}

Lines suite_min_sizes(const SuiteOptions& o) {
  Lines lines;
  std::mt19937_64 rng(o.seed);
  const std::size_t per_width = o.samples ? o.samples : 1000;
  for (std::size_t m = 1; m <= 16; ++m) {
    const Circuit g = gadget_min(m);
    const std::size_t want = (13 * m * m + 37 * m - 44) / 2;
    lines.push_back({"min-size", "m=" + std::to_string(m), g.size() == want,
                     "size " + std::to_string(g.size()) + ", formula " + std::to_string(want)});
    std::uint64_t bad = 0, tried = 0;
    auto check = [&](std::uint64_t x, std::uint64_t y) {
      ++tried;
      const std::uint64_t got = g.evaluate_outputs(BitVec(2 * m, x | (y << m))).value();
      bad += got != std::min(x, y);
    };
    if (m <= 6) {
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << m); ++y) check(x, y);
    } else {
      for (std::size_t k = 0; k < per_width; ++k) check(rng() & BitVec::mask(m), rng() & BitVec::mask(m));
    }
    lines.push_back({"min-function", "m=" + std::to_string(m), bad == 0,
                     std::to_string(tried) + (m <= 6 ? " pairs (all)" : " random pairs") + ", " + std::to_string(bad) + " wrong"});
  }
  return lines;
}

Lines suite_conjprop(const SuiteOptions& o) {
  const auto fails = Alg2Maps(o.ell).check_conjugate_properties();
  Lines lines;
  const char* names[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)"};
  for (const char* n : names) {
    std::string hit;
    for (const auto& f : fails)
      if (f.rfind(n, 0) == 0) hit = f;
    lines.push_back({"conjprop", std::string(n) + " l=" + std::to_string(o.ell), hit.empty(),
                     hit.empty() ? "holds on all 2^" + std::to_string(2 * o.ell + 1) + " states" : hit});
  }
  return lines;
}

Lines suite_conjugate_min(const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed);
  const std::size_t count = o.samples ? o.samples : 1000;
  std::size_t bad = 0;
  std::string first;
  for (std::size_t k = 0; k < count; ++k) {
    const Fsr f = random_nonsingular(2 + rng() % 9, rng);
    if (auto v = conjugate_min_violation(f)) {
      if (!bad++) first = format_fsr(f) + " at state " + BitVec(f.stage(), *v).to_string();
    }
  }
  return {{"conjugate-min", "conjugate min property", bad == 0,
           std::to_string(count) + " random nonsingular FSRs (stage 2..10)" + (bad ? ", first failure " + first : "")}};
}

Lines suite_window_equiv(const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed);
  const std::size_t count = o.samples ? o.samples : 1000;
  std::size_t bad = 0, yes = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t m = 1 + rng() % 5;
    std::vector<Cycle> cs;
    if (rng() & 1u) {
      const CycleStructure all = cycle_structure(random_nonsingular(m, rng));
      for (const auto& c : all)
        if (rng() % 4) cs.push_back(c);
    } else {
      const std::size_t n = 1 + rng() % 4;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint8_t> bits(1 + rng() % (std::size_t{1} << m));
        for (auto& b : bits) b = rng() & 1u;
        cs.push_back(Cycle(bits));
      }
    }
    const CycleStructure set(cs);
    const auto r = window_injectivity_equiv_check(set.cycles(), m);
    bad += !(r.window_count == r.lbit_injective && r.lbit_injective == r.hbit_injective);
    yes += r.window_count;
  }
  return {{"window-equiv", "three-way window equivalence", bad == 0,
           std::to_string(count) + " random cycle sets, " + std::to_string(yes) + " realizable, " + std::to_string(bad) +
               " disagreements"}};
}

Lines suite_roundtrip(const SuiteOptions&) {
  Lines lines;
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << (n - 1));
    std::uint64_t bad = 0;
    for (std::uint64_t g = 0; g < count; ++g) {
      TruthTable t(n);
      for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, (x & 1u) ^ ((g >> (x >> 1)) & 1u));
      const Fsr f(t);
      const CycleStructure s = cycle_structure(f);
      const Fsr back = fsr_from_cycles(s.cycles(), n);
      bad += !(back == f && cycle_structure(back) == s);
    }
    lines.push_back({"roundtrip", "stage " + std::to_string(n), bad == 0,
                     std::to_string(count) + " nonsingular FSRs, " + std::to_string(bad) + " mismatches"});
  }
  return lines;
}

Lines suite_cascade(const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed);
  const std::size_t count = o.samples ? o.samples : 100;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = 1 + rng() % 11;
    const std::size_t m = 1 + rng() % (12 - n);
    const Fsr h = random_nonsingular(n, rng);
    const Fsr g = random_nonsingular(m, rng);
    bad += simulate_cascade(h, g) != cycle_structure(product_fsr(h, g));
  }
  return {{"cascade", "cascade equals product", bad == 0,
           std::to_string(count) + " random pairs with n+m <= 12, " + std::to_string(bad) + " mismatches"}};
}

}  // namespace

Circuit random_circuit(std::size_t r, std::size_t gates, bool unsat, std::mt19937_64& rng) {
  CircuitBuilder b(r);
  std::vector<NodeId> pool = b.inputs();
  for (std::size_t i = 0; i < gates; ++i) {
    const NodeId x = pool[rng() % pool.size()];
    const NodeId y = pool[rng() % pool.size()];
    switch (rng() % 3) {
      case 0: pool.push_back(b.and_gate(x, y)); break;
      case 1: pool.push_back(b.or_gate(x, y)); break;
      default: pool.push_back(b.not_gate(x)); break;
    }
  }
  Circuit core = std::move(b).finish(pool.back());
  if (!unsat) return core;
  CircuitBuilder u(r);
  const auto in = u.inputs();
  const NodeId a = u.embed(core, in).at(0);
  const NodeId c = u.embed(core, in).at(0);
  return std::move(u).finish(u.and_gate(a, u.not_gate(c)));
}

std::optional<std::uint64_t> conjugate_min_violation(const Fsr& f) {
  const StateCycles sc = state_cycles(f);
  for (std::uint64_t u = 2; u < sc.cycle_of.size(); ++u) {
    const std::uint64_t lo = std::min(sc.min_state[sc.cycle_of[u]], sc.min_state[sc.cycle_of[u ^ 1u]]);
    if (lo >= std::min(u, u ^ 1u)) return u;
  }
  return std::nullopt;
}

std::vector<std::string> suite_names() {
  return {"lemma7", "lemma11", "biconditional-irr", "biconditional-dec", "min-sizes", "conjprop",
          "conjugate-min", "window-equiv", "roundtrip", "cascade"};
}

std::vector<CheckLine> run_suite(const std::string& name, const SuiteOptions& opts) {
  if (name == "lemma7") return suite_family_cycles(opts);
  if (name == "lemma11") return suite_cycle_join(opts);
  if (name == "biconditional-irr") return suite_biconditional_irr(opts);
  if (name == "biconditional-dec") return suite_biconditional_dec(opts);
  if (name == "min-sizes") return suite_min_sizes(opts);
  if (name == "conjprop") return suite_conjprop(opts);
  if (name == "conjugate-min") return suite_conjugate_min(opts);
  if (name == "window-equiv") return suite_window_equiv(opts);
  if (name == "roundtrip") return suite_roundtrip(opts);
  if (name == "cascade") return suite_cascade(opts);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace fsrkit
