// fsrkit command-line front end. Exit codes: 0 yes/ok, 1 no/failed check, 2 error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fsrkit/analysis.hpp"
#include "fsrkit/error.hpp"
#include "fsrkit/lfsr.hpp"
#include "fsrkit/reduction.hpp"
#include "fsrkit/suites.hpp"

using namespace fsrkit;

namespace {

struct Verdict {
  std::string question;
  bool answer;
  std::optional<std::string> witness;
  double seconds;

  void print(std::ostream& os) const {
    os << "verdict: " << question << ' ' << (answer ? "yes" : "no");
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.3f s)", seconds);
    os << buf << '\n';
    if (witness) os << *witness;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_reduce(const std::string& kind, const std::string& input, const std::string& emit, const std::string& out_path) {
  const Circuit f0 = read_circuit_file(input);
  Stopwatch sw;
  const ReductionInstance inst =
      kind == "irr" ? build_irreducibility_fsr(f0) : build_indecomposability_fsr(f0);
  std::string text;
  if (emit == "circuit")
    text = format_circuit(inst.f1_circuit);
  else if (emit == "table")
    text = inst.fsr.table().to_hex() + '\n';
  else
    text = format_fsr(inst.fsr);
  write_output(out_path, text);

  std::ostream& report = out_path.empty() || out_path == "-" ? std::cerr : std::cout;
  char bound[64];
  std::snprintf(bound, sizeof bound, "%.0f", inst.size.bound);
  report << "stage=" << inst.fsr.stage() << " ℓ=" << inst.ell << " k=" << inst.k << " r=" << inst.r << '\n'
         << "size f0=" << inst.size.f0_size << " f3=" << inst.size.f3_size << " f1=" << inst.size.f1_size
         << " bound=" << bound << (kind == "irr" ? " (<)" : " (<=)") << " within=" << (inst.size.within_bound ? "yes" : "no")
         << '\n';
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", sw.seconds());
  report << "time=" << secs << "s\n";
  return 0;
}

std::string subfsr_text(const SubFsr& s) {
  std::string out = "stage " + std::to_string(s.stage) + " table " + s.fsr.table().to_hex() + "\n";
  for (const auto& c : s.cycles) out += "  " + c.to_string() + '\n';
  return out;
}

int cmd_analyze(const std::string& mode, const std::string& path, const std::string& strategy, std::size_t max_inner,
                bool partial) {
  const Fsr f = read_fsr_file(path);
  Stopwatch sw;
  if (mode == "cycles") {
    std::cout << format_cycles(cycle_structure(f));
    return 0;
  }
  if (mode == "subfsr") {
    const SubFsrReport rep = find_subfsrs(f);
    for (const auto& e : rep.entries) std::cout << subfsr_text(e);
    std::cout << rep.entries.size() << " subFSR(s), " << rep.nodes << " search nodes";
    if (!rep.pruned_stages.empty()) {
      std::cout << ", pruned stages";
      for (auto m : rep.pruned_stages) std::cout << ' ' << m;
    }
    std::cout << '\n';
    return rep.entries.empty() ? 1 : 0;
  }
  if (mode == "irreducible") {
    const bool irr = is_irreducible(f);
    Verdict{"IRREDUCIBLE", irr, std::nullopt, sw.seconds()}.print(std::cout);
    return irr ? 0 : 1;
  }
  DecomposeOptions opts;
  opts.strategy = strategy == "guided" ? DecomposeStrategy::Guided : DecomposeStrategy::Brute;
  opts.max_inner = max_inner;
  opts.allow_partial = partial;
  const DecompositionReport rep = is_decomposable(f, opts);
  for (const auto& line : rep.log) std::cout << "# " << line << '\n';
  std::optional<std::string> witness;
  if (rep.witness)
    witness = "outer " + format_fsr(rep.witness->outer) + "inner " + format_fsr(rep.witness->inner) +
              "free entries " + std::to_string(rep.witness->free_entries) + '\n';
  Verdict{"DECOMPOSABLE", rep.witness.has_value(), witness, sw.seconds()}.print(std::cout);
  if (!rep.witness && !rep.complete) {
    std::cout << "incomplete search: a negative answer is not established\n";
    return 2;
  }
  return rep.witness ? 0 : 1;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opts) {
  Stopwatch sw;
  const auto lines = run_suite(suite, opts);
  bool all = true;
  for (const auto& l : lines) {
    all = all && l.pass;
    std::cout << (l.pass ? "PASS " : "FAIL ") << '[' << l.tag << "] " << l.name << ": " << l.detail << '\n';
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", sw.seconds());
  std::cout << suite << ": " << (all ? "all passed" : "FAILED") << " in " << secs << " s\n";
  return all ? 0 : 1;
}

StatePredicate pick_lambda(const std::string& choice, const GF2Poly& base, std::optional<Alg1Oracle>& a1,
                           std::optional<Alg2Maps>& a2) {
  if (choice == "none") return [](std::uint64_t) { return false; };
  for (std::size_t ell : {1u, 3u}) {
    const LfsrFamily fam = lfsr_family(ell);
    if (base == fam.p2 && (choice == "auto" || choice == "alg1")) {
      a1.emplace(ell);
      return [&a1](std::uint64_t v) { return a1->lambda(v); };
    }
    if (base == fam.p1 && (choice == "auto" || choice == "alg2")) {
      a2.emplace(ell);
      return [&a2](std::uint64_t v) { return a2->lambda(v); };
    }
  }
  if (choice == "auto") return [](std::uint64_t) { return false; };
  throw std::invalid_argument("lambda '" + choice + "' needs base p2 or p1 at l in {1, 3}");
}

int cmd_graph(const std::string& path, const std::string& base_text, const std::string& lambda_choice,
              const std::string& dot_path) {
  const Fsr f = read_fsr_file(path);
  const GF2Poly base = parse_poly(base_text);
  const Fsr g = lfsr_of(base);
  std::optional<Alg1Oracle> a1;
  std::optional<Alg2Maps> a2;
  const StatePredicate lambda = pick_lambda(lambda_choice, base, a1, a2);
  const CycleJoinGraph graph = cycle_join_graph(g, f, lambda);
  std::size_t isolated = 0;
  for (std::size_t v = 0; v < graph.vertices().size(); ++v) isolated += graph.isolated(v);
  std::cout << "vertices=" << graph.vertices().size() << " arcs=" << graph.arcs().size()
            << " acyclic=" << (graph.acyclic() ? "yes" : "no") << " components=" << graph.component_count()
            << " isolated=" << isolated << " union=" << (graph.union_property() ? "yes" : "no") << '\n';
  if (!dot_path.empty()) write_output(dot_path, graph.to_dot());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback shift register reductions and analysis"};
  app.require_subcommand(1);

  std::string kind, input, emit = "fsr", out_path;
  auto* reduce = app.add_subcommand("reduce", "Build the FSR instance for a circuit");
  reduce->add_option("kind", kind, "irr or dec")->required()->check(CLI::IsMember({"irr", "dec"}));
  reduce->add_option("circuit", input, "Circuit file")->required();
  reduce->add_option("--emit", emit, "circuit, table or fsr")->check(CLI::IsMember({"circuit", "table", "fsr"}));
  reduce->add_option("-o,--output", out_path, "Output file (default stdout)");

  std::string mode, fsr_path, strategy = "brute";
  std::size_t max_inner = 3;
  bool partial = false;
  auto* analyze = app.add_subcommand("analyze", "Cycle structure, subFSRs and decompositions");
  analyze->add_option("mode", mode, "cycles, subfsr, decompose or irreducible")
      ->required()
      ->check(CLI::IsMember({"cycles", "subfsr", "decompose", "irreducible"}));
  analyze->add_option("fsr", fsr_path, "FSR file")->required();
  analyze->add_option("--strategy", strategy, "brute or guided")->check(CLI::IsMember({"brute", "guided"}));
  analyze->add_option("--max-inner", max_inner, "Largest inner stage for brute");
  analyze->add_flag("--partial", partial, "Allow brute to skip splits beyond --max-inner");

  std::string suite;
  SuiteOptions sopts;
  std::size_t r_value = 0;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--ell", sopts.ell, "l parameter");
  auto* r_opt = verify->add_option("--r", r_value, "Input count for truth-table sweeps");
  verify->add_option("--seed", sopts.seed, "Seed for randomized sweeps");
  verify->add_option("--samples", sopts.samples, "Sample count for randomized sweeps");

  std::string graph_fsr, base = "", lambda = "auto", dot;
  auto* graph = app.add_subcommand("graph", "Cycle-join graph of an FSR over a base LFSR");
  graph->add_option("fsr", graph_fsr, "FSR file")->required();
  graph->add_option("--base-lfsr", base, "Base LFSR polynomial, e.g. 'x^4+x^2+1'")->required();
  graph->add_option("--lambda", lambda, "auto, alg1, alg2 or none")
      ->check(CLI::IsMember({"auto", "alg1", "alg2", "none"}));
  graph->add_option("--dot", dot, "Write DOT to this file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*reduce) return cmd_reduce(kind, input, emit, out_path);
    if (*analyze) return cmd_analyze(mode, fsr_path, strategy, max_inner, partial);
    if (*verify) {
      if (*r_opt) sopts.r = r_value;
      return cmd_verify(suite, sopts);
    }
    if (*graph) return cmd_graph(graph_fsr, base, lambda, dot);
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return 2;
  } catch (const BoundExceeded& e) {
    std::cerr << "error: bound exceeded: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
