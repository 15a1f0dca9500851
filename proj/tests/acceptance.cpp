// Runs every acceptance criterion and prints one PASS/FAIL line each.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "fsrkit/suites.hpp"

using namespace fsrkit;

namespace {

using Lines = std::vector<CheckLine>;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
};

Lines run(const std::string& suite, std::size_t ell, std::size_t samples = 0, std::uint64_t seed = 1) {
  SuiteOptions o;
  o.ell = ell;
  o.samples = samples;
  o.seed = seed;
  return run_suite(suite, o);
}

void require_tag(Outcome& out, const Lines& lines, const std::string& tag, std::size_t min_count = 1) {
  std::size_t count = 0;
  for (const auto& l : lines) {
    if (l.tag != tag || l.name == "summary") continue;
    ++count;
    if (!l.pass) {
      out.pass = false;
      out.notes.push_back("[" + l.tag + "] " + l.name + ": " + l.detail);
    }
  }
  if (count < min_count) {
    out.pass = false;
    out.notes.push_back("only " + std::to_string(count) + " '" + tag + "' checks, want " + std::to_string(min_count));
  }
}

void require_all(Outcome& out, const Lines& lines) {
  for (const auto& l : lines)
    if (!l.pass) {
      out.pass = false;
      out.notes.push_back("[" + l.tag + "] " + l.name + ": " + l.detail);
    }
  if (lines.empty()) out.pass = false;
}

/// Both satisfiable and unsatisfiable instances appear among the biconditional lines.
void require_both_verdicts(Outcome& out, const Lines& lines) {
  bool yes = false, no = false;
  for (const auto& l : lines)
    if (l.tag == "biconditional") {
      yes = yes || l.detail.find("sat=yes") != std::string::npos;
      no = no || l.detail.find("sat=no") != std::string::npos;
    }
  if (!yes || !no) {
    out.pass = false;
    out.notes.push_back("population does not cover both verdicts");
  }
}

void require_time(Outcome& out, double seconds, double limit) {
  if (seconds >= limit) {
    out.pass = false;
    out.notes.push_back("took " + std::to_string(seconds) + " s, limit " + std::to_string(limit) + " s");
  }
}

}  // namespace

int main() {
  Lines irr1, irr3, dec1, dec3;
  int failed = 0;

  auto criterion = [&](int id, const char* what, double limit, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0) require_time(out, secs, limit);
    char buf[160];
    std::snprintf(buf, sizeof buf, "criterion %2d: %s  %s (%.2f s)", id, out.pass ? "PASS" : "FAIL", what, secs);
    std::cout << buf << '\n';
    for (const auto& n : out.notes) std::cout << "    " << n << '\n';
    std::cout.flush();
    failed += !out.pass;
  };

  criterion(1, "LFSR family cycle structures at l=1,3", 1.0, [&](Outcome& o) {
    require_all(o, run("lemma7", 1));
    require_all(o, run("lemma7", 3));
  });
  criterion(2, "min gadget sizes and function, m=1..16", 5.0, [&](Outcome& o) {
    const Lines lines = run("min-sizes", 1, 1000);
    require_tag(o, lines, "min-size", 16);
    require_tag(o, lines, "min-function", 16);
  });
  criterion(3, "irreducibility biconditional at l=1, all 20 tables", 10.0, [&](Outcome& o) {
    irr1 = run("biconditional-irr", 1);
    require_tag(o, irr1, "biconditional", 20);
  });
  criterion(4, "irreducibility biconditional at l=3, 20 circuits r in {5,6}", 600.0, [&](Outcome& o) {
    irr3 = run("biconditional-irr", 3, 20);
    require_tag(o, irr3, "biconditional", 20);
    require_both_verdicts(o, irr3);
  });
  criterion(5, "indecomposability biconditional at l=1, all 20 tables", 10.0, [&](Outcome& o) {
    dec1 = run("biconditional-dec", 1);
    require_tag(o, dec1, "biconditional", 20);
  });
  criterion(6, "indecomposability biconditional at l=3, guided plus brute k<=3", 600.0, [&](Outcome& o) {
    dec3 = run("biconditional-dec", 3, 10);
    require_tag(o, dec3, "biconditional", 10);
    require_tag(o, dec3, "p1-exact", 1);
    require_both_verdicts(o, dec3);
  });
  criterion(7, "cycle-join graph of p2 at l=1,3", 0, [&](Outcome& o) {
    for (std::size_t ell : {1u, 3u}) {
      const Lines lines = run("lemma11", ell, 6);
      require_tag(o, lines, "rho", 1);
      require_tag(o, lines, "lambda", 4);
      require_tag(o, lines, "graph-acyclic", 4);
      require_tag(o, lines, "graph-c6", 4);
      require_tag(o, lines, "graph-p0", 4);
    }
  });
  criterion(8, "every subFSR of an irreducibility instance has stage 2l", 0, [&](Outcome& o) {
    require_tag(o, irr1, "subfsr-stage", 20);
    require_tag(o, irr3, "subfsr-stage", 20);
    std::size_t with = 0;
    for (const Lines* ls : {&irr1, &irr3})
      for (const auto& l : *ls) with += l.tag == "subfsr-stage" && l.detail != "no subFSR";
    if (!with) {
      o.pass = false;
      o.notes.push_back("no reducible instance exercised the stage check");
    }
  });
  criterion(9, "semantic, circuit and reference f3 agree at l=1,3", 0, [&](Outcome& o) {
    for (const Lines* ls : {&irr1, &irr3, &dec1, &dec3}) require_tag(o, *ls, "f3-agree", 10);
  });
  criterion(10, "emitted circuit sizes within the stated bounds", 0, [&](Outcome& o) {
    for (const Lines* ls : {&irr1, &irr3, &dec1, &dec3}) require_tag(o, *ls, "size-bound", 10);
  });
  criterion(11, "property suites", 300.0, [&](Outcome& o) {
    require_all(o, run("conjugate-min", 1, 1000));
    require_all(o, run("window-equiv", 1, 1000));
    require_all(o, run("conjprop", 1));
    require_all(o, run("conjprop", 3));
    require_all(o, run("roundtrip", 1));
    require_all(o, run("cascade", 1, 100));
  });

  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
