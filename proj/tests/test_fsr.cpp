#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fsrkit/error.hpp"
#include "fsrkit/fsr.hpp"

using namespace fsrkit;

namespace {

Fsr table_fsr(std::size_t n, std::initializer_list<int> bits) { return Fsr(TruthTable(n, bits)); }

// f1 = x0 xor g(x1..x_{n-1}) with g given by its table bits.
Fsr nonsingular_from(std::size_t n, std::uint64_t g) {
  TruthTable t(n);
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, (x & 1u) ^ ((g >> (x >> 1)) & 1u));
  return Fsr(std::move(t));
}

CycleStructure cs(std::initializer_list<std::initializer_list<int>> cycles) {
  std::vector<Cycle> v;
  for (auto c : cycles) v.push_back(Cycle::from_bits(c));
  return CycleStructure(std::move(v));
}

// Brute-force canonical rotation: least LSB-first integer among rotations.
std::vector<std::uint8_t> brute_canonical(std::vector<std::uint8_t> s) {
  for (std::size_t p = 1; p <= s.size(); ++p) {
    if (s.size() % p) continue;
    bool rep = true;
    for (std::size_t i = p; i < s.size() && rep; ++i) rep = s[i] == s[i - p];
    if (rep) {
      s.resize(p);
      break;
    }
  }
  std::vector<std::uint8_t> best = s;
  auto less = [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  };
  for (std::size_t r = 1; r < s.size(); ++r) {
    std::vector<std::uint8_t> t(s.begin() + static_cast<std::ptrdiff_t>(r), s.end());
    t.insert(t.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(r));
    if (less(t, best)) best = t;
  }
  return best;
}

}  // namespace

TEST(Cycle, CanonicalFormMatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 3000; ++k) {
    const std::size_t len = 1 + rng() % 14;
    std::vector<std::uint8_t> s(len);
    for (auto& b : s) b = rng() & 1u;
    if (k % 3 == 0) {
      // Force some non-primitive strings.
      auto copy = s;
      s.insert(s.end(), copy.begin(), copy.end());
    }
    const Cycle c(s);
    const auto want = brute_canonical(s);
    ASSERT_EQ(std::vector<std::uint8_t>(c.bits().begin(), c.bits().end()), want);
  }
}

TEST(Cycle, PrintingAndOrder) {
  EXPECT_EQ(Cycle::from_bits({0, 0, 1}).to_string(), "3 001");
  EXPECT_EQ(Cycle::from_bits({0, 1, 1}).to_string(), "3 011");
  EXPECT_EQ(Cycle::from_bits({1, 1}).period(), 1u);
  EXPECT_EQ(Cycle::from_bits({0, 1, 1}).value(), 3u);
  EXPECT_EQ(Cycle::from_bits({1, 0, 1, 1, 0, 1}).hex(), "3");
  EXPECT_EQ(Cycle::from_bits({1, 0, 0, 1, 1, 1}).hex(), "f");
  EXPECT_LT(Cycle::from_bits({1}), Cycle::from_bits({0, 1}));
  EXPECT_LT(Cycle::from_bits({0}), Cycle::from_bits({1}));
  EXPECT_EQ(Cycle::from_bits({0, 0, 1}).complement(), Cycle::from_bits({0, 1, 1}));
}

TEST(Fsr, Step) {
  const Fsr pure = table_fsr(2, {0, 1, 0, 1});
  EXPECT_EQ(step(pure, BitVec::from_bits({0, 1})), BitVec::from_bits({1, 0}));
  EXPECT_EQ(step(pure, BitVec::from_bits({1, 1})), BitVec::from_bits({1, 1}));
  EXPECT_THROW(step(pure, BitVec::from_bits({1})), std::invalid_argument);

  // x^4 + x^2 + 1
  TruthTable t(4);
  for (std::uint64_t x = 0; x < 16; ++x) t.set(x, (x ^ (x >> 2)) & 1u);
  const Fsr p2(t);
  BitVec s = BitVec::from_bits({1, 0, 0, 0});
  for (int i = 0; i < 3; ++i) s = step(p2, s);
  EXPECT_EQ(s, BitVec::from_bits({0, 1, 0, 1}));
}

TEST(Fsr, Nonsingularity) {
  EXPECT_TRUE(is_nonsingular(table_fsr(2, {0, 1, 0, 1})));
  EXPECT_FALSE(is_nonsingular(table_fsr(2, {0, 0, 1, 1})));
}

TEST(Fsr, NonsingularityTriEquivalenceExhaustive) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << n);
    for (std::uint64_t code = 0; code < tables; ++code) {
      TruthTable t(n);
      for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, (code >> x) & 1u);
      const Fsr f(t);
      bool periodic = true;
      for (std::uint64_t s = 0; s < t.size() && periodic; ++s) {
        std::uint64_t u = f.step(s);
        for (std::uint64_t k = 0; k < t.size() && u != s; ++k) u = f.step(u);
        periodic = u == s;
      }
      ASSERT_EQ(is_nonsingular(f), is_nonsingular_by_criterion(f));
      ASSERT_EQ(is_nonsingular(f), periodic);
    }
  }
}

TEST(Fsr, CycleStructureExamples) {
  EXPECT_EQ(cycle_structure(table_fsr(2, {0, 1, 0, 1})), cs({{0}, {1}, {0, 1}}));
  EXPECT_EQ(cycle_structure(table_fsr(2, {0, 1, 1, 0})), cs({{0}, {0, 1, 1}}));
  EXPECT_EQ(cycle_structure(table_fsr(3, {0, 1, 0, 1, 0, 1, 0, 1})), cs({{0}, {1}, {0, 1, 1}, {0, 0, 1}}));
  EXPECT_EQ(format_cycles(cycle_structure(table_fsr(3, {0, 1, 0, 1, 0, 1, 0, 1}))), "1 0\n1 1\n3 001\n3 011\n");
  EXPECT_THROW(cycle_structure(table_fsr(2, {0, 0, 1, 1})), std::invalid_argument);
}

TEST(Fsr, ParallelSweepMatchesSerial) {
  std::mt19937_64 rng(17);
  for (std::size_t n : {3u, 6u, 9u, 12u}) {
    for (int k = 0; k < 5; ++k) {
      const Fsr f = nonsingular_from(n, rng());
      const auto par = cycle_structure(f);
      ASSERT_EQ(par, cycle_structure_serial(f));
      ASSERT_EQ(par.total(), std::uint64_t{1} << n);
    }
  }
}

TEST(Fsr, StateCyclesIndexEveryState) {
  const Fsr f = nonsingular_from(7, 0x5a3c99e1);
  const StateCycles sc = state_cycles(f);
  for (std::uint64_t s = 0; s < 128; ++s) {
    const auto c = sc.cycle_of[s];
    EXPECT_EQ(sc.cycle_of[f.step(s)], c);
    EXPECT_LE(sc.min_state[c], s);
  }
}

TEST(Fsr, OrbitOfEveryWindowIsItsCycle) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng() % 6;
    const Fsr f = nonsingular_from(n, rng());
    for (const Cycle& c : cycle_structure(f)) {
      const auto ws = windows(c, n);
      for (const BitVec& v : ws) {
        std::vector<BitVec> orbit;
        BitVec u = v;
        do {
          orbit.push_back(u);
          u = step(f, u);
        } while (u != v);
        ASSERT_EQ(orbit.size(), c.period());
        std::sort(orbit.begin(), orbit.end());
        ASSERT_EQ(orbit, ws);
      }
    }
  }
}

TEST(Fsr, Windows) {
  const Cycle c = Cycle::from_bits({0, 1, 1});
  EXPECT_EQ(windows(c, 2), (std::vector<BitVec>{BitVec::from_bits({1, 0}), BitVec::from_bits({0, 1}),
                                                 BitVec::from_bits({1, 1})}));
  EXPECT_EQ(windows(Cycle::from_bits({0}), 2), std::vector<BitVec>{BitVec::zeros(2)});
  EXPECT_EQ(windows(c, 3).size(), 3u);
  EXPECT_LE(windows(Cycle::from_bits({0, 1}), 5).size(), 2u);
}

TEST(Fsr, Realizability) {
  const auto a = cs({{0}, {1}});
  const auto b = cs({{0}, {0, 1, 1}});
  const auto c = cs({{0}, {0, 0, 1}});
  EXPECT_TRUE(realizable_as_fsr(a.cycles(), 1));
  EXPECT_TRUE(realizable_as_fsr(b.cycles(), 2));
  EXPECT_FALSE(realizable_as_fsr(c.cycles(), 2));

  EXPECT_EQ(fsr_from_cycles(a.cycles(), 1).table(), TruthTable(1, {0, 1}));
  EXPECT_EQ(fsr_from_cycles(b.cycles(), 2).table(), TruthTable(2, {0, 1, 1, 0}));
  EXPECT_EQ(fsr_from_cycles(cs({{0}, {1}, {0, 1}}).cycles(), 2).table(), TruthTable(2, {0, 1, 0, 1}));
  EXPECT_THROW(fsr_from_cycles(c.cycles(), 2), std::invalid_argument);

  auto check = [](const CycleStructure& s, std::size_t m, bool want) {
    const auto r = window_injectivity_equiv_check(s.cycles(), m);
    EXPECT_EQ(r.window_count, want);
    EXPECT_EQ(r.lbit_injective, want);
    EXPECT_EQ(r.hbit_injective, want);
  };
  check(b, 2, true);
  check(c, 2, false);
  check(cs({{0, 1}}), 1, true);
}

TEST(Fsr, FromCyclesRoundTripExhaustive) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << (n - 1));
    for (std::uint64_t g = 0; g < count; ++g) {
      const Fsr f = nonsingular_from(n, g);
      const auto s = cycle_structure(f);
      const Fsr back = fsr_from_cycles(s.cycles(), n);
      ASSERT_EQ(back.table(), f.table());
      ASSERT_EQ(cycle_structure(back), s);
    }
  }
}

TEST(Fsr, ToggleJoinsAndSplits) {
  const Fsr f = table_fsr(2, {0, 1, 0, 1});
  const Fsr g = toggle_feedback(f, BitVec::from_bits({1}));
  EXPECT_EQ(cycle_structure(g), cs({{0}, {0, 1, 1}}));
  EXPECT_EQ(toggle_feedback(g, BitVec::from_bits({1})).table(), f.table());

  std::mt19937_64 rng(29);
  for (int k = 0; k < 200; ++k) {
    const Fsr h = nonsingular_from(4, rng());
    const BitVec u(3, rng() & 7u);
    const StateCycles sc = state_cycles(h);
    const bool same = sc.cycle_of[u.value() << 1] == sc.cycle_of[(u.value() << 1) | 1u];
    const auto before = sc.cycles.size();
    const auto after = cycle_structure(toggle_feedback(h, u)).size();
    ASSERT_EQ(after, same ? before + 1 : before - 1);
  }
  EXPECT_THROW(toggle_feedback(f, BitVec::from_bits({1, 0})), std::invalid_argument);
}

TEST(Fsr, ProductAndCascade) {
  const Fsr x1x0 = table_fsr(1, {0, 1});
  const Fsr p0 = table_fsr(2, {0, 1, 1, 0});
  EXPECT_EQ(product_fsr(x1x0, x1x0).table(), TruthTable(2, {0, 1, 0, 1}));
  const Fsr p1 = product_fsr(x1x0, p0);
  EXPECT_EQ(p1.table(), TruthTable(3, {0, 1, 0, 1, 0, 1, 0, 1}));

  EXPECT_EQ(simulate_cascade(x1x0, x1x0), cs({{0}, {1}, {0, 1}}));
  EXPECT_EQ(simulate_cascade(x1x0, p0), cycle_structure(p1));

  std::mt19937_64 rng(31);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 1 + rng() % 5;
    const std::size_t m = 1 + rng() % 5;
    const Fsr h = nonsingular_from(n, rng());
    const Fsr g = nonsingular_from(m, rng());
    const auto joint = simulate_cascade(h, g);
    ASSERT_EQ(joint, cycle_structure(product_fsr(h, g)));
    ASSERT_EQ(joint.total(), std::uint64_t{1} << (n + m));
  }
}

TEST(Fsr, ProductContainsInnerWhenOuterHasZero) {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 40; ++k) {
    // h1(0) = 0 so h outputs the zero sequence.
    const Fsr h = nonsingular_from(1 + rng() % 4, rng() & ~std::uint64_t{1});
    const Fsr g = nonsingular_from(1 + rng() % 4, rng());
    ASSERT_TRUE(cycle_structure(product_fsr(h, g)).includes(cycle_structure(g)));
  }
}

TEST(Fsr, EllSampling) {
  const std::vector<std::uint8_t> seq{1, 0, 0, 0, 1, 0};
  EXPECT_EQ(ell_sampling(seq, 1, 0), BitVec::from_bits({1, 0, 0, 0, 1, 0}));
  EXPECT_EQ(ell_sampling(std::vector<std::uint8_t>{0, 1, 1}, 1, 1), BitVec::from_bits({1, 1, 0}));
  EXPECT_EQ(ell_sampling(std::vector<std::uint8_t>{0, 1, 0, 1}, 2, 0), BitVec::from_bits({0, 0}));
  EXPECT_THROW(ell_sampling(seq, 4, 0), std::invalid_argument);
}

TEST(Fsr, TextFormat) {
  const Fsr f = table_fsr(3, {0, 1, 0, 1, 0, 1, 0, 1});
  const std::string text = format_fsr(f);
  EXPECT_EQ(text, "STAGE 3\nFEEDBACK TABLE aa\n");
  std::istringstream in(text);
  EXPECT_EQ(parse_fsr(in).table(), f.table());

  std::istringstream inline_ckt(
      "STAGE 2\n"
      "FEEDBACK CIRCUIT\n"
      "v0 INPUT 0\n"
      "v1 INPUT 1\n"
      "SINK v0\n");
  EXPECT_EQ(parse_fsr(inline_ckt).table(), TruthTable(2, {0, 1, 0, 1}));

  std::istringstream bad("STAGE 2\nFEEDBACK CIRCUIT\nv0 INPUT 0\nv1 AND v0 v9\nSINK v1\n");
  try {
    parse_fsr(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  std::istringstream wrong_len("STAGE 3\nFEEDBACK TABLE a\n");
  EXPECT_THROW(parse_fsr(wrong_len), ParseError);
}
