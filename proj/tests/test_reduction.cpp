#include <gtest/gtest.h>

#include <random>

#include "fsrkit/analysis.hpp"
#include "fsrkit/error.hpp"
#include "fsrkit/reduction.hpp"

using namespace fsrkit;

namespace {

TruthTable table_of(std::size_t r, std::uint64_t code) {
  TruthTable t(r);
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, (code >> x) & 1u);
  return t;
}

TruthTable random_table(std::size_t r, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution bit(density);
  TruthTable t(r);
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, bit(rng));
  return t;
}

}  // namespace

TEST(Reduction, EllChoice) {
  const std::pair<std::size_t, std::size_t> expect[] = {{1, 1}, {2, 1}, {3, 3}, {6, 3}, {7, 9}, {18, 9}, {19, 27}};
  for (auto [r, ell] : expect) EXPECT_EQ(ell_for(r).ell, ell) << r;
  EXPECT_EQ(ell_for(1).k, 0u);
  EXPECT_EQ(ell_for(5).k, 1u);
  EXPECT_THROW(ell_for(0), std::invalid_argument);
}

TEST(Reduction, F2MatchesCaseDefinition) {
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << r)); ++code) {
      const TruthTable f0 = table_of(r, code);
      ASSERT_EQ(truth_table(f2_transform(from_truth_table(f0))), f2_table(f0));
    }
  // f2 is unsat exactly when f0 is.
  for (std::uint64_t code = 0; code < 16; ++code) EXPECT_EQ(f2_table(table_of(2, code)).any(), code != 0);
}

TEST(Reduction, OracleStatements) {
  for (std::size_t ell : {1u, 3u}) {
    EXPECT_TRUE(Alg1Oracle(ell).check_rho_statements().empty()) << ell;
    EXPECT_TRUE(Alg2Maps(ell).check_conjugate_properties().empty()) << ell;
  }
  EXPECT_THROW(Alg1Oracle(9), BoundExceeded);
}

TEST(Reduction, Alg1AllSmallInputs) {
  const Alg1Oracle oracle(1);
  for (std::size_t r = 1; r <= 2; ++r)
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << r)); ++code) {
      const TruthTable f0 = table_of(r, code);
      const auto inst = build_irreducibility_fsr(from_truth_table(f0));
      ASSERT_EQ(inst.ell, 1u);
      ASSERT_TRUE(inst.f3_semantic.has_value());
      const TruthTable ref = oracle.f3_reference(f0);
      ASSERT_EQ(*inst.f3_semantic, ref) << "r=" << r << " code=" << code;
      ASSERT_EQ(truth_table(inst.f3_circuit), ref) << "r=" << r << " code=" << code;
      ASSERT_EQ(inst.fsr.stage(), 4u);
      ASSERT_EQ(is_irreducible(inst.fsr), f0.any()) << "r=" << r << " code=" << code;
    }
}

TEST(Reduction, Alg1EllThree) {
  const Alg1Oracle oracle(3);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 4; ++k) {
    const std::size_t r = 3 + rng() % 4;
    const TruthTable f0 = k == 0 ? TruthTable(r) : random_table(r, rng, 0.05);
    const auto inst = build_irreducibility_fsr(from_truth_table(f0));
    ASSERT_EQ(inst.ell, 3u);
    const TruthTable ref = oracle.f3_reference(f0);
    ASSERT_EQ(*inst.f3_semantic, ref);
    ASSERT_EQ(inst.fsr.table(), [&] {
      TruthTable t(12);
      for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, ((x ^ (x >> 6)) & 1u) ^ ref.get(x >> 1));
      return t;
    }());
  }
}

TEST(Reduction, Alg1CycleJoinGraph) {
  for (std::size_t ell : {1u, 3u}) {
    const Alg1Oracle oracle(ell);
    const Fsr p2 = lfsr_of(oracle.family().p2);
    std::mt19937_64 rng(ell);
    for (int k = 0; k < 3; ++k) {
      const std::size_t r = ell == 1 ? 1 + k % 2 : 3 + k;
      const TruthTable f0 = k == 0 ? TruthTable(r) : random_table(r, rng, 0.3);
      const auto inst = build_irreducibility_fsr(from_truth_table(f0));
      const auto lambda = [&](std::uint64_t v) { return oracle.lambda(v); };
      EXPECT_FALSE(check_lambda(p2, oracle.f3_reference(f0), lambda).has_value());
      const CycleJoinGraph g = cycle_join_graph(p2, inst.fsr, lambda);
      EXPECT_TRUE(g.acyclic());
      EXPECT_TRUE(g.union_property());
      bool all_p0_isolated = true;
      const auto& cs = oracle.p2_cycles().cycles;
      for (std::size_t c = 0; c < cs.size(); ++c) {
        if (oracle.in_c6(c))
          EXPECT_FALSE(g.isolated(c));
        else
          all_p0_isolated = all_p0_isolated && g.isolated(c);
      }
      EXPECT_EQ(all_p0_isolated, !f0.any());
    }
  }
}

TEST(Reduction, Alg2AllSmallInputs) {
  const Alg2Maps maps(1);
  const Fsr p1 = lfsr_of(maps.family().p1);
  for (std::size_t r = 1; r <= 2; ++r)
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << r)); ++code) {
      const TruthTable f0 = table_of(r, code);
      const auto inst = build_indecomposability_fsr(from_truth_table(f0));
      ASSERT_EQ(inst.fsr.stage(), 3u);
      const TruthTable ref = maps.f3_reference(f2_table(f0));
      ASSERT_EQ(*inst.f3_semantic, ref) << "r=" << r << " code=" << code;
      ASSERT_EQ(truth_table(inst.f3_circuit), ref);
      if (!f0.any()) EXPECT_EQ(inst.fsr, p1);
      const auto rep = is_decomposable(inst.fsr);
      ASSERT_TRUE(rep.complete);
      ASSERT_EQ(rep.witness.has_value(), !f0.any()) << "r=" << r << " code=" << code;
    }
}

TEST(Reduction, Alg2EllThree) {
  const Alg2Maps maps(3);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 6; ++k) {
    const std::size_t r = 3 + rng() % 4;
    const TruthTable f0 = k == 0 ? TruthTable(r) : random_table(r, rng, 0.1);
    const auto inst = build_indecomposability_fsr(from_truth_table(f0));
    ASSERT_EQ(inst.fsr.stage(), 7u);
    const TruthTable ref = maps.f3_reference(f2_table(f0));
    ASSERT_EQ(*inst.f3_semantic, ref);
    ASSERT_EQ(truth_table(inst.f3_circuit), ref);
    const auto rep = is_decomposable(inst.fsr, {DecomposeStrategy::Guided});
    ASSERT_EQ(rep.witness.has_value(), !f0.any());
  }
}

TEST(Reduction, SizeBounds) {
  for (std::size_t r = 1; r <= 4; ++r) {
    const Circuit f0 = projection(r, 0);
    const auto a = build_irreducibility_fsr(f0);
    const auto b = build_indecomposability_fsr(f0);
    EXPECT_TRUE(a.size.within_bound) << a.size.f1_size << " vs " << a.size.bound;
    EXPECT_TRUE(b.size.within_bound) << b.size.f1_size << " vs " << b.size.bound;
    EXPECT_EQ(a.size.f1_size, a.size.f3_size + 11);
  }
}

TEST(Reduction, Alg1EllThreeSubFsrs) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 2; ++k) {
    const TruthTable f0 = k == 0 ? TruthTable(5) : random_table(5, rng, 0.1);
    const auto inst = build_irreducibility_fsr(from_truth_table(f0));
    const auto rep = find_subfsrs(inst.fsr);
    EXPECT_EQ(rep.entries.empty(), f0.any());
    for (const auto& e : rep.entries) EXPECT_EQ(e.stage, 6u);
  }
}
