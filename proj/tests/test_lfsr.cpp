#include <gtest/gtest.h>

#include <random>

#include "fsrkit/error.hpp"
#include "fsrkit/lfsr.hpp"

using namespace fsrkit;

TEST(GF2Poly, ParseAndFormat) {
  EXPECT_EQ(parse_poly("x^4 + x^2 + 1").bits(), 0b10101u);
  EXPECT_EQ(parse_poly("1 + x"), GF2Poly(0b11));
  EXPECT_EQ(parse_poly("0x15"), parse_poly("x^4+x^2+1"));
  EXPECT_EQ(parse_poly("x^3 + 1").to_string(), "x^3 + 1");
  EXPECT_EQ(parse_poly("x^2 + x + 1").to_hex(), "0x7");
  EXPECT_THROW(parse_poly("x^ + 1"), std::invalid_argument);
  EXPECT_THROW(parse_poly("y + 1"), std::invalid_argument);
}

TEST(GF2Poly, Multiply) {
  EXPECT_EQ(poly_mul(parse_poly("x+1"), parse_poly("x^2+x+1")), parse_poly("x^3+1"));
  EXPECT_EQ(poly_mul(parse_poly("x^5+x+1"), GF2Poly::one()), parse_poly("x^5+x+1"));
  for (std::size_t ell : {1u, 3u, 9u}) {
    const auto fam = lfsr_family(ell);
    const int l = static_cast<int>(ell);
    EXPECT_EQ(poly_mul(GF2Poly::monomial(l) + GF2Poly::one(), fam.p0), GF2Poly::monomial(3 * l) + GF2Poly::one());
    EXPECT_EQ(poly_mul(fam.p0, fam.p0), fam.p2);
    EXPECT_EQ(fam.p0.degree(), 2 * l);
    EXPECT_EQ(fam.p1.degree(), 2 * l + 1);
    EXPECT_EQ(fam.p2.degree(), 4 * l);
  }
}

TEST(GF2Poly, DivModRoundTrip) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const GF2Poly a(rng() & 0xffffff);
    const GF2Poly b((rng() & 0xfff) | 1);
    const auto [q, r] = poly_divmod(a, b);
    ASSERT_EQ(poly_mul(q, b) + r, a);
    ASSERT_LT(r.degree(), b.degree());
  }
}

TEST(GF2Poly, Irreducibility) {
  EXPECT_TRUE(poly_is_irreducible(parse_poly("x^2+x+1")));
  EXPECT_FALSE(poly_is_irreducible(parse_poly("x^2+1")));
  EXPECT_FALSE(poly_is_irreducible(parse_poly("x^4+x^2+1")));
  EXPECT_TRUE(poly_is_irreducible(lfsr_family(3).p0));
  EXPECT_TRUE(poly_is_irreducible(lfsr_family(9).p0));
  EXPECT_FALSE(poly_is_irreducible(lfsr_family(3).p1));
  // Count of irreducible polynomials of degree 8 is 30.
  int count = 0;
  for (unsigned v = 256; v < 512; ++v) count += poly_is_irreducible(GF2Poly(v));
  EXPECT_EQ(count, 30);
  EXPECT_THROW(poly_is_irreducible(GF2Poly::monomial(40) + GF2Poly::one()), BoundExceeded);
}

TEST(Lfsr, FeedbackReadOff) {
  EXPECT_EQ(lfsr_of(parse_poly("x^2+x+1")).table(), TruthTable(2, {0, 1, 1, 0}));
  EXPECT_EQ(lfsr_of(parse_poly("x^3+1")).table(), TruthTable(3, {0, 1, 0, 1, 0, 1, 0, 1}));
  EXPECT_EQ(lfsr_of(parse_poly("x^4+x^2+1")).table(), TruthTable(4, {0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0}));
  EXPECT_THROW(lfsr_of(GF2Poly::one()), std::invalid_argument);
}

TEST(Lfsr, TransformPowers) {
  const auto fam1 = lfsr_family(1);
  const BitVec e1 = BitVec::unit(4);
  EXPECT_EQ(transform_pow(fam1.p2, 0, e1), e1);
  EXPECT_EQ(transform_pow(fam1.p2, 3, e1), BitVec::from_bits({0, 1, 0, 1}));
  for (std::uint64_t s = 0; s < 4; ++s) EXPECT_EQ(transform_pow(fam1.p0, 3, BitVec(2, s)), BitVec(2, s));

  std::mt19937_64 rng(9);
  for (std::size_t ell : {1u, 3u, 9u}) {
    const auto fam = lfsr_family(ell);
    for (int k = 0; k < 50; ++k) {
      const BitVec s(4 * ell, rng() & BitVec::mask(4 * ell));
      const std::uint64_t t = rng() % 200;
      ASSERT_EQ(transform_pow_stepping(fam.p2, t, s), transform_pow_matrix(fam.p2, t, s));
      ASSERT_EQ(transform_pow(fam.p2, 6 * ell, s), s);
      const BitVec s0(2 * ell, rng() & BitVec::mask(2 * ell));
      ASSERT_EQ(transform_pow(fam.p0, 3 * ell, s0), s0);
    }
    // L^{3l} is not the identity on the p2 space.
    EXPECT_NE(transform_pow(fam.p2, 3 * ell, BitVec::unit(4 * ell)), BitVec::unit(4 * ell));
  }
  EXPECT_THROW(transform_pow(fam1.p2, 1, BitVec::unit(3)), std::invalid_argument);
}

TEST(Lfsr, OrderOfTwo) {
  for (std::uint64_t ell : {1u, 3u, 9u, 27u}) EXPECT_EQ(multiplicative_order_of_two(3 * ell), 2 * ell);
}

TEST(Lfsr, FamilyCounts) {
  const auto c1 = family_cycle_counts(1);
  EXPECT_EQ(period_histogram(c1.p0), (std::map<std::size_t, std::size_t>{{1, 1}, {3, 1}}));
  EXPECT_EQ(period_histogram(c1.p1), (std::map<std::size_t, std::size_t>{{1, 2}, {3, 2}}));
  EXPECT_EQ(period_histogram(*c1.p2), (std::map<std::size_t, std::size_t>{{1, 1}, {3, 1}, {6, 2}}));

  const auto c3 = family_cycle_counts(3);
  EXPECT_EQ(period_histogram(c3.p0), (std::map<std::size_t, std::size_t>{{1, 1}, {9, 7}}));
  EXPECT_EQ(period_histogram(c3.p1), (std::map<std::size_t, std::size_t>{{1, 2}, {9, 14}}));
  EXPECT_EQ(period_histogram(*c3.p2), (std::map<std::size_t, std::size_t>{{1, 1}, {9, 7}, {18, 224}}));

  // p1 cycles are the p0 cycles and their complements.
  for (const auto& c : c3.p0) {
    EXPECT_TRUE(c3.p1.contains(c));
    EXPECT_TRUE(c3.p1.contains(c.complement()));
  }
  EXPECT_THROW(family_cycle_counts(2), BoundExceeded);
}
