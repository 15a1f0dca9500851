#include "fsrkit/lfsr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>
#include <vector>

#include "fsrkit/error.hpp"

namespace fsrkit {

namespace {

int degree_of(GF2Poly::Bits b) {
  const auto hi = static_cast<std::uint64_t>(b >> 64);
  if (hi) return 127 - std::countl_zero(hi);
  const auto lo = static_cast<std::uint64_t>(b);
  return lo ? 63 - std::countl_zero(lo) : -1;
}

std::uint64_t low_word(const GF2Poly& p) { return static_cast<std::uint64_t>(p.bits()); }

void require_register_poly(const GF2Poly& p) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("characteristic polynomial must have degree at least 1");
  if (d > 63) throw std::invalid_argument("characteristic polynomial degree exceeds 63");
}

}  // namespace

GF2Poly GF2Poly::monomial(int k) {
  if (k < 0 || k > kMaxDegree) throw std::out_of_range("GF2Poly::monomial");
  return GF2Poly(Bits{1} << k);
}

int GF2Poly::degree() const { return degree_of(bits_); }

std::string GF2Poly::to_string() const {
  if (bits_ == 0) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (!coeff(i)) continue;
    if (!s.empty()) s += " + ";
    if (i == 0) {
      s += "1";
    } else if (i == 1) {
      s += "x";
    } else {
      s += "x^" + std::to_string(i);
    }
  }
  return s;
}

std::string GF2Poly::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  Bits b = bits_;
  do {
    s += kDigits[static_cast<unsigned>(b & 0xf)];
    b >>= 4;
  } while (b);
  std::reverse(s.begin(), s.end());
  return "0x" + s;
}

GF2Poly poly_mul(GF2Poly a, GF2Poly b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.degree() + b.degree() > GF2Poly::kMaxDegree) throw std::overflow_error("poly_mul: degree exceeds 127");
  GF2Poly::Bits r = 0;
  for (int i = 0; i <= b.degree(); ++i) {
    if (b.coeff(i)) r ^= a.bits() << i;
  }
  return GF2Poly(r);
}

std::pair<GF2Poly, GF2Poly> poly_divmod(GF2Poly a, GF2Poly b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const int db = b.degree();
  GF2Poly::Bits q = 0;
  GF2Poly::Bits r = a.bits();
  for (int dr = degree_of(r); dr >= db; dr = degree_of(r)) {
    q ^= GF2Poly::Bits{1} << (dr - db);
    r ^= b.bits() << (dr - db);
  }
  return {GF2Poly(q), GF2Poly(r)};
}

GF2Poly poly_mod(GF2Poly a, GF2Poly b) { return poly_divmod(a, b).second; }

GF2Poly poly_gcd(GF2Poly a, GF2Poly b) {
  while (!b.is_zero()) {
    GF2Poly r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

bool poly_is_irreducible(GF2Poly p) {
  const int d = p.degree();
  if (d > 36) throw BoundExceeded("poly_is_irreducible: degree " + std::to_string(d) + " exceeds 36");
  if (d < 1) return false;
  for (int k = 1; 2 * k <= d; ++k) {
    const GF2Poly::Bits lo = GF2Poly::Bits{1} << k;
    for (GF2Poly::Bits q = lo; q < (lo << 1); ++q) {
      if (poly_mod(p, GF2Poly(q)).is_zero()) return false;
    }
  }
  return true;
}

GF2Poly parse_poly(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  if (s.rfind("0x", 0) == 0) {
    const std::string hex = s.substr(2);
    if (hex.empty() || hex.size() > 32) throw std::invalid_argument("bad hex polynomial '" + text + "'");
    GF2Poly::Bits b = 0;
    for (char c : hex) {
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else {
        throw std::invalid_argument("bad hex polynomial '" + text + "'");
      }
      b = (b << 4) | static_cast<unsigned>(v);
    }
    return GF2Poly(b);
  }
  GF2Poly::Bits b = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t plus = s.find('+', pos);
    const std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    int e;
    if (term == "1") {
      e = 0;
    } else if (term == "x") {
      e = 1;
    } else if (term.rfind("x^", 0) == 0 && term.size() > 2 &&
               std::all_of(term.begin() + 2, term.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      e = std::stoi(term.substr(2));
    } else {
      throw std::invalid_argument("bad polynomial term '" + term + "' in '" + text + "'");
    }
    if (e > GF2Poly::kMaxDegree) throw std::invalid_argument("polynomial degree exceeds 127");
    b ^= GF2Poly::Bits{1} << e;
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return GF2Poly(b);
}

LfsrFamily lfsr_family(std::size_t ell) {
  if (ell == 0 || 4 * ell > GF2Poly::kMaxDegree) throw std::invalid_argument("lfsr_family: bad ell");
  const int l = static_cast<int>(ell);
  const GF2Poly p0 = GF2Poly::monomial(2 * l) + GF2Poly::monomial(l) + GF2Poly::one();
  const GF2Poly p1 = poly_mul(GF2Poly(0b11), p0);
  const GF2Poly p2 = GF2Poly::monomial(4 * l) + GF2Poly::monomial(2 * l) + GF2Poly::one();
  return {ell, p0, p1, p2};
}

Fsr lfsr_of(GF2Poly p) {
  require_register_poly(p);
  const auto n = static_cast<std::size_t>(p.degree());
  const std::uint64_t taps = low_word(p) & BitVec::mask(n);
  if (n <= exhaustive_bound()) {
    TruthTable t(n);
    auto words = t.words();
    for (std::uint64_t x = 0; x < t.size(); ++x) {
      if (std::popcount(x & taps) & 1) words[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return Fsr(std::move(t));
  }
  CircuitBuilder b(n);
  std::optional<NodeId> acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (!((taps >> i) & 1u)) continue;
    acc = acc ? b.xor_gate(*acc, b.input(i)) : b.input(i);
  }
  if (!acc) acc = b.const0();
  return Fsr(std::move(b).finish(*acc));
}

std::uint64_t lfsr_step(GF2Poly p, std::uint64_t state) {
  const auto n = static_cast<std::size_t>(p.degree());
  const std::uint64_t taps = low_word(p) & BitVec::mask(n);
  const std::uint64_t fb = static_cast<std::uint64_t>(std::popcount(state & taps) & 1);
  return (state >> 1) | (fb << (n - 1));
}

BitVec transform_pow_stepping(GF2Poly p, std::uint64_t t, const BitVec& s) {
  require_register_poly(p);
  if (s.size() != static_cast<std::size_t>(p.degree())) throw std::invalid_argument("transform_pow: length mismatch");
  std::uint64_t v = s.value();
  for (std::uint64_t i = 0; i < t; ++i) v = lfsr_step(p, v);
  return BitVec(s.size(), v);
}

namespace {

// Linear map as images of the unit vectors: col[j] = M(e_j).
using Matrix = std::vector<std::uint64_t>;

std::uint64_t apply_map(const Matrix& m, std::uint64_t v) {
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if ((v >> j) & 1u) r ^= m[j];
  }
  return r;
}

Matrix compose_maps(const Matrix& a, const Matrix& b) {
  Matrix r(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) r[j] = apply_map(a, b[j]);
  return r;
}

}  // namespace

BitVec transform_pow_matrix(GF2Poly p, std::uint64_t t, const BitVec& s) {
  require_register_poly(p);
  const auto n = static_cast<std::size_t>(p.degree());
  if (s.size() != n) throw std::invalid_argument("transform_pow: length mismatch");
  Matrix base(n), acc(n);
  for (std::size_t j = 0; j < n; ++j) {
    base[j] = lfsr_step(p, std::uint64_t{1} << j);
    acc[j] = std::uint64_t{1} << j;
  }
  for (; t; t >>= 1) {
    if (t & 1u) acc = compose_maps(base, acc);
    base = compose_maps(base, base);
  }
  return BitVec(n, apply_map(acc, s.value()));
}

BitVec transform_pow(GF2Poly p, std::uint64_t t, const BitVec& s) {
  return t <= 4096 ? transform_pow_stepping(p, t, s) : transform_pow_matrix(p, t, s);
}

std::uint64_t multiplicative_order_of_two(std::uint64_t modulus) {
  if (modulus == 0 || modulus % 2 == 0) throw std::invalid_argument("multiplicative_order_of_two: modulus must be odd");
  if (modulus == 1) return 1;
  std::uint64_t v = 2 % modulus;
  for (std::uint64_t i = 1;; ++i) {
    if (v == 1) return i;
    v = (v * 2) % modulus;
  }
}

std::map<std::size_t, std::size_t> period_histogram(const CycleStructure& cs) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& c : cs) ++h[c.period()];
  return h;
}

FamilyCycleCounts family_cycle_counts(std::size_t ell) {
  if (ell != 1 && ell != 3 && ell != 9) throw BoundExceeded("family_cycle_counts: ell must be 1, 3 or 9");
  const LfsrFamily fam = lfsr_family(ell);
  FamilyCycleCounts out{ell, cycle_structure(lfsr_of(fam.p0)), cycle_structure(lfsr_of(fam.p1)), std::nullopt};
  if (static_cast<std::size_t>(fam.p2.degree()) <= exhaustive_bound()) out.p2 = cycle_structure(lfsr_of(fam.p2));
  return out;
}

}  // namespace fsrkit
