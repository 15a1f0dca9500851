#include "fsrkit/reduction.hpp"

#include <algorithm>
#include <stdexcept>

#include "fsrkit/error.hpp"

namespace fsrkit {

namespace {

using Word = std::vector<NodeId>;

std::uint64_t mask_of(std::size_t n) { return BitVec::mask(n); }

/// p2 state map on 4l bits, p0 state map on 2l bits: s_0 + s_{n/2} shifted in.
std::uint64_t half_tap_step(std::uint64_t s, std::size_t n) {
  const std::uint64_t fb = (s ^ (s >> (n / 2))) & 1u;
  return (s >> 1) | (fb << (n - 1));
}

Word half_tap_step(CircuitBuilder& b, const Word& w) {
  const std::size_t n = w.size();
  Word out(w.begin() + 1, w.end());
  out.push_back(b.xor_gate(w[0], w[n / 2]));
  return out;
}

Word conj_word(CircuitBuilder& b, const Word& w) {
  Word out = w;
  out[0] = b.not_gate(w[0]);
  return out;
}

Word top_bits(const Word& w, std::size_t r) { return Word(w.end() - static_cast<std::ptrdiff_t>(r), w.end()); }

Word min_tree(CircuitBuilder& b, std::vector<Word> ws) {
  while (ws.size() > 1) {
    std::vector<Word> next;
    for (std::size_t i = 0; i + 1 < ws.size(); i += 2) next.push_back(b.min_word(ws[i], ws[i + 1]));
    if (ws.size() % 2) next.push_back(ws.back());
    ws = std::move(next);
  }
  return ws.front();
}

NodeId embed1(CircuitBuilder& b, const Circuit& f, const Word& in) { return b.embed(f, in).at(0); }

void require_f0(const Circuit& f0) {
  if (f0.arity() == 0) throw std::invalid_argument("f0 needs at least one input");
  if (f0.outputs().size() != 1) throw std::invalid_argument("f0 must have a single sink");
}

struct Alg1Chain {
  std::vector<Word> s;  // s[0..6l]
  Word smin;            // min over s[1..6l]
  NodeId any_f0;
  NodeId all_c;
};

Alg1Chain alg1_chain(CircuitBuilder& b, Word s0, const Circuit& f0, std::size_t ell) {
  const std::size_t r = f0.arity();
  Alg1Chain ch;
  ch.s.push_back(std::move(s0));
  for (std::size_t i = 1; i <= 6 * ell; ++i) ch.s.push_back(half_tap_step(b, ch.s.back()));
  std::vector<NodeId> a, c;
  for (std::size_t i = 1; i <= 6 * ell; ++i) {
    a.push_back(embed1(b, f0, top_bits(ch.s[i], r)));
    const Word w = conj_word(b, ch.s[i]);
    std::vector<Word> pw;
    pw.push_back(half_tap_step(b, w));
    for (std::size_t j = 2; j <= 6 * ell; ++j) pw.push_back(half_tap_step(b, pw.back()));
    const NodeId eq1 = b.equal(pw[3 * ell - 1], w);
    const Word m = min_tree(b, pw);
    const NodeId eq2 = b.equal(pw[6 * ell - 1], m);
    c.push_back(b.or_gate(eq1, b.not_gate(eq2)));
  }
  ch.smin = min_tree(b, std::vector<Word>(ch.s.begin() + 1, ch.s.end()));
  ch.any_f0 = b.or_any(a);
  ch.all_c = b.and_all(c);
  return ch;
}

/// f3 of the irreducibility reduction on x = (x_1, ..., x_{4l-1}).
NodeId build_alg1_f3(CircuitBuilder& b, const Word& x, const Circuit& f0, std::size_t ell) {
  Word u0{b.const0()}, v0{b.const1()};
  u0.insert(u0.end(), x.begin(), x.end());
  v0.insert(v0.end(), x.begin(), x.end());
  const Alg1Chain u = alg1_chain(b, u0, f0, ell);
  const Alg1Chain v = alg1_chain(b, v0, f0, ell);

  auto q = [&](const Alg1Chain& ch) {
    const Word cm = conj_word(b, ch.smin);
    Word p = cm;
    for (std::size_t j = 0; j < 3 * ell; ++j) p = half_tap_step(b, p);
    const std::vector<NodeId> parts{ch.all_c, b.equal(ch.s[ell], ch.smin), b.equal(p, cm)};
    return b.and_all(parts);
  };
  const NodeId qu = q(u);
  const NodeId qv = q(v);

  const NodeId u_rep = b.equal(u.s[0], u.s[3 * ell]);
  const NodeId v_rep = b.equal(v.s[0], v.s[3 * ell]);
  const NodeId u_min = b.equal(u.s[6 * ell], u.smin);
  const NodeId v_min = b.equal(v.s[6 * ell], v.smin);

  const std::vector<NodeId> br1{u_rep, u_min, u.any_f0};
  const std::vector<NodeId> br2{v_rep, v_min, v.any_f0};
  const std::vector<NodeId> tail{u_min, v_min, qu, qv};
  const std::vector<NodeId> br3{b.not_gate(u_rep), b.not_gate(v_rep), b.or_any(tail)};
  const std::vector<NodeId> branches{b.and_all(br1), b.and_all(br2), b.and_all(br3)};
  return b.or_any(branches);
}

/// f3 of the indecomposability reduction on x = (x_1, ..., x_{2l}).
NodeId build_alg2_f3(CircuitBuilder& b, const Word& x, const Circuit& f2, std::size_t ell) {
  const std::size_t r = f2.arity();
  auto xj = [&](std::size_t j) { return x[j - 1]; };
  Word u0{b.xor_gate(b.xor_gate(xj(2 * ell), xj(ell)), xj(1))};
  for (std::size_t j = 1; j < 2 * ell; ++j) u0.push_back(b.xor_gate(xj(j), xj(j + 1)));
  std::vector<Word> u{u0};
  std::vector<NodeId> a;
  for (std::size_t i = 1; i <= 3 * ell; ++i) {
    u.push_back(half_tap_step(b, u.back()));
    a.push_back(embed1(b, f2, top_bits(u.back(), r)));
  }
  const Word m = min_tree(b, std::vector<Word>(u.begin() + 1, u.end()));
  return b.and_gate(b.equal(u[3 * ell], m), b.or_any(a));
}

double power(double base, int e) {
  double out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

EllChoice ell_for(std::size_t r) {
  if (r == 0) throw std::invalid_argument("r must be positive");
  EllChoice e{0, 1};
  while (2 * e.ell < r) {
    ++e.k;
    e.ell *= 3;
  }
  return e;
}

Circuit f2_transform(const Circuit& f0) {
  require_f0(f0);
  const std::size_t r = f0.arity();
  CircuitBuilder b(r);
  const Word xs = b.inputs();
  const NodeId any = b.or_any(xs);
  const NodeId all = b.and_all(xs);
  const NodeId f0x = embed1(b, f0, xs);
  const Word zeros(r, b.const0());
  const NodeId f0z = embed1(b, f0, zeros);
  return std::move(b).finish(b.and_gate(any, b.or_gate(f0x, b.and_gate(all, f0z))));
}

TruthTable f2_table(const TruthTable& f0) {
  const std::size_t r = f0.arity();
  TruthTable t(r);
  const std::uint64_t ones = mask_of(r);
  for (std::uint64_t x = 1; x < t.size(); ++x) t.set(x, x == ones ? (f0.get(ones) || f0.get(0)) : f0.get(x));
  return t;
}

bool alg1_f3_semantic(const TruthTable& f0, std::size_t ell, std::uint64_t x) {
  const std::size_t n = 4 * ell;
  const std::size_t r = f0.arity();
  if (r > 2 * ell) throw std::invalid_argument("f0 arity exceeds 2l");
  auto L = [n](std::uint64_t s) { return half_tap_step(s, n); };
  auto Lpow = [&](std::uint64_t s, std::size_t t) {
    for (std::size_t i = 0; i < t; ++i) s = L(s);
    return s;
  };

  struct Chain {
    std::vector<std::uint64_t> s;
    std::uint64_t smin = ~std::uint64_t{0};
    bool any_f0 = false;
    bool all_c = true;
  };
  auto chain = [&](std::uint64_t s0) {
    Chain ch;
    ch.s.push_back(s0);
    for (std::size_t i = 1; i <= 6 * ell; ++i) {
      const std::uint64_t si = L(ch.s.back());
      ch.s.push_back(si);
      ch.smin = std::min(ch.smin, si);
      ch.any_f0 = ch.any_f0 || f0.get(si >> (n - r));
      const std::uint64_t w = si ^ 1u;
      std::uint64_t p = w, m = ~std::uint64_t{0}, p3 = 0;
      for (std::size_t j = 1; j <= 6 * ell; ++j) {
        p = L(p);
        m = std::min(m, p);
        if (j == 3 * ell) p3 = p;
      }
      ch.all_c = ch.all_c && (p3 == w || p != m);
    }
    return ch;
  };
  const Chain u = chain((x << 1) & mask_of(n));
  const Chain v = chain(((x << 1) | 1u) & mask_of(n));
  auto q = [&](const Chain& ch) {
    const std::uint64_t cm = ch.smin ^ 1u;
    return ch.all_c && ch.s[ell] == ch.smin && Lpow(cm, 3 * ell) == cm;
  };
  const bool u_rep = u.s[0] == u.s[3 * ell];
  const bool v_rep = v.s[0] == v.s[3 * ell];
  const bool u_min = u.s[6 * ell] == u.smin;
  const bool v_min = v.s[6 * ell] == v.smin;
  if (u_rep && u_min && u.any_f0) return true;
  if (v_rep && v_min && v.any_f0) return true;
  return !u_rep && !v_rep && (u_min || v_min || q(u) || q(v));
}

bool alg2_f3_semantic(const TruthTable& f2, std::size_t ell, std::uint64_t x) {
  const std::size_t n = 2 * ell;
  const std::size_t r = f2.arity();
  if (r > n) throw std::invalid_argument("f2 arity exceeds 2l");
  auto xj = [x](std::size_t j) { return (x >> (j - 1)) & 1u; };
  std::uint64_t u = xj(n) ^ xj(ell) ^ xj(1);
  for (std::size_t j = 1; j < n; ++j) u |= (xj(j) ^ xj(j + 1)) << j;
  std::uint64_t m = ~std::uint64_t{0};
  bool any = false;
  for (std::size_t i = 1; i <= 3 * ell; ++i) {
    u = half_tap_step(u, n);
    m = std::min(m, u);
    any = any || f2.get(u >> (n - r));
  }
  return u == m && any;
}

TruthTable alg1_f3_table(const TruthTable& f0, std::size_t ell) {
  const std::size_t n = 4 * ell - 1;
  require_within_bound(n, "alg1_f3_table");
  TruthTable t(n);
  const std::int64_t total = static_cast<std::int64_t>(t.size());
  std::vector<std::uint8_t> out(t.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t x = 0; x < total; ++x) out[x] = alg1_f3_semantic(f0, ell, static_cast<std::uint64_t>(x));
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, out[x]);
  return t;
}

TruthTable alg2_f3_table(const TruthTable& f2, std::size_t ell) {
  const std::size_t n = 2 * ell;
  require_within_bound(n, "alg2_f3_table");
  TruthTable t(n);
  for (std::uint64_t x = 0; x < t.size(); ++x) t.set(x, alg2_f3_semantic(f2, ell, x));
  return t;
}

ReductionInstance build_irreducibility_fsr(const Circuit& f0) {
  require_f0(f0);
  const EllChoice e = ell_for(f0.arity());
  const std::size_t ell = e.ell;
  const std::size_t n = 4 * ell;

  CircuitBuilder b3(n - 1);
  const NodeId s3 = build_alg1_f3(b3, b3.inputs(), f0, ell);
  Circuit f3 = std::move(b3).finish(s3);

  CircuitBuilder b1(n);
  const Word all = b1.inputs();
  const Word x(all.begin() + 1, all.end());
  const NodeId t = build_alg1_f3(b1, x, f0, ell);
  const NodeId s1 = b1.xor_gate(b1.xor_gate(all[0], all[2 * ell]), t);
  Circuit f1 = std::move(b1).finish(s1);

  std::optional<TruthTable> sem;
  if (n - 1 <= exhaustive_bound()) sem = alg1_f3_table(truth_table(f0), ell);

  const double bound = 37908.0 * power(static_cast<double>(f0.size()), 4);
  SizeReport size{f0.size(), f3.size(), f1.size(), bound, static_cast<double>(f1.size()) < bound};
  Fsr fsr(f1);
  return ReductionInstance{ReductionKind::Irreducibility, f0.arity(), e.k, ell, std::move(f3), std::move(f1),
                           std::move(fsr), std::move(sem), size};
}

ReductionInstance build_indecomposability_fsr(const Circuit& f0) {
  require_f0(f0);
  const EllChoice e = ell_for(f0.arity());
  const std::size_t ell = e.ell;
  const std::size_t n = 2 * ell + 1;
  const Circuit f2 = f2_transform(f0);

  CircuitBuilder b3(n - 1);
  const NodeId s3 = build_alg2_f3(b3, b3.inputs(), f2, ell);
  Circuit f3 = std::move(b3).finish(s3);

  CircuitBuilder b1(n);
  const Word all = b1.inputs();
  const Word x(all.begin() + 1, all.end());
  const NodeId t = build_alg2_f3(b1, x, f2, ell);
  NodeId acc = b1.xor_gate(t, all[0]);
  acc = b1.xor_gate(acc, all[1]);
  acc = b1.xor_gate(acc, all[ell]);
  acc = b1.xor_gate(acc, all[ell + 1]);
  acc = b1.xor_gate(acc, all[2 * ell]);
  Circuit f1 = std::move(b1).finish(acc);

  std::optional<TruthTable> sem;
  if (n - 1 <= exhaustive_bound()) sem = alg2_f3_table(f2_table(truth_table(f0)), ell);

  const double bound = 264.0 * power(static_cast<double>(f0.size()), 3);
  SizeReport size{f0.size(), f3.size(), f1.size(), bound, static_cast<double>(f1.size()) <= bound};
  Fsr fsr(f1);
  return ReductionInstance{ReductionKind::Indecomposability, f0.arity(), e.k, ell, std::move(f3), std::move(f1),
                           std::move(fsr), std::move(sem), size};
}

void require_oracle_ell(std::size_t ell) {
  if (ell != 1 && ell != 3) throw BoundExceeded("cycle oracles are exhaustive and support l in {1, 3} only");
}

Alg1Oracle::Alg1Oracle(std::size_t ell) : ell_(ell), n_(4 * ell), family_(lfsr_family(ell)) {
  require_oracle_ell(ell);
  p2_ = state_cycles(lfsr_of(family_.p2));
  const std::size_t nc = p2_.cycles.size();
  const std::uint64_t states = std::uint64_t{1} << n_;

  // A cycle is barred from D when some state's conjugate is the least state of a 6l-cycle.
  std::vector<bool> barred(nc, false);
  for (std::uint64_t v = 0; v < states; ++v) {
    const std::size_t ch = p2_.cycle_of[v ^ 1u];
    if (in_c6(ch) && p2_.min_state[ch] == (v ^ 1u)) barred[p2_.cycle_of[v]] = true;
  }
  in_d_.assign(nc, false);
  rho_.assign(nc, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::uint64_t m = p2_.min_state[c];
    in_d_[c] = !in_c6(p2_.cycle_of[m ^ 1u]) && !barred[c];
    std::uint64_t s = m;
    if (in_d_[c])
      for (std::size_t i = 0; i < 5 * ell_; ++i) s = half_tap_step(s, n_);
    rho_[c] = s;
  }
}

bool Alg1Oracle::lambda(std::uint64_t v) const { return v == rho_[cycle_of(v)] && in_c6(cycle_of(v ^ 1u)); }

std::vector<std::string> Alg1Oracle::check_rho_statements() const {
  std::vector<std::string> fails;
  const std::size_t nc = p2_.cycles.size();
  const std::uint64_t states = std::uint64_t{1} << n_;
  for (std::uint64_t v = 0; v < states; ++v) {
    if (!in_c6(cycle_of(v)) && !in_c6(cycle_of(v ^ 1u))) {
      fails.push_back("conjugate of p0 state " + BitVec(n_, v).to_string() + " is not on a 6l-cycle");
      break;
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (in_d_[c] && !in_c6(c)) fails.push_back("D contains p0 cycle " + p2_.cycles[c].to_string());
    if (in_d_[c]) {
      const std::size_t e = cycle_of(rho_[c] ^ 1u);
      if (!in_c6(e) || in_d_[e]) fails.push_back("conj rho of " + p2_.cycles[c].to_string() + " leaves C6 \\ D");
    }
    const std::uint64_t w = rho_[c] ^ 1u;
    if (rho_[cycle_of(w)] == w && c != cycle_of(0) && c != cycle_of(1))
      fails.push_back("conj rho of " + p2_.cycles[c].to_string() + " is a representative");
  }
  return fails;
}

TruthTable Alg1Oracle::f3_reference(const TruthTable& f0) const {
  const std::size_t r = f0.arity();
  if (r > 2 * ell_) throw std::invalid_argument("f0 arity exceeds 2l");
  const std::size_t nc = p2_.cycles.size();
  const std::uint64_t states = std::uint64_t{1} << n_;
  std::vector<bool> hit(nc, false);
  for (std::uint64_t u = 0; u < states; ++u)
    if (f0.get(u >> (n_ - r))) hit[cycle_of(u)] = true;
  TruthTable t(n_ - 1);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::uint64_t v = rho_[c];
    const bool on = in_c6(c) ? in_c6(cycle_of(v ^ 1u)) : hit[c];
    if (on) t.set(v >> 1, true);
  }
  return t;
}

Alg2Maps::Alg2Maps(std::size_t ell) : ell_(ell), width_(2 * ell + 1), family_(lfsr_family(ell)) {
  require_oracle_ell(ell);
  p1_ = state_cycles(lfsr_of(family_.p1));
}

std::uint64_t Alg2Maps::pi(std::uint64_t v) const { return (v ^ (v >> 1)) & mask_of(2 * ell_); }

bool Alg2Maps::chi(std::uint64_t v) const { return ((v ^ (v >> ell_) ^ (v >> (2 * ell_))) & 1u) != 0; }

bool Alg2Maps::lambda(std::uint64_t v) const {
  if (chi(v)) return false;
  const std::uint64_t w = pi(v);
  std::uint64_t s = w, m = ~std::uint64_t{0};
  for (std::size_t i = 1; i <= 3 * ell_; ++i) {
    s = half_tap_step(s, 2 * ell_);
    m = std::min(m, s);
  }
  return w == m;
}

TruthTable Alg2Maps::f3_reference(const TruthTable& f2) const {
  const std::size_t n = 2 * ell_;
  const std::size_t r = f2.arity();
  if (r > n) throw std::invalid_argument("f2 arity exceeds 2l");
  std::vector<bool> hit(p1_.cycles.size(), false);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << width_); ++v)
    if (f2.get(pi(v) >> (n - r))) hit[p1_.cycle_of[v]] = true;
  TruthTable t(n);
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    const std::uint64_t b = ((x >> (n - 1)) ^ (x >> (ell_ - 1))) & 1u;
    const std::uint64_t y = b | (x << 1);
    t.set(x, lambda(y) && hit[p1_.cycle_of[y]]);
  }
  return t;
}

std::vector<std::string> Alg2Maps::check_conjugate_properties() const {
  std::vector<std::string> fails;
  const std::size_t n = 2 * ell_;
  const std::uint64_t states = std::uint64_t{1} << width_;
  const std::uint64_t full = mask_of(width_);
  const GF2Poly p1 = family_.p1;
  const CycleStructure p0 = cycle_structure(lfsr_of(family_.p0));
  auto name = [&](std::uint64_t v) { return BitVec(width_, v).to_string(); };

  std::vector<std::uint32_t> preimages(std::uint64_t{1} << n, 0);
  bool ok[5] = {true, true, true, true, true};
  for (std::uint64_t v = 0; v < states; ++v) {
    ++preimages[pi(v)];
    const std::uint64_t hat = v ^ 1u, bar = v ^ full;
    if (ok[0] && (chi(hat) == chi(v) || chi(bar) == chi(v) || pi(hat) != (pi(v) ^ 1u) ||
                  half_tap_step(pi(v), n) != pi(lfsr_step(p1, v)))) {
      fails.push_back("(i) fails at " + name(v));
      ok[0] = false;
    }
    const Cycle& c = p1_.cycles[p1_.cycle_of[v]];
    const bool on_p0 = p0.contains(c);
    if (ok[2] && (on_p0 ? chi(v) : (!p0.contains(c.complement()) || !chi(v)))) {
      fails.push_back("(iii) fails at " + name(v));
      ok[2] = false;
    }
    if (ok[3] && on_p0 && !p0.contains(p1_.cycles[p1_.cycle_of[hat]].complement())) {
      fails.push_back("(iv) fails at " + name(v));
      ok[3] = false;
    }
    const std::uint64_t lhs = lfsr_step(p1, v) >> 1;
    const std::uint64_t rhs = half_tap_step(v >> 1, n) ^ (static_cast<std::uint64_t>(chi(v)) << (n - 1));
    if (ok[4] && lhs != rhs) {
      fails.push_back("(v) fails at " + name(v));
      ok[4] = false;
    }
  }
  for (std::uint64_t w = 0; w < preimages.size() && ok[1]; ++w) {
    std::uint64_t u = 0, acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc ^= (w >> i) & 1u;
      u |= acc << (i + 1);
    }
    if (preimages[w] != 2 || pi(u) != w || pi(u ^ full) != w) {
      fails.push_back("(ii) fails at " + BitVec(n, w).to_string());
      ok[1] = false;
    }
  }
  return fails;
}

}  // namespace fsrkit
