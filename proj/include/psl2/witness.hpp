#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psl2/common.hpp"
#include "psl2/field.hpp"
#include "psl2/genseq.hpp"
#include "psl2/group.hpp"
#include "psl2/subgroup.hpp"

namespace psl2 {

/// 2x2 matrix over F_p kept exactly as written, with no sign
/// canonicalization. The explicit constructions below prove identities like
/// AW = -WA that are invisible after projection to PSL(2,p).
struct Mat {
  uint32_t a = 1, b = 0, c = 0, d = 1;

  bool operator==(const Mat& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }
};

inline Mat mat_mul(const Mat& x, const Mat& y, const Prime& P) {
  Mat m;
  m.a = P.reduce(int64_t(x.a) * y.a + int64_t(x.b) * y.c);
  m.b = P.reduce(int64_t(x.a) * y.b + int64_t(x.b) * y.d);
  m.c = P.reduce(int64_t(x.c) * y.a + int64_t(x.d) * y.c);
  m.d = P.reduce(int64_t(x.c) * y.b + int64_t(x.d) * y.d);
  return m;
}

inline Mat mat_neg(const Mat& x, const Prime& P) {
  return Mat{P.neg(x.a), P.neg(x.b), P.neg(x.c), P.neg(x.d)};
}

inline uint32_t mat_det(const Mat& x, const Prime& P) {
  return P.sub(P.mul(x.a, x.d), P.mul(x.b, x.c));
}

inline uint32_t mat_trace(const Mat& x, const Prime& P) { return P.add(x.a, x.d); }

inline Mat mat_inverse(const Mat& x, const Prime& P) {
  if (mat_det(x, P) != 1)
    throw DomainError("matrix inverse requires determinant 1");
  return Mat{x.d, P.neg(x.b), P.neg(x.c), x.a};
}

inline Mat mat_pow(Mat x, uint64_t e, const Prime& P) {
  Mat acc;
  while (e) {
    if (e & 1) acc = mat_mul(acc, x, P);
    x = mat_mul(x, x, P);
    e >>= 1;
  }
  return acc;
}

/// Projection SL(2,p) -> PSL(2,p) onto the canonical-sign representative.
inline Elt project(const Mat& x, const Prime& P) {
  return canonicalize(x.a, x.b, x.c, x.d, P);
}

/// Ordered list of named checks; the first failure is kept for reporting.
struct VerificationRecord {
  struct Item {
    std::string claim;
    bool ok = false;
  };
  std::vector<Item> items;
  bool passed = true;
  std::string first_failure;

  void record(std::string claim, bool ok) {
    if (!ok && passed) {
      passed = false;
      first_failure = claim;
    }
    items.push_back({std::move(claim), ok});
  }

  bool claim_ok(const std::string& claim) const {
    for (const Item& it : items)
      if (it.claim == claim) return it.ok;
    return false;
  }
};

/// The involution-heavy triple (wa, wb, wc) together with the element w that
/// cannot replace any of its entries. Lifts are kept so the matrix-level
/// identities stay checkable.
struct ReplacementWitness {
  Prime P;
  uint32_t i_unit = 0;  // fixed unit of multiplicative order 4
  uint32_t root2 = 0;   // fixed square root of 2
  uint32_t r = 0, s = 0, t = 0, u = 0;
  Mat W, A, B, C;
  Elt w, wa, wb, wc;
  uint32_t trace_wcwa = 0, trace_wcwb = 0;  // each lands on a root of 2
  VerificationRecord verdict;               // build-time arithmetic checks
};

/// Build the witness for p = 1 mod 8. Root policy: i_unit and root2 are the
/// smaller residues; s comes from the branch s^2 = -2/9 + (4/9)*i*root2 with
/// r = (i + 1/root2)s, signed so tr(WCWA) lands on +root2; u comes from the
/// other branch with t = (i - 1/root2)u, signed so tr(AB) = 2/3. Exactly one
/// sign works in each case, so the output is deterministic.
inline ReplacementWitness build_replacement_witness(const Prime& P) {
  if (P.mod8 != 1)
    throw DomainError("the replacement witness needs p = 1 mod 8, got p = " +
                      std::to_string(P.p));
  // The smallest prime = 1 mod 8 is 17, so p >= 17 holds automatically.
  ReplacementWitness wit;
  wit.P = P;
  wit.i_unit = sqrt_mod(P.p - 1, P)->first;
  wit.root2 = sqrt_mod(2, P)->first;
  const uint32_t i = wit.i_unit, q2 = wit.root2;
  const uint32_t inv3 = P.inv(3), invq2 = P.inv(q2);

  uint32_t s = P.mul(P.add(P.mul(2, i), q2), inv3);
  uint32_t r = P.mul(P.add(i, invq2), s);
  if (P.neg(P.add(s, P.mul(2, P.mul(i, r)))) != q2) {
    s = P.neg(s);
    r = P.neg(r);
  }

  uint32_t u = P.mul(P.sub(P.mul(2, i), q2), inv3);
  uint32_t t = P.mul(P.sub(i, invq2), u);
  if (P.mul(2, P.add(P.mul(r, t), P.mul(s, u))) != P.mul(2, inv3)) {
    u = P.neg(u);
    t = P.neg(t);
  }

  wit.r = r;
  wit.s = s;
  wit.t = t;
  wit.u = u;
  wit.W = Mat{0, P.neg(1), 1, 0};
  wit.A = Mat{r, s, s, P.neg(r)};
  wit.B = Mat{t, u, u, P.neg(t)};
  wit.C = Mat{P.neg(i), 0, P.neg(1), i};
  wit.w = project(wit.W, P);
  wit.wa = project(mat_mul(wit.W, wit.A, P), P);
  wit.wb = project(mat_mul(wit.W, wit.B, P), P);
  wit.wc = project(mat_mul(wit.W, wit.C, P), P);

  VerificationRecord& v = wit.verdict;
  v.record("i has multiplicative order 4", multiplicative_order(i, P) == 4);
  v.record("root2 squares to 2", P.mul(q2, q2) == 2);
  v.record("A, B, C, W have determinant 1",
           mat_det(wit.A, P) == 1 && mat_det(wit.B, P) == 1 &&
               mat_det(wit.C, P) == 1 && mat_det(wit.W, P) == 1);
  v.record("r^2 + s^2 = -1", P.add(P.mul(r, r), P.mul(s, s)) == P.p - 1);
  v.record("t^2 + u^2 = -1", P.add(P.mul(t, t), P.mul(u, u)) == P.p - 1);
  uint32_t s2ir = P.add(s, P.mul(2, P.mul(i, r)));
  uint32_t u2it = P.add(u, P.mul(2, P.mul(i, t)));
  v.record("(s + 2ir)^2 = 2", P.mul(s2ir, s2ir) == 2);
  v.record("(u + 2it)^2 = 2", P.mul(u2it, u2it) == 2);

  v.record("AW = -WA", mat_mul(wit.A, wit.W, P) == mat_neg(mat_mul(wit.W, wit.A, P), P));
  v.record("BW = -WB", mat_mul(wit.B, wit.W, P) == mat_neg(mat_mul(wit.W, wit.B, P), P));

  Mat wc_m = mat_mul(wit.W, wit.C, P);
  Mat wa_m = mat_mul(wit.W, wit.A, P);
  Mat wb_m = mat_mul(wit.W, wit.B, P);
  wit.trace_wcwa = mat_trace(mat_mul(wc_m, wa_m, P), P);
  wit.trace_wcwb = mat_trace(mat_mul(wc_m, wb_m, P), P);
  v.record("tr(WCWA) = -s - 2ir", wit.trace_wcwa == P.neg(s2ir));
  v.record("tr(WCWA) is the chosen root of 2", wit.trace_wcwa == q2);
  v.record("tr(WCWB) = -u - 2it", wit.trace_wcwb == P.neg(u2it));
  v.record("tr(WCWB) squares to 2", P.mul(wit.trace_wcwb, wit.trace_wcwb) == 2);

  auto commutator_trace = [&](const Mat& x, const Mat& y) {
    Mat m = mat_mul(mat_mul(x, y, P), mat_mul(mat_inverse(x, P), mat_inverse(y, P), P), P);
    return mat_trace(m, P);
  };
  uint32_t closed = P.sub(P.add(P.mul(2, P.mul(s, s)), P.mul(4, P.mul(i, P.mul(s, r)))),
                          P.mul(3, P.mul(r, r)));
  uint32_t comm_ac = commutator_trace(wa_m, wc_m);
  v.record("tr([WA,WC]) = 2s^2 + 4isr - 3r^2", comm_ac == closed);
  v.record("tr([WA,WC]) = 1", comm_ac == 1);
  v.record("tr([WB,WC]) = 1", commutator_trace(wb_m, wc_m) == 1);

  Mat ab = mat_mul(wit.A, wit.B, P);
  v.record("tr(AB) = 2(rt + su)",
           mat_trace(ab, P) == P.mul(2, P.add(P.mul(r, t), P.mul(s, u))));
  v.record("tr(AB) = 2/3", mat_trace(ab, P) == P.mul(2, inv3));

  Mat cw = mat_mul(wit.C, wit.W, P);
  v.record("w(cw)w^-1 = (cw)^-1",
           mat_mul(mat_mul(wit.W, cw, P), mat_inverse(wit.W, P), P) == mat_inverse(cw, P));

  v.record("w, wa, wb have order 2",
           element_order(wit.w, P) == 2 && element_order(wit.wa, P) == 2 &&
               element_order(wit.wb, P) == 2);
  v.record("wc has order 3", element_order(wit.wc, P) == 3);

  if (!v.passed)
    throw InternalError("witness construction violated its invariants: " + v.first_failure);
  return wit;
}

/// Group-level verification: both mixed pairs close into S4, the third pair
/// stays dihedral and proper, the triple generates irredundantly, and w fits
/// in no position of it.
inline VerificationRecord verify_replacement_witness(const GroupContext& ctx,
                                                     const ReplacementWitness& wit) {
  if (ctx.p() != wit.P.p)
    throw DomainError("witness and context use different primes");
  const Prime& P = ctx.prime();
  VerificationRecord v;

  Subgroup hac = closure(ctx, {wit.wa, wit.wc});
  Subgroup hbc = closure(ctx, {wit.wb, wit.wc});
  Subgroup hab = closure(ctx, {wit.wa, wit.wb});
  v.record("<wa,wc> is isomorphic to S4", classify_subgroup(ctx, hac) == DicksonType::s4());
  v.record("<wb,wc> is isomorphic to S4", classify_subgroup(ctx, hbc) == DicksonType::s4());
  v.record("<wa,wb> is dihedral",
           classify_subgroup(ctx, hab).tag == DicksonType::Tag::Dihedral);
  v.record("<wa,wb> is proper", hab.order < ctx.order());
  v.record("the order of wa*wb exceeds 4", element_order(mul(wit.wa, wit.wb, P), P) > 4);

  uint32_t iw = ctx.index_of(wit.w);
  v.record("w lies in <wa,wc> and <wb,wc>", hac.contains(iw) && hbc.contains(iw));

  GenSequence seq{{ctx.index_of(wit.wa), ctx.index_of(wit.wb), ctx.index_of(wit.wc)}, {}, {}};
  bool gen_ok = generates(ctx, seq);
  v.record("(wa,wb,wc) generates", gen_ok);
  v.record("(wa,wb,wc) is irredundant", is_irredundant(ctx, seq));
  v.record("w cannot replace any entry",
           gen_ok && !replacement_holds_for(ctx, seq, iw).has_value());
  return v;
}

/// The triple of order-(p-1)/2 elements built from a primitive root.
struct EqualOrderTriple {
  Prime P;
  uint32_t x = 0;  // primitive root
  uint32_t y = 0;  // -x + 2/x - 1/x^3
  Mat A, B, C;
  Elt a, b, c;
};

inline EqualOrderTriple build_equal_order_triple(const Prime& P,
                                                 std::optional<uint32_t> x = {}) {
  if (P.p < 7) throw DomainError("the equal-order triple needs p >= 7");
  uint32_t xv = x ? *x % P.p : primitive_root(P);
  if (xv == 0 || multiplicative_order(xv, P) != P.p - 1)
    throw DomainError("x = " + std::to_string(xv) + " is not a primitive root mod " +
                      std::to_string(P.p));
  EqualOrderTriple t;
  t.P = P;
  t.x = xv;
  uint32_t xi = P.inv(xv);
  t.y = P.sub(P.sub(P.mul(2, xi), xv), P.pow(xi, 3));
  t.A = Mat{xv, 0, 0, xi};
  t.B = Mat{xi, 0, xv, xv};
  t.C = Mat{xi, t.y, 0, xv};
  t.a = project(t.A, P);
  t.b = project(t.B, P);
  t.c = project(t.C, P);
  return t;
}

/// Closed form for (BC)^n in the equal-order construction.
inline Mat bc_power_closed_form(const Prime& P, uint32_t x, uint64_t n) {
  uint32_t nn = static_cast<uint32_t>(n % P.p);
  uint32_t x2 = P.mul(x, x);
  uint32_t ix2 = P.inv(x2), ix4 = P.mul(ix2, ix2);
  Mat m;
  m.a = P.mul(P.sub(nn, P.mul(P.sub(nn, 1), x2)), ix2);
  uint32_t poly = P.add(P.sub(P.mul(x2, x2), P.mul(2, x2)), 1);  // x^4 - 2x^2 + 1
  m.b = P.mul(P.neg(nn), P.mul(poly, ix4));
  m.c = nn;
  m.d = P.mul(P.add(P.neg(nn), P.mul(P.add(nn, 1), x2)), ix2);
  return m;
}

/// Verification of the equal-order triple: equal orders, trace-2 products of
/// order p, the power identities, irredundant generation, normality of <bc>,
/// and the power-replacement route putting every divisor of (p-1)/2 into a
/// length-3 sequence.
inline VerificationRecord verify_equal_order_triple(const GroupContext& ctx,
                                                    const EqualOrderTriple& t) {
  if (ctx.p() != t.P.p)
    throw DomainError("triple and context use different primes");
  const Prime& P = ctx.prime();
  VerificationRecord v;
  uint32_t half = (P.p - 1) / 2;

  uint32_t xi = P.inv(t.x);
  v.record("y matches -x + 2/x - 1/x^3",
           t.y == P.sub(P.sub(P.mul(2, xi), t.x), P.pow(xi, 3)));
  v.record("A, B, C have determinant 1",
           mat_det(t.A, P) == 1 && mat_det(t.B, P) == 1 && mat_det(t.C, P) == 1);
  v.record("a, b, c have order (p-1)/2",
           element_order(t.a, P) == half && element_order(t.b, P) == half &&
               element_order(t.c, P) == half);

  Mat ab = mat_mul(t.A, t.B, P), ac = mat_mul(t.A, t.C, P), bc = mat_mul(t.B, t.C, P);
  v.record("AB, AC, BC have trace 2",
           mat_trace(ab, P) == 2 && mat_trace(ac, P) == 2 && mat_trace(bc, P) == 2);
  v.record("ab, ac, bc have order p",
           element_order(project(ab, P), P) == P.p &&
               element_order(project(ac, P), P) == P.p &&
               element_order(project(bc, P), P) == P.p);

  bool closed_ok = true;
  for (uint64_t n = 1; n <= P.p && closed_ok; ++n)
    closed_ok = mat_pow(bc, n, P) == bc_power_closed_form(P, t.x, n);
  v.record("(BC)^n matches the closed form for n = 1..p", closed_ok);
  v.record("(BC)^(x^2) = CB",
           mat_pow(bc, uint64_t(t.x) * t.x, P) == mat_mul(t.C, t.B, P));

  GenSequence seq{{ctx.index_of(t.a), ctx.index_of(t.b), ctx.index_of(t.c)}, {}, {}};
  bool gen_ok = generates(ctx, seq);
  v.record("(a,b,c) generates", gen_ok);
  v.record("(a,b,c) is irredundant", is_irredundant(ctx, seq));

  Subgroup hbc = closure(ctx, {t.b, t.c});
  v.record("<b,c> is proper", hbc.order < ctx.order());
  Elt bce = project(bc, P);
  Subgroup nbc = closure(ctx, {bce});
  v.record("<bc> is normal in <b,c>",
           nbc.contains(ctx.index_of(conjugate(bce, t.b, P))) &&
               nbc.contains(ctx.index_of(conjugate(bce, t.c, P))));

  bool powers_ok = gen_ok;
  for (uint32_t d : divisors(half)) {
    if (d == 1 || !powers_ok) continue;
    GenSequence pw{{ctx.index_of(elt_pow(t.a, half / d, P)), seq.elements[1], seq.elements[2]},
                   {},
                   {}};
    powers_ok = generates(ctx, pw) && is_irredundant(ctx, pw);
  }
  v.record("every divisor > 1 of (p-1)/2 powers into an irredundant generating triple",
           powers_ok);
  return v;
}

}  // namespace psl2
