#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "psl2/common.hpp"
#include "psl2/field.hpp"

namespace psl2 {

/// Element of PSL(2,p): a determinant-1 matrix [[a,b],[c,d]] stored in its
/// canonical sign. Of the pair {M, -M} we keep the one whose first nonzero
/// entry in row-major order lies in [1, (p-1)/2].
struct Elt {
  uint16_t a = 1, b = 0, c = 0, d = 1;

  uint64_t pack() const {
    return (uint64_t(a) << 48) | (uint64_t(b) << 32) | (uint64_t(c) << 16) | uint64_t(d);
  }
  static Elt unpack(uint64_t k) {
    Elt e;
    e.a = static_cast<uint16_t>(k >> 48);
    e.b = static_cast<uint16_t>(k >> 32);
    e.c = static_cast<uint16_t>(k >> 16);
    e.d = static_cast<uint16_t>(k);
    return e;
  }

  bool operator==(const Elt& o) const { return pack() == o.pack(); }
  bool operator!=(const Elt& o) const { return pack() != o.pack(); }
  bool operator<(const Elt& o) const { return pack() < o.pack(); }
};

inline Elt canonical_sign(uint32_t a, uint32_t b, uint32_t c, uint32_t d, const Prime& P) {
  uint32_t half = (P.p - 1) / 2;
  uint32_t first = a ? a : b ? b : c ? c : d;
  if (first > half) {
    a = P.neg(a);
    b = P.neg(b);
    c = P.neg(c);
    d = P.neg(d);
  }
  Elt e;
  e.a = static_cast<uint16_t>(a);
  e.b = static_cast<uint16_t>(b);
  e.c = static_cast<uint16_t>(c);
  e.d = static_cast<uint16_t>(d);
  return e;
}

/// Canonicalize an integer matrix. The reduced matrix must have det = 1.
inline Elt canonicalize(int64_t a, int64_t b, int64_t c, int64_t d, const Prime& P) {
  uint32_t ra = P.reduce(a), rb = P.reduce(b), rc = P.reduce(c), rd = P.reduce(d);
  uint32_t det = P.sub(P.mul(ra, rd), P.mul(rb, rc));
  if (det != 1)
    throw DomainError("matrix determinant is " + std::to_string(det) + ", expected 1");
  if (ra == 0 && rb == 0 && rc == 0 && rd == 0) throw DomainError("zero matrix");
  return canonical_sign(ra, rb, rc, rd, P);
}

inline Elt identity_elt() { return Elt{}; }

inline Elt mul(const Elt& x, const Elt& y, const Prime& P) {
  uint32_t a = P.reduce(int64_t(x.a) * y.a + int64_t(x.b) * y.c);
  uint32_t b = P.reduce(int64_t(x.a) * y.b + int64_t(x.b) * y.d);
  uint32_t c = P.reduce(int64_t(x.c) * y.a + int64_t(x.d) * y.c);
  uint32_t d = P.reduce(int64_t(x.c) * y.b + int64_t(x.d) * y.d);
  return canonical_sign(a, b, c, d, P);
}

inline Elt inverse(const Elt& x, const Prime& P) {
  return canonical_sign(x.d, P.neg(x.b), P.neg(x.c), x.a, P);
}

inline Elt conjugate(const Elt& g, const Elt& by, const Prime& P) {
  return mul(mul(by, g, P), inverse(by, P), P);
}

inline Elt elt_pow(Elt x, uint64_t e, const Prime& P) {
  Elt acc = identity_elt();
  while (e) {
    if (e & 1) acc = mul(acc, x, P);
    x = mul(x, x, P);
    e >>= 1;
  }
  return acc;
}

/// Trace of the canonical representative. Projectively the trace is only
/// defined up to sign; both signs are handled where it matters.
inline uint32_t trace(const Elt& x, const Prime& P) { return P.add(x.a, x.d); }

enum class TraceOrderClass { Order2, Order3, Order4, OrderPOrIdentity, OtherOrder };

inline TraceOrderClass trace_order_class(const Elt& x, const Prime& P) {
  uint32_t t = trace(x, P);
  if (t == 0) return TraceOrderClass::Order2;
  if (t == 1 || t == P.p - 1) return TraceOrderClass::Order3;
  uint32_t t2 = P.mul(t, t);
  if (t2 == 2 % P.p) return TraceOrderClass::Order4;
  if (t == 2 || t == P.p - 2) return TraceOrderClass::OrderPOrIdentity;
  return TraceOrderClass::OtherOrder;
}

inline const char* to_string(TraceOrderClass c) {
  switch (c) {
    case TraceOrderClass::Order2: return "order2";
    case TraceOrderClass::Order3: return "order3";
    case TraceOrderClass::Order4: return "order4";
    case TraceOrderClass::OrderPOrIdentity: return "order_p_or_identity";
    default: return "other";
  }
}

inline uint64_t psl2_order(const Prime& P) {
  return uint64_t(P.p) * (P.p - 1) * (P.p + 1) / 2;
}

/// Order of x in PSL(2,p). Every element order divides p, (p-1)/2 or
/// (p+1)/2, so only those divisors are probed.
inline uint32_t element_order(const Elt& x, const Prime& P) {
  if (x == identity_elt()) return 1;
  std::vector<uint32_t> candidates = divisors((P.p - 1) / 2);
  for (uint32_t d : divisors((P.p + 1) / 2)) candidates.push_back(d);
  candidates.push_back(P.p);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (uint32_t d : candidates)
    if (d > 1 && elt_pow(x, d, P) == identity_elt()) return d;
  throw InternalError("element order not among divisors of p, (p-1)/2, (p+1)/2");
}

inline constexpr uint32_t kDefaultEnumerationBound = 97;

/// Full enumeration context for one PSL(2,p): a sorted dense index of all
/// canonical elements plus caches built on demand. Everything downstream
/// identifies elements by their index in this ordering.
class GroupContext {
 public:
  explicit GroupContext(const Prime& P, uint32_t enumeration_bound = kDefaultEnumerationBound)
      : prime_(P) {
    if (P.p > enumeration_bound)
      throw CapacityError("p = " + std::to_string(P.p) + " exceeds enumeration bound " +
                          std::to_string(enumeration_bound));
    order_ = psl2_order(P);
    enumerate();
  }

  const Prime& prime() const { return prime_; }
  uint32_t p() const { return prime_.p; }
  uint64_t order() const { return order_; }
  uint32_t size() const { return static_cast<uint32_t>(keys_.size()); }

  Elt elt(uint32_t idx) const { return Elt::unpack(keys_[idx]); }

  uint32_t index_of(const Elt& e) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), e.pack());
    check(it != keys_.end() && *it == e.pack(), "element not in group context");
    return static_cast<uint32_t>(it - keys_.begin());
  }

  uint32_t identity_index() const { return index_of(identity_elt()); }

  uint32_t mul_idx(uint32_t i, uint32_t j) const {
    if (!mult_table_.empty()) return mult_table_[uint64_t(i) * keys_.size() + j];
    return index_of(mul(elt(i), elt(j), prime_));
  }

  uint32_t inv_idx(uint32_t i) const {
    if (!inv_table_.empty()) return inv_table_[i];
    return index_of(inverse(elt(i), prime_));
  }

  /// Dense multiplication table; only worthwhile for small p.
  void build_mult_table(uint64_t max_entries = uint64_t(3500) * 3500) {
    if (!mult_table_.empty()) return;
    uint64_t n = keys_.size();
    if (n * n > max_entries)
      throw CapacityError("multiplication table for p = " + std::to_string(prime_.p) +
                          " needs " + std::to_string(n * n) + " entries, over budget");
    mult_table_.resize(n * n);
    for (uint32_t i = 0; i < n; ++i) {
      Elt x = elt(i);
      for (uint32_t j = 0; j < n; ++j)
        mult_table_[uint64_t(i) * n + j] = index_of(mul(x, elt(j), prime_));
    }
    inv_table_.resize(n);
    for (uint32_t i = 0; i < n; ++i) inv_table_[i] = index_of(inverse(elt(i), prime_));
  }

  bool has_mult_table() const { return !mult_table_.empty(); }

  const std::vector<uint32_t>& element_orders() const {
    if (orders_.empty()) {
      orders_.resize(keys_.size());
      for (uint32_t i = 0; i < keys_.size(); ++i)
        orders_[i] = element_order(elt(i), prime_);
    }
    return orders_;
  }

  uint32_t order_of(uint32_t idx) const { return element_orders()[idx]; }

  /// Representative of PGL(2,p) outside PSL: conjugation by diag(nu, 1) for a
  /// non-square nu realizes the outer half of Aut(PSL(2,p)).
  Elt outer_conjugate(const Elt& g) const {
    uint32_t nu = outer_scalar();
    uint32_t nu_inv = prime_.inv(nu);
    return canonical_sign(g.a, prime_.mul(g.b, nu_inv), prime_.mul(g.c, nu), g.d, prime_);
  }

 private:
  void enumerate() {
    const Prime& P = prime_;
    keys_.reserve(order_);
    for (uint32_t a = 0; a < P.p; ++a) {
      for (uint32_t b = 0; b < P.p; ++b) {
        if (a == 0) {
          if (b == 0) continue;
          // bc = -1 fixes c; d is free.
          uint32_t c = P.neg(P.inv(b));
          for (uint32_t d = 0; d < P.p; ++d) {
            Elt e = canonical_sign(a, b, c, d, P);
            if (e.a == a && e.b == b && e.c == c && e.d == d) keys_.push_back(e.pack());
          }
        } else {
          uint32_t inv_a = P.inv(a);
          for (uint32_t c = 0; c < P.p; ++c) {
            uint32_t d = P.mul(P.add(1, P.mul(b, c)), inv_a);
            Elt e = canonical_sign(a, b, c, d, P);
            if (e.a == a && e.b == b && e.c == c && e.d == d) keys_.push_back(e.pack());
          }
        }
      }
    }
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    check(keys_.size() == order_, "PSL(2,p) enumeration count mismatch");
  }

  uint32_t outer_scalar() const {
    for (uint32_t nu = 2; nu < prime_.p; ++nu)
      if (!prime_.is_square(nu)) return nu;
    throw InternalError("no non-square in F_p");
  }

  Prime prime_;
  uint64_t order_ = 0;
  std::vector<uint64_t> keys_;
  std::vector<uint32_t> mult_table_;
  std::vector<uint32_t> inv_table_;
  mutable std::vector<uint32_t> orders_;
};

}  // namespace psl2
