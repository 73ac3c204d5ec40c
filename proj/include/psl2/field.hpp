#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psl2/common.hpp"

namespace psl2 {

inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Odd prime modulus together with the congruence data the subgroup catalog
/// keys on. All F_p values are canonical residues in [0, p).
struct Prime {
  uint32_t p = 0;
  uint32_t mod8 = 0;
  uint32_t mod10 = 0;
  uint32_t mod40 = 0;

  static Prime make(uint32_t p) {
    if (p >= (1u << 15))
      throw CapacityError("primes above 2^15 are not supported");
    if (p < 5 || !is_prime(p))
      throw DomainError("modulus must be a prime >= 5, got " + std::to_string(p));
    Prime q;
    q.p = p;
    q.mod8 = p % 8;
    q.mod10 = p % 10;
    q.mod40 = p % 40;
    return q;
  }

  bool operator==(const Prime& o) const { return p == o.p; }
  bool operator!=(const Prime& o) const { return p != o.p; }

  uint32_t reduce(int64_t v) const {
    int64_t r = v % p;
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
  }

  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>((uint64_t(a) * b) % p);
  }

  uint32_t pow(uint32_t a, uint64_t e) const {
    uint64_t base = a % p, acc = 1;
    while (e) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return static_cast<uint32_t>(acc);
  }

  uint32_t inv(uint32_t a) const {
    if (a % p == 0) throw DomainError("inverse of 0 mod " + std::to_string(p));
    return pow(a % p, p - 2);
  }

  /// a/b in F_p.
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

  bool is_square(uint32_t a) const {
    a %= p;
    return a == 0 || pow(a, (p - 1) / 2) == 1;
  }
};

/// Both square roots of a mod p as (smaller, larger), or absent when a is a
/// non-residue. sqrt of 0 is reported as the degenerate pair (0, 0).
inline std::optional<std::pair<uint32_t, uint32_t>> sqrt_mod(uint32_t a, const Prime& P) {
  a %= P.p;
  if (a == 0) return std::make_pair(0u, 0u);
  if (P.pow(a, (P.p - 1) / 2) != 1) return std::nullopt;

  uint32_t root;
  if (P.p % 4 == 3) {
    root = P.pow(a, (P.p + 1) / 4);
  } else {
    // Tonelli-Shanks. p-1 = q * 2^s with q odd.
    uint32_t q = P.p - 1, s = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++s;
    }
    uint32_t z = 2;
    while (P.is_square(z)) ++z;
    uint32_t m = s;
    uint32_t c = P.pow(z, q);
    uint32_t t = P.pow(a, q);
    uint32_t r = P.pow(a, (q + 1) / 2);
    while (t != 1) {
      uint32_t i = 0, probe = t;
      while (probe != 1) {
        probe = P.mul(probe, probe);
        ++i;
      }
      uint32_t b = c;
      for (uint32_t k = 0; k + i + 1 < m; ++k) b = P.mul(b, b);
      m = i;
      c = P.mul(b, b);
      t = P.mul(t, c);
      r = P.mul(r, b);
    }
    root = r;
  }

  if (P.mul(root, root) != a) {
    // Dependable fallback for small moduli; Tonelli-Shanks should never land here.
    root = 0;
    if (P.p < 1000) {
      for (uint32_t x = 1; x < P.p; ++x)
        if (P.mul(x, x) == a) {
          root = x;
          break;
        }
    }
    check(root != 0, "modular sqrt failed");
  }
  uint32_t other = P.neg(root);
  if (root > other) std::swap(root, other);
  return std::make_pair(root, other);
}

inline std::vector<uint32_t> prime_factors(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline uint32_t euler_phi(uint32_t n) {
  uint32_t r = n;
  for (uint32_t q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

inline std::vector<uint32_t> divisors(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Order of a in the multiplicative group F_p^*.
inline uint32_t multiplicative_order(uint32_t a, const Prime& P) {
  a %= P.p;
  if (a == 0) throw DomainError("multiplicative order of 0");
  uint32_t order = P.p - 1;
  for (uint32_t q : prime_factors(P.p - 1)) {
    while (order % q == 0 && P.pow(a, order / q) == 1) order /= q;
  }
  return order;
}

/// Smallest primitive root mod p.
inline uint32_t primitive_root(const Prime& P) {
  for (uint32_t g = 2; g < P.p; ++g)
    if (multiplicative_order(g, P) == P.p - 1) return g;
  throw InternalError("no primitive root found");
}

/// Element of F_p carrying its modulus; the ergonomic face of the raw
/// residue arithmetic above.
struct Fp {
  uint32_t v = 0;
  Prime ctx;

  Fp() = default;
  Fp(int64_t value, const Prime& P) : v(P.reduce(value)), ctx(P) {}

  static void same(const Fp& a, const Fp& b) {
    if (a.ctx.p != b.ctx.p) throw UsageError("mixed-field arithmetic");
  }

  friend Fp operator+(const Fp& a, const Fp& b) {
    same(a, b);
    return Fp(a.ctx.add(a.v, b.v), a.ctx);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    same(a, b);
    return Fp(a.ctx.sub(a.v, b.v), a.ctx);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    same(a, b);
    return Fp(a.ctx.mul(a.v, b.v), a.ctx);
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    same(a, b);
    return Fp(a.ctx.div(a.v, b.v), a.ctx);
  }
  Fp operator-() const { return Fp(ctx.neg(v), ctx); }
  bool operator==(const Fp& o) const { return ctx.p == o.ctx.p && v == o.v; }
  bool operator!=(const Fp& o) const { return !(*this == o); }

  Fp inverse() const { return Fp(ctx.inv(v), ctx); }
  Fp pow(uint64_t e) const { return Fp(ctx.pow(v, e), ctx); }
};

}  // namespace psl2
