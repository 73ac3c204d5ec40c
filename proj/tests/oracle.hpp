#pragma once

// Test-only oracles: independent, deliberately simple recomputations used to
// cross-check the library. Small p only.

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psl2/bitset.hpp"
#include "psl2/field.hpp"
#include "psl2/group.hpp"
#include "psl2/subgroup.hpp"

namespace psl2::testing {

/// Every proper subgroup of the group (including the trivial one), as sorted
/// member lists. Works by closing the lattice under single-element extensions
/// starting from the trivial subgroup; extensions only consider one
/// representative per coset since <S,e> = <S,se>. Closures stop early once
/// past |G|/2, where Lagrange forces the closure to be all of G.
inline std::vector<std::vector<uint32_t>> all_subgroups(GroupContext& ctx) {
  ctx.build_mult_table();
  const uint32_t n = ctx.size();
  const uint32_t half = n / 2;
  const uint32_t id = ctx.identity_index();

  struct Node {
    std::vector<uint32_t> members;
    std::vector<uint32_t> gens;
  };
  std::vector<Node> nodes;
  std::unordered_map<uint64_t, std::vector<uint32_t>> byhash;

  auto close = [&](const std::vector<uint32_t>& gens) {
    Bitset seen(n);
    std::vector<uint32_t> frontier{id};
    seen.set(id);
    for (size_t i = 0; i < frontier.size(); ++i) {
      for (uint32_t g : gens) {
        uint32_t f = ctx.mul_idx(frontier[i], g);
        if (!seen.test(f)) {
          seen.set(f);
          frontier.push_back(f);
        }
      }
      if (frontier.size() > half) return std::vector<uint32_t>{};  // = G
    }
    std::sort(frontier.begin(), frontier.end());
    return frontier;
  };
  auto intern = [&](std::vector<uint32_t> members, std::vector<uint32_t> gens) {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t x : members) {
      h ^= x;
      h *= 1099511628211ull;
    }
    auto& bucket = byhash[h];
    for (uint32_t nid : bucket)
      if (nodes[nid].members == members) return;
    bucket.push_back(static_cast<uint32_t>(nodes.size()));
    nodes.push_back({std::move(members), std::move(gens)});
  };

  intern({id}, {});
  for (size_t cur = 0; cur < nodes.size(); ++cur) {
    std::vector<uint32_t> members = nodes[cur].members;
    std::vector<uint32_t> gens = nodes[cur].gens;
    Bitset covered(n);
    for (uint32_t m : members) covered.set(m);
    for (uint32_t e = 0; e < n; ++e) {
      if (covered.test(e)) continue;
      for (uint32_t s : members) covered.set(ctx.mul_idx(s, e));
      std::vector<uint32_t> g2 = gens;
      g2.push_back(e);
      std::vector<uint32_t> closed = close(g2);
      if (!closed.empty()) intern(std::move(closed), std::move(g2));
    }
  }

  std::vector<std::vector<uint32_t>> out;
  out.reserve(nodes.size());
  for (auto& nd : nodes) out.push_back(std::move(nd.members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

/// Maximal subgroups by raw lattice search over all_subgroups output.
inline std::vector<std::vector<uint32_t>> maximal_subgroups_oracle(GroupContext& ctx) {
  auto subs = all_subgroups(ctx);
  const uint32_t n = ctx.size();
  std::vector<Bitset> bits;
  bits.reserve(subs.size());
  for (auto& s : subs) {
    Bitset b(n);
    for (uint32_t m : s) b.set(m);
    bits.push_back(std::move(b));
  }
  std::vector<std::vector<uint32_t>> out;
  for (size_t i = 0; i < subs.size(); ++i) {
    bool covered = false;
    for (size_t j = 0; j < subs.size() && !covered; ++j)
      if (j != i && subs[j].size() > subs[i].size() && bits[i].subset_of(bits[j]))
        covered = true;
    if (!covered) out.push_back(subs[i]);
  }
  return out;
}

struct IsoSignature {
  uint64_t order = 0;
  std::vector<std::pair<uint32_t, uint64_t>> hist;  // (element order, count), sorted
  bool abelian = true;
  uint64_t center = 0;

  auto tie() const { return std::tie(order, hist, abelian, center); }
  bool operator==(const IsoSignature& o) const { return tie() == o.tie(); }
  bool operator<(const IsoSignature& o) const { return tie() < o.tie(); }
};

inline IsoSignature measure_signature(const GroupContext& ctx,
                                      const std::vector<uint32_t>& members) {
  IsoSignature sig;
  sig.order = members.size();
  std::map<uint32_t, uint64_t> h;
  for (uint32_t m : members) h[ctx.order_of(m)]++;
  sig.hist.assign(h.begin(), h.end());
  for (uint32_t a : members) {
    bool central = true;
    for (uint32_t b : members) {
      if (ctx.mul_idx(a, b) != ctx.mul_idx(b, a)) {
        central = false;
        sig.abelian = false;
      }
    }
    if (central) sig.center++;
  }
  return sig;
}

inline uint64_t euler_phi(uint32_t n) {
  uint64_t r = n;
  for (uint32_t q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

/// Signature of the abstract group a DicksonType names, derived from the
/// group's structure alone (no PSL data), for cross-checking the classifier.
inline IsoSignature expected_signature(const DicksonType& t) {
  using Tag = DicksonType::Tag;
  IsoSignature sig;
  std::map<uint32_t, uint64_t> h;
  switch (t.tag) {
    case Tag::Cyclic: {
      sig.order = t.a;
      for (uint32_t d : divisors(t.a)) h[d] = euler_phi(d);
      sig.abelian = true;
      sig.center = t.a;
      break;
    }
    case Tag::ElemAbelian2sq:
      sig.order = 4;
      h[1] = 1;
      h[2] = 3;
      sig.abelian = true;
      sig.center = 4;
      break;
    case Tag::Dihedral: {
      uint32_t m = t.a;
      sig.order = 2ull * m;
      for (uint32_t d : divisors(m)) h[d] += euler_phi(d);
      h[2] += m;
      sig.abelian = m <= 2;
      sig.center = (m % 2 == 0) ? 2 : 1;
      if (m <= 2) sig.center = sig.order;
      break;
    }
    case Tag::Frobenius: {
      uint32_t p = t.a, k = t.b;
      sig.order = uint64_t(p) * k;
      h[1] = 1;
      h[p] = p - 1;
      for (uint32_t d : divisors(k))
        if (d > 1) h[d] += uint64_t(p) * euler_phi(d);
      sig.abelian = false;
      sig.center = 1;
      break;
    }
    case Tag::A4:
      sig.order = 12;
      h[1] = 1;
      h[2] = 3;
      h[3] = 8;
      sig.abelian = false;
      sig.center = 1;
      break;
    case Tag::S4:
      sig.order = 24;
      h[1] = 1;
      h[2] = 9;
      h[3] = 8;
      h[4] = 6;
      sig.abelian = false;
      sig.center = 1;
      break;
    case Tag::A5:
      sig.order = 60;
      h[1] = 1;
      h[2] = 15;
      h[3] = 20;
      h[5] = 24;
      sig.abelian = false;
      sig.center = 1;
      break;
    default:
      break;
  }
  if (h.empty() || h[1] == 0) h[1] = 1;
  sig.hist.assign(h.begin(), h.end());
  return sig;
}

}  // namespace psl2::testing
