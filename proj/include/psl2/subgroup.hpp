#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "psl2/bitset.hpp"
#include "psl2/common.hpp"
#include "psl2/field.hpp"
#include "psl2/group.hpp"

namespace psl2 {

/// Isomorphism tag for a subgroup of PSL(2,p), following Dickson's list.
/// Parameters: Cyclic(n) has order n, Dihedral(n) has order 2n,
/// Frobenius(p,k) = Z_p x| Z_k has order p*k.
struct DicksonType {
  enum class Tag : uint8_t {
    Cyclic,
    Dihedral,
    Frobenius,
    A4,
    S4,
    A5,
    ElemAbelian2sq,
    Full,
    Other,
  };
  Tag tag = Tag::Other;
  uint32_t a = 0;
  uint32_t b = 0;

  static DicksonType cyclic(uint32_t n) { return {Tag::Cyclic, n, 0}; }
  static DicksonType dihedral(uint32_t n) { return {Tag::Dihedral, n, 0}; }
  static DicksonType frobenius(uint32_t p, uint32_t k) { return {Tag::Frobenius, p, k}; }
  static DicksonType a4() { return {Tag::A4, 0, 0}; }
  static DicksonType s4() { return {Tag::S4, 0, 0}; }
  static DicksonType a5() { return {Tag::A5, 0, 0}; }
  static DicksonType klein() { return {Tag::ElemAbelian2sq, 0, 0}; }
  static DicksonType full() { return {Tag::Full, 0, 0}; }

  bool operator==(const DicksonType& o) const {
    return tag == o.tag && a == o.a && b == o.b;
  }
  bool operator!=(const DicksonType& o) const { return !(*this == o); }
  bool operator<(const DicksonType& o) const {
    if (tag != o.tag) return tag < o.tag;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }

  /// Order of the tagged group; 0 for Full/Other (not determined by the tag).
  uint64_t order() const {
    switch (tag) {
      case Tag::Cyclic: return a;
      case Tag::Dihedral: return 2ull * a;
      case Tag::Frobenius: return uint64_t(a) * b;
      case Tag::A4: return 12;
      case Tag::S4: return 24;
      case Tag::A5: return 60;
      case Tag::ElemAbelian2sq: return 4;
      default: return 0;
    }
  }
};

inline std::string to_string(const DicksonType& t) {
  using Tag = DicksonType::Tag;
  switch (t.tag) {
    case Tag::Cyclic: return "Z" + std::to_string(t.a);
    case Tag::Dihedral: return "D" + std::to_string(2ull * t.a);
    case Tag::Frobenius: return "F" + std::to_string(uint64_t(t.a) * t.b);
    case Tag::A4: return "A4";
    case Tag::S4: return "S4";
    case Tag::A5: return "A5";
    case Tag::ElemAbelian2sq: return "V4";
    case Tag::Full: return "G";
    default: return "?";
  }
}

struct Subgroup {
  Bitset members;
  std::vector<uint32_t> member_list;  // sorted element indices, same set as members
  std::vector<Elt> generators;
  uint64_t order = 0;
  std::optional<DicksonType> iso_type;

  bool contains(uint32_t idx) const { return members.test(idx); }
};

inline Subgroup subgroup_from_indices(const GroupContext& ctx, std::vector<uint32_t> idxs) {
  Subgroup H;
  H.members = Bitset(ctx.size());
  std::sort(idxs.begin(), idxs.end());
  idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());
  for (uint32_t i : idxs) H.members.set(i);
  H.member_list = std::move(idxs);
  H.order = H.member_list.size();
  check(ctx.order() % H.order == 0, "subgroup order fails Lagrange");
  return H;
}

/// Smallest subgroup containing the generators. Right-multiplication reaches
/// inverses too since the group is finite.
inline std::vector<uint32_t> closure_indices(const GroupContext& ctx,
                                             const std::vector<uint32_t>& gens) {
  std::vector<uint32_t> frontier{ctx.identity_index()};
  std::unordered_set<uint32_t> seen{ctx.identity_index()};
  for (size_t i = 0; i < frontier.size(); ++i) {
    uint32_t e = frontier[i];
    for (uint32_t g : gens) {
      uint32_t f = ctx.mul_idx(e, g);
      if (seen.insert(f).second) frontier.push_back(f);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

inline Subgroup closure(const GroupContext& ctx, const std::vector<Elt>& gens) {
  check(!gens.empty(), "closure needs at least one generator");
  std::vector<uint32_t> gidx;
  gidx.reserve(gens.size());
  for (const Elt& g : gens) gidx.push_back(ctx.index_of(g));
  Subgroup H = subgroup_from_indices(ctx, closure_indices(ctx, gidx));
  H.generators = gens;
  return H;
}

inline Subgroup trivial_subgroup(const GroupContext& ctx) {
  return subgroup_from_indices(ctx, {ctx.identity_index()});
}

inline DicksonType classify_subgroup(const GroupContext& ctx, const Subgroup& H) {
  uint64_t n = H.order;
  if (n == ctx.order()) return DicksonType::full();

  uint32_t p = ctx.p();
  uint32_t max_order = 0;
  std::map<uint32_t, uint32_t> hist;
  for (uint32_t idx : H.member_list) {
    uint32_t o = ctx.order_of(idx);
    hist[o]++;
    max_order = std::max(max_order, o);
  }

  if (max_order == n) return DicksonType::cyclic(static_cast<uint32_t>(n));
  if (n == 4) return DicksonType::klein();
  if (n % p == 0) {
    // Proper subgroups of order divisible by p live in a point stabilizer
    // (Dickson), so they are Z_p x| Z_k.
    uint32_t k = static_cast<uint32_t>(n / p);
    if (k == 2) return DicksonType::dihedral(p);
    return DicksonType::frobenius(p, k);
  }
  if (n == 12 && hist[3] == 8) return DicksonType::a4();
  if (n == 24 && hist[3] == 8 && hist[4] == 6) return DicksonType::s4();
  if (n == 60 && hist[5] == 24) return DicksonType::a5();
  if (n % 2 == 0 && max_order == n / 2) {
    // Dihedral: a cyclic half plus m reflections. The order multiset is
    // phi(d) per divisor d > 2 of m, and m (m even: m+1) involutions.
    uint32_t m = static_cast<uint32_t>(n / 2);
    bool ok = hist[2] == m + (m % 2 == 0 ? 1 : 0);
    for (auto [o, c] : hist) {
      if (o <= 2) continue;
      if (m % o != 0 || c != euler_phi(o)) {
        ok = false;
        break;
      }
    }
    if (ok) return DicksonType::dihedral(m);
  }
  return DicksonType{};  // Other: outside Dickson's list, caller decides
}

/// The standard maximal-subgroup families of PSL(2,p) with existence,
/// maximality, and counts. Dihedral types below order 6 degenerate (D4 is the
/// Klein group), which only matters at p = 5.
struct MaximalCatalog {
  struct Entry {
    DicksonType type;
    bool exists = false;
    bool maximal = false;
    uint64_t count = 0;
  };
  Entry borel;           // G_p = Z_p x| Z_{(p-1)/2}
  Entry dihedral_minus;  // order p-1
  Entry dihedral_plus;   // order p+1
  Entry alt4;
  Entry sym4;
  Entry alt5;

  std::vector<Entry> maximal_entries() const {
    std::vector<Entry> out;
    for (const Entry* e : {&borel, &dihedral_minus, &dihedral_plus, &alt4, &sym4, &alt5})
      if (e->exists && e->maximal) out.push_back(*e);
    return out;
  }
};

inline MaximalCatalog dickson_catalog(const Prime& P) {
  uint32_t p = P.p;
  uint64_t g = psl2_order(P);
  MaximalCatalog cat;

  cat.borel.type = (p == 5) ? DicksonType::dihedral(5) : DicksonType::frobenius(p, (p - 1) / 2);
  cat.borel.exists = true;
  cat.borel.maximal = true;
  cat.borel.count = p + 1;

  cat.dihedral_minus.type =
      (p == 5) ? DicksonType::klein() : DicksonType::dihedral((p - 1) / 2);
  cat.dihedral_minus.exists = true;
  cat.dihedral_minus.maximal = p >= 13;
  cat.dihedral_minus.count = uint64_t(p) * (p + 1) / 2;

  cat.dihedral_plus.type = DicksonType::dihedral((p + 1) / 2);
  cat.dihedral_plus.exists = true;
  cat.dihedral_plus.maximal = p != 7;
  cat.dihedral_plus.count = uint64_t(p) * (p - 1) / 2;

  bool has_s4 = P.mod8 == 1 || P.mod8 == 7;
  bool has_a5 = P.mod10 == 1 || P.mod10 == 9;

  cat.alt4.type = DicksonType::a4();
  cat.alt4.exists = true;
  // The mod-40 rule, plus PSL(2,5) = A5 where A4 is a point stabilizer.
  cat.alt4.maximal = (P.mod40 == 3 || P.mod40 == 13 || P.mod40 == 27 || P.mod40 == 37) || p == 5;
  cat.alt4.count = g / 12;

  cat.sym4.type = DicksonType::s4();
  cat.sym4.exists = has_s4;
  cat.sym4.maximal = has_s4;
  cat.sym4.count = has_s4 ? g / 12 : 0;

  cat.alt5.type = DicksonType::a5();
  cat.alt5.exists = has_a5 && p != 5;
  cat.alt5.maximal = cat.alt5.exists;
  cat.alt5.count = cat.alt5.exists ? g / 30 : 0;

  return cat;
}

/// Exhaustive list of the maximal subgroups of PSL(2,p), stored compactly as
/// sorted member-index lists, plus the element -> containing-maximals index
/// that drives the generating-set search.
class MaximalCensus {
 public:
  struct Maximal {
    DicksonType type;
    std::vector<uint32_t> members;  // sorted

    bool contains(uint32_t idx) const {
      return std::binary_search(members.begin(), members.end(), idx);
    }
    bool contains_all(const std::vector<uint32_t>& idxs) const {
      for (uint32_t i : idxs)
        if (!contains(i)) return false;
      return true;
    }
  };

  explicit MaximalCensus(const GroupContext& ctx) : ctx_(ctx) {
    build_borels();
    const MaximalCatalog cat = dickson_catalog(ctx.prime());
    if (cat.dihedral_minus.maximal)
      build_dihedrals((ctx.p() - 1) / 2, cat.dihedral_minus.count);
    if (cat.dihedral_plus.maximal)
      build_dihedrals((ctx.p() + 1) / 2, cat.dihedral_plus.count);
    if (cat.alt4.maximal) build_pair_closures(3, 12, cat.alt4.count);
    if (cat.sym4.maximal) build_pair_closures(4, 24, cat.sym4.count);
    if (cat.alt5.maximal) build_pair_closures(5, 60, cat.alt5.count);
    build_incidence();
  }

  const GroupContext& ctx() const { return ctx_; }
  const std::vector<Maximal>& maximals() const { return maximals_; }
  const Maximal& maximal(uint32_t id) const { return maximals_[id]; }
  uint32_t count() const { return static_cast<uint32_t>(maximals_.size()); }

  /// Ids of the maximal subgroups containing the element, ascending.
  const std::vector<uint32_t>& overgroup_ids(uint32_t elt_idx) const {
    return incidence_[elt_idx];
  }

 private:
  void add_maximal(std::vector<uint32_t> members) {
    std::sort(members.begin(), members.end());
    check(std::adjacent_find(members.begin(), members.end()) == members.end(),
          "maximal member list has duplicates");
    Maximal m;
    m.members = std::move(members);
    Subgroup H = subgroup_from_indices(ctx_, m.members);
    m.type = classify_subgroup(ctx_, H);
    check(m.type.tag != DicksonType::Tag::Other && m.type.tag != DicksonType::Tag::Full,
          "maximal subgroup outside Dickson catalog");
    check(m.type.order() == m.members.size(), "maximal subgroup order mismatch");
    maximals_.push_back(std::move(m));
  }

  // Point stabilizers on P^1(F_p): every element is added to the stabilizer
  // of each of its fixed points; z in [0,p) plus p for infinity.
  void build_borels() {
    const Prime& P = ctx_.prime();
    uint32_t p = P.p;
    std::vector<std::vector<uint32_t>> stab(p + 1);
    for (uint32_t i = 0; i < ctx_.size(); ++i) {
      Elt g = ctx_.elt(i);
      if (g == identity_elt()) {
        for (auto& s : stab) s.push_back(i);
        continue;
      }
      if (g.c == 0) {
        stab[p].push_back(i);
        if (g.a != g.d) stab[P.mul(g.b, P.inv(P.sub(g.d, g.a)))].push_back(i);
      } else {
        uint32_t disc = P.sub(P.mul(P.sub(g.d, g.a), P.sub(g.d, g.a)),
                              P.neg(P.mul(4, P.mul(g.b, g.c))));
        auto r = sqrt_mod(disc, P);
        if (!r) continue;
        uint32_t inv2c = P.inv(P.mul(2, g.c));
        uint32_t base = P.sub(g.a, g.d);
        stab[P.mul(P.add(base, r->first), inv2c)].push_back(i);
        if (r->second != r->first) stab[P.mul(P.add(base, r->second), inv2c)].push_back(i);
      }
    }
    uint64_t expect = uint64_t(p) * (p - 1) / 2;
    for (auto& s : stab) {
      check(s.size() == expect, "Borel stabilizer size mismatch");
      add_maximal(std::move(s));
    }
  }

  // Normalizers of the maximal tori: bucket order-n elements by the cyclic
  // group they generate, then adjoin one inverting involution's coset.
  void build_dihedrals(uint32_t n, uint64_t expect_count) {
    check(n >= 3, "dihedral census needs torus order >= 3");
    const auto& orders = ctx_.element_orders();
    std::vector<uint32_t> involutions;
    for (uint32_t i = 0; i < ctx_.size(); ++i)
      if (orders[i] == 2) involutions.push_back(i);

    std::unordered_set<uint32_t> seen_key;
    uint64_t found = 0;
    for (uint32_t zi = 0; zi < ctx_.size(); ++zi) {
      if (orders[zi] != n) continue;
      std::vector<uint32_t> cyc{ctx_.identity_index()};
      uint32_t key = zi;
      uint32_t cur = zi;
      for (uint32_t k = 1; k < n; ++k) {
        cyc.push_back(cur);
        if (orders[cur] == n) key = std::min(key, cur);
        cur = ctx_.mul_idx(cur, zi);
      }
      check(cur == ctx_.identity_index(), "torus power chain did not close");
      if (key != zi || !seen_key.insert(key).second) continue;

      uint32_t zinv = ctx_.inv_idx(zi);
      uint32_t t = UINT32_MAX;
      for (uint32_t ti : involutions) {
        if (ctx_.mul_idx(ctx_.mul_idx(ti, zi), ti) == zinv) {
          t = ti;
          break;
        }
      }
      check(t != UINT32_MAX, "no inverting involution for torus");
      std::vector<uint32_t> members = cyc;
      for (uint32_t c : cyc) members.push_back(ctx_.mul_idx(c, t));
      std::sort(members.begin(), members.end());
      check(members.size() == 2ull * n &&
                std::adjacent_find(members.begin(), members.end()) == members.end(),
            "dihedral member count mismatch");
      add_maximal(std::move(members));
      ++found;
    }
    check(found == expect_count, "dihedral family count mismatch");
  }

  // A4 / S4 / A5 as closures of (order 2, order 3) pairs whose product has
  // order k = 3 / 4 / 5; such pairs exist in every copy and force the type.
  void build_pair_closures(uint32_t k, uint32_t target_order, uint64_t expect_count) {
    const auto& orders = ctx_.element_orders();
    std::vector<uint32_t> invs, thirds;
    for (uint32_t i = 0; i < ctx_.size(); ++i) {
      if (orders[i] == 2) invs.push_back(i);
      if (orders[i] == 3) thirds.push_back(i);
    }
    struct VecHash {
      size_t operator()(const std::vector<uint32_t>& v) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t x : v) {
          h ^= x;
          h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
      }
    };
    std::unordered_set<std::vector<uint32_t>, VecHash> seen;
    for (uint32_t x : invs) {
      for (uint32_t y : thirds) {
        if (orders[ctx_.mul_idx(x, y)] != k) continue;
        std::vector<uint32_t> members = closure_indices(ctx_, {x, y});
        check(members.size() == target_order, "pair closure has unexpected order");
        if (seen.insert(members).second) add_maximal(std::move(members));
      }
    }
    check(seen.size() == expect_count, "exceptional family count mismatch");
  }

  void build_incidence() {
    incidence_.assign(ctx_.size(), {});
    for (uint32_t m = 0; m < maximals_.size(); ++m)
      for (uint32_t e : maximals_[m].members) incidence_[e].push_back(m);
    uint32_t id = ctx_.identity_index();
    check(incidence_[id].size() == maximals_.size(), "identity missing from a maximal");
  }

  const GroupContext& ctx_;
  std::vector<Maximal> maximals_;
  std::vector<std::vector<uint32_t>> incidence_;
};

inline Subgroup materialize(const GroupContext& ctx, const MaximalCensus::Maximal& m) {
  Subgroup H = subgroup_from_indices(ctx, m.members);
  H.iso_type = m.type;
  return H;
}

inline std::vector<Subgroup> maximal_overgroups(const GroupContext& ctx,
                                                const MaximalCensus& census,
                                                const Subgroup& H) {
  if (H.order == ctx.order()) throw DomainError("maximal_overgroups of the full group");
  std::vector<Subgroup> out;
  uint32_t probe = UINT32_MAX;
  for (uint32_t idx : H.member_list)
    if (idx != ctx.identity_index()) {
      probe = idx;
      break;
    }
  if (probe == UINT32_MAX) {
    for (uint32_t m = 0; m < census.count(); ++m)
      out.push_back(materialize(ctx, census.maximal(m)));
    return out;
  }
  for (uint32_t m : census.overgroup_ids(probe))
    if (census.maximal(m).contains_all(H.member_list))
      out.push_back(materialize(ctx, census.maximal(m)));
  check(!out.empty(), "proper subgroup with no maximal overgroup");
  return out;
}

inline Subgroup intersect(const GroupContext& ctx, const Subgroup& H, const Subgroup& K) {
  Subgroup R;
  R.members = H.members & K.members;
  R.member_list.clear();
  R.members.for_each([&](uint32_t i) { R.member_list.push_back(i); });
  R.order = R.member_list.size();
  check(ctx.order() % R.order == 0, "intersection fails Lagrange");
  return R;
}

/// The empty intersection counts as G, so a list in general position consists
/// of proper subgroups whose nested intersections all strictly shrink.
inline bool in_general_position(const GroupContext& ctx, const std::vector<Subgroup>& subs) {
  check(!subs.empty(), "in_general_position needs at least one subgroup");
  size_t n = subs.size();
  check(n <= 8, "general position test limited to 8 subgroups");
  std::vector<uint64_t> size(size_t(1) << n);
  size[0] = ctx.order();
  std::vector<Bitset> inter(size_t(1) << n);
  for (size_t mask = 1; mask < inter.size(); ++mask) {
    size_t low = mask & (mask - 1);
    size_t bit = static_cast<size_t>(std::countr_zero(mask));
    if (low == 0)
      inter[mask] = subs[bit].members;
    else
      inter[mask] = inter[low] & subs[bit].members;
    size[mask] = inter[mask].count();
  }
  for (size_t j = 1; j < inter.size(); ++j) {
    // Strictness against every proper subset follows from strictness against
    // subsets one element smaller, checked for all of them.
    for (size_t b = 0; b < n; ++b) {
      if (!(j >> b & 1)) continue;
      if (size[j] >= size[j ^ (size_t(1) << b)]) return false;
    }
  }
  return true;
}

}  // namespace psl2
