#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "psl2/common.hpp"
#include "psl2/group.hpp"
#include "psl2/subgroup.hpp"

namespace psl2 {

inline constexpr uint64_t kDefaultStepBudget = 2'000'000'000;

/// An ordered generating-sequence candidate, elements given as canonical
/// indices into one GroupContext. The caches are filled on demand.
struct GenSequence {
  std::vector<uint32_t> elements;
  mutable std::optional<Subgroup> generated;
  mutable std::optional<std::vector<Subgroup>> hole_subgroups;
};

struct MaximalFamily {
  std::vector<Subgroup> subgroups;  // M_i contains every element except the i-th
  std::vector<DicksonType> types;
};

struct EnumerationReport {
  uint32_t p = 0;
  uint32_t length = 0;
  uint64_t count_sets = 0;
  uint64_t conjugacy_classes = 0;
  uint64_t automorphism_classes = 0;
  std::set<uint32_t> element_orders;
  std::set<std::vector<DicksonType>> maximal_families;  // each vector sorted
};

/// Any subgroup strictly larger than every maximal subgroup is the whole
/// group, which turns closure computations into bounded searches.
inline uint64_t max_proper_subgroup_order(const Prime& P) {
  uint64_t best = 0;
  for (const auto& e : dickson_catalog(P).maximal_entries())
    best = std::max(best, e.type.order());
  return best;
}

/// Closure test with early exit: the BFS stops as soon as it outgrows every
/// proper subgroup. Duplicate generator indices are harmless.
inline bool generates_indices(const GroupContext& ctx, const std::vector<uint32_t>& gidx) {
  uint64_t cap = max_proper_subgroup_order(ctx.prime());
  std::vector<uint32_t> frontier{ctx.identity_index()};
  std::unordered_set<uint32_t> seen{ctx.identity_index()};
  for (size_t i = 0; i < frontier.size(); ++i) {
    if (seen.size() > cap) return true;
    for (uint32_t g : gidx) {
      uint32_t t = ctx.mul_idx(frontier[i], g);
      if (seen.insert(t).second) frontier.push_back(t);
    }
  }
  return seen.size() == ctx.order();
}

inline const Subgroup& generated_subgroup(const GroupContext& ctx, const GenSequence& seq) {
  if (!seq.generated) {
    if (seq.elements.empty()) throw DomainError("empty sequence has no closure");
    seq.generated = subgroup_from_indices(ctx, closure_indices(ctx, seq.elements));
  }
  return *seq.generated;
}

inline bool generates(const GroupContext& ctx, const GenSequence& seq) {
  if (seq.elements.empty()) throw DomainError("empty sequence has no closure");
  if (seq.generated) return seq.generated->order == ctx.order();
  return generates_indices(ctx, seq.elements);
}

inline const std::vector<Subgroup>& hole_subgroups(const GroupContext& ctx,
                                                   const GenSequence& seq) {
  if (!seq.hole_subgroups) {
    if (seq.elements.empty()) throw DomainError("empty sequence has no holes");
    std::vector<Subgroup> holes;
    holes.reserve(seq.elements.size());
    for (size_t i = 0; i < seq.elements.size(); ++i) {
      std::vector<uint32_t> rest;
      for (size_t j = 0; j < seq.elements.size(); ++j)
        if (j != i) rest.push_back(seq.elements[j]);
      holes.push_back(rest.empty() ? trivial_subgroup(ctx)
                                   : subgroup_from_indices(ctx, closure_indices(ctx, rest)));
    }
    seq.hole_subgroups = std::move(holes);
  }
  return *seq.hole_subgroups;
}

inline bool is_irredundant(const GroupContext& ctx, const GenSequence& seq) {
  const Subgroup& whole = generated_subgroup(ctx, seq);
  for (const Subgroup& h : hole_subgroups(ctx, seq))
    if (h.order == whole.order) return false;
  return true;
}

/// All families (M_1,...,M_n) of maximal subgroups with M_i containing the
/// i-th hole but not the i-th element. Each family lands in general position.
inline std::vector<MaximalFamily> corresponding_maximal_families(const GroupContext& ctx,
                                                                 const MaximalCensus& census,
                                                                 const GenSequence& seq) {
  if (!generates(ctx, seq) || !is_irredundant(ctx, seq))
    throw DomainError("maximal families require an irredundant generating sequence");
  const std::vector<Subgroup>& holes = hole_subgroups(ctx, seq);
  size_t n = holes.size();
  std::vector<std::vector<Subgroup>> options(n);
  for (size_t i = 0; i < n; ++i) {
    for (Subgroup& m : maximal_overgroups(ctx, census, holes[i]))
      if (!m.contains(seq.elements[i])) options[i].push_back(std::move(m));
    check(!options[i].empty(), "hole without an avoiding maximal overgroup");
  }
  std::vector<MaximalFamily> out;
  std::vector<size_t> pick(n, 0);
  while (true) {
    MaximalFamily fam;
    for (size_t i = 0; i < n; ++i) {
      fam.subgroups.push_back(options[i][pick[i]]);
      fam.types.push_back(*options[i][pick[i]].iso_type);
    }
    check(in_general_position(ctx, fam.subgroups), "corresponding family not in general position");
    out.push_back(std::move(fam));
    size_t i = 0;
    while (i < n && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return out;
}

namespace detail {

inline bool lists_intersect(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

inline void intersect_sorted(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                             std::vector<uint32_t>& out) {
  out.clear();
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      out.push_back(a[i]);
      ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
}

struct SetKeyHash {
  size_t operator()(const std::array<uint32_t, 4>& k) const {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t v : k) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

inline std::array<uint32_t, 4> set_key(const std::vector<uint32_t>& s) {
  check(s.size() >= 1 && s.size() <= 4, "set keys cover lengths 1 to 4");
  std::array<uint32_t, 4> k{UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX};
  std::copy(s.begin(), s.end(), k.begin());
  std::sort(k.begin(), k.begin() + s.size());
  return k;
}

}  // namespace detail

/// Walks every unordered irredundant generating set of the given length in
/// ascending index order; membership in a maximal subgroup is read off the
/// census incidence lists, so no closures are computed. The visitor returns
/// false to stop early. Budget counts candidate examinations.
inline void for_each_irredundant_generating_set(
    const MaximalCensus& census, uint32_t length,
    const std::optional<std::set<uint32_t>>& order_filter, uint64_t budget,
    const std::function<bool(const std::vector<uint32_t>&)>& visit) {
  const GroupContext& ctx = census.ctx();
  if (length < 2 || length > 4)
    throw DomainError("irredundant set enumeration supports lengths 2, 3 and 4");

  std::vector<char> allowed(ctx.size(), 0);
  std::vector<uint32_t> cand;
  for (uint32_t i = 0; i < ctx.size(); ++i) {
    if (i == ctx.identity_index()) continue;
    if (order_filter && !order_filter->count(ctx.order_of(i))) continue;
    allowed[i] = 1;
    cand.push_back(i);
  }

  uint64_t steps = 0;
  auto spend = [&](uint64_t n) {
    steps += n;
    if (steps > budget)
      throw CapacityError(
          "enumeration step budget exhausted; restrict element orders "
          "(for example to {2,3}) or raise the budget");
  };
  auto ov = [&](uint32_t x) -> const std::vector<uint32_t>& { return census.overgroup_ids(x); };

  std::vector<uint32_t> buf(length);
  bool stop = false;
  auto emit = [&](uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
    buf[0] = a;
    buf[1] = b;
    if (length >= 3) buf[2] = c;
    if (length == 4) buf[3] = d;
    if (!visit(buf)) stop = true;
  };

  if (length == 2) {
    // A pair generates exactly when no maximal subgroup holds both entries,
    // and a generating pair of a noncyclic group is automatically irredundant.
    for (size_t ia = 0; ia + 1 < cand.size() && !stop; ++ia) {
      uint32_t a = cand[ia];
      for (size_t ib = ia + 1; ib < cand.size() && !stop; ++ib) {
        spend(1);
        if (!detail::lists_intersect(ov(a), ov(cand[ib]))) emit(a, cand[ib], 0, 0);
      }
    }
    return;
  }

  // For longer sequences every pair inside the set must stay proper, i.e.
  // share a maximal subgroup; partners of a therefore live in the union of
  // a's maximal overgroups.
  std::vector<uint32_t> mark(ctx.size(), 0);
  uint32_t epoch = 0;
  std::vector<uint32_t> xa, pool, sab, sabc, sac, sbc;

  auto shared_pool = [&](const std::vector<uint32_t>& maximal_ids, uint32_t above,
                         std::vector<uint32_t>& out) {
    ++epoch;
    out.clear();
    uint64_t scanned = 0;
    for (uint32_t m : maximal_ids) {
      const auto& mem = census.maximal(m).members;
      scanned += mem.size();
      for (uint32_t x : mem)
        if (x > above && allowed[x] && mark[x] != epoch) {
          mark[x] = epoch;
          out.push_back(x);
        }
    }
    spend(scanned);
    std::sort(out.begin(), out.end());
  };

  for (size_t ia = 0; ia < cand.size() && !stop; ++ia) {
    uint32_t a = cand[ia];
    shared_pool(ov(a), a, xa);
    if (length == 3) {
      for (size_t ib = 0; ib < xa.size() && !stop; ++ib) {
        uint32_t b = xa[ib];
        spend(1);
        detail::intersect_sorted(ov(a), ov(b), sab);
        for (size_t ic = ib + 1; ic < xa.size() && !stop; ++ic) {
          uint32_t c = xa[ic];
          spend(1);
          if (!detail::lists_intersect(ov(c), ov(b))) continue;  // hole {a} pair
          if (detail::lists_intersect(ov(c), sab)) continue;     // would not generate
          emit(a, b, c, 0);
        }
      }
    } else {
      for (size_t ib = 0; ib < xa.size() && !stop; ++ib) {
        uint32_t b = xa[ib];
        spend(1);
        detail::intersect_sorted(ov(a), ov(b), sab);
        // Both remaining slots must share a maximal with {a,b} through the
        // holes {a,b,c} and {a,b,d}, so they come from the same pool.
        shared_pool(sab, b, pool);
        for (size_t ic = 0; ic + 1 < pool.size() && !stop; ++ic) {
          uint32_t c = pool[ic];
          detail::intersect_sorted(sab, ov(c), sabc);
          detail::intersect_sorted(ov(a), ov(c), sac);
          detail::intersect_sorted(ov(b), ov(c), sbc);
          for (size_t id = ic + 1; id < pool.size() && !stop; ++id) {
            uint32_t d = pool[id];
            spend(1);
            if (detail::lists_intersect(ov(d), sabc)) continue;  // would not generate
            if (!detail::lists_intersect(ov(d), sac)) continue;  // hole {a,c,d}
            if (!detail::lists_intersect(ov(d), sbc)) continue;  // hole {b,c,d}
            emit(a, b, c, d);
          }
        }
      }
    }
  }
}

inline std::vector<std::vector<uint32_t>> collect_irredundant_sets(
    const MaximalCensus& census, uint32_t length,
    const std::optional<std::set<uint32_t>>& order_filter = std::nullopt,
    uint64_t budget = kDefaultStepBudget) {
  std::vector<std::vector<uint32_t>> out;
  for_each_irredundant_generating_set(census, length, order_filter, budget,
                                      [&](const std::vector<uint32_t>& s) {
                                        out.push_back(s);
                                        return true;
                                      });
  return out;
}

/// Orbit decomposition of a collection of element sets under simultaneous
/// conjugation, with classes fused further by the outer automorphism.
struct SetOrbits {
  std::vector<uint32_t> class_of;    // per input set
  std::vector<uint32_t> reps;       // input index of each class representative
  std::vector<uint64_t> orbit_sizes;
  uint64_t automorphism_classes = 0;
};

inline SetOrbits classify_set_orbits(const GroupContext& ctx,
                                     const std::vector<std::vector<uint32_t>>& sets,
                                     bool expect_closed = false) {
  SetOrbits orb;
  if (sets.empty()) return orb;
  size_t len = sets[0].size();
  std::unordered_map<std::array<uint32_t, 4>, uint32_t, detail::SetKeyHash> index;
  index.reserve(sets.size() * 2);
  for (uint32_t i = 0; i < sets.size(); ++i) {
    check(sets[i].size() == len, "orbit counting needs sets of one length");
    check(index.emplace(detail::set_key(sets[i]), i).second, "duplicate set in collection");
  }

  const Prime& P = ctx.prime();
  auto image_key = [&](const std::vector<uint32_t>& s,
                       const std::function<Elt(const Elt&)>& f) {
    std::array<uint32_t, 4> k{UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX};
    for (size_t t = 0; t < s.size(); ++t) k[t] = ctx.index_of(f(ctx.elt(s[t])));
    std::sort(k.begin(), k.begin() + s.size());
    return k;
  };

  orb.class_of.assign(sets.size(), UINT32_MAX);
  for (uint32_t i = 0; i < sets.size(); ++i) {
    if (orb.class_of[i] != UINT32_MAX) continue;
    uint32_t cid = static_cast<uint32_t>(orb.reps.size());
    orb.reps.push_back(i);
    orb.orbit_sizes.push_back(0);
    for (uint32_t g = 0; g < ctx.size(); ++g) {
      Elt by = ctx.elt(g);
      auto key = image_key(sets[i], [&](const Elt& e) { return conjugate(e, by, P); });
      auto it = index.find(key);
      if (it == index.end()) {
        check(!expect_closed, "conjugate of a set escaped the collection");
        continue;
      }
      if (orb.class_of[it->second] == UINT32_MAX) {
        orb.class_of[it->second] = cid;
        ++orb.orbit_sizes[cid];
      } else {
        check(orb.class_of[it->second] == cid, "conjugation orbits must not overlap");
      }
    }
  }

  // Outer-coset fusion: one non-square-determinant conjugation per class.
  std::vector<uint32_t> parent(orb.reps.size());
  for (uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<uint32_t(uint32_t)> root = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (uint32_t cid = 0; cid < orb.reps.size(); ++cid) {
    auto key = image_key(sets[orb.reps[cid]],
                         [&](const Elt& e) { return ctx.outer_conjugate(e); });
    auto it = index.find(key);
    if (it == index.end()) {
      check(!expect_closed, "outer image of a set escaped the collection");
      continue;
    }
    uint32_t a = root(cid), b = root(orb.class_of[it->second]);
    if (a != b) parent[a] = b;
  }
  for (uint32_t cid = 0; cid < orb.reps.size(); ++cid)
    if (root(cid) == cid) ++orb.automorphism_classes;
  return orb;
}

inline uint64_t count_conjugacy_classes(const GroupContext& ctx,
                                        const std::vector<std::vector<uint32_t>>& sets) {
  return classify_set_orbits(ctx, sets).reps.size();
}

inline uint64_t count_automorphism_classes(const GroupContext& ctx,
                                           const std::vector<std::vector<uint32_t>>& sets) {
  return classify_set_orbits(ctx, sets).automorphism_classes;
}

inline EnumerationReport enumerate_irredundant_sets(
    const MaximalCensus& census, uint32_t length,
    const std::optional<std::set<uint32_t>>& order_filter = std::nullopt,
    uint64_t budget = kDefaultStepBudget) {
  const GroupContext& ctx = census.ctx();
  if (length < 2 || length > 4)
    throw DomainError("irredundant set enumeration supports lengths 2, 3 and 4");

  // Cheap feasibility estimate before any real work: the pair scan is
  // quadratic in the candidate count and deeper stages are bounded below by
  // hole candidates inside single maximals.
  uint64_t k = 0;
  std::vector<char> allowed(ctx.size(), 0);
  for (uint32_t i = 0; i < ctx.size(); ++i) {
    if (i == ctx.identity_index()) continue;
    if (order_filter && !order_filter->count(ctx.order_of(i))) continue;
    allowed[i] = 1;
    ++k;
  }
  auto choose = [](uint64_t n, uint32_t r) {
    uint64_t v = 1;
    for (uint32_t t = 0; t < r; ++t) v = v * (n > t ? n - t : 0) / (t + 1);
    return v;
  };
  uint64_t estimate = choose(k, 2);
  if (length >= 3) {
    for (uint32_t m = 0; m < census.count(); ++m) {
      uint64_t km = 0;
      for (uint32_t x : census.maximal(m).members) km += allowed[x];
      estimate += choose(km, length - 1);
    }
  }
  if (estimate > budget)
    throw CapacityError("estimated " + std::to_string(estimate) +
                        " enumeration steps exceed the budget; restrict element orders "
                        "(for example to {2,3}) or raise the budget");

  EnumerationReport rep;
  rep.p = ctx.p();
  rep.length = length;
  std::vector<std::vector<uint32_t>> sets;
  for_each_irredundant_generating_set(census, length, order_filter, budget,
                                      [&](const std::vector<uint32_t>& s) {
                                        sets.push_back(s);
                                        for (uint32_t e : s)
                                          rep.element_orders.insert(ctx.order_of(e));
                                        return true;
                                      });
  rep.count_sets = sets.size();

  SetOrbits orb = classify_set_orbits(ctx, sets, /*expect_closed=*/true);
  rep.conjugacy_classes = orb.reps.size();
  rep.automorphism_classes = orb.automorphism_classes;
  uint64_t total = 0;
  for (uint64_t s : orb.orbit_sizes) total += s;
  check(total == rep.count_sets, "conjugacy orbits must partition the collection");

  // Maximal families are conjugation-invariant, so class representatives
  // suffice to list every family type multiset.
  for (uint32_t rep_idx : orb.reps) {
    GenSequence seq{sets[rep_idx], {}, {}};
    for (const MaximalFamily& fam : corresponding_maximal_families(ctx, census, seq)) {
      std::vector<DicksonType> types = fam.types;
      std::sort(types.begin(), types.end());
      rep.maximal_families.insert(std::move(types));
    }
  }
  return rep;
}

struct MResult {
  uint32_t m = 0;
  bool used_shortcut = false;
};

/// Largest length of an irredundant generating sequence. Without S4 or A5
/// maximal subgroups the answer is 3 and the search may be skipped; the
/// length-4 search restricts to orders 2 and 3 except at small p, where the
/// unfiltered sweep doubles as a check of that restriction.
inline MResult compute_m(const MaximalCensus& census, bool allow_shortcut = true,
                         uint64_t budget = kDefaultStepBudget) {
  const GroupContext& ctx = census.ctx();
  uint32_t p = ctx.p();
  if (allow_shortcut) {
    uint32_t r8 = p % 8, r10 = p % 10;
    if (r8 != 1 && r8 != 7 && r10 != 1 && r10 != 9) return {3, true};
  }
  std::optional<std::set<uint32_t>> filter;
  if (p > 13) filter = std::set<uint32_t>{2, 3};
  bool quad = false;
  for_each_irredundant_generating_set(census, 4, filter, budget,
                                      [&](const std::vector<uint32_t>&) {
                                        quad = true;
                                        return false;
                                      });
  if (quad) return {4, false};
  bool triple = false;
  for_each_irredundant_generating_set(census, 3, std::nullopt, budget,
                                      [&](const std::vector<uint32_t>&) {
                                        triple = true;
                                        return false;
                                      });
  return {triple ? 3u : 2u, false};
}

namespace detail {

/// True when some irredundant generating pair contains x.
inline bool pair_through(const MaximalCensus& census, uint32_t x) {
  const GroupContext& ctx = census.ctx();
  for (uint32_t y = 0; y < ctx.size(); ++y) {
    if (y == x || y == ctx.identity_index()) continue;
    if (!lists_intersect(census.overgroup_ids(x), census.overgroup_ids(y))) return true;
  }
  return false;
}

/// True when some irredundant generating triple contains x. Partners must
/// share a maximal subgroup with x, which keeps the scan quadratic in the
/// membership of x's overgroups rather than in |G|.
inline bool triple_through(const MaximalCensus& census, uint32_t x, uint64_t budget) {
  const GroupContext& ctx = census.ctx();
  auto ov = [&](uint32_t e) -> const std::vector<uint32_t>& { return census.overgroup_ids(e); };
  std::vector<char> in_pool(ctx.size(), 0);
  std::vector<uint32_t> pool;
  for (uint32_t m : ov(x))
    for (uint32_t e : census.maximal(m).members)
      if (e != x && e != ctx.identity_index() && !in_pool[e]) {
        in_pool[e] = 1;
        pool.push_back(e);
      }
  std::sort(pool.begin(), pool.end());
  uint64_t steps = 0;
  std::vector<uint32_t> sxu;
  for (size_t iu = 0; iu + 1 < pool.size(); ++iu) {
    uint32_t u = pool[iu];
    intersect_sorted(ov(x), ov(u), sxu);
    for (size_t iv = iu + 1; iv < pool.size(); ++iv) {
      uint32_t v = pool[iv];
      if (++steps > budget)
        throw CapacityError("triple search budget exhausted; raise the budget");
      if (!lists_intersect(ov(v), ov(u))) continue;
      if (lists_intersect(ov(v), sxu)) continue;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Element orders realizable in length-n irredundant generating sequences.
/// Positive membership always comes from an explicit search; incidence lists
/// depend only on the cyclic subgroup generated by an element and cyclic
/// subgroups of one order are conjugate, so a single representative per order
/// decides membership exactly. Orders confined to a lone maximal subgroup
/// (order p, and orders above 5 dividing p+1) can never appear from length 3
/// on and are skipped rather than searched.
inline std::set<uint32_t> compute_iota(const MaximalCensus& census, uint32_t n,
                                       uint64_t budget = kDefaultStepBudget,
                                       bool allow_shortcut = true) {
  const GroupContext& ctx = census.ctx();
  if (n < 1 || n > 4) throw DomainError("iota is only defined here for lengths 1 to 4");
  if (n == 1) return {};  // the group is not cyclic

  uint32_t p = ctx.p();
  std::map<uint32_t, uint32_t> rep_of_order;  // order -> least element index
  for (uint32_t i = 0; i < ctx.size(); ++i)
    rep_of_order.try_emplace(ctx.order_of(i), i);
  rep_of_order.erase(1);

  std::set<uint32_t> out;
  if (n == 2) {
    for (auto [o, x] : rep_of_order)
      if (detail::pair_through(census, x)) out.insert(o);
    return out;
  }

  if (n == 3) {
    if (p <= 13) {
      // Small enough for the full unfiltered sweep.
      for_each_irredundant_generating_set(census, 3, std::nullopt, budget,
                                          [&](const std::vector<uint32_t>& s) {
                                            for (uint32_t e : s) out.insert(ctx.order_of(e));
                                            return true;
                                          });
      return out;
    }
    for (auto [o, x] : rep_of_order) {
      if (o == p) continue;               // confined to one Borel subgroup
      if (o > 5 && (p + 1) % o == 0) continue;  // confined to one dihedral
      if (detail::triple_through(census, x, budget)) out.insert(o);
    }
    return out;
  }

  MResult mr = compute_m(census, allow_shortcut, budget);
  if (mr.m < 4) return {};
  std::optional<std::set<uint32_t>> filter;
  if (p > 13) filter = std::set<uint32_t>{2, 3};
  for_each_irredundant_generating_set(census, 4, filter, budget,
                                      [&](const std::vector<uint32_t>& s) {
                                        for (uint32_t e : s) out.insert(ctx.order_of(e));
                                        return true;
                                      });
  return out;
}

/// Smallest position where g can stand in for the current entry without
/// losing generation.
inline std::optional<uint32_t> replacement_holds_for(const GroupContext& ctx,
                                                     const GenSequence& seq, uint32_t g) {
  if (g == ctx.identity_index())
    throw DomainError("the identity is not an admissible replacement");
  if (!generates(ctx, seq)) throw DomainError("replacement asks for a generating sequence");
  std::vector<uint32_t> probe = seq.elements;
  for (size_t i = 0; i < probe.size(); ++i) {
    uint32_t kept = probe[i];
    probe[i] = g;
    bool ok = generates_indices(ctx, probe);
    probe[i] = kept;
    if (ok) return static_cast<uint32_t>(i);
  }
  return std::nullopt;
}

struct ReplacementCheck {
  bool holds = false;
  std::optional<uint32_t> failing_element;  // g that no position accepts
  bool fast_path = false;                   // every family intersected trivially
};

/// A nonidentity g can only obstruct replacement when it lies inside every
/// member of some corresponding maximal family, so those intersections are
/// the only candidates worth testing.
inline ReplacementCheck sequence_satisfies_replacement(const GroupContext& ctx,
                                                       const MaximalCensus& census,
                                                       const GenSequence& seq) {
  if (!generates(ctx, seq) || !is_irredundant(ctx, seq))
    throw DomainError("replacement verdicts require an irredundant generating sequence");
  std::set<uint32_t> candidates;
  for (const MaximalFamily& fam : corresponding_maximal_families(ctx, census, seq)) {
    Subgroup cut = fam.subgroups[0];
    for (size_t i = 1; i < fam.subgroups.size(); ++i)
      cut = intersect(ctx, cut, fam.subgroups[i]);
    for (uint32_t e : cut.member_list)
      if (e != ctx.identity_index()) candidates.insert(e);
  }
  if (candidates.empty()) return {true, std::nullopt, true};
  for (uint32_t g : candidates)
    if (!replacement_holds_for(ctx, seq, g)) return {false, g, false};
  return {true, std::nullopt, false};
}

}  // namespace psl2
