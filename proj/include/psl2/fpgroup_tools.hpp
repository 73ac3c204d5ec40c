#pragma once

// Tools layered on the coset enumerator: Coxeter matrices and their
// presentations, recovering a Coxeter shape from a relator set, turning a
// multiplication table into relators, the irredundant generating triples of
// S4, and the glued four-generator presentations built from them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "psl2/common.hpp"
#include "psl2/perm.hpp"
#include "psl2/todd_coxeter.hpp"
#include "psl2/word.hpp"

namespace psl2 {

namespace detail {

// Order words by length first, then by (gen, exp) lexicographically.
// Deterministic output ordering everywhere relies on this.
inline bool word_less(const Word& a, const Word& b) {
  if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
  for (std::size_t i = 0; i < a.letters.size(); ++i) {
    const Letter &x = a.letters[i], &y = b.letters[i];
    if (x.gen != y.gen) return x.gen < y.gen;
    if (x.exp != y.exp) return x.exp < y.exp;
  }
  return false;
}

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Coxeter matrices
// ---------------------------------------------------------------------------

// Symmetric matrix of pairwise orders. Diagonal entries are 1 (the standard
// convention: m_ii is the order of x_i^2 = 1, i.e. each generator is an
// involution); some sources display the diagonal as 2 instead. Off-diagonal
// entries are >= 2, with 0 standing for infinity (no relation on the pair).
struct CoxeterMatrix {
  uint32_t n = 0;
  std::vector<uint32_t> m;  // row-major n*n

  CoxeterMatrix() = default;
  explicit CoxeterMatrix(uint32_t size) : n(size), m(size * size, 2) {
    for (uint32_t i = 0; i < n; ++i) m[i * n + i] = 1;
  }

  uint32_t get(uint32_t i, uint32_t j) const { return m[i * n + j]; }

  void set(uint32_t i, uint32_t j, uint32_t v) {
    m[i * n + j] = v;
    m[j * n + i] = v;
  }

  void validate() const {
    if (n == 0 || m.size() != static_cast<std::size_t>(n) * n)
      throw DomainError("CoxeterMatrix: bad dimensions");
    for (uint32_t i = 0; i < n; ++i) {
      if (get(i, i) != 1) throw DomainError("CoxeterMatrix: diagonal must be 1");
      for (uint32_t j = i + 1; j < n; ++j) {
        if (get(i, j) != get(j, i)) throw DomainError("CoxeterMatrix: not symmetric");
        if (get(i, j) == 1) throw DomainError("CoxeterMatrix: off-diagonal entry 1");
      }
    }
  }

  friend bool operator==(const CoxeterMatrix&, const CoxeterMatrix&) = default;
};

// The affine A3 diagram: a 4-cycle with every edge labelled 3 and both
// diagonals 2. The corresponding Coxeter group is Z^3 : S4, hence infinite
// and solvable.
inline CoxeterMatrix affine_a3_matrix() {
  CoxeterMatrix mat(4);
  mat.set(0, 1, 3);
  mat.set(1, 2, 3);
  mat.set(2, 3, 3);
  mat.set(3, 0, 3);
  mat.set(0, 2, 2);
  mat.set(1, 3, 2);
  return mat;
}

// A 4-cycle with two adjacent edges labelled 4 and the remaining two 3;
// diagonals 2. Also infinite and solvable (abelian-by-S4).
inline CoxeterMatrix cycle_4433_matrix() {
  CoxeterMatrix mat(4);
  mat.set(0, 1, 4);
  mat.set(1, 2, 4);
  mat.set(2, 3, 3);
  mat.set(3, 0, 3);
  mat.set(0, 2, 2);
  mat.set(1, 3, 2);
  return mat;
}

// Standard Coxeter presentation: x_i^2 for every generator and
// (x_i x_j)^{m_ij} for every pair with a finite label.
inline Presentation coxeter_presentation(const CoxeterMatrix& mat) {
  mat.validate();
  Presentation pres;
  pres.generator_count = mat.n;
  pres.names = default_names(mat.n);
  for (uint32_t i = 0; i < mat.n; ++i)
    pres.relators.push_back(word_pow(make_word({static_cast<int32_t>(i + 1)}), 2));
  for (uint32_t i = 0; i < mat.n; ++i)
    for (uint32_t j = i + 1; j < mat.n; ++j) {
      uint32_t k = mat.get(i, j);
      if (k == 0) continue;  // infinity: no relation
      Word pair = make_word({static_cast<int32_t>(i + 1), static_cast<int32_t>(j + 1)});
      pres.relators.push_back(word_pow(pair, k));
    }
  pres.validate();
  return pres;
}

namespace detail {

// If the freely reduced word is (x_i x_j)^k with i != j (either orientation,
// either sign), report {i, j, k}.
inline std::optional<std::array<uint32_t, 3>> alternating_pair_power(const Word& w) {
  const auto& ls = w.letters;
  if (ls.size() < 2 || ls.size() % 2 != 0) return std::nullopt;
  uint32_t a = ls[0].gen, b = ls[1].gen;
  if (a == b) return std::nullopt;
  int32_t sign = ls[0].exp;
  for (std::size_t t = 0; t < ls.size(); ++t) {
    if (ls[t].exp != sign) return std::nullopt;
    if (ls[t].gen != (t % 2 == 0 ? a : b)) return std::nullopt;
  }
  uint32_t k = static_cast<uint32_t>(ls.size() / 2);
  return std::array<uint32_t, 3>{std::min(a, b), std::max(a, b), k};
}

}  // namespace detail

// Looks for a full Coxeter shape inside a relator set: every generator must
// have its square among the relators and every pair of generators a relator
// freely equal to (x_i x_j)^k. Returns the matrix of minimal such k, or
// nothing if any square or pair relator is missing.
inline std::optional<CoxeterMatrix> detect_coxeter_subset(const std::vector<Word>& relators) {
  uint32_t n = 0;
  for (const Word& w : relators)
    for (const Letter& l : w.letters) n = std::max(n, l.gen + 1);
  if (n == 0) return std::nullopt;

  std::vector<bool> square(n, false);
  std::vector<uint32_t> best(static_cast<std::size_t>(n) * n, 0);
  for (const Word& raw : relators) {
    Word w = free_reduce(raw);
    if (w.letters.size() == 2 && w.letters[0].gen == w.letters[1].gen &&
        w.letters[0].exp == w.letters[1].exp) {
      square[w.letters[0].gen] = true;
      continue;
    }
    if (auto hit = detail::alternating_pair_power(w)) {
      auto [i, j, k] = *hit;
      uint32_t& slot = best[i * n + j];
      if (slot == 0 || k < slot) slot = k;
    }
  }

  for (uint32_t i = 0; i < n; ++i)
    if (!square[i]) return std::nullopt;
  CoxeterMatrix mat(n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) {
      uint32_t k = best[i * n + j];
      if (k < 2) return std::nullopt;  // missing pair relator, or a collapse
      mat.set(i, j, k);
    }
  return mat;
}

// True when some relabelling of the generators carries one matrix onto the
// other. Brute force over permutations; fine for the n = 4 uses here.
inline bool coxeter_equivalent(const CoxeterMatrix& a, const CoxeterMatrix& b) {
  if (a.n != b.n) return false;
  std::vector<uint32_t> sigma(a.n);
  for (uint32_t i = 0; i < a.n; ++i) sigma[i] = i;
  do {
    bool ok = true;
    for (uint32_t i = 0; i < a.n && ok; ++i)
      for (uint32_t j = i + 1; j < a.n && ok; ++j)
        if (a.get(i, j) != b.get(sigma[i], sigma[j])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

// ---------------------------------------------------------------------------
// Relators from a multiplication table
// ---------------------------------------------------------------------------

// Encodes a concrete finite group as relators on abstract generators
// x_1..x_k, one per supplied generator. Every element is assigned a shortest
// positive word (breadth-first, generator order breaking ties) and each table
// entry w_i * w_j = w_k contributes the relator w_i w_j w_k^-1. Generator and
// pair orders are always included, so the output visibly contains the
// (x_i x_j)^k relators the Coxeter-shape detector looks for. The optional
// reduction pass greedily drops table relators whose omission leaves the
// enumerated order unchanged (checked by a capped coset enumeration); it
// never drops the order relators.
inline std::vector<Word> relators_from_table(
    uint64_t group_order, const std::function<uint32_t(uint32_t, uint32_t)>& multiply,
    const std::vector<uint32_t>& gens, bool minimize = true, uint32_t minimize_max_cosets = 0) {
  if (group_order == 0) throw DomainError("relators_from_table: empty group");
  if (gens.empty()) throw DomainError("relators_from_table: no generators");
  const uint32_t k = static_cast<uint32_t>(gens.size());

  // The identity is g^(order of g): walk powers of the first generator until
  // the cycle closes.
  uint32_t identity = gens[0];
  {
    uint32_t x = gens[0];
    uint64_t steps = 0;
    while (true) {
      uint32_t next = multiply(x, gens[0]);
      if (next == gens[0]) {
        identity = x;
        break;
      }
      x = next;
      if (++steps > group_order) throw DomainError("relators_from_table: oracle does not cycle");
    }
  }

  auto element_order = [&](uint32_t g) {
    uint32_t x = g, ord = 1;
    while (x != identity) {
      x = multiply(x, g);
      ++ord;
      if (ord > group_order) throw DomainError("relators_from_table: oracle does not cycle");
    }
    return ord;
  };

  // Breadth-first closure from the identity; words[i] is the canonical
  // shortest word for elements[i].
  std::vector<uint32_t> elements{identity};
  std::vector<Word> words{Word{}};
  std::unordered_map<uint32_t, uint32_t> index{{identity, 0}};
  for (uint32_t head = 0; head < elements.size(); ++head) {
    for (uint32_t j = 0; j < k; ++j) {
      uint32_t t = multiply(elements[head], gens[j]);
      if (index.contains(t)) continue;
      if (elements.size() == group_order)
        throw DomainError("relators_from_table: closure exceeds the stated order");
      index.emplace(t, static_cast<uint32_t>(elements.size()));
      elements.push_back(t);
      Word w = words[head];
      w.letters.push_back(Letter{j, 1});
      words.push_back(std::move(w));
    }
  }
  if (elements.size() != group_order)
    throw DomainError("relators_from_table: generators do not generate the group");

  // Order relators for generators and generator pairs; these are kept
  // through minimization.
  std::vector<Word> protected_rels;
  std::set<Word, detail::WordLess> seen;
  auto add_protected = [&](const Word& w) {
    Word r = free_reduce(w);
    if (r.empty()) return;
    if (seen.insert(r).second) protected_rels.push_back(r);
  };
  for (uint32_t j = 0; j < k; ++j)
    add_protected(word_pow(make_word({static_cast<int32_t>(j + 1)}), element_order(gens[j])));
  for (uint32_t a = 0; a < k; ++a)
    for (uint32_t b = a + 1; b < k; ++b) {
      uint32_t prod = multiply(gens[a], gens[b]);
      Word pair = make_word({static_cast<int32_t>(a + 1), static_cast<int32_t>(b + 1)});
      add_protected(word_pow(pair, element_order(prod)));
    }

  // The table itself: w_i w_j w_t^-1 for every product.
  std::vector<Word> table_rels;
  for (uint32_t i = 0; i < group_order; ++i)
    for (uint32_t j = 0; j < group_order; ++j) {
      uint32_t t = index.at(multiply(elements[i], elements[j]));
      Word r = free_reduce(word_mul(word_mul(words[i], words[j]), word_inverse(words[t])));
      if (r.empty()) continue;
      if (seen.insert(r).second) table_rels.push_back(r);
    }
  std::sort(table_rels.begin(), table_rels.end(), detail::word_less);

  if (minimize) {
    uint32_t cap = minimize_max_cosets;
    if (cap == 0)
      cap = static_cast<uint32_t>(std::min<uint64_t>(group_order * 64 + 4096, 1u << 24));
    Presentation trial;
    trial.generator_count = k;
    trial.names = default_names(k);
    // Longest first: long table relators are the ones the short ones imply.
    std::vector<Word> order(table_rels.rbegin(), table_rels.rend());
    std::vector<bool> dropped(order.size(), false);
    for (std::size_t c = 0; c < order.size(); ++c) {
      trial.relators = protected_rels;
      for (std::size_t t = 0; t < order.size(); ++t)
        if (t != c && !dropped[t]) trial.relators.push_back(order[t]);
      TCResult res = todd_coxeter(trial, {}, cap);
      if (res.is_finite() && res.index == group_order) dropped[c] = true;
    }
    std::vector<Word> kept;
    for (std::size_t t = 0; t < order.size(); ++t)
      if (!dropped[t]) kept.push_back(order[t]);
    std::sort(kept.begin(), kept.end(), detail::word_less);
    table_rels = std::move(kept);
  }

  std::vector<Word> out = protected_rels;
  out.insert(out.end(), table_rels.begin(), table_rels.end());
  return out;
}

// ---------------------------------------------------------------------------
// Irredundant generating triples of S4
// ---------------------------------------------------------------------------

using S4Triple = std::array<Perm<4>, 3>;

namespace detail {

struct S4Data {
  std::vector<Perm<4>> all;                  // rank order
  std::array<std::array<uint8_t, 24>, 24> mul{};  // rank multiplication table
  std::vector<S4Triple> triples;             // lex order by ranks
  std::vector<uint32_t> triple_ranks;        // packed a*576 + b*24 + c per triple
  std::vector<uint32_t> class_of;            // orbit id under conjugation
  std::vector<uint32_t> class_rep;           // lex-least triple index per orbit
};

inline const S4Data& s4_data() {
  static const S4Data data = [] {
    S4Data d;
    d.all = symmetric_group<4>();
    for (uint32_t i = 0; i < 24; ++i)
      for (uint32_t j = 0; j < 24; ++j)
        d.mul[i][j] = static_cast<uint8_t>(perm_rank(d.all[i] * d.all[j]));

    constexpr uint32_t kFull = 0xFFFFFF;  // all 24 rank bits
    auto closure = [&](std::initializer_list<uint32_t> gens) {
      uint32_t mask = 1u;  // identity has rank 0
      std::vector<uint8_t> stack;
      for (uint32_t g : gens)
        if (!(mask & (1u << g))) {
          mask |= 1u << g;
          stack.push_back(static_cast<uint8_t>(g));
        }
      while (!stack.empty()) {
        uint8_t x = stack.back();
        stack.pop_back();
        for (uint32_t g : gens) {
          uint8_t y = d.mul[x][g];
          if (!(mask & (1u << y))) {
            mask |= 1u << y;
            stack.push_back(y);
          }
        }
      }
      return mask;
    };

    std::array<std::array<uint32_t, 24>, 24> pair_mask{};
    for (uint32_t a = 0; a < 24; ++a)
      for (uint32_t b = a; b < 24; ++b) {
        pair_mask[a][b] = closure({a, b});
        pair_mask[b][a] = pair_mask[a][b];
      }

    for (uint32_t a = 0; a < 24; ++a)
      for (uint32_t b = 0; b < 24; ++b) {
        if (pair_mask[a][b] == kFull) continue;  // some pair already generates
        for (uint32_t c = 0; c < 24; ++c) {
          if (pair_mask[a][c] == kFull || pair_mask[b][c] == kFull) continue;
          if (closure({a, b, c}) != kFull) continue;
          d.triples.push_back(S4Triple{d.all[a], d.all[b], d.all[c]});
          d.triple_ranks.push_back(a * 576 + b * 24 + c);
        }
      }

    // Orbits under simultaneous conjugation; Aut(S4) is inner.
    std::vector<int32_t> at(13824, -1);
    for (uint32_t t = 0; t < d.triples.size(); ++t) at[d.triple_ranks[t]] = static_cast<int32_t>(t);
    std::array<uint8_t, 24> inv{};
    for (uint32_t g = 0; g < 24; ++g) inv[g] = static_cast<uint8_t>(perm_rank(inverse(d.all[g])));
    d.class_of.assign(d.triples.size(), UINT32_MAX);
    for (uint32_t t = 0; t < d.triples.size(); ++t) {
      if (d.class_of[t] != UINT32_MAX) continue;
      uint32_t cls = static_cast<uint32_t>(d.class_rep.size());
      d.class_rep.push_back(t);
      uint32_t packed = d.triple_ranks[t];
      uint32_t a = packed / 576, b = (packed / 24) % 24, c = packed % 24;
      for (uint32_t g = 0; g < 24; ++g) {
        uint32_t ca = d.mul[d.mul[g][a]][inv[g]];
        uint32_t cb = d.mul[d.mul[g][b]][inv[g]];
        uint32_t cc = d.mul[d.mul[g][c]][inv[g]];
        int32_t u = at[ca * 576 + cb * 24 + cc];
        check(u >= 0, "conjugate of a generating triple must be one");
        check(d.class_of[u] == UINT32_MAX || d.class_of[u] == cls,
              "triple orbits must be disjoint");
        d.class_of[u] = cls;
      }
    }
    return d;
  }();
  return data;
}

}  // namespace detail

// All ordered irredundant generating triples of S4, lexicographic by the
// ranks of the three entries.
inline const std::vector<S4Triple>& s4_generating_triples() { return detail::s4_data().triples; }

// Orbit labels for the triples under simultaneous conjugation (= all of
// Aut(S4)): class_of[i] identifies the orbit of triple i, class_rep lists the
// lex-least member of each orbit. Relator sets built from a triple depend
// only on its orbit.
struct S4TripleClasses {
  const std::vector<uint32_t>& class_of;
  const std::vector<uint32_t>& class_rep;
};

inline S4TripleClasses s4_triple_classes() {
  const auto& d = detail::s4_data();
  return S4TripleClasses{d.class_of, d.class_rep};
}

// Relators for an S4 triple on abstract generators x1, x2, x3.
inline std::vector<Word> s4_triple_relators(const S4Triple& s, bool minimize = true) {
  const auto& d = detail::s4_data();
  auto mul = [&](uint32_t a, uint32_t b) { return static_cast<uint32_t>(d.mul[a][b]); };
  std::vector<uint32_t> gens;
  for (const Perm<4>& g : s) gens.push_back(perm_rank(g));
  return relators_from_table(24, mul, gens, minimize);
}

// ---------------------------------------------------------------------------
// Glued presentations
// ---------------------------------------------------------------------------

// An imposed order for the product of two of the four glued generators.
struct PairOrder {
  uint32_t i = 0, j = 0;  // zero-based generator indices, i < j
  uint32_t order = 2;

  friend bool operator==(const PairOrder&, const PairOrder&) = default;
};

// Builds the four-generator presentation for the maximal-subgroup gluing
// cases. Every generator is an involution. rs_sets are relator sets on three
// abstract generators (as produced by s4_triple_relators); each is renamed
// into the quadruple at the case's hole positions:
//   case 1: four sets at (x1,x2,x3), (x1,x2,x4), (x1,x3,x4), (x2,x3,x4)
//   case 2: three sets at (x1,x2,x4), (x1,x3,x4), (x2,x3,x4); extra gives the
//           orders of x1x2, x1x3, x2x3, each 2, 3 or 4, with at most one 3
//           and at most one 4
//   case 3: two sets at (x1,x3,x4), (x2,x3,x4); x1 and x2 commute, so
//           (x1x2)^2 is always included (extra may restate it, nothing else)
inline Presentation gluing_presentation(int glue_case,
                                        const std::vector<std::vector<Word>>& rs_sets,
                                        const std::vector<PairOrder>& extra = {}) {
  static const std::vector<std::array<uint32_t, 3>> kCase1{
      {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  static const std::vector<std::array<uint32_t, 3>> kCase2{{0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  static const std::vector<std::array<uint32_t, 3>> kCase3{{0, 2, 3}, {1, 2, 3}};

  const std::vector<std::array<uint32_t, 3>>* holes = nullptr;
  switch (glue_case) {
    case 1: holes = &kCase1; break;
    case 2: holes = &kCase2; break;
    case 3: holes = &kCase3; break;
    default: throw DomainError("gluing_presentation: case must be 1, 2 or 3");
  }
  if (rs_sets.size() != holes->size())
    throw DomainError("gluing_presentation: arity mismatch between case and relator sets");

  std::vector<PairOrder> pair_orders;
  if (glue_case == 1) {
    if (!extra.empty()) throw DomainError("gluing_presentation: case 1 takes no extra constraints");
  } else if (glue_case == 2) {
    // Exactly the three pairs among x1, x2, x3, each once.
    std::vector<PairOrder> want{{0, 1, 0}, {0, 2, 0}, {1, 2, 0}};
    if (extra.size() != 3)
      throw DomainError("gluing_presentation: case 2 needs orders for the three glued pairs");
    uint32_t threes = 0, fours = 0;
    for (const PairOrder& po : extra) {
      bool matched = false;
      for (PairOrder& w : want)
        if (w.order == 0 && w.i == po.i && w.j == po.j) {
          w.order = po.order;
          matched = true;
          break;
        }
      if (!matched) throw DomainError("gluing_presentation: case 2 pair constraints malformed");
      if (po.order != 2 && po.order != 3 && po.order != 4)
        throw DomainError("gluing_presentation: pair order must be 2, 3 or 4");
      threes += po.order == 3;
      fours += po.order == 4;
    }
    if (threes > 1) throw DomainError("gluing_presentation: at most one glued pair may have order 3");
    if (fours > 1) throw DomainError("gluing_presentation: at most one glued pair may have order 4");
    pair_orders = want;
  } else {
    pair_orders.push_back(PairOrder{0, 1, 2});
    if (!extra.empty() && extra != pair_orders)
      throw DomainError("gluing_presentation: case 3 admits only the commuting-pair constraint");
  }

  Presentation pres;
  pres.generator_count = 4;
  pres.names = default_names(4);
  std::set<Word, detail::WordLess> seen;
  auto add = [&](const Word& w) {
    Word r = free_reduce(w);
    if (r.empty()) return;
    if (seen.insert(r).second) pres.relators.push_back(r);
  };

  for (uint32_t i = 0; i < 4; ++i)
    add(word_pow(make_word({static_cast<int32_t>(i + 1)}), 2));
  for (std::size_t s = 0; s < rs_sets.size(); ++s) {
    const auto& hole = (*holes)[s];
    for (const Word& w : rs_sets[s]) {
      Word renamed = w;
      for (Letter& l : renamed.letters) {
        if (l.gen >= 3)
          throw DomainError("gluing_presentation: relator sets must use three generators");
        l.gen = hole[l.gen];
      }
      add(renamed);
    }
  }
  for (const PairOrder& po : pair_orders) {
    Word pair = make_word({static_cast<int32_t>(po.i + 1), static_cast<int32_t>(po.j + 1)});
    add(word_pow(pair, po.order));
  }
  pres.validate();
  return pres;
}

}  // namespace psl2
