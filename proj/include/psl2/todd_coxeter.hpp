#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "psl2/common.hpp"
#include "psl2/word.hpp"

namespace psl2 {

enum class TCStrategy { HLT, Felsch };

/// Coset enumeration outcome. Overflow means the live-coset cap was hit
/// before the table closed; it is a value, not an error, and proves nothing
/// about infiniteness.
struct TCResult {
  enum class Kind { Finite, Overflow } kind = Kind::Overflow;
  uint64_t index = 0;        // subgroup index; valid when kind == Finite
  uint64_t max_live = 0;     // peak live cosets seen
  uint64_t total_defined = 0;

  bool is_finite() const { return kind == Kind::Finite; }
  static TCResult finite(uint64_t idx, uint64_t peak, uint64_t defined) {
    return {Kind::Finite, idx, peak, defined};
  }
  static TCResult overflow(uint64_t peak, uint64_t defined) {
    return {Kind::Overflow, 0, peak, defined};
  }
};

/// Todd-Coxeter coset table over generators g_0..g_{n-1}; column 2i is g_i,
/// column 2i+1 is its inverse. Coincidences are handled by a union-find over
/// coset ids plus a processing queue, and dead rows are reclaimed by
/// order-preserving compaction.
class CosetTable {
 public:
  CosetTable(uint32_t ngens, uint64_t max_cosets)
      : ngens_(ngens), ncols_(2 * ngens), max_cosets_(max_cosets) {
    check(ngens > 0, "coset table needs at least one generator");
    check(max_cosets >= 1, "max_cosets must be >= 1");
    if (max_cosets > 1'000'000'000) throw CapacityError("max_cosets exceeds table id range");
    new_row();
    live_ = 1;
    max_live_ = 1;
    total_defined_ = 1;
  }

  uint32_t ngens() const { return ngens_; }
  uint64_t live_count() const { return live_; }
  uint64_t allocated() const { return rep_.size(); }
  bool is_live(uint32_t c) const { return rep_[c] == c; }
  int32_t entry(uint32_t coset, uint32_t col) const { return tab_[size_t(coset) * ncols_ + col]; }

  bool closed() const {
    for (uint32_t c = 0; c < rep_.size(); ++c) {
      if (!is_live(c)) continue;
      for (uint32_t col = 0; col < ncols_; ++col)
        if (entry(c, col) < 0) return false;
    }
    return true;
  }

  /// Entry/inverse-entry agreement on live rows; all targets live.
  bool consistent() const {
    for (uint32_t c = 0; c < rep_.size(); ++c) {
      if (!is_live(c)) continue;
      for (uint32_t col = 0; col < ncols_; ++col) {
        int32_t d = entry(c, col);
        if (d < 0) continue;
        if (!is_live(uint32_t(d))) return false;
        if (entry(uint32_t(d), col ^ 1) != int32_t(c)) return false;
      }
    }
    return true;
  }

  /// Trace a word from a coset through defined entries; -1 if it runs off the
  /// table. Useful for tests on a closed table.
  int64_t trace(uint32_t coset, const Word& w) const {
    int64_t c = coset;
    for (const Letter& l : w.letters) {
      c = entry(uint32_t(c), col_of(l));
      if (c < 0) return -1;
    }
    return c;
  }

  TCResult enumerate(const Presentation& pres, const std::vector<Word>& subgroup_words,
                     TCStrategy strategy) {
    pres.validate();
    relator_cols_.clear();
    for (const Word& r : pres.relators) {
      std::vector<uint32_t> cols = to_cols(free_reduce(r));
      if (!cols.empty()) relator_cols_.push_back(std::move(cols));
    }
    subgroup_cols_.clear();
    for (const Word& w : subgroup_words) {
      std::vector<uint32_t> cols = to_cols(free_reduce(w));
      if (!cols.empty()) subgroup_cols_.push_back(std::move(cols));
    }
    overflowed_ = false;
    if (strategy == TCStrategy::HLT)
      run_hlt();
    else
      run_felsch();
    if (overflowed_) return TCResult::overflow(max_live_, total_defined_);
    return TCResult::finite(live_, max_live_, total_defined_);
  }

 private:
  static uint32_t col_of(const Letter& l) { return 2 * l.gen + (l.exp < 0 ? 1 : 0); }

  std::vector<uint32_t> to_cols(const Word& w) const {
    std::vector<uint32_t> cols;
    cols.reserve(w.size());
    for (const Letter& l : w.letters) {
      check(l.gen < ngens_, "word letter out of generator range");
      cols.push_back(col_of(l));
    }
    return cols;
  }

  void new_row() {
    tab_.resize(tab_.size() + ncols_, -1);
    rep_.push_back(static_cast<uint32_t>(rep_.size()));
  }

  int32_t& slot(uint32_t coset, uint32_t col) { return tab_[size_t(coset) * ncols_ + col]; }

  uint32_t find(uint32_t c) {
    while (rep_[c] != c) {
      rep_[c] = rep_[rep_[c]];
      c = rep_[c];
    }
    return c;
  }

  // Returns UINT32_MAX when the live cap is reached (overflow).
  uint32_t define(uint32_t from, uint32_t col) {
    if (live_ >= max_cosets_) return UINT32_MAX;
    uint32_t fresh = static_cast<uint32_t>(rep_.size());
    new_row();
    slot(from, col) = int32_t(fresh);
    slot(fresh, col ^ 1) = int32_t(from);
    ++live_;
    ++total_defined_;
    ++mutations_;
    max_live_ = std::max(max_live_, live_);
    return fresh;
  }

  void merge(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    rep_[b] = a;
    --live_;
    ++mutations_;
    queue_.push_back(b);
  }

  void coincidence(uint32_t a, uint32_t b) {
    queue_.clear();
    merge(a, b);
    for (size_t qi = 0; qi < queue_.size(); ++qi) {
      uint32_t dead = queue_[qi];
      for (uint32_t col = 0; col < ncols_; ++col) {
        int32_t d = slot(dead, col);
        if (d < 0) continue;
        slot(dead, col) = -1;
        if (slot(uint32_t(d), col ^ 1) == int32_t(dead)) slot(uint32_t(d), col ^ 1) = -1;
        uint32_t mu = find(dead);
        uint32_t nu = find(uint32_t(d));
        int32_t at_mu = slot(mu, col);
        if (at_mu >= 0) {
          merge(nu, uint32_t(at_mu));
        } else {
          int32_t at_nu = slot(nu, col ^ 1);
          if (at_nu >= 0) {
            merge(mu, uint32_t(at_nu));
          } else {
            slot(mu, col) = int32_t(nu);
            slot(nu, col ^ 1) = int32_t(mu);
            ++mutations_;
          }
        }
      }
    }
    queue_.clear();
  }

  enum class ScanOutcome { Closed, Incomplete, Overflow, CosetDied };

  // Scans a relator (or subgroup word) at a coset. With fill, defines cosets
  // to force closure; without, applies only deductions and coincidences.
  ScanOutcome scan(uint32_t alpha, const std::vector<uint32_t>& cols, bool fill) {
    for (;;) {
      uint32_t f = alpha;
      size_t i = 0;
      const size_t len = cols.size();
      while (i < len) {
        int32_t n = slot(f, cols[i]);
        if (n < 0) break;
        f = uint32_t(n);
        ++i;
      }
      if (i == len) {
        if (f != alpha) {
          coincidence(f, alpha);
          if (find(alpha) != alpha) return ScanOutcome::CosetDied;
        }
        return ScanOutcome::Closed;
      }
      uint32_t b = alpha;
      size_t j = len - 1;
      while (j > i) {
        int32_t n = slot(b, cols[j] ^ 1);
        if (n < 0) break;
        b = uint32_t(n);
        --j;
      }
      if (j == i) {
        int32_t back = slot(b, cols[i] ^ 1);
        if (back < 0) {
          // Deduction: the single gap closes without new cosets.
          slot(f, cols[i]) = int32_t(b);
          slot(b, cols[i] ^ 1) = int32_t(f);
          ++mutations_;
          return ScanOutcome::Closed;
        }
        // Both sides defined but the forward scan stopped, so f * cols[i] is
        // undefined while back leads to b: fill the hole as a coincidence.
        coincidence(f, uint32_t(back));
        if (find(alpha) != alpha) return ScanOutcome::CosetDied;
        continue;  // rescan from scratch
      }
      if (!fill) return ScanOutcome::Incomplete;
      uint32_t fresh = define(f, cols[i]);
      if (fresh == UINT32_MAX) return ScanOutcome::Overflow;
      // Loop continues: forward scan will pass through the new coset.
    }
  }

  // One deduction/coincidence pass over all relators at all live cosets.
  // Returns true if anything changed (a deduction, a merge, or a re-filled
  // entry all count).
  bool lookahead_pass() {
    uint64_t before = mutations_;
    for (uint32_t c = 0; c < rep_.size(); ++c) {
      if (!is_live(c)) continue;
      for (const auto& cols : relator_cols_) {
        if (scan(c, cols, false) == ScanOutcome::CosetDied) break;
      }
    }
    return mutations_ != before;
  }

  void compact(uint32_t& cursor) {
    std::vector<uint32_t> remap(rep_.size(), UINT32_MAX);
    uint32_t next = 0;
    uint32_t new_cursor = 0;
    for (uint32_t c = 0; c < rep_.size(); ++c) {
      if (c == cursor) new_cursor = next;
      if (is_live(c)) remap[c] = next++;
    }
    if (cursor >= rep_.size()) new_cursor = next;
    std::vector<int32_t> ntab(size_t(next) * ncols_, -1);
    for (uint32_t c = 0; c < rep_.size(); ++c) {
      if (remap[c] == UINT32_MAX) continue;
      for (uint32_t col = 0; col < ncols_; ++col) {
        int32_t d = entry(c, col);
        if (d >= 0) ntab[size_t(remap[c]) * ncols_ + col] = int32_t(remap[uint32_t(d)]);
      }
    }
    tab_ = std::move(ntab);
    rep_.resize(next);
    for (uint32_t c = 0; c < next; ++c) rep_[c] = c;
    cursor = new_cursor;
  }

  void run_hlt() {
    for (const auto& cols : subgroup_cols_) {
      ScanOutcome out = scan(0, cols, true);
      if (out == ScanOutcome::Overflow) {
        overflowed_ = !try_lookahead_then(0, cols);
        if (overflowed_) return;
      }
    }
    uint32_t alpha = 0;
    uint64_t last_lookahead_live = UINT64_MAX;
    while (alpha < rep_.size()) {
      if (!is_live(alpha)) {
        ++alpha;
        continue;
      }
      bool died = false;
      for (const auto& cols : relator_cols_) {
        ScanOutcome out = scan(alpha, cols, true);
        if (out == ScanOutcome::Overflow) {
          if (live_ == last_lookahead_live || !lookahead_pass()) {
            overflowed_ = true;
            return;
          }
          last_lookahead_live = live_;
          out = scan(find(alpha), cols, true);
          if (out == ScanOutcome::Overflow) {
            overflowed_ = true;
            return;
          }
        }
        if (find(alpha) != alpha) {
          died = true;
          break;
        }
      }
      if (!died) {
        for (uint32_t col = 0; col < ncols_ && is_live(alpha); ++col) {
          if (slot(alpha, col) >= 0) continue;
          uint32_t fresh = define(alpha, col);
          if (fresh == UINT32_MAX) {
            if (live_ == last_lookahead_live || !lookahead_pass()) {
              overflowed_ = true;
              return;
            }
            last_lookahead_live = live_;
            if (is_live(alpha) && slot(alpha, col) < 0 && define(alpha, col) == UINT32_MAX) {
              overflowed_ = true;
              return;
            }
          }
        }
      }
      ++alpha;
      if (rep_.size() > 2 * live_ + 4096) compact(alpha);
    }
  }

  bool try_lookahead_then(uint32_t coset, const std::vector<uint32_t>& cols) {
    if (!lookahead_pass()) return false;
    return scan(find(coset), cols, true) != ScanOutcome::Overflow;
  }

  void run_felsch() {
    for (const auto& cols : subgroup_cols_) {
      if (scan(0, cols, true) == ScanOutcome::Overflow) {
        overflowed_ = true;
        return;
      }
    }
    for (;;) {
      while (lookahead_pass()) {
      }
      uint32_t target = UINT32_MAX, col = 0;
      for (uint32_t c = 0; c < rep_.size() && target == UINT32_MAX; ++c) {
        if (!is_live(c)) continue;
        for (uint32_t k = 0; k < ncols_; ++k) {
          if (slot(c, k) < 0) {
            target = c;
            col = k;
            break;
          }
        }
      }
      if (target == UINT32_MAX) return;  // closed
      if (define(target, col) == UINT32_MAX) {
        overflowed_ = true;
        return;
      }
    }
  }

  uint32_t ngens_;
  uint32_t ncols_;
  uint64_t max_cosets_;
  uint64_t live_ = 0;
  uint64_t max_live_ = 0;
  uint64_t total_defined_ = 0;
  uint64_t mutations_ = 0;
  bool overflowed_ = false;
  std::vector<int32_t> tab_;
  std::vector<uint32_t> rep_;
  std::vector<uint32_t> queue_;
  std::vector<std::vector<uint32_t>> relator_cols_;
  std::vector<std::vector<uint32_t>> subgroup_cols_;
};

/// Enumerates cosets of the subgroup generated by subgroup_words in the
/// presented group. Finite(k) means index k; with no subgroup words, k is the
/// group order.
inline TCResult todd_coxeter(const Presentation& pres, const std::vector<Word>& subgroup_words,
                             uint64_t max_cosets, TCStrategy strategy = TCStrategy::HLT) {
  if (max_cosets < 1) throw DomainError("max_cosets must be >= 1");
  CosetTable table(pres.generator_count, max_cosets);
  return table.enumerate(pres, subgroup_words, strategy);
}

}  // namespace psl2
