#pragma once

// Exhaustive sweeps over the glued four-generator presentations. Relator sets
// depend only on the conjugacy class of the triple they come from, so the
// sweep spaces factor through class ids: 37^4 quadruples for case 1, 37^3
// times the 13 admissible pair-order assignments for case 2, 37^2 pairs for
// case 3. Tasks are numbered deterministically, outcomes stream to a JSONL
// results file that a later run can resume from.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "psl2/common.hpp"
#include "psl2/fpgroup_tools.hpp"
#include "psl2/todd_coxeter.hpp"

namespace psl2 {

// Stage 1 is generous for groups this small (nothing terminating needs more
// than a few thousand live cosets); stage 2 is the budget spent before an
// unrecognized presentation is reported as overflowing.
inline constexpr uint32_t kGlueStage1Cap = 20'000;
inline constexpr uint32_t kGlueStage2Cap = 1'000'000;

// ---------------------------------------------------------------------------
// Task numbering
// ---------------------------------------------------------------------------

// One presentation to enumerate. cls holds triple-class ids (case 1 uses all
// four, case 2 the first three, case 3 the first two); orders is the case-2
// assignment for the products x1x2, x1x3, x2x3.
struct GlueTask {
  int glue_case = 1;
  std::array<uint32_t, 4> cls{};
  std::array<uint32_t, 3> orders{};

  friend bool operator==(const GlueTask&, const GlueTask&) = default;
};

// The 13 pair-order assignments allowed in case 2 (values in {2,3,4}, at most
// one 3, at most one 4), in lexicographic order.
inline const std::vector<std::array<uint32_t, 3>>& case2_pair_assignments() {
  static const std::vector<std::array<uint32_t, 3>> table = [] {
    std::vector<std::array<uint32_t, 3>> out;
    for (uint32_t a : {2u, 3u, 4u})
      for (uint32_t b : {2u, 3u, 4u})
        for (uint32_t c : {2u, 3u, 4u}) {
          uint32_t threes = (a == 3) + (b == 3) + (c == 3);
          uint32_t fours = (a == 4) + (b == 4) + (c == 4);
          if (threes <= 1 && fours <= 1) out.push_back({a, b, c});
        }
    return out;
  }();
  return table;
}

namespace detail {

inline uint32_t glue_class_count() {
  return static_cast<uint32_t>(s4_triple_classes().class_rep.size());
}

inline void require_glue_case(int glue_case) {
  if (glue_case < 1 || glue_case > 3) throw DomainError("glue sweep: case must be 1, 2 or 3");
}

}  // namespace detail

inline uint64_t glue_task_count(int glue_case) {
  detail::require_glue_case(glue_case);
  uint64_t c = detail::glue_class_count();
  if (glue_case == 1) return c * c * c * c;
  if (glue_case == 2) return c * c * c * case2_pair_assignments().size();
  return c * c;
}

// Mixed-radix decoding: class ids are big-endian base-37 digits, with the
// case-2 assignment as the least significant digit.
inline GlueTask glue_task_at(int glue_case, uint64_t index) {
  if (index >= glue_task_count(glue_case)) throw DomainError("glue sweep: task index out of range");
  const uint64_t c = detail::glue_class_count();
  GlueTask t;
  t.glue_case = glue_case;
  if (glue_case == 2) {
    const auto& assigns = case2_pair_assignments();
    t.orders = assigns[index % assigns.size()];
    index /= assigns.size();
  }
  int digits = glue_case == 1 ? 4 : (glue_case == 2 ? 3 : 2);
  for (int d = digits - 1; d >= 0; --d) {
    t.cls[static_cast<std::size_t>(d)] = static_cast<uint32_t>(index % c);
    index /= c;
  }
  return t;
}

inline uint64_t glue_task_index(const GlueTask& t) {
  detail::require_glue_case(t.glue_case);
  const uint64_t c = detail::glue_class_count();
  int digits = t.glue_case == 1 ? 4 : (t.glue_case == 2 ? 3 : 2);
  uint64_t index = 0;
  for (int d = 0; d < digits; ++d) {
    uint32_t cls = t.cls[static_cast<std::size_t>(d)];
    if (cls >= c) throw DomainError("glue sweep: class id out of range");
    index = index * c + cls;
  }
  if (t.glue_case == 2) {
    const auto& assigns = case2_pair_assignments();
    auto it = std::find(assigns.begin(), assigns.end(), t.orders);
    if (it == assigns.end()) throw DomainError("glue sweep: pair orders are not an admissible assignment");
    index = index * assigns.size() + static_cast<uint64_t>(it - assigns.begin());
  }
  return index;
}

// ---------------------------------------------------------------------------
// Running one task
// ---------------------------------------------------------------------------

// Shape detected on the relators of an overflowing presentation. AffineA3 and
// Cycle4433 are the two solvable configurations; OtherMatrix means a full
// Coxeter subset was present but matched neither, None that some pair had no
// power relator at all.
enum class GluePattern : uint8_t { None, AffineA3, Cycle4433, OtherMatrix };

inline const char* to_string(GluePattern p) {
  switch (p) {
    case GluePattern::AffineA3: return "affine-a3";
    case GluePattern::Cycle4433: return "cycle-4433";
    case GluePattern::OtherMatrix: return "matrix";
    default: return "none";
  }
}

inline std::optional<GluePattern> glue_pattern_from(std::string_view name) {
  for (GluePattern p : {GluePattern::None, GluePattern::AffineA3, GluePattern::Cycle4433,
                        GluePattern::OtherMatrix})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

struct GlueOutcome {
  uint64_t index = 0;
  bool finite = false;
  uint64_t order = 0;                        // valid when finite
  GluePattern pattern = GluePattern::None;   // meaningful when !finite
  bool escalated = false;                    // diagnostic only, not persisted

  friend bool operator==(const GlueOutcome&, const GlueOutcome&) = default;
};

// Caches the 37 class-representative relator sets (building them runs a
// relator-minimization enumeration per class) and runs single tasks.
class GlueSweeper {
 public:
  GlueSweeper() {
    auto classes = s4_triple_classes();
    const auto& triples = s4_generating_triples();
    for (uint32_t rep : classes.class_rep) rs_.push_back(s4_triple_relators(triples[rep]));
    a3_ = affine_a3_matrix();
    c4433_ = cycle_4433_matrix();
  }

  uint32_t class_count() const { return static_cast<uint32_t>(rs_.size()); }
  const std::vector<Word>& class_relators(uint32_t cls) const {
    if (cls >= rs_.size()) throw DomainError("glue sweep: class id out of range");
    return rs_[cls];
  }

  Presentation presentation(const GlueTask& t) const {
    detail::require_glue_case(t.glue_case);
    if (t.glue_case == 1)
      return gluing_presentation(1, {rel(t, 0), rel(t, 1), rel(t, 2), rel(t, 3)});
    if (t.glue_case == 2)
      return gluing_presentation(2, {rel(t, 0), rel(t, 1), rel(t, 2)},
                                 {PairOrder{0, 1, t.orders[0]}, PairOrder{0, 2, t.orders[1]},
                                  PairOrder{1, 2, t.orders[2]}});
    return gluing_presentation(3, {rel(t, 0), rel(t, 1)});
  }

  // Two-stage protocol. Overflow at stage 1 followed by one of the two known
  // solvable Coxeter shapes is recorded as such (the shape, not infiniteness,
  // is what the argument needs); anything unrecognized gets the stage-2
  // budget before being reported as overflowing.
  GlueOutcome run(const GlueTask& t, uint32_t stage1_cap = kGlueStage1Cap,
                  uint32_t stage2_cap = kGlueStage2Cap) const {
    Presentation pres = presentation(t);
    GlueOutcome out;
    out.index = glue_task_index(t);
    TCResult res = todd_coxeter(pres, {}, stage1_cap);
    if (!res.is_finite()) {
      std::optional<CoxeterMatrix> det = detect_coxeter_subset(pres.relators);
      if (det && coxeter_equivalent(*det, a3_)) {
        out.pattern = GluePattern::AffineA3;
      } else if (det && coxeter_equivalent(*det, c4433_)) {
        out.pattern = GluePattern::Cycle4433;
      } else {
        out.escalated = true;
        res = todd_coxeter(pres, {}, stage2_cap);
        if (!res.is_finite()) out.pattern = det ? GluePattern::OtherMatrix : GluePattern::None;
      }
    }
    if (res.is_finite()) {
      out.finite = true;
      out.order = res.index;
      out.pattern = GluePattern::None;
    }
    return out;
  }

 private:
  const std::vector<Word>& rel(const GlueTask& t, std::size_t hole) const {
    uint32_t cls = t.cls[hole];
    if (cls >= rs_.size()) throw DomainError("glue sweep: class id out of range");
    return rs_[cls];
  }

  std::vector<std::vector<Word>> rs_;
  CoxeterMatrix a3_, c4433_;
};

// ---------------------------------------------------------------------------
// Results file
// ---------------------------------------------------------------------------

// Line 1 is a header binding the file to a case and cap protocol; every other
// line is one outcome. Finite: {"i":N,"n":order}. Overflow:
// {"i":N,"pattern":name}. Keys serialize alphabetically, so re-runs are
// byte-identical.

inline std::string sweep_header_line(int glue_case, uint32_t stage1_cap, uint32_t stage2_cap) {
  nlohmann::json j;
  j["case"] = glue_case;
  j["items"] = glue_task_count(glue_case);
  j["stage1"] = stage1_cap;
  j["stage2"] = stage2_cap;
  j["v"] = 1;
  return j.dump();
}

inline std::string sweep_outcome_line(const GlueOutcome& o) {
  nlohmann::json j;
  j["i"] = o.index;
  if (o.finite)
    j["n"] = o.order;
  else
    j["pattern"] = to_string(o.pattern);
  return j.dump();
}

struct SweepFile {
  int glue_case = 0;
  uint32_t stage1_cap = 0;
  uint32_t stage2_cap = 0;
  std::vector<GlueOutcome> records;
};

// Reads a results file back. A truncated final line (interrupted run) is
// dropped; anything malformed before that is an error.
inline SweepFile load_sweep_file(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("sweep file: missing header");
  nlohmann::json h = nlohmann::json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object() || !h.contains("case") || !h.contains("items") ||
      !h.contains("stage1") || !h.contains("stage2") || h.value("v", 0) != 1)
    throw DomainError("sweep file: malformed header");
  SweepFile f;
  f.glue_case = h["case"].get<int>();
  detail::require_glue_case(f.glue_case);
  f.stage1_cap = h["stage1"].get<uint32_t>();
  f.stage2_cap = h["stage2"].get<uint32_t>();
  uint64_t items = h["items"].get<uint64_t>();
  if (items != glue_task_count(f.glue_case)) throw DomainError("sweep file: item count mismatch");

  bool more = true;
  while (more && std::getline(in, line)) {
    more = !in.eof();  // a line without trailing newline is the truncated tail
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      if (!more) break;  // interrupted mid-write; redo that task on resume
      throw DomainError("sweep file: malformed record line");
    }
    if (!j.is_object() || !j.contains("i")) throw DomainError("sweep file: malformed record line");
    GlueOutcome rec;
    rec.index = j["i"].get<uint64_t>();
    if (rec.index >= items) throw DomainError("sweep file: record index out of range");
    if (j.contains("n")) {
      rec.finite = true;
      rec.order = j["n"].get<uint64_t>();
    } else {
      auto p = glue_pattern_from(j.value("pattern", ""));
      if (!p) throw DomainError("sweep file: unknown overflow pattern");
      rec.pattern = *p;
    }
    f.records.push_back(rec);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

struct SweepOptions {
  uint32_t stage1_cap = kGlueStage1Cap;
  uint32_t stage2_cap = kGlueStage2Cap;
  uint32_t threads = 1;
  uint64_t limit = 0;  // stop after this many new enumerations; 0 = run to completion
  std::function<void(uint64_t, uint64_t)> progress;  // (completed, total), rate-limited
};

struct SweepSummary {
  int glue_case = 0;
  uint64_t total = 0;
  uint64_t completed = 0;
  uint64_t finite = 0;
  uint64_t overflow = 0;
  uint64_t max_finite_order = 0;
  std::map<uint64_t, uint64_t> order_histogram;
  std::vector<GlueOutcome> overflows;  // ascending index

  bool complete() const { return completed == total; }
};

namespace detail {

inline void merge_outcome(SweepSummary& s, const GlueOutcome& rec) {
  ++s.completed;
  if (rec.finite) {
    ++s.finite;
    ++s.order_histogram[rec.order];
    s.max_finite_order = std::max(s.max_finite_order, rec.order);
  } else {
    ++s.overflow;
    s.overflows.push_back(rec);
  }
}

}  // namespace detail

// Runs every task of the case not already covered by `already` (records from
// a prior run; replayed into the summary, never re-enumerated). New outcomes
// are appended to `append` in ascending task order regardless of thread
// count, so the results file is deterministic.
inline SweepSummary run_glue_sweep(int glue_case, const GlueSweeper& sweeper,
                                   const SweepOptions& opts = {},
                                   const std::vector<GlueOutcome>& already = {},
                                   std::ostream* append = nullptr) {
  const uint64_t total = glue_task_count(glue_case);
  SweepSummary summary;
  summary.glue_case = glue_case;
  summary.total = total;

  std::vector<bool> done(total, false);
  for (const GlueOutcome& rec : already) {
    if (rec.index >= total) throw DomainError("glue sweep: record index out of range");
    if (done[rec.index]) continue;  // duplicate line; first one wins
    done[rec.index] = true;
    detail::merge_outcome(summary, rec);
  }

  std::vector<uint64_t> todo;
  todo.reserve(total - summary.completed);
  for (uint64_t i = 0; i < total; ++i)
    if (!done[i]) todo.push_back(i);
  if (opts.limit && todo.size() > opts.limit) todo.resize(opts.limit);

  std::atomic<uint64_t> cursor{0};
  std::mutex mu;
  std::map<uint64_t, GlueOutcome> parked;  // out-of-order completions, by todo position
  uint64_t flush_pos = 0;

  auto worker = [&] {
    for (;;) {
      uint64_t pos = cursor.fetch_add(1);
      if (pos >= todo.size()) return;
      GlueOutcome rec =
          sweeper.run(glue_task_at(glue_case, todo[pos]), opts.stage1_cap, opts.stage2_cap);
      std::lock_guard<std::mutex> lock(mu);
      detail::merge_outcome(summary, rec);
      if (append) {
        parked.emplace(pos, rec);
        while (!parked.empty() && parked.begin()->first == flush_pos) {
          *append << sweep_outcome_line(parked.begin()->second) << '\n';
          parked.erase(parked.begin());
          ++flush_pos;
        }
      }
      if (opts.progress && (summary.completed % 1024 == 0 || summary.completed == total))
        opts.progress(summary.completed, total);
    }
  };

  uint32_t nthreads = std::max(1u, opts.threads);
  if (nthreads == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (uint32_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (append) append->flush();

  std::sort(summary.overflows.begin(), summary.overflows.end(),
            [](const GlueOutcome& a, const GlueOutcome& b) { return a.index < b.index; });
  return summary;
}

}  // namespace psl2
