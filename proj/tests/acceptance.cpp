// Acceptance gate: eight independent checks over the whole library, one
// verdict line each, exit code = number of failures. Pass the presentations
// directory as argv[1] (default "presentations"). Every check recomputes
// from scratch; nothing is read from cached results files.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "psl2/field.hpp"
#include "psl2/fpgroup_tools.hpp"
#include "psl2/genseq.hpp"
#include "psl2/glue_sweep.hpp"
#include "psl2/group.hpp"
#include "psl2/subgroup.hpp"
#include "psl2/todd_coxeter.hpp"
#include "psl2/witness.hpp"
#include "psl2/word.hpp"

using namespace psl2;

namespace {

std::string g_pres_dir = "presentations";

struct Gate {
  int failures = 0;
  std::vector<std::string> notes;

  void note(std::string s) { notes.push_back(std::move(s)); }
  void verdict(int n, bool ok, const std::string& summary, double seconds) {
    std::ostringstream line;
    line << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " - " << summary << " ("
         << static_cast<int>(seconds * 10) / 10.0 << " s)";
    std::cout << line.str() << '\n';
    for (const auto& s : notes) std::cout << "    " << s << '\n';
    std::cout.flush();
    notes.clear();
    if (!ok) ++failures;
  }
};

struct Bundle {
  GroupContext ctx;
  std::optional<MaximalCensus> census_;

  explicit Bundle(uint32_t p) : ctx(Prime::make(p)) {
    if (psl2_order(ctx.prime()) <= 3500) ctx.build_mult_table();
  }
  const MaximalCensus& census() {
    if (!census_) census_.emplace(ctx);
    return *census_;
  }
};

Bundle& bundle(uint32_t p) {
  static std::map<uint32_t, std::unique_ptr<Bundle>> cache;
  auto& slot = cache[p];
  if (!slot) slot = std::make_unique<Bundle>(p);
  return *slot;
}

const std::vector<std::vector<uint32_t>>& collected(uint32_t p, bool filtered) {
  static std::map<std::pair<uint32_t, bool>, std::vector<std::vector<uint32_t>>> cache;
  auto key = std::make_pair(p, filtered);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::optional<std::set<uint32_t>> filter;
    if (filtered) filter = std::set<uint32_t>{2, 3};
    it = cache.emplace(key, collect_irredundant_sets(bundle(p).census(), 4, filter)).first;
  }
  return it->second;
}

std::set<std::vector<std::string>> family_names(const std::set<std::vector<DicksonType>>& fams) {
  std::set<std::vector<std::string>> rows;
  for (const auto& fam : fams) {
    std::vector<std::string> row;
    for (DicksonType t : fam) row.push_back(to_string(t));
    std::sort(row.begin(), row.end());
    rows.insert(std::move(row));
  }
  return rows;
}

std::string join_orders(const std::set<uint32_t>& s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (uint32_t v : s) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
  out << '}';
  return out.str();
}

S4Triple worked_triple() {
  return {Perm<4>{{0, 2, 1, 3}}, Perm<4>{{3, 1, 2, 0}}, Perm<4>{{1, 0, 2, 3}}};
}

// 1. Table reproduction at p = 7, 11, 19, 31.
bool criterion1(Gate& g) {
  struct Expect {
    uint32_t p;
    uint64_t sets, cc, ac;
    std::set<uint32_t> orders;
    std::set<std::vector<std::string>> fams;
  };
  const std::vector<Expect> want = {
      {7, 252, 2, 2, {2}, {{"S4", "S4", "S4", "S4"}}},
      {11,
       11935,
       22,
       14,
       {2, 3},
       {{"A5", "A5", "A5", "A5"}, {"A5", "A5", "A5", "D12"}, {"A5", "A5", "D12", "D12"}}},
      {19,
       7695,
       4,
       3,
       {2},
       {{"A5", "A5", "A5", "A5"}, {"A5", "A5", "A5", "D20"}, {"A5", "A5", "D20", "D20"}}},
      {31, 14880, 1, 1, {2}, {{"A5", "A5", "S4", "S4"}}},
  };
  bool ok = true;
  for (const auto& w : want) {
    auto t0 = std::chrono::steady_clock::now();
    EnumerationReport rep =
        enumerate_irredundant_sets(bundle(w.p).census(), 4, std::set<uint32_t>{2, 3});
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool here = rep.count_sets == w.sets && rep.conjugacy_classes == w.cc &&
                rep.automorphism_classes == w.ac && rep.element_orders == w.orders &&
                family_names(rep.maximal_families) == w.fams;
    std::ostringstream note;
    note << "p = " << w.p << ": " << rep.count_sets << " sets, " << rep.conjugacy_classes
         << " classes, " << rep.automorphism_classes << " up to automorphism, orders "
         << join_orders(rep.element_orders) << " (" << static_cast<int>(dt * 10) / 10.0 << " s)"
         << (here ? "" : "  [MISMATCH]");
    g.note(note.str());
    ok = ok && here;
  }
  return ok;
}

// 2. m(G) by exhaustive search through p = 31, shortcut allowed at 37.
bool criterion2(Gate& g) {
  const std::map<uint32_t, uint32_t> want = {{7, 4},  {11, 4}, {13, 3}, {17, 3}, {19, 4},
                                             {23, 3}, {29, 3}, {31, 4}, {37, 3}};
  bool ok = true;
  std::ostringstream line;
  for (const auto& [p, m] : want) {
    bool allow = p > 31;
    MResult r = compute_m(bundle(p).census(), allow);
    bool here = r.m == m && r.used_shortcut == allow;
    line.str("");
    line << "m(PSL(2," << p << ")) = " << r.m
         << (r.used_shortcut ? " via congruence shortcut" : " by full search")
         << (here ? "" : "  [MISMATCH]");
    g.note(line.str());
    ok = ok && here;
  }
  return ok;
}

// 3. Coset enumeration fixtures, code-built and file-parsed.
bool criterion3(Gate& g) {
  bool ok = true;
  auto check = [&](const std::string& name, const Presentation& pres, uint64_t order) {
    TCResult res = todd_coxeter(pres, {}, 1'000'000);
    bool here = res.is_finite() && res.index == order;
    if (!here)
      g.note(name + ": expected order " + std::to_string(order) + ", got " +
             (res.is_finite() ? std::to_string(res.index) : std::string("overflow")));
    ok = ok && here;
    return here;
  };

  Presentation rs;
  rs.generator_count = 3;
  rs.names = {"x1", "x2", "x3"};
  rs.relators = s4_triple_relators(worked_triple());
  check("marked-triple relators", rs, 24);

  std::vector<Word> r = rs.relators;
  Presentation glued = gluing_presentation(1, {r, r, r, r});
  check("all-equal four-fold gluing", glued, 6);

  const std::vector<std::pair<std::string, uint64_t>> files = {
      {"s3", 6}, {"a4", 12}, {"s4", 24}, {"a5", 60}, {"s4_worked", 24}};
  for (const auto& [name, order] : files) {
    std::ifstream in(g_pres_dir + "/" + name + ".pres");
    if (!in) {
      g.note(name + ".pres: cannot open under " + g_pres_dir);
      ok = false;
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    check(name + ".pres", parse_presentation(buf.str()), order);
  }

  TCResult affine = todd_coxeter(coxeter_presentation(affine_a3_matrix()), {}, 1'000'000);
  if (affine.is_finite()) {
    g.note("affine A3: closed unexpectedly at " + std::to_string(affine.index));
    ok = false;
  }
  g.note("orders 24, 6, 6, 12, 24, 60, 24; affine A3 overflows at the 10^6 cap");
  return ok;
}

// 4. Full gluing sweeps. Case 1 must stay at or below 192 unless the affine
// A3 matrix shows up; terminating case 2 and 3 quotients must stay under
// 1344 strictly.
bool criterion4(Gate& g) {
  GlueSweeper sweeper;
  SweepOptions opts;
  uint64_t last = 0;
  opts.progress = [&last](uint64_t done, uint64_t total) {
    if (done == total || done - last >= 262144) {
      std::cerr << "sweep: " << done << "/" << total << '\n';
      last = done;
    }
  };

  SweepSummary s1 = run_glue_sweep(1, sweeper, opts);
  bool c1 = s1.complete() && s1.max_finite_order <= 192;
  std::vector<uint64_t> over1;
  for (const auto& o : s1.overflows) {
    over1.push_back(o.index);
    c1 = c1 && o.pattern == GluePattern::AffineA3;
  }
  GlueTask probe = glue_task_at(1, 5883);
  auto detected = detect_coxeter_subset(sweeper.presentation(probe).relators);
  c1 = c1 && over1 == std::vector<uint64_t>{5883, 202623, 572394} && detected &&
       *detected == affine_a3_matrix();
  {
    std::ostringstream note;
    note << "case 1: " << s1.finite << " of " << s1.total << " finite, max "
         << s1.max_finite_order << "; " << s1.overflow
         << " overflows, each matching the affine A3 matrix"
         << (c1 ? "" : "  [MISMATCH]");
    g.note(note.str());
  }

  auto bound_case = [&](int glue_case) {
    SweepSummary s = run_glue_sweep(glue_case, sweeper, opts);
    uint64_t at_max = s.order_histogram.count(s.max_finite_order)
                          ? s.order_histogram.at(s.max_finite_order)
                          : 0;
    uint64_t next = 0;
    for (const auto& [order, count] : s.order_histogram)
      if (order < s.max_finite_order) next = std::max(next, order);
    bool strict = s.complete() && s.max_finite_order < 1344;
    std::ostringstream note;
    note << "case " << glue_case << ": " << s.finite << " of " << s.total << " terminate";
    if (s.overflow) note << ", " << s.overflow << " overflow";
    note << "; largest quotient " << s.max_finite_order << " at " << at_max
         << " tasks, next largest " << next;
    if (!strict && s.max_finite_order == 1344)
      note << "; the strict bound < 1344 fails by equality, nothing exceeds it";
    g.note(note.str());
    return strict;
  };
  bool c2 = bound_case(2);
  bool c3 = bound_case(3);
  return c1 && c2 && c3;
}

// 5. Replacement property: exhaustive at p = 7, class representatives at
// p = 11, explicit failure witnesses for p = 1 mod 8 up to 97.
bool criterion5(Gate& g) {
  bool ok = true;

  auto check_sets = [&](uint32_t p, bool reps_only) {
    Bundle& b = bundle(p);
    const auto& sets = collected(p, false);
    std::vector<uint32_t> targets;
    if (reps_only) {
      targets = classify_set_orbits(b.ctx, sets).reps;
    } else {
      targets.resize(sets.size());
      for (uint32_t i = 0; i < sets.size(); ++i) targets[i] = i;
    }
    uint64_t holds = 0;
    for (uint32_t idx : targets) {
      GenSequence seq{sets[idx], {}, {}};
      if (sequence_satisfies_replacement(b.ctx, b.census(), seq).holds) ++holds;
    }
    std::ostringstream note;
    note << "p = " << p << ": replacement holds for " << holds << " of " << targets.size()
         << (reps_only ? " class representatives" : " length-4 sets");
    g.note(note.str());
    return holds == targets.size();
  };
  ok = check_sets(7, false) && ok;
  ok = check_sets(11, true) && ok;

  for (uint32_t p : {17u, 41u, 73u, 89u, 97u}) {
    auto t0 = std::chrono::steady_clock::now();
    Prime P = Prime::make(p);
    ReplacementWitness wit = build_replacement_witness(P);
    Bundle& b = bundle(p);
    VerificationRecord ver = verify_replacement_witness(b.ctx, wit);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool here = wit.verdict.passed && ver.passed && ver.claim_ok("w cannot replace any entry") &&
                dt < 60.0;
    std::ostringstream note;
    note << "witness p = " << p << ": " << (ver.passed ? "verified" : "FAILED") << ", "
         << ver.items.size() << " claims, replacement failure exhibited ("
         << static_cast<int>(dt * 10) / 10.0 << " s)";
    g.note(note.str());
    ok = ok && here;
  }
  return ok;
}

// 6. Iota properties for p <= 13.
bool criterion6(Gate& g) {
  bool ok = true;
  for (uint32_t p : {5u, 7u, 11u, 13u}) {
    Bundle& b = bundle(p);
    const MaximalCensus& census = b.census();

    std::set<uint32_t> spectrum;
    for (uint32_t i = 0; i < b.ctx.size(); ++i)
      if (i != b.ctx.identity_index()) spectrum.insert(b.ctx.order_of(i));

    std::set<uint32_t> i1 = compute_iota(census, 1);
    std::set<uint32_t> i2 = compute_iota(census, 2);
    std::set<uint32_t> i3 = compute_iota(census, 3);

    bool here = i1.empty() && i2 == spectrum;
    here = here && i3.count(2) == 1 && i3.count(p) == 0;
    for (uint32_t d = 2; d <= (p - 1) / 2; ++d)
      if ((p - 1) / 2 % d == 0) here = here && i3.count(d) == 1;
    for (uint32_t d = 6; d <= p + 1; ++d)
      if ((p + 1) % d == 0) here = here && i3.count(d) == 0;

    g.note("p = " + std::to_string(p) + ": iota_1 = {}, iota_2 = " + join_orders(i2) +
           ", iota_3 = " + join_orders(i3) + (here ? "" : "  [MISMATCH]"));
    ok = ok && here;
  }
  const std::map<uint32_t, std::set<uint32_t>> want4 = {
      {7, {2}}, {11, {2, 3}}, {13, {}}};
  for (const auto& [p, expect] : want4) {
    std::set<uint32_t> i4 = compute_iota(bundle(p).census(), 4);
    bool here = i4 == expect;
    g.note("iota_4(PSL(2," + std::to_string(p) + ")) = " + join_orders(i4) +
           (here ? "" : "  [MISMATCH]"));
    ok = ok && here;
  }
  return ok;
}

// 7. Construction identities at p = 13 and p = 17. The witness matrices need
// a square root of 2, which 13 lacks, so their identities are pinned at 17;
// the equal-order triple identities run at both primes.
bool criterion7(Gate& g) {
  bool ok = true;

  Prime P17 = Prime::make(17);
  ReplacementWitness wit = build_replacement_witness(P17);
  // The matrix identities are recorded at build time; the group-level record
  // from verify_replacement_witness is checked under criterion 5.
  for (const char* claim : {"AW = -WA", "tr(WCWA) = -s - 2ir",
                            "tr([WA,WC]) = 2s^2 + 4isr - 3r^2", "tr(AB) = 2/3"}) {
    bool here = wit.verdict.claim_ok(claim);
    if (!here) g.note(std::string("p = 17 witness claim failed: ") + claim);
    ok = ok && here;
  }
  // At p = 17 the constant 2/3 equals -8i/3 because -8i = -32 = 2 mod 17.
  uint32_t minus_8i_over_3 = P17.neg(P17.mul(8, P17.mul(wit.i_unit, P17.inv(3))));
  Mat ab = mat_mul(wit.A, wit.B, P17);
  bool tr_ab = mat_trace(ab, P17) == minus_8i_over_3;
  if (!tr_ab) g.note("tr(AB) != -8i/3 at p = 17");
  ok = ok && tr_ab;
  g.note("p = 17: AW = -WA, tr(WCWA) = -s-2ir, tr([WA,WC]) = 2s^2+4isr-3r^2, tr(AB) = -8i/3");

  for (uint32_t p : {13u, 17u}) {
    Prime P = Prime::make(p);
    EqualOrderTriple t = build_equal_order_triple(P);
    VerificationRecord tv = verify_equal_order_triple(bundle(p).ctx, t);
    bool here = tv.claim_ok("(BC)^n matches the closed form for n = 1..p") &&
                tv.claim_ok("(BC)^(x^2) = CB") && tv.passed;
    g.note("p = " + std::to_string(p) + ": (BC)^n closed form for n <= " + std::to_string(p) +
           ", (BC)^(x^2) = CB" + (here ? "" : "  [MISMATCH]"));
    ok = ok && here;
  }
  return ok;
}

// 8. Oracle agreement: pruning changes nothing at small p, and both coset
// enumeration strategies close the same fixtures at the same index.
bool criterion8(Gate& g) {
  bool ok = true;
  for (uint32_t p : {5u, 7u, 11u}) {
    const auto& pruned = collected(p, true);
    const auto& brute = collected(p, false);
    EnumerationReport a = enumerate_irredundant_sets(bundle(p).census(), 4, std::set<uint32_t>{2, 3});
    EnumerationReport b = enumerate_irredundant_sets(bundle(p).census(), 4);
    bool here = pruned == brute && a.count_sets == b.count_sets &&
                a.conjugacy_classes == b.conjugacy_classes &&
                a.automorphism_classes == b.automorphism_classes &&
                a.element_orders == b.element_orders &&
                a.maximal_families == b.maximal_families;
    g.note("p = " + std::to_string(p) + ": pruned and brute-force enumerations agree on " +
           std::to_string(brute.size()) + " sets" + (here ? "" : "  [MISMATCH]"));
    ok = ok && here;
  }

  Presentation rs;
  rs.generator_count = 3;
  rs.names = {"x1", "x2", "x3"};
  rs.relators = s4_triple_relators(worked_triple());
  std::vector<Word> r = rs.relators;
  std::vector<std::pair<std::string, Presentation>> fixtures = {
      {"marked-triple relators", rs},
      {"all-equal gluing", gluing_presentation(1, {r, r, r, r})},
  };
  for (const char* name : {"s3", "a4", "s4", "a5", "s4_worked"}) {
    std::ifstream in(g_pres_dir + "/" + name + ".pres");
    std::ostringstream buf;
    buf << in.rdbuf();
    fixtures.emplace_back(std::string(name) + ".pres", parse_presentation(buf.str()));
  }
  uint64_t agreed = 0;
  for (const auto& [name, pres] : fixtures) {
    TCResult hlt = todd_coxeter(pres, {}, 1'000'000, TCStrategy::HLT);
    TCResult fel = todd_coxeter(pres, {}, 1'000'000, TCStrategy::Felsch);
    bool here = hlt.is_finite() && fel.is_finite() && hlt.index == fel.index;
    if (!here) g.note(name + ": strategies disagree");
    ok = ok && here;
    agreed += here;
  }
  g.note("HLT and Felsch agree on " + std::to_string(agreed) + " of " +
         std::to_string(fixtures.size()) + " terminating fixtures");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_pres_dir = argv[1];
  Gate gate;
  const std::vector<std::pair<int, bool (*)(Gate&)>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
  };
  const std::map<int, std::string> summaries = {
      {1, "classification tables at p = 7, 11, 19, 31"},
      {2, "m(G) for the nine primes through 37"},
      {3, "coset enumeration fixtures"},
      {4, "gluing sweeps and quotient bounds"},
      {5, "replacement verdicts and failure witnesses"},
      {6, "iota properties through p = 13"},
      {7, "construction identities at p = 13 and 17"},
      {8, "pruning and strategy oracle agreement"},
  };
  for (const auto& [n, fn] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = fn(gate);
    } catch (const std::exception& e) {
      gate.note(std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    gate.verdict(n, ok, summaries.at(n), dt);
  }
  std::cout << "acceptance: " << (8 - gate.failures) << "/8 criteria pass\n";
  return gate.failures;
}
