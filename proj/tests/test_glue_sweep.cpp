#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "psl2/fpgroup_tools.hpp"
#include "psl2/glue_sweep.hpp"
#include "psl2/perm.hpp"
#include "psl2/todd_coxeter.hpp"

using namespace psl2;

namespace {

// Building the 37 relator sets costs a relator-minimization pass per class;
// share one sweeper across the whole file.
const GlueSweeper& sweeper() {
  static const GlueSweeper sw;
  return sw;
}

GlueTask task1(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return GlueTask{1, {a, b, c, d}, {}};
}

GlueTask task3(uint32_t a, uint32_t b) { return GlueTask{3, {a, b, 0, 0}, {}}; }

}  // namespace

TEST_CASE("task numbering round-trips") {
  REQUIRE(glue_task_count(1) == 1874161);  // 37^4
  REQUIRE(glue_task_count(2) == 658489);   // 37^3 * 13
  REQUIRE(glue_task_count(3) == 1369);     // 37^2

  const auto& assigns = case2_pair_assignments();
  REQUIRE(assigns.size() == 13);
  REQUIRE(std::is_sorted(assigns.begin(), assigns.end()));
  REQUIRE(assigns.front() == std::array<uint32_t, 3>{2, 2, 2});
  REQUIRE(assigns.back() == std::array<uint32_t, 3>{4, 3, 2});
  for (const auto& a : assigns) {
    REQUIRE(std::count(a.begin(), a.end(), 3u) <= 1);
    REQUIRE(std::count(a.begin(), a.end(), 4u) <= 1);
    for (uint32_t v : a) REQUIRE((v >= 2 && v <= 4));
  }

  for (int glue_case : {1, 2, 3}) {
    uint64_t n = glue_task_count(glue_case);
    for (uint64_t idx : {uint64_t{0}, uint64_t{1}, n / 2, n - 1, uint64_t{12345} % n}) {
      GlueTask t = glue_task_at(glue_case, idx);
      REQUIRE(t.glue_case == glue_case);
      REQUIRE(glue_task_index(t) == idx);
    }
    REQUIRE_THROWS_AS(glue_task_at(glue_case, n), DomainError);
  }
  REQUIRE_THROWS_AS(glue_task_at(0, 0), DomainError);
  REQUIRE_THROWS_AS(glue_task_at(4, 0), DomainError);
  REQUIRE_THROWS_AS(glue_task_index(task1(37, 0, 0, 0)), DomainError);
  REQUIRE_THROWS_AS(glue_task_index(GlueTask{2, {0, 0, 0, 0}, {3, 3, 2}}), DomainError);

  // decoding is big-endian in the class digits
  GlueTask t = glue_task_at(1, 5883);
  REQUIRE(t.cls == std::array<uint32_t, 4>{0, 4, 11, 0});
  REQUIRE(glue_task_at(3, 152).cls[0] == 4);
  REQUIRE(glue_task_at(3, 152).cls[1] == 4);
}

TEST_CASE("sweeper presentations match the direct construction") {
  const GlueSweeper& sw = sweeper();
  REQUIRE(sw.class_count() == 37);

  auto classes = s4_triple_classes();
  const auto& triples = s4_generating_triples();
  REQUIRE(sw.class_relators(5) == s4_triple_relators(triples[classes.class_rep[5]]));
  REQUIRE_THROWS_AS(sw.class_relators(37), DomainError);

  Presentation direct = gluing_presentation(
      1, {sw.class_relators(0), sw.class_relators(4), sw.class_relators(11), sw.class_relators(0)});
  REQUIRE(sw.presentation(task1(0, 4, 11, 0)).relators == direct.relators);

  GlueTask two{2, {7, 8, 9, 0}, {2, 3, 4}};
  Presentation direct2 =
      gluing_presentation(2, {sw.class_relators(7), sw.class_relators(8), sw.class_relators(9)},
                          {PairOrder{0, 1, 2}, PairOrder{0, 2, 3}, PairOrder{1, 2, 4}});
  REQUIRE(sw.presentation(two).relators == direct2.relators);

  Presentation direct3 = gluing_presentation(3, {sw.class_relators(3), sw.class_relators(35)});
  REQUIRE(sw.presentation(task3(3, 35)).relators == direct3.relators);
}

TEST_CASE("single tasks reproduce the known fixtures") {
  const GlueSweeper& sw = sweeper();

  // the worked all-equal example: s = ((23),(14),(12)) glued at all four holes
  // collapses to order 6
  auto classes = s4_triple_classes();
  const auto& triples = s4_generating_triples();
  S4Triple s{Perm<4>{{0, 2, 1, 3}}, Perm<4>{{3, 1, 2, 0}}, Perm<4>{{1, 0, 2, 3}}};
  auto it = std::find(triples.begin(), triples.end(), s);
  REQUIRE(it != triples.end());
  uint32_t cls = classes.class_of[static_cast<uint32_t>(it - triples.begin())];
  REQUIRE(cls == 11);
  GlueOutcome allequal = sw.run(task1(cls, cls, cls, cls));
  REQUIRE(allequal.finite);
  REQUIRE(allequal.order == 6);

  // the three non-terminating case-1 quadruples; the first detects the
  // affine A3 matrix in its printed arrangement, the others up to relabelling
  for (uint64_t idx : {uint64_t{5883}, uint64_t{202623}, uint64_t{572394}}) {
    GlueOutcome o = sw.run(glue_task_at(1, idx));
    REQUIRE_FALSE(o.finite);
    REQUIRE(o.pattern == GluePattern::AffineA3);
    REQUIRE_FALSE(o.escalated);
  }
  auto det = detect_coxeter_subset(sw.presentation(glue_task_at(1, 5883)).relators);
  REQUIRE(det.has_value());
  REQUIRE(*det == affine_a3_matrix());

  GlueOutcome left = sw.run(glue_task_at(1, 5882));
  GlueOutcome right = sw.run(glue_task_at(1, 5884));
  REQUIRE(left.finite);
  REQUIRE(right.finite);
  REQUIRE(left.order <= 192);
  REQUIRE(right.order <= 192);

  // mixing the two cycle-4433 classes terminates at exactly 1344 under both
  // strategies
  Presentation mixed = sw.presentation(task3(4, 5));
  TCResult hlt = todd_coxeter(mixed, {}, 1000000, TCStrategy::HLT);
  TCResult felsch = todd_coxeter(mixed, {}, 1000000, TCStrategy::Felsch);
  REQUIRE(hlt.is_finite());
  REQUIRE(felsch.is_finite());
  REQUIRE(hlt.index == 1344);
  REQUIRE(felsch.index == 1344);

  // a starved stage 1 escalates to stage 2 and still closes; (0,0) has a
  // Coxeter matrix equivalent to neither solvable shape, so the pattern exit
  // cannot trigger
  GlueOutcome standard = sw.run(task3(0, 0));
  GlueOutcome starved = sw.run(task3(0, 0), 2, kGlueStage2Cap);
  REQUIRE_FALSE(standard.escalated);
  REQUIRE(starved.escalated);
  REQUIRE(starved.finite);
  REQUIRE(starved.order == standard.order);
}

TEST_CASE("full case-3 sweep matches the frozen census") {
  SweepSummary s = run_glue_sweep(3, sweeper());
  REQUIRE(s.glue_case == 3);
  REQUIRE(s.complete());
  REQUIRE(s.completed == 1369);
  REQUIRE(s.finite == 1366);
  REQUIRE(s.overflow == 3);
  REQUIRE(s.max_finite_order == 1344);

  std::map<uint64_t, uint64_t> expected{{1, 544}, {2, 598},  {4, 64},   {6, 102}, {24, 24},
                                        {96, 10}, {120, 6},  {192, 12}, {1344, 6}};
  REQUIRE(s.order_histogram == expected);

  REQUIRE(s.overflows.size() == 3);
  REQUIRE(s.overflows[0].index == 152);  // class 4 with itself
  REQUIRE(s.overflows[0].pattern == GluePattern::AffineA3);
  REQUIRE(s.overflows[1].index == 190);  // class 5 with itself
  REQUIRE(s.overflows[1].pattern == GluePattern::Cycle4433);
  REQUIRE(s.overflows[2].index == 646);  // class 17 with itself
  REQUIRE(s.overflows[2].pattern == GluePattern::Cycle4433);
  for (const GlueOutcome& o : s.overflows) {
    GlueTask t = glue_task_at(3, o.index);
    REQUIRE(t.cls[0] == t.cls[1]);
  }

  // the order-1344 pairs are exactly the off-diagonal mixtures of the three
  // non-terminating classes
  std::vector<uint64_t> big;
  for (uint32_t a : {4u, 5u, 17u})
    for (uint32_t b : {4u, 5u, 17u})
      if (a != b) {
        GlueOutcome o = sweeper().run(task3(a, b));
        REQUIRE(o.finite);
        big.push_back(o.order);
      }
  REQUIRE(big == std::vector<uint64_t>(6, 1344));
}

TEST_CASE("case-2 slices terminate small") {
  SweepOptions opts;
  opts.limit = 5000;
  SweepSummary s = run_glue_sweep(2, sweeper(), opts);
  REQUIRE(s.completed == 5000);
  REQUIRE(s.overflow == 0);
  REQUIRE(s.max_finite_order <= 1344);

  // a known boundary item: classes (0,30,11) with pair orders (3,4,2)
  GlueTask t{2, {0, 30, 11, 0}, {3, 4, 2}};
  GlueOutcome o = sweeper().run(t);
  REQUIRE(o.finite);
  REQUIRE(o.order == 1344);
}

TEST_CASE("results lines have a frozen shape") {
  REQUIRE(sweep_header_line(3, kGlueStage1Cap, kGlueStage2Cap) ==
          R"({"case":3,"items":1369,"stage1":20000,"stage2":1000000,"v":1})");
  GlueOutcome fin{0, true, 24, GluePattern::None, false};
  REQUIRE(sweep_outcome_line(fin) == R"({"i":0,"n":24})");
  GlueOutcome over{152, false, 0, GluePattern::AffineA3, false};
  REQUIRE(sweep_outcome_line(over) == R"({"i":152,"pattern":"affine-a3"})");

  for (GluePattern p : {GluePattern::None, GluePattern::AffineA3, GluePattern::Cycle4433,
                        GluePattern::OtherMatrix})
    REQUIRE(glue_pattern_from(to_string(p)) == p);
  REQUIRE_FALSE(glue_pattern_from("a3").has_value());
}

TEST_CASE("results files round-trip and resume deterministically") {
  const GlueSweeper& sw = sweeper();

  std::ostringstream fresh;
  fresh << sweep_header_line(3, kGlueStage1Cap, kGlueStage2Cap) << '\n';
  SweepSummary s1 = run_glue_sweep(3, sw, {}, {}, &fresh);
  REQUIRE(s1.complete());

  std::istringstream back(fresh.str());
  SweepFile file = load_sweep_file(back);
  REQUIRE(file.glue_case == 3);
  REQUIRE(file.stage1_cap == kGlueStage1Cap);
  REQUIRE(file.stage2_cap == kGlueStage2Cap);
  REQUIRE(file.records.size() == 1369);
  for (uint64_t i = 0; i < file.records.size(); ++i) REQUIRE(file.records[i].index == i);

  // replaying a complete file enumerates nothing new
  std::ostringstream empty;
  SweepSummary replay = run_glue_sweep(3, sw, {}, file.records, &empty);
  REQUIRE(replay.complete());
  REQUIRE(empty.str().empty());
  REQUIRE(replay.finite == s1.finite);
  REQUIRE(replay.overflow == s1.overflow);
  REQUIRE(replay.order_histogram == s1.order_histogram);

  // resuming after 700 records appends exactly the missing lines
  std::vector<GlueOutcome> head(file.records.begin(), file.records.begin() + 700);
  std::ostringstream tail;
  SweepSummary resumed = run_glue_sweep(3, sw, {}, head, &tail);
  REQUIRE(resumed.complete());
  REQUIRE(resumed.order_histogram == s1.order_histogram);
  std::string stitched = sweep_header_line(3, kGlueStage1Cap, kGlueStage2Cap);
  stitched += '\n';
  for (const GlueOutcome& rec : head) {
    stitched += sweep_outcome_line(rec);
    stitched += '\n';
  }
  stitched += tail.str();
  REQUIRE(stitched == fresh.str());

  // thread count must not change the bytes
  std::ostringstream threaded;
  threaded << sweep_header_line(3, kGlueStage1Cap, kGlueStage2Cap) << '\n';
  SweepOptions par;
  par.threads = 2;
  SweepSummary s2 = run_glue_sweep(3, sw, par, {}, &threaded);
  REQUIRE(s2.complete());
  REQUIRE(threaded.str() == fresh.str());

  // a truncated final line is dropped and the task redone on resume
  std::string cut = fresh.str();
  cut.resize(cut.size() - 3);
  std::istringstream cutin(cut);
  SweepFile partial = load_sweep_file(cutin);
  REQUIRE(partial.records.size() == 1368);

  // limit counts only new enumerations
  SweepOptions limited;
  limited.limit = 100;
  SweepSummary s3 = run_glue_sweep(3, sw, limited, head);
  REQUIRE(s3.completed == 800);
  REQUIRE_FALSE(s3.complete());

  uint64_t last_done = 0, last_total = 0;
  SweepOptions prog;
  prog.progress = [&](uint64_t done, uint64_t total) {
    last_done = done;
    last_total = total;
  };
  SweepSummary s4 = run_glue_sweep(3, sw, prog);
  REQUIRE(s4.complete());
  REQUIRE(last_done == 1369);
  REQUIRE(last_total == 1369);
}

TEST_CASE("malformed results files are rejected") {
  std::istringstream nohead("");
  REQUIRE_THROWS_AS(load_sweep_file(nohead), DomainError);

  std::istringstream badhead("{\"case\":3}\n");
  REQUIRE_THROWS_AS(load_sweep_file(badhead), DomainError);

  std::istringstream wrongcount(R"({"case":3,"items":42,"stage1":20000,"stage2":1000000,"v":1})"
                                "\n");
  REQUIRE_THROWS_AS(load_sweep_file(wrongcount), DomainError);

  std::string head = sweep_header_line(3, kGlueStage1Cap, kGlueStage2Cap);
  std::istringstream midgarbage(head + "\nnot json\n{\"i\":0,\"n\":24}\n");
  REQUIRE_THROWS_AS(load_sweep_file(midgarbage), DomainError);

  std::istringstream outofrange(head + "\n{\"i\":1369,\"n\":24}\n");
  REQUIRE_THROWS_AS(load_sweep_file(outofrange), DomainError);

  std::istringstream badpattern(head + "\n{\"i\":0,\"pattern\":\"nonsense\"}\n");
  REQUIRE_THROWS_AS(load_sweep_file(badpattern), DomainError);

  std::vector<GlueOutcome> oob{GlueOutcome{9999, true, 1, GluePattern::None, false}};
  REQUIRE_THROWS_AS(run_glue_sweep(3, sweeper(), {}, oob), DomainError);
}
