#pragma once

// Command-line surface. Every subcommand assembles one JSON record (or an
// array of them) and renders it either as `key: value` text lines or as
// pretty-printed JSON with alphabetically sorted keys, so identical
// invocations produce identical bytes. Exit codes: 0 success, 1 verification
// failure, 2 usage or domain error, 3 budget or capacity exceeded.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psl2/field.hpp"
#include "psl2/fpgroup_tools.hpp"
#include "psl2/genseq.hpp"
#include "psl2/glue_sweep.hpp"
#include "psl2/group.hpp"
#include "psl2/subgroup.hpp"
#include "psl2/todd_coxeter.hpp"
#include "psl2/witness.hpp"
#include "psl2/word.hpp"

namespace psl2 {
namespace cli_detail {

using nlohmann::json;

inline GroupContext make_context(uint32_t p) {
  Prime P = Prime::make(p);
  GroupContext ctx(P);
  if (psl2_order(P) <= 3500) ctx.build_mult_table();
  return ctx;
}

inline json orders_json(const std::set<uint32_t>& s) {
  return json(std::vector<uint32_t>(s.begin(), s.end()));
}

// Families render as sorted lists of sorted type names, e.g.
// [["A5","A5","D12","D12"]], matching the census order used elsewhere.
inline json families_json(const std::set<std::vector<DicksonType>>& fams) {
  std::set<std::vector<std::string>> rows;
  for (const auto& fam : fams) {
    std::vector<std::string> row;
    row.reserve(fam.size());
    for (DicksonType t : fam) row.push_back(to_string(t));
    std::sort(row.begin(), row.end());
    rows.insert(std::move(row));
  }
  return json(rows);
}

inline json table_record(const EnumerationReport& rep) {
  json j;
  j["p"] = rep.p;
  j["length"] = rep.length;
  j["count_sets"] = rep.count_sets;
  j["conjugacy_classes"] = rep.conjugacy_classes;
  j["automorphism_classes"] = rep.automorphism_classes;
  j["element_orders"] = orders_json(rep.element_orders);
  j["maximal_families"] = families_json(rep.maximal_families);
  return j;
}

inline json claims_json(const VerificationRecord& rec) {
  json arr = json::array();
  for (const auto& item : rec.items) arr.push_back({{"claim", item.claim}, {"ok", item.ok}});
  return arr;
}

inline bool is_claim_list(const json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v)
    if (!e.is_object() || e.size() != 2 || !e.contains("claim") || !e.contains("ok"))
      return false;
  return true;
}

inline void render_record(const json& j, std::ostream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (is_claim_list(v)) {
      out << it.key() << ":\n";
      for (const auto& e : v)
        out << "  [" << (e["ok"].get<bool>() ? "ok" : "FAIL") << "] "
            << e["claim"].get<std::string>() << '\n';
    } else if (v.is_string()) {
      out << it.key() << ": " << v.get<std::string>() << '\n';
    } else {
      out << it.key() << ": " << v.dump() << '\n';
    }
  }
}

inline void render_report(const json& body, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << body.dump(2) << '\n';
    return;
  }
  if (body.is_array()) {
    bool first = true;
    for (const auto& rec : body) {
      if (!first) out << '\n';
      render_record(rec, out);
      first = false;
    }
  } else {
    render_record(body, out);
  }
}

inline std::optional<std::set<uint32_t>> order_filter(const std::vector<uint32_t>& orders) {
  if (orders.empty()) return std::nullopt;
  return std::set<uint32_t>(orders.begin(), orders.end());
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline json histogram_json(const std::map<uint64_t, uint64_t>& hist) {
  json arr = json::array();
  for (const auto& [order, count] : hist) arr.push_back({order, count});
  return arr;
}

inline json sweep_record(const SweepSummary& s, uint64_t stage1, uint64_t stage2) {
  json j;
  j["case"] = s.glue_case;
  j["total"] = s.total;
  j["completed"] = s.completed;
  j["finite"] = s.finite;
  j["overflow"] = s.overflow;
  j["max_finite_order"] = s.max_finite_order;
  j["order_histogram"] = histogram_json(s.order_histogram);
  json over = json::array();
  for (const auto& o : s.overflows)
    over.push_back({{"i", o.index}, {"pattern", to_string(o.pattern)}});
  j["overflows"] = over;
  j["stage1_cap"] = stage1;
  j["stage2_cap"] = stage2;
  return j;
}

}  // namespace cli_detail

/// Parse `args` (without the program name) and run one subcommand, writing
/// the report to `out` and diagnostics to `err`. Returns the process exit
/// code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using cli_detail::json;

  CLI::App app{"PSL(2,p) generating-sequence toolkit"};
  app.require_subcommand(1);

  std::string format = "text";
  uint32_t threads = 1;
  uint64_t max_cosets = 1'000'000;
  uint64_t budget = kDefaultStepBudget;
  bool no_shortcut = false;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-cosets", max_cosets, "live coset cap for enumeration")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "step budget for searches")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-shortcut", no_shortcut, "disable congruence shortcuts");

  int code = 0;
  json body;

  // order <p>
  uint32_t order_p = 0;
  CLI::App* c_order = app.add_subcommand("order", "order of PSL(2,p)");
  c_order->fallthrough();
  c_order->add_option("p", order_p, "prime")->required();
  c_order->callback([&] {
    Prime P = Prime::make(order_p);
    body["p"] = order_p;
    body["order"] = psl2_order(P);
  });

  // mg <p>
  uint32_t mg_p = 0;
  CLI::App* c_mg = app.add_subcommand("mg", "largest irredundant generating length");
  c_mg->fallthrough();
  c_mg->add_option("p", mg_p, "prime")->required();
  c_mg->callback([&] {
    GroupContext ctx = cli_detail::make_context(mg_p);
    MaximalCensus census(ctx);
    MResult r = compute_m(census, !no_shortcut, budget);
    body["p"] = mg_p;
    body["m"] = r.m;
    body["used_shortcut"] = r.used_shortcut;
  });

  // iota <p> --length n
  uint32_t iota_p = 0, iota_n = 0;
  CLI::App* c_iota = app.add_subcommand("iota", "element orders in irredundant sequences");
  c_iota->fallthrough();
  c_iota->add_option("p", iota_p, "prime")->required();
  c_iota->add_option("--length", iota_n, "sequence length")->required();
  c_iota->callback([&] {
    GroupContext ctx = cli_detail::make_context(iota_p);
    MaximalCensus census(ctx);
    std::set<uint32_t> orders = compute_iota(census, iota_n, budget, !no_shortcut);
    body["p"] = iota_p;
    body["length"] = iota_n;
    body["orders"] = cli_detail::orders_json(orders);
  });

  // enumerate <p> [--length n] [--orders a,b]
  uint32_t enum_p = 0, enum_len = 4;
  std::vector<uint32_t> enum_orders;
  CLI::App* c_enum = app.add_subcommand("enumerate", "count and classify irredundant sets");
  c_enum->fallthrough();
  c_enum->add_option("p", enum_p, "prime")->required();
  c_enum->add_option("--length", enum_len, "sequence length");
  c_enum->add_option("--orders", enum_orders, "restrict element orders")->delimiter(',');
  c_enum->callback([&] {
    GroupContext ctx = cli_detail::make_context(enum_p);
    MaximalCensus census(ctx);
    EnumerationReport rep = enumerate_irredundant_sets(
        census, enum_len, cli_detail::order_filter(enum_orders), budget);
    body = cli_detail::table_record(rep);
  });

  // tables --primes p1,p2,...
  std::vector<uint32_t> table_primes;
  CLI::App* c_tables = app.add_subcommand("tables", "length-4 classification tables");
  c_tables->fallthrough();
  c_tables->add_option("--primes", table_primes, "primes to tabulate")
      ->required()
      ->delimiter(',');
  c_tables->callback([&] {
    // Length-4 irredundant sequences only ever use orders 2 and 3, so the
    // filtered enumeration is exact and much cheaper.
    body = json::array();
    for (uint32_t p : table_primes) {
      GroupContext ctx = cli_detail::make_context(p);
      MaximalCensus census(ctx);
      EnumerationReport rep =
          enumerate_irredundant_sets(census, 4, std::set<uint32_t>{2, 3}, budget);
      body.push_back(cli_detail::table_record(rep));
    }
  });

  // tc --file f [--strategy hlt|felsch]
  std::string tc_file, tc_strategy = "hlt";
  CLI::App* c_tc = app.add_subcommand("tc", "coset enumeration over a presentation file");
  c_tc->fallthrough();
  c_tc->add_option("--file", tc_file, "presentation file")->required();
  c_tc->add_option("--strategy", tc_strategy, "enumeration strategy")
      ->check(CLI::IsMember({"hlt", "felsch"}));
  c_tc->callback([&] {
    Presentation pres = parse_presentation(cli_detail::read_text_file(tc_file));
    TCStrategy strat = tc_strategy == "felsch" ? TCStrategy::Felsch : TCStrategy::HLT;
    TCResult res = todd_coxeter(pres, {}, max_cosets, strat);
    body["file"] = tc_file;
    body["strategy"] = tc_strategy;
    body["cap"] = max_cosets;
    body["max_live"] = res.max_live;
    body["total_defined"] = res.total_defined;
    if (res.is_finite()) {
      body["outcome"] = "finite";
      body["order"] = res.index;
    } else {
      body["outcome"] = "overflow";
      err << "capacity: live coset cap " << max_cosets << " exceeded\n";
      code = 3;
    }
  });

  // glue-sweep --case n [--out f | --resume f] [--stage1-cap n] [--stage2-cap n] [--limit n]
  int sweep_case = 0;
  std::string sweep_out, sweep_resume;
  uint32_t stage1_cap = kGlueStage1Cap, stage2_cap = kGlueStage2Cap;
  uint64_t sweep_limit = 0;
  CLI::App* c_sweep = app.add_subcommand("glue-sweep", "sweep the glued presentations");
  c_sweep->fallthrough();
  c_sweep->add_option("--case", sweep_case, "gluing case")->required()->check(CLI::Range(1, 3));
  CLI::Option* out_opt = c_sweep->add_option("--out", sweep_out, "fresh results file");
  CLI::Option* resume_opt = c_sweep->add_option("--resume", sweep_resume, "results file to continue");
  out_opt->excludes(resume_opt);
  CLI::Option* s1_opt = c_sweep->add_option("--stage1-cap", stage1_cap, "first-pass coset cap");
  CLI::Option* s2_opt = c_sweep->add_option("--stage2-cap", stage2_cap, "escalation coset cap");
  c_sweep->add_option("--limit", sweep_limit, "stop after this many new tasks");
  c_sweep->callback([&] {
    std::vector<GlueOutcome> already;
    std::string path = sweep_resume;
    if (!sweep_resume.empty()) {
      std::ifstream in(sweep_resume);
      if (!in) throw UsageError("cannot open file '" + sweep_resume + "'");
      SweepFile file = load_sweep_file(in);
      if (file.glue_case != sweep_case)
        throw UsageError("results file '" + sweep_resume + "' holds case " +
                         std::to_string(file.glue_case) + ", not case " +
                         std::to_string(sweep_case));
      if ((s1_opt->count() && stage1_cap != file.stage1_cap) ||
          (s2_opt->count() && stage2_cap != file.stage2_cap))
        throw UsageError("stage caps disagree with the results file header");
      stage1_cap = file.stage1_cap;
      stage2_cap = file.stage2_cap;
      already = std::move(file.records);
    } else {
      path = sweep_out.empty()
                 ? "glue-sweep-case" + std::to_string(sweep_case) + ".jsonl"
                 : sweep_out;
      if (std::ifstream(path))
        throw UsageError("results file '" + path +
                         "' already exists; pass --resume to continue it");
    }

    std::ofstream sink(path, std::ios::app);
    if (!sink) throw UsageError("cannot write file '" + path + "'");
    if (sweep_resume.empty())
      sink << sweep_header_line(sweep_case, stage1_cap, stage2_cap) << '\n';

    GlueSweeper sweeper;
    SweepOptions opts;
    opts.stage1_cap = stage1_cap;
    opts.stage2_cap = stage2_cap;
    opts.threads = threads;
    opts.limit = sweep_limit;
    uint64_t last = 0;
    opts.progress = [&](uint64_t done, uint64_t total) {
      if (done == total || done - last >= 65536) {
        err << "case " << sweep_case << ": " << done << "/" << total << '\n';
        last = done;
      }
    };
    SweepSummary summary = run_glue_sweep(sweep_case, sweeper, opts, already, &sink);
    body = cli_detail::sweep_record(summary, stage1_cap, stage2_cap);
    body["results_file"] = path;
  });

  // witness <p>
  uint32_t wit_p = 0;
  CLI::App* c_wit = app.add_subcommand("witness", "replacement failure witness");
  c_wit->fallthrough();
  c_wit->add_option("p", wit_p, "prime = 1 mod 8")->required();
  c_wit->callback([&] {
    Prime P = Prime::make(wit_p);
    ReplacementWitness wit = build_replacement_witness(P);
    GroupContext ctx = cli_detail::make_context(wit_p);
    VerificationRecord ver = verify_replacement_witness(ctx, wit);
    json claims = cli_detail::claims_json(wit.verdict);
    for (const auto& c : cli_detail::claims_json(ver)) claims.push_back(c);
    body["p"] = wit_p;
    body["i_unit"] = wit.i_unit;
    body["root2"] = wit.root2;
    body["r"] = wit.r;
    body["s"] = wit.s;
    body["t"] = wit.t;
    body["u"] = wit.u;
    body["trace_wcwa"] = wit.trace_wcwa;
    body["trace_wcwb"] = wit.trace_wcwb;
    body["claims"] = claims;
    bool passed = wit.verdict.passed && ver.passed;
    body["passed"] = passed;
    if (!passed) code = 1;
  });

  // triple <p> [--x n]
  uint32_t trip_p = 0, trip_x = 0;
  CLI::App* c_trip = app.add_subcommand("triple", "equal-order generating triple");
  c_trip->fallthrough();
  c_trip->add_option("p", trip_p, "prime >= 7")->required();
  CLI::Option* x_opt = c_trip->add_option("--x", trip_x, "primitive root to use");
  c_trip->callback([&] {
    Prime P = Prime::make(trip_p);
    std::optional<uint32_t> x;
    if (x_opt->count()) x = trip_x;
    EqualOrderTriple t = build_equal_order_triple(P, x);
    GroupContext ctx = cli_detail::make_context(trip_p);
    VerificationRecord ver = verify_equal_order_triple(ctx, t);
    body["p"] = trip_p;
    body["x"] = t.x;
    body["y"] = t.y;
    body["element_order"] = (trip_p - 1) / 2;
    body["claims"] = cli_detail::claims_json(ver);
    body["passed"] = ver.passed;
    if (!ver.passed) code = 1;
  });

  // replacement <p> [--length n] [--all] [--orders a,b]
  uint32_t rep_p = 0, rep_len = 4;
  bool rep_all = false;
  std::vector<uint32_t> rep_orders;
  CLI::App* c_rep = app.add_subcommand("replacement", "replacement property verdicts");
  c_rep->fallthrough();
  c_rep->add_option("p", rep_p, "prime")->required();
  c_rep->add_option("--length", rep_len, "sequence length");
  c_rep->add_flag("--all", rep_all, "check every set, not just class representatives");
  c_rep->add_option("--orders", rep_orders, "restrict element orders")->delimiter(',');
  c_rep->callback([&] {
    GroupContext ctx = cli_detail::make_context(rep_p);
    MaximalCensus census(ctx);
    std::vector<std::vector<uint32_t>> sets =
        collect_irredundant_sets(census, rep_len, cli_detail::order_filter(rep_orders), budget);
    std::vector<uint32_t> targets;
    if (rep_all) {
      targets.resize(sets.size());
      for (uint32_t i = 0; i < sets.size(); ++i) targets[i] = i;
    } else if (!sets.empty()) {
      // Replacement verdicts are conjugation invariant, so representatives
      // of the conjugacy classes cover everything.
      targets = classify_set_orbits(ctx, sets).reps;
    }
    json failures = json::array();
    uint64_t checked = 0;
    for (uint32_t idx : targets) {
      GenSequence seq{sets[idx], {}, {}};
      ReplacementCheck chk = sequence_satisfies_replacement(ctx, census, seq);
      ++checked;
      if (!chk.holds && failures.size() < 10)
        failures.push_back({{"element", *chk.failing_element}, {"set", sets[idx]}});
      if (!chk.holds) code = 1;
    }
    body["p"] = rep_p;
    body["length"] = rep_len;
    body["mode"] = rep_all ? "all" : "reps";
    body["sets"] = sets.size();
    body["checked"] = checked;
    body["all_satisfy"] = code == 0;
    body["failures"] = failures;
  });

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("psl2");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int c = app.exit(e, out, err);
    return c == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  cli_detail::render_report(body, format, out);
  return code;
}

}  // namespace psl2
