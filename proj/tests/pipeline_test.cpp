#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "smmt/pipeline.hpp"

using namespace smmt;

namespace {

// six-node running graph, edges a..h = 1..8; predicates are added by the callers
std::string running_text(const std::string& clauses, std::size_t n_clauses, const std::string& bindings, Var n = 10) {
  std::ostringstream o;
  o << "c fig 2\np smmt " << n << ' ' << n_clauses << '\n'
    << clauses << "digraph 0 6\n"
    << "edge 0 0 1 1\nedge 0 1 3 3\nedge 0 3 5 8\nedge 0 0 2 2\n"
    << "edge 0 3 2 5\nedge 0 2 4 4\nedge 0 4 3 6\nedge 0 4 5 7\n"
    << bindings;
  return o.str();
}

std::size_t error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

bool satisfies(const CnfFormula& f, const Assignment& m) {
  for (const Clause& c : f.live()) {
    bool sat = false;
    for (Lit l : c) sat = sat || m.is_true(l);
    if (!sat) return false;
  }
  return true;
}

}  // namespace

TEST(ParseInstance, MinimalReach) {
  Instance inst = parse_instance("p smmt 3 1\n3 0\ndigraph 7 2\nedge 7 0 1 1\nedge 7 1 0 2\nreach 7 0 1 3\n");
  ASSERT_EQ(inst.bindings.size(), 1u);
  EXPECT_EQ(inst.bindings[0].kind, BindingKind::Reach);
  EXPECT_EQ(inst.bindings[0].pred, 3u);
  ASSERT_EQ(inst.graphs.size(), 1u);
  EXPECT_EQ(inst.graphs[0].edges.size(), 2u);
  EXPECT_EQ(inst.cnf.size(), 1u);
}

TEST(ParseInstance, VariableBoundTwice) {
  const std::string text =
      "p smmt 5 0\ndigraph 0 2\nedge 0 0 1 1\nbv 0 1 2\nbv 1 1 3\nreach 0 0 1 5\nbv_gt 5 0 1\n";
  EXPECT_EQ(error_line(text), 7u);
}

TEST(ParseInstance, ErrorsCarryLines) {
  EXPECT_EQ(error_line("p smmt 2 1\n1 2 0\nfrobnicate 3\n"), 3u);
  EXPECT_EQ(error_line("p smmt 2 1\n1 3 0\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 2\n1 2 0\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 1\n1 2\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 0\ndigraph 0 2\nedge 0 0 2 1\n"), 3u);
  EXPECT_EQ(error_line("p smmt 2 0\nedge 0 0 1 1\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 0\ndigraph 0 2\ndigraph 0 3\n"), 3u);
  EXPECT_EQ(error_line("p smmt 2 0\nbv 0 1 1\nbv 0 1 2\n"), 3u);
  EXPECT_EQ(error_line("p smmt 2 0\nbv 0 2 1 1\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 0\nbv_const 0 2 4\n"), 2u);
  EXPECT_EQ(error_line("p smmt 40 0\nbv_const 0 33 1\n"), 2u);
  EXPECT_EQ(error_line("p smmt 2 0\ndigraph 0 2\nedge 0 0 1 1\nreach 0 0 2 2\n"), 4u);
  EXPECT_EQ(error_line("p smmt 2 0\ndigraph 0 2\nedge 0 0 1 1\nreach 0 0 1 1\n"), 4u);
  EXPECT_EQ(error_line("p smmt 3 0\nbv 0 1 1\nbv_gt 3 0 9\n"), 3u);
  EXPECT_EQ(error_line("p smmt 3 0\nbv 0 1 1\nbv 1 1 2\nbv_gt 3 0 1 1\n"), 4u);
  EXPECT_EQ(error_line("1 2 0\n"), 1u);
  EXPECT_NE(error_line(""), 0u);
}

TEST(ParseInstance, ClausesMaySpanLinesAndShareThem) {
  Instance inst = parse_instance("p smmt 3 3\nc x\n1 -2\n 3 0 -1 0\n2 0\n");
  ASSERT_EQ(inst.cnf.size(), 3u);
  EXPECT_EQ(inst.cnf[0], running::C({1, -2, 3}));
  EXPECT_EQ(inst.cnf[1], running::C({-1}));
}

TEST(ParseInstance, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Instance a = gen::random_instance(rng);
    const std::string text = write_instance(a);
    Instance b = parse_instance(text);
    EXPECT_EQ(write_instance(b), text);
    EXPECT_EQ(b.bindings.size(), a.bindings.size());
  }
  const std::string all_kinds =
      "p smmt 12 1\n-9 10 0\nbv 0 2 1 2\nbv 1 2 3 4\nbv_const 2 2 3\nbv 3 1 5\n"
      "digraph 4 3\nedge_cap 4 0 1 6 2\nedge_cap 4 1 2 7 2\nedge_cap 4 0 2 8 2\n"
      "bv_gt 9 0 1\nbv_ge 10 1 2\nbv_sum_gt 11 2 0 3 1 2\nmaxflow_ge 4 0 2 3 12\n";
  Instance inst = parse_instance(all_kinds);
  EXPECT_EQ(inst.bindings.size(), 4u);
  EXPECT_EQ(write_instance(parse_instance(write_instance(inst))), write_instance(inst));
}

TEST(Prove, ReachContradictionVerifies) {
  // 9 = reach(s, t), 10 = reach(s, v3); g is cut so every s-t path passes v3
  const std::string text = running_text("9 0\n-10 0\n-7 0\n", 3, "reach 0 0 5 9\nreach 0 0 3 10\n");
  Instance inst = parse_instance(text);
  ProveResult r = prove(inst);
  ASSERT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_TRUE(r.report.verified) << r.report.reject_reason;
  EXPECT_GT(r.report.routes_direct, 0u);
  EXPECT_GT(r.report.routes_dual, 0u);
  EXPECT_EQ(r.report.routes_choice, 0u);
  EXPECT_FALSE(r.drat.has_theory_records());
  EXPECT_TRUE(r.certificate.has_theory_records());
  EXPECT_EQ(certificate_to_string(r.drat).find('t'), std::string::npos);
  EXPECT_TRUE(check_drat(r.final_cnf, r.drat));
  // the instance clauses come first, verbatim
  for (std::size_t i = 0; i < inst.cnf.size(); ++i) EXPECT_EQ(r.final_cnf[i], inst.cnf[i]);
  EXPECT_GE(r.final_cnf.num_vars(), 10u);
  // without the bounds, the theory lemmas are not RUP
  EXPECT_FALSE(check_drat(inst.cnf, r.drat));
}

TEST(Prove, SatisfiableModelIsTheoryConsistent) {
  const std::string text = running_text("9 0\n-10 0\n", 2, "reach 0 0 5 9\nreach 0 0 3 10\n");
  Instance inst = parse_instance(text);
  ProveResult r = prove(inst);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_TRUE(satisfies(inst.cnf, r.model));
  EXPECT_TRUE(Theory(inst).consistent(r.model));
  // s reaches t avoiding v3: b d g
  EXPECT_TRUE(r.model.is_true(Lit(2)));
  EXPECT_TRUE(r.model.is_true(Lit(4)));
  EXPECT_TRUE(r.model.is_true(Lit(7)));
}

TEST(Prove, BackwardCheckOnAndOff) {
  std::mt19937_64 rng(5);
  int unsat = 0;
  for (int i = 0; i < 150; ++i) {
    Instance inst = gen::random_instance(rng, 16);
    ProveOptions on, off;
    off.backward_check = false;
    ProveResult a = prove(inst, on), b = prove(inst, off);
    ASSERT_EQ(a.status, b.status);
    if (a.status != SolveStatus::Unsat) continue;
    ++unsat;
    EXPECT_TRUE(a.report.verified) << a.report.reject_reason << '\n' << write_instance(inst);
    EXPECT_TRUE(b.report.verified) << b.report.reject_reason << '\n' << write_instance(inst);
    EXPECT_LE(a.report.theory_core, a.report.theory_emitted);
    EXPECT_EQ(b.report.theory_core, b.report.theory_emitted);
    EXPECT_LE(a.drat.size(), b.drat.size());
  }
  EXPECT_GT(unsat, 30);
}

TEST(Prove, ParallelDischargeGivesSameFiles) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    Instance inst = gen::random_instance(rng);
    ProveOptions par;
    par.jobs = 4;
    ProveResult a = prove(inst), b = prove(inst, par);
    ASSERT_EQ(a.status, b.status);
    EXPECT_EQ(to_dimacs(a.final_cnf), to_dimacs(b.final_cnf));
    EXPECT_EQ(certificate_to_string(a.drat), certificate_to_string(b.drat));
  }
}

TEST(Prove, MinimizedProofIsOneMinimal) {
  const std::string text = running_text("9 0\n-10 0\n-7 0\n", 3, "reach 0 0 5 9\nreach 0 0 3 10\n");
  ProveOptions opts;
  opts.minimize = true;
  ProveResult r = prove(parse_instance(text), opts);
  ASSERT_TRUE(r.report.verified);
  for (std::size_t k = 0; k < r.drat.size(); ++k) {
    if (r.drat.records[k].kind == RecordKind::Deletion) continue;
    ProofCertificate cut = r.drat;
    cut.records.erase(cut.records.begin() + static_cast<std::ptrdiff_t>(k));
    EXPECT_FALSE(check_drat(r.final_cnf, cut)) << "record " << k;
  }
}

TEST(Prove, LoggingLeavesDecisionsUnchanged) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    Instance inst = gen::random_instance(rng);
    ProveOptions with, without;
    with.record_decisions = without.record_decisions = true;
    without.log_proof = false;
    ProveResult a = prove(inst, with), b = prove(inst, without);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.decisions, b.decisions);
  }
}

TEST(Prove, ExtendedCertificateKeepsWitnesses) {
  const std::string text = running_text("9 0\n-10 0\n-7 0\n", 3, "reach 0 0 5 9\nreach 0 0 3 10\n");
  ProveResult r = prove(parse_instance(text));
  std::vector<TheoryLemma> lemmas = theory_lemmas(r.certificate);
  ASSERT_EQ(lemmas.size(), r.report.theory_emitted);
  for (const TheoryLemma& l : lemmas) {
    EXPECT_TRUE(l.predicate_var == 9 || l.predicate_var == 10);
    EXPECT_FALSE(l.witness.empty());
  }
  ProofCertificate back = parse_certificate(certificate_to_string(r.certificate));
  EXPECT_EQ(certificate_to_string(back), certificate_to_string(r.certificate));
}

TEST(EagerEncode, NoBindingsIsIdentity) {
  Instance inst = parse_instance("p smmt 3 2\n1 -2 0\n2 3 0\n");
  CnfFormula f = eager_encode(inst);
  EXPECT_EQ(to_dimacs(f), to_dimacs(inst.cnf));
  EXPECT_EQ(to_dimacs(eager_encode(inst, 40)), to_dimacs(inst.cnf));
}

TEST(EagerEncode, FreshVariablesStartAboveBase) {
  const std::string text = running_text("", 0, "reach 0 0 5 9\n", 9);
  Instance inst = parse_instance(text);
  CnfFormula f = eager_encode(inst, 100);
  EXPECT_GT(f.size(), inst.cnf.size());
  for (std::size_t i = inst.cnf.size(); i < f.size(); ++i)
    for (Lit l : f[i]) EXPECT_TRUE(l.var() <= 9 || l.var() > 100);
}

TEST(EagerEncode, BiconditionalOnRunningGraph) {
  // the encoding pins the atom to reachability for every edge assignment
  const std::string text = running_text("", 0, "reach 0 0 5 9\n", 9);
  Instance inst = parse_instance(text);
  CnfFormula f = eager_encode(inst);
  Theory th(inst, false);
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    std::vector<Lit> fixed;
    Assignment m(9);
    for (Var v = 1; v <= 8; ++v) {
      fixed.push_back(Lit::make(v, (mask >> (v - 1)) & 1u));
      m.assign(fixed.back());
    }
    const bool reach = th.predicates()[0]->evaluate(m);
    fixed.push_back(Lit::make(9, reach));
    EXPECT_TRUE(oracle::dpll(f, fixed)) << mask;
    fixed.back() = ~fixed.back();
    EXPECT_FALSE(oracle::dpll(f, fixed)) << mask;
  }
}

TEST(CrossCheck, SmmtEagerAndEnumerationAgree) {
  std::mt19937_64 rng(3);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 120; ++i) {
    Instance inst = gen::random_instance(rng);
    const bool truth = gen::brute_force_sat(inst);
    const SolveStatus smmt = prove(inst).status;
    const SolveStatus eager = solve(eager_encode(inst)).status;
    EXPECT_EQ(smmt, truth ? SolveStatus::Sat : SolveStatus::Unsat) << write_instance(inst);
    EXPECT_EQ(eager, truth ? SolveStatus::Sat : SolveStatus::Unsat) << write_instance(inst);
    (truth ? sat : unsat)++;
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}
