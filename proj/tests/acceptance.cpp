// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "flow_oracle.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "smmt/maxflow.hpp"
#include "smmt/mono_horn.hpp"
#include "smmt/netbench.hpp"
#include "smmt/pipeline.hpp"
#include "soundness.hpp"

using namespace smmt;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& what, double secs) {
  std::printf("%s criterion %d: %s [%.2fs]\n", pass ? "PASS" : "FAIL", id, what.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

void running_example() {
  using namespace running;
  auto t0 = Clock::now();
  bool ok = true;
  std::ifstream in(std::string(SMMT_TEST_DATA) + "/golden/reach_running_example.cnf");
  CnfFormula golden = read_dimacs(in);
  MonotonicDefinition def = positive_definition(graph(), S, T, reach, reach);
  const bool def_ok = to_dimacs(def.clauses) == to_dimacs(golden) && def.clauses.size() == 10;
  const bool rup_ok = rup_check(def.clauses, C({-a, -c, -h, reach}));
  TheoryLemma l;
  l.clause = C({c, d, -reach});
  l.predicate_var = reach;
  l.head_positive = false;
  l.witness = {Lit(s), Lit(v1), Lit(v2), Lit(-v3), Lit(-v4), Lit(-t)};
  HornUpperBound hb = lemma_specific_horn(def, l, 15);
  // l1 = 16, l2 = 17
  const bool bound_ok = hb.clauses.size() == 3 && hb.clauses[0] == C({c, -16}) && hb.clauses[1] == C({d, -17}) &&
                        hb.clauses[2] == C({16, 17, -reach});
  const bool verify_ok = verify_lemma(hb, l);
  ok = def_ok && rup_ok && bound_ok && verify_ok;
  const double secs = since(t0);
  report(1, ok && secs < 1.0,
         fmt("running example: definition=%s rup=%s bound=%s verify=%s", def_ok ? "golden" : "MISMATCH",
             rup_ok ? "yes" : "no", bound_ok ? "exact" : "MISMATCH", verify_ok ? "true" : "false"),
         secs);
}

void size_bound() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  int exact = 0, lint_clean = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    const Var n_vars = 3 + rng() % 10;
    CnfFormula def(n_vars);
    const std::size_t m = 1 + rng() % 20;
    for (std::size_t j = 0; j < m; ++j) {
      Clause c;
      const std::size_t len = 1 + rng() % 4;
      for (std::size_t k = 0; k < len; ++k) c.push_back(Lit::make(1 + rng() % n_vars, rng() % 2));
      def.add(c);
    }
    const Var head = 1 + rng() % n_vars;
    std::vector<InputAtom> inputs;
    for (Var v = 1; v <= n_vars; ++v)
      if (v != head && rng() % 2) inputs.push_back({v, bool(rng() % 2)});
    MonotonicDefinition d = mono_transform(def, Lit::make(head, rng() % 2), inputs, n_vars);
    if (d.clauses.size() == m + inputs.size() + 1) ++exact;
    if (lint(d).empty()) ++lint_clean;
  }
  report(2, exact == trials, fmt("mono_transform size n+|A|+1 exact on %d/%d random definitions (%d lint-clean)",
                                 exact, trials, lint_clean),
         since(t0));
}

void horn_rup() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  int agree = 0, implied = 0, queries = 0;
  const int defs = 200;
  for (int i = 0; i < defs; ++i) {
    const Var n = 3 + rng() % 10;  // at most 12
    CnfFormula f(n);
    const int m = 2 + rng() % 16;
    for (int j = 0; j < m; ++j) {
      Clause cl;
      const int len = 1 + rng() % 3;
      bool has_pos = false;
      for (int k = 0; k < len; ++k) {
        const Var v = 1 + rng() % n;
        const bool pos = !has_pos && rng() % 3 == 0;
        has_pos |= pos;
        cl.push_back(Lit::make(v, pos));
      }
      f.add(cl);
    }
    const Var head = 1 + rng() % n;
    bool all = true;
    for (int q = 0; q < 10; ++q) {
      Clause lemma{Lit::make(head, q % 2 == 0)};
      for (Var v = 1; v <= n; ++v)
        if (v != head && rng() % 3 == 0) lemma.push_back(Lit::make(v, rng() % 4 == 0));
      const bool ent = oracle::entails(f, lemma, n);
      implied += ent;
      ++queries;
      all = all && ent == rup_check(f, lemma);
    }
    agree += all && is_horn(f);
  }
  report(3, agree == defs,
         fmt("implication <=> RUP on %d/%d Horn definitions (%d queries, %d implied)", agree, defs, queries, implied),
         since(t0));
}

void soundness() {
  auto t0 = Clock::now();
  fuzz::Stats st = fuzz::run(4, 1000);
  const double secs = since(t0);
  report(4, st.invalid_validated == 0 && st.probe_invalid == 0 && st.trials == 1000 && secs < 300,
         fmt("%zu corrupted-witness trials: %zu discharged, %zu rejected, %zu invalid offered, %zu invalid "
             "validated, %zu/%zu probe clauses invalid",
             st.trials, st.discharged, st.rejected, st.invalid_offered, st.invalid_validated, st.probe_invalid,
             st.probe_clauses),
         secs);
}

void cross_solver() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  int agree = 0, sat = 0, verified = 0, unsat = 0;
  const int trials = 300;
  for (int i = 0; i < trials; ++i) {
    Instance inst = gen::random_instance(rng, 20);
    const bool truth = gen::brute_force_sat(inst);
    ProveResult r = prove(inst);
    const SolveStatus eager = solve(eager_encode(inst)).status;
    const SolveStatus want = truth ? SolveStatus::Sat : SolveStatus::Unsat;
    agree += r.status == want && eager == want;
    sat += truth;
    if (!truth) {
      ++unsat;
      verified += r.report.verified;
    }
  }
  report(5, agree == trials,
         fmt("smmt = eager = enumeration on %d/%d instances (%d sat, %d unsat, %d/%d proofs verified)", agree,
             trials, sat, unsat, verified, unsat),
         since(t0));
}

void end_to_end_and_trimming() {
  auto t0 = Clock::now();
  const std::vector<netbench::TierEntry> tier = netbench::oracle_tier();
  int unsat = 0, plain = 0, verified = 0, mutants = 0, mutants_rejected = 0, same_run = 0, reparsed = 0;
  int core_le = 0, strict = 0, strict_decoy = 0, untrimmed_ok = 0;
  std::size_t emitted = 0, core = 0;
  double t_log = 0, t_nolog = 0;
  for (const netbench::TierEntry& e : tier) {
    Instance inst = netbench::encode(netbench::generate(e.seed, e.layers, e.per_layer, e.width, e.decoy));
    reparsed += write_instance(parse_instance(write_instance(inst))) == write_instance(inst);

    ProveOptions opts;
    opts.record_decisions = true;
    ProveResult r = prove(inst, opts);
    if (r.status != SolveStatus::Unsat) continue;
    ++unsat;
    plain += !r.drat.has_theory_records() && certificate_to_string(r.drat).find('t') == std::string::npos;
    verified += r.report.verified;

    // trimming
    emitted += r.report.theory_emitted;
    core += r.report.theory_core;
    core_le += r.report.theory_core <= r.report.theory_emitted;
    if (r.report.theory_core < r.report.theory_emitted) {
      ++strict;
      strict_decoy += e.decoy;
    }
    ProveOptions untrimmed;
    untrimmed.backward_check = false;
    untrimmed_ok += prove(inst, untrimmed).report.verified;

    // dropping any record of a minimal proof must break it
    ProveOptions minimal;
    minimal.minimize = true;
    ProveResult mr = prove(inst, minimal);
    for (std::size_t k = 0; k < mr.drat.size(); ++k) {
      if (mr.drat.records[k].kind == RecordKind::Deletion) continue;
      ProofCertificate cut = mr.drat;
      cut.records.erase(cut.records.begin() + static_cast<std::ptrdiff_t>(k));
      ++mutants;
      mutants_rejected += !check_drat(mr.final_cnf, cut).verified;
    }

    // logging changes neither the answer nor the search
    ProveOptions quiet = opts;
    quiet.log_proof = false;
    ProveResult q = prove(inst, quiet);
    same_run += q.status == r.status && q.decisions == r.decisions;
    std::vector<double> a, b;
    for (int rep = 0; rep < 15; ++rep) {
      a.push_back(prove(inst, quiet).report.t_solve);
      ProveOptions logged;
      logged.backward_check = false;
      b.push_back(prove(inst, logged).report.t_solve);
    }
    std::nth_element(a.begin(), a.begin() + 7, a.end());
    std::nth_element(b.begin(), b.begin() + 7, b.end());
    t_nolog += a[7];
    t_log += b[7];
  }
  const int n = static_cast<int>(tier.size());
  const double overhead = t_nolog > 0 ? t_log / t_nolog : 1.0;
  const double secs = since(t0);
  report(6,
         unsat == n && plain == n && verified == n && reparsed == n && mutants > 0 && mutants_rejected == mutants &&
             same_run == n && overhead < 2.0 && secs < 600,
         fmt("%d/%d netbench instances UNSAT, %d plain DRAT, %d verified, %d/%d single-record drops rejected, "
             "logging kept answer and decisions on %d/%d, solve-time overhead %.2fx",
             unsat, n, plain, verified, mutants_rejected, mutants, same_run, n, overhead),
         secs);
  report(7, unsat == n && core_le == n && strict_decoy > 0 && verified == n && untrimmed_ok == n,
         fmt("core theory lemmas <= emitted on %d/%d (%zu of %zu kept), strictly fewer on %d (%d with a decoy "
             "predicate), trimmed proofs verified %d/%d",
             core_le, n, core, emitted, strict, strict_decoy, verified, n),
         since(t0));
}

void maxflow_oracle() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  int agree = 0;
  const int graphs = 500;
  for (int i = 0; i < graphs; ++i) {
    oracle::ConcreteFlowGraph cg = oracle::random_flow_graph(rng, 7, 12, 3);
    const Var E = static_cast<Var>(cg.g.edges.size());
    std::size_t s = rng() % cg.g.nodes, t = rng() % cg.g.nodes;
    if (s == t) t = (s + 1) % cg.g.nodes;
    Assignment m(E);
    std::vector<std::uint64_t> cap(E);
    for (Var v = 1; v <= E; ++v) {
      const bool on = rng() % 4 != 0;
      m.assign(Lit::make(v, on));
      cap[v - 1] = on ? cg.raw_cap[v - 1] : 0;
    }
    const std::uint64_t want = oracle::min_cut(cg.g, s, t, cap);
    bool all = max_flow(cg.g, s, t, m).value == want;
    for (std::uint64_t z = 0; z < 16; ++z) {
      BitVec th;
      for (int j = 0; j < 5; ++j) th.push_back(Bit::constant((z >> j) & 1u));
      all = all && eval_maxflow(cg.g, s, t, th, m) == (want >= z);
    }
    agree += all;
  }
  report(8, agree == graphs, fmt("eval_maxflow = cut-enumeration min-cut on %d/%d graphs", agree, graphs),
         since(t0));
}

}  // namespace

int main() {
  running_example();
  size_bound();
  horn_rup();
  soundness();
  cross_solver();
  end_to_end_and_trimming();
  maxflow_oracle();
  return failures;
}
