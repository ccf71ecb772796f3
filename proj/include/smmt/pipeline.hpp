#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "smmt/drat.hpp"
#include "smmt/graph.hpp"
#include "smmt/mono_horn.hpp"
#include "smmt/sat.hpp"

namespace smmt {

struct EdgeDecl {
  std::size_t from = 0, to = 0;
  Var var = 0;
  std::optional<int> cap;  ///< bit-vector id (edge_cap)
  std::size_t line = 0;
};

struct GraphDecl {
  int id = 0;
  std::size_t nodes = 0;
  std::vector<EdgeDecl> edges;
  std::size_t line = 0;
};

struct BvDecl {
  int id = 0;
  std::size_t width = 0;
  std::vector<Var> bits;               ///< lsb first; empty for constants
  std::optional<std::uint64_t> value;  ///< bv_const
  std::size_t line = 0;
};

enum class BindingKind { Reach, Gt, Ge, SumGt, MaxFlowGe };

struct BindingDecl {
  BindingKind kind = BindingKind::Reach;
  Var pred = 0;
  int graph = 0;                 ///< Reach, MaxFlowGe
  std::size_t src = 0, dst = 0;  ///< Reach, MaxFlowGe
  std::vector<int> lhs, rhs;     ///< bit-vector ids; Gt/Ge use one each
  int threshold = 0;             ///< MaxFlowGe
  std::size_t line = 0;
};

/// An SMMT problem: a CNF plus theory predicates bound to some of its variables.
struct Instance {
  CnfFormula cnf;
  std::vector<GraphDecl> graphs;
  std::vector<BvDecl> bvs;
  std::vector<BindingDecl> bindings;
};

/// Throws ParseError with the offending line.
Instance parse_instance(const std::string& text);
Instance read_instance_file(const std::string& path);
std::string write_instance(const Instance& inst);

/// Predicates of an instance, with their definitions built above the instance's
/// variables. Owns the graphs the predicates point into.
class Theory {
public:
  explicit Theory(const Instance& inst, bool build_definitions = true);
  Theory(const Theory&) = delete;
  Theory& operator=(const Theory&) = delete;

  std::vector<const MonotonicPredicate*> predicates() const;
  PredicateIndex index() const;
  /// Last variable used by the instance and the definitions.
  Var last_var() const { return last_; }

  /// True if every predicate atom agrees with its predicate under the total model.
  bool consistent(const Assignment& model) const;

private:
  std::deque<SymbolicGraph> graphs_;
  std::vector<PredicatePtr> preds_;
  Var last_ = 0;
};

struct ProveOptions {
  bool backward_check = true;
  bool minimize = false;  ///< drop unneeded records from the final proof
  int jobs = 1;           ///< >1: discharge lemmas with OpenMP
  bool log_proof = true;
  std::uint64_t seed = 0;
  std::uint64_t conflict_budget = 0;
  bool record_decisions = false;
};

struct ProveReport {
  SolveStatus status = SolveStatus::Unknown;
  Var instance_vars = 0;
  std::size_t instance_clauses = 0;
  std::size_t bindings = 0;
  SolveStats solver;
  std::size_t cert_records = 0;
  std::size_t theory_emitted = 0;
  std::size_t theory_core = 0;
  std::size_t learned_core = 0;
  std::size_t routes_direct = 0, routes_dual = 0, routes_choice = 0;
  std::size_t definition_clauses = 0;
  Var final_vars = 0;
  std::size_t final_clauses = 0;
  std::size_t drat_records = 0;
  bool verified = false;
  std::string reject_reason;
  double t_solve = 0, t_backward = 0, t_discharge = 0, t_check = 0;
};

std::string report_to_string(const ProveReport& r);

struct ProveResult {
  SolveStatus status = SolveStatus::Unknown;
  Assignment model;              ///< Sat
  CnfFormula final_cnf;          ///< Unsat: instance plus proof-specific definitions
  ProofCertificate certificate;  ///< solver output (extended, with theory records)
  ProofCertificate drat;         ///< Unsat: plain DRAT against final_cnf
  std::vector<LemmaReport> lemmas;
  std::vector<Lit> decisions;    ///< with record_decisions
  ProveReport report;
};

/// Solve, trim, discharge every theory lemma, and check the resulting DRAT proof.
ProveResult prove(const Instance& inst, const ProveOptions& opts = {});

/// Replaces every binding with a biconditional circuit for its predicate atom.
/// Fresh variables start above max(fresh_var_base, instance variables).
CnfFormula eager_encode(const Instance& inst, Var fresh_var_base = 0);

/// Lemma list (in certificate order) for the theory records of `cert`.
std::vector<TheoryLemma> theory_lemmas(const ProofCertificate& cert);
/// Theory records turned into ordinary additions.
ProofCertificate as_plain_drat(const ProofCertificate& cert);

}  // namespace smmt
