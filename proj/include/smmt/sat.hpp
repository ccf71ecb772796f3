#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "smmt/cnf.hpp"
#include "smmt/drat.hpp"

namespace smmt {

/// A theory-justified clause (¬m1 ∨ … ∨ ¬mk ∨ head) with the auxiliary
/// assignment that explains it.
struct TheoryLemma {
  Clause clause;
  Var predicate_var = 0;
  bool head_positive = true;
  std::vector<Lit> witness;

  Lit head() const { return Lit::make(predicate_var, head_positive); }
  friend bool operator==(const TheoryLemma&, const TheoryLemma&) = default;
};

using TheoryHandle = std::size_t;

class TheoryHooks {
public:
  struct Implied {
    Lit lit;
    TheoryHandle handle;
  };
  struct Propagation {
    std::vector<Implied> implied;
    std::optional<TheoryHandle> conflict;
  };

  virtual ~TheoryHooks() = default;
  /// Called at every propagation fixpoint with the current assignment.
  virtual Propagation propagate(const Assignment& m) = 0;
  /// Lemma behind a handle returned by propagate/final_check. Throws on stale handles.
  virtual TheoryLemma explain(TheoryHandle h) = 0;
  /// Full assignment; returns a conflict handle if the theory rejects it.
  virtual std::optional<TheoryHandle> final_check(const Assignment& m) = 0;
  /// The trail was cut back to `trail_size` literals.
  virtual void backtrack(std::size_t trail_size) = 0;
};

struct SolverOptions {
  bool log_proof = false;
  std::uint64_t conflict_budget = 0;  ///< 0: unlimited
  std::uint64_t seed = 0;             ///< 0: all activities start equal
  bool check_learned = false;         ///< RUP-check every learned clause (slow)
  bool record_decisions = false;
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t theory_lemmas = 0;
  std::uint64_t learned = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Assignment model;         ///< Sat only, total
  ProofCertificate proof;   ///< Unsat with log_proof
  std::vector<Lit> decisions;
  SolveStats stats;
};

/// CDCL with two watched literals, first-UIP learning, VSIDS (ties to the
/// lowest variable), phase saving and Luby restarts.
class Solver {
public:
  explicit Solver(const CnfFormula& f, TheoryHooks* theory = nullptr, SolverOptions opts = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  SolveResult solve();

  // Step interface, mostly for tests.
  void decide(Lit l);
  /// Unit + theory propagation; returns the conflicting clause (index into clause_db()).
  std::optional<std::size_t> propagate();
  struct Learned {
    Clause clause;  ///< asserting literal first
    int backjump_level = 0;
  };
  Learned learn_from_conflict(std::size_t conflict);
  int decision_level() const;
  const Assignment& assignment() const;
  const std::vector<Clause>& clause_db() const;
  const ProofCertificate& proof() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve(const CnfFormula& f, TheoryHooks* theory = nullptr, SolverOptions opts = {});

}  // namespace smmt
