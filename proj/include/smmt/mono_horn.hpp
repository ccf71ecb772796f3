#pragma once

#include <map>
#include <string>
#include <vector>

#include "smmt/predicate.hpp"

namespace smmt {

enum class DischargeErrorKind { ConditionOneViolated, NonHornResidual, WitnessOutOfScope, WrongDefinition, VerificationFailed };
std::string to_string(DischargeErrorKind k);

class DischargeError : public Error {
public:
  DischargeError(DischargeErrorKind kind, const std::string& what, std::size_t lemma = 0)
      : Error(to_string(kind) + ": " + what), kind_(kind), lemma_(lemma) {}
  DischargeErrorKind kind() const { return kind_; }
  std::size_t lemma_index() const { return lemma_; }

private:
  DischargeErrorKind kind_;
  std::size_t lemma_;
};

/// Horn (or dual-Horn) clauses implied by a definition, built for one lemma.
struct HornUpperBound {
  CnfFormula clauses;
  std::vector<Lit> witness;
  Var first_fresh = 0;  ///< fresh variables used: first_fresh .. last_fresh
  Var last_fresh = 0;
};

/// Instantiates `def` (defining the complement of the lemma's head) with the
/// witness and returns (reduced definition => lemma head).
HornUpperBound lemma_specific_horn(const MonotonicDefinition& def, const TheoryLemma& lemma, Var fresh_var_base);

/// Instantiates the existential choice variables of `def` (defining the
/// lemma's head) with the witness; forced auxiliaries fold away and the rest
/// are renamed to fresh variables.
HornUpperBound choice_specific_horn(const MonotonicDefinition& def, const TheoryLemma& lemma, Var fresh_var_base);

/// Number of fresh variables the bound for this lemma will take.
std::size_t fresh_needed(const MonotonicDefinition& def, Route route, const TheoryLemma& lemma);

bool verify_lemma(const CnfFormula& bound, const TheoryLemma& lemma);
inline bool verify_lemma(const HornUpperBound& bound, const TheoryLemma& lemma) {
  return verify_lemma(bound.clauses, lemma);
}

struct LemmaReport {
  std::size_t index = 0;
  Var predicate_var = 0;
  Route route = Route::Direct;
  std::size_t clauses_added = 0;  ///< 0 when a shared definition was already present
  bool verified = false;
};

struct ProofSpecificDefinition {
  CnfFormula clauses;
  std::vector<LemmaReport> report;
  Var max_var = 0;
};

/// Predicates looked up by their atom.
using PredicateIndex = std::map<Var, const MonotonicPredicate*>;

/// Union of shared Horn definitions (direct route, added once) and per-lemma
/// bounds, in lemma order, with disjoint fresh ranges above fresh_var_base.
/// Every lemma is RUP-checked against its own part. Throws DischargeError
/// (with the lemma index) on the first failure.
ProofSpecificDefinition proof_specific_definition(const PredicateIndex& preds, const std::vector<TheoryLemma>& lemmas,
                                                  Var fresh_var_base);
/// Same result, bounds built and checked with OpenMP.
ProofSpecificDefinition proof_specific_definition_parallel(const PredicateIndex& preds,
                                                           const std::vector<TheoryLemma>& lemmas, Var fresh_var_base,
                                                           int threads = 0);

}  // namespace smmt
