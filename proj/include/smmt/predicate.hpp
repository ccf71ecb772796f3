#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smmt/circuit.hpp"
#include "smmt/cnf.hpp"
#include "smmt/definition.hpp"
#include "smmt/sat.hpp"

namespace smmt {

/// How lemmas of one head polarity are discharged.
///  Direct: the definition for that head is Horn; the lemma is RUP against it.
///  Dual:   instantiate the opposite definition with the witness (lemma_specific_horn).
///  Choice: instantiate the existential choice variables of the same-head definition.
enum class Route { Direct, Dual, Choice };
std::string to_string(Route r);

/// Support literal of an input for a head literal: the value that pushes the
/// predicate towards that head.
inline Lit support_for(const InputAtom& a, Lit head) { return Lit::make(a.var, a.positive == head.positive()); }

struct Approximation {
  Assignment lower;  ///< unassigned inputs set to their predicate-minimizing value
  Assignment upper;  ///< ... predicate-maximizing value
};

/// Total completions of m over `inputs`; other variables are copied from m.
Approximation approximate(const Assignment& m, std::span<const InputAtom> inputs);

/// The input literals of a lemma (the M_A it assumes), in clause order.
std::vector<Lit> lemma_antecedent(const TheoryLemma& lemma);

/// Completion of the lemma's antecedent that is least favourable to its head.
Assignment lemma_completion(const TheoryLemma& lemma, std::span<const InputAtom> inputs, Var num_vars);

class MonotonicPredicate {
public:
  MonotonicPredicate(Var pred, std::vector<InputAtom> inputs) : pred_(pred), inputs_(std::move(inputs)) {}
  virtual ~MonotonicPredicate() = default;

  Var predicate_var() const { return pred_; }
  const std::vector<InputAtom>& inputs() const { return inputs_; }
  Var max_input_var() const;

  virtual std::string kind() const = 0;
  /// Value under an assignment that is total over the inputs.
  virtual bool evaluate(const Assignment& m) const = 0;

  /// Antecedent literals (true in `ext`) whose extremal completion already
  /// forces the head. `ext` is total over the inputs and evaluates to the head.
  virtual std::vector<Lit> strengthen(const Assignment& ext, bool head_positive) const;

  /// Allocates auxiliary variables from `pool` and builds the definitions.
  virtual void build_definitions(VarPool& pool) = 0;
  virtual std::vector<const MonotonicDefinition*> definitions() const = 0;
  virtual Route route(bool head_positive) const = 0;
  /// Definition used to discharge lemmas whose head has this sign.
  virtual const MonotonicDefinition& definition_for(bool head_positive) const = 0;
  /// Auxiliary assignment that discharges the lemma along route().
  virtual std::vector<Lit> witness(const TheoryLemma& lemma) const = 0;

  /// Biconditional Tseitin encoding of the predicate atom.
  virtual void encode_eager(CircuitBuilder& cb) const = 0;

  /// Witness-strengthened lemma for `head_positive`, built from the current
  /// (partial) assignment m. Requires the matching completion of m to force the head.
  TheoryLemma make_lemma(const Assignment& m, bool head_positive, bool with_witness = true) const;

protected:
  /// Greedy: drop antecedent literals in order while the completion still forces the head.
  std::vector<Lit> greedy_strengthen(const Assignment& ext, bool head_positive) const;

  Var pred_;
  std::vector<InputAtom> inputs_;
};

using PredicatePtr = std::unique_ptr<MonotonicPredicate>;

/// Auxiliary values for a Dual or Choice discharge: inputs per `ext`, primed
/// copies like their originals, head of `def` set to `head_value`, then unit
/// propagation; remaining auxiliaries default to false. Returns literals in
/// def.aux order. Throws if propagation conflicts.
std::vector<Lit> simulate_witness(const MonotonicDefinition& def, const Assignment& ext, bool head_value,
                                  std::span<const Lit> fixed = {});

/// Value of a bit-vector (lsb first) under a total assignment.
std::uint64_t bv_value(const BitVec& v, const Assignment& m);

}  // namespace smmt
