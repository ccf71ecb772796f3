#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smmt/cnf.hpp"

namespace smmt {

/// A predicate input and the direction in which it pushes the predicate:
/// positive means setting the variable true can only make the predicate true.
struct InputAtom {
  Var var = 0;
  bool positive = true;
  friend bool operator==(const InputAtom&, const InputAtom&) = default;
};

/// Hands out consecutive fresh variables.
class VarPool {
public:
  explicit VarPool(Var last_used) : last_(last_used) {}
  Var fresh() { return ++last_; }
  Var last() const { return last_; }

private:
  Var last_;
};

/// CNF characterisation of one head literal (p or ¬p) over inputs and
/// auxiliaries.
struct MonotonicDefinition {
  CnfFormula clauses;
  Lit head;
  std::vector<InputAtom> inputs;
  std::vector<Var> aux;
  /// Auxiliaries that are existentially chosen rather than functionally
  /// determined by the inputs (flow values, cut sides).
  std::vector<Var> choice;
  /// Input renamings introduced by mono_transform: (input, primed copy).
  std::vector<std::pair<Var, Var>> renamed;

  /// The literal of `a` that makes the head more likely.
  Lit support(const InputAtom& a) const { return Lit::make(a.var, a.positive == head.positive()); }
  /// Variables to flip so that support literals and the head become positive.
  std::vector<Var> flip_set() const;
  Var max_var() const;
};

/// Structural restrictions of a monotonic definition. Returns one message per
/// violation; empty means the definition passes.
std::vector<std::string> lint(const MonotonicDefinition& def);

/// Renames every input a to a fresh a' and the head p to a fresh p', then adds
/// support(a) => support(a') for each input and head' => head. The result has
/// exactly def.size() + |inputs| + 1 clauses.
MonotonicDefinition mono_transform(const CnfFormula& def, Lit head, const std::vector<InputAtom>& inputs,
                                   Var fresh_var_base);

}  // namespace smmt
