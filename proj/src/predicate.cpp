#include "smmt/predicate.hpp"

#include <algorithm>

namespace smmt {

std::string to_string(Route r) {
  switch (r) {
    case Route::Direct: return "direct";
    case Route::Dual: return "dual";
    case Route::Choice: return "choice";
  }
  return "?";
}

Approximation approximate(const Assignment& m, std::span<const InputAtom> inputs) {
  Approximation out{m, m};
  for (const InputAtom& a : inputs) {
    if (m.assigned(a.var)) continue;
    out.lower.assign(Lit::make(a.var, !a.positive));
    out.upper.assign(Lit::make(a.var, a.positive));
  }
  return out;
}

std::vector<Lit> lemma_antecedent(const TheoryLemma& lemma) {
  std::vector<Lit> out;
  for (Lit l : lemma.clause)
    if (l.var() != lemma.predicate_var) out.push_back(~l);
  return out;
}

Assignment lemma_completion(const TheoryLemma& lemma, std::span<const InputAtom> inputs, Var num_vars) {
  Var top = num_vars;
  for (const InputAtom& a : inputs) top = std::max(top, a.var);
  Assignment out(top);
  for (Lit l : lemma_antecedent(lemma))
    if (!out.assign(l)) throw Error("lemma antecedent is contradictory: " + to_string(lemma.clause));
  const Lit head = lemma.head();
  for (const InputAtom& a : inputs)
    if (!out.assigned(a.var)) out.assign(~support_for(a, head));
  return out;
}

Var MonotonicPredicate::max_input_var() const {
  Var m = pred_;
  for (const InputAtom& a : inputs_) m = std::max(m, a.var);
  return m;
}

std::vector<Lit> MonotonicPredicate::strengthen(const Assignment& ext, bool head_positive) const {
  return greedy_strengthen(ext, head_positive);
}

std::vector<Lit> MonotonicPredicate::greedy_strengthen(const Assignment& ext, bool head_positive) const {
  const Lit head = Lit::make(pred_, head_positive);
  // values of the inputs, edited in place
  Assignment cur(ext.num_vars());
  for (const InputAtom& a : inputs_) cur.assign(Lit::make(a.var, ext.is_true(Lit::pos(a.var))));
  std::vector<Lit> kept;
  for (const InputAtom& a : inputs_) {
    Lit s = support_for(a, head);
    if (!cur.is_true(s)) continue;
    Assignment trial(cur.num_vars());
    for (const InputAtom& b : inputs_)
      trial.assign(b.var == a.var ? ~s : Lit::make(b.var, cur.is_true(Lit::pos(b.var))));
    if (evaluate(trial) == head_positive)
      cur = std::move(trial);
    else
      kept.push_back(s);
  }
  return kept;
}

TheoryLemma MonotonicPredicate::make_lemma(const Assignment& m, bool head_positive, bool with_witness) const {
  Approximation ap = approximate(m, inputs_);
  const Assignment& ext = head_positive ? ap.lower : ap.upper;
  TheoryLemma lemma;
  lemma.predicate_var = pred_;
  lemma.head_positive = head_positive;
  for (Lit l : strengthen(ext, head_positive)) lemma.clause.push_back(~l);
  lemma.clause.push_back(lemma.head());
  if (with_witness) lemma.witness = witness(lemma);
  return lemma;
}

std::vector<Lit> simulate_witness(const MonotonicDefinition& def, const Assignment& ext, bool head_value,
                                  std::span<const Lit> fixed) {
  Assignment m(def.max_var());
  for (const InputAtom& a : def.inputs) m.assign(Lit::make(a.var, ext.is_true(Lit::pos(a.var))));
  for (const auto& [a, prime] : def.renamed) m.assign(Lit::make(prime, ext.is_true(Lit::pos(a))));
  m.assign(head_value ? def.head : ~def.head);
  for (Lit l : fixed)
    if (!m.assign(l)) throw Error("witness simulation: fixed literal contradicts inputs");
  PropagationResult r = unit_propagate(def.clauses, m);
  if (r.conflicting()) throw Error("witness simulation: the definition conflicts with the lemma's completion");
  std::vector<Lit> out;
  out.reserve(def.aux.size());
  for (Var x : def.aux) out.push_back(Lit::make(x, r.assignment.is_true(Lit::pos(x))));
  return out;
}

std::uint64_t bv_value(const BitVec& v, const Assignment& m) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool b = v[i].is_const() ? v[i].value() : m.is_true(v[i].lit());
    if (b) x |= std::uint64_t{1} << i;
  }
  return x;
}

}  // namespace smmt
