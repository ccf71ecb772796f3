#include "smmt/definition.hpp"

#include <algorithm>
#include <set>

namespace smmt {

std::vector<Var> MonotonicDefinition::flip_set() const {
  std::vector<Var> out;
  for (const InputAtom& a : inputs)
    if (!support(a).positive()) out.push_back(a.var);
  if (!head.positive()) out.push_back(head.var());
  std::sort(out.begin(), out.end());
  return out;
}

Var MonotonicDefinition::max_var() const {
  Var m = std::max(clauses.num_vars(), head.var());
  for (Var v : aux) m = std::max(m, v);
  for (const InputAtom& a : inputs) m = std::max(m, a.var);
  return m;
}

std::vector<std::string> lint(const MonotonicDefinition& def) {
  std::vector<std::string> out;
  std::set<Var> in, ax;
  for (const InputAtom& a : def.inputs)
    if (!in.insert(a.var).second) out.push_back("input " + std::to_string(a.var) + " listed twice");
  for (Var v : def.aux) {
    if (!ax.insert(v).second) out.push_back("auxiliary " + std::to_string(v) + " listed twice");
    if (in.count(v)) out.push_back("variable " + std::to_string(v) + " is both input and auxiliary");
  }
  const Var h = def.head.var();
  if (in.count(h) || ax.count(h)) out.push_back("head variable also listed as input or auxiliary");
  for (Var c : def.choice)
    if (!ax.count(c)) out.push_back("choice variable " + std::to_string(c) + " is not an auxiliary");

  std::vector<Lit> forbidden;
  for (const InputAtom& a : def.inputs) forbidden.push_back(def.support(a));
  std::sort(forbidden.begin(), forbidden.end());

  for (std::size_t i = 0; i < def.clauses.size(); ++i) {
    if (def.clauses.deleted(i)) continue;
    const Clause& c = def.clauses[i];
    bool has_head = false;
    for (Lit l : c) {
      if (l == ~def.head) out.push_back("clause " + std::to_string(i) + " contains the complement of the head");
      if (l == def.head) has_head = true;
      if (std::binary_search(forbidden.begin(), forbidden.end(), l))
        out.push_back("clause " + std::to_string(i) + " contains input literal " + std::to_string(l.encoded()) +
                      " in the monotone direction");
      if (l.var() != h && !in.count(l.var()) && !ax.count(l.var()))
        out.push_back("clause " + std::to_string(i) + " mentions undeclared variable " + std::to_string(l.var()));
    }
    if (has_head && !clause_is_horn(c)) out.push_back("head occurs in non-Horn clause " + std::to_string(i));
  }
  return out;
}

MonotonicDefinition mono_transform(const CnfFormula& def, Lit head, const std::vector<InputAtom>& inputs,
                                   Var fresh_var_base) {
  Var top = std::max(def.num_vars(), head.var());
  for (const InputAtom& a : inputs) top = std::max(top, a.var);
  if (fresh_var_base < top)
    throw Error("mono_transform: fresh variables from " + std::to_string(fresh_var_base + 1) +
                " collide with the definition (uses up to " + std::to_string(top) + ")");

  std::vector<Var> rename(top + 1, 0);
  MonotonicDefinition out;
  out.head = head;
  out.inputs = inputs;
  Var next = fresh_var_base;
  for (const InputAtom& a : inputs) {
    if (rename[a.var]) throw Error("mono_transform: input " + std::to_string(a.var) + " listed twice");
    rename[a.var] = ++next;
    out.renamed.emplace_back(a.var, rename[a.var]);
  }
  const Var head_prime = ++next;
  rename[head.var()] = head_prime;

  std::set<Var> old_aux;
  out.clauses = CnfFormula(next);
  for (std::size_t i = 0; i < def.size(); ++i) {
    if (def.deleted(i)) continue;
    Clause c;
    for (Lit l : def[i]) {
      Var v = rename[l.var()];
      if (!v) {
        old_aux.insert(l.var());
        v = l.var();
      }
      c.push_back(Lit::make(v, l.positive()));
    }
    out.clauses.add(std::move(c));
  }
  MonotonicDefinition tmp;
  tmp.head = head;
  for (const InputAtom& a : inputs) {
    tmp.inputs = {a};
    Lit s = tmp.support(a);
    out.clauses.add({~s, Lit::make(rename[a.var], s.positive())});
  }
  out.clauses.add({~Lit::make(head_prime, head.positive()), head});

  out.aux.assign(old_aux.begin(), old_aux.end());
  for (const auto& [a, prime] : out.renamed) out.aux.push_back(prime);
  out.aux.push_back(head_prime);
  return out;
}

}  // namespace smmt
