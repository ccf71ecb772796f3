#include "smmt/mono_horn.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

#include <omp.h>

namespace smmt {

std::string to_string(DischargeErrorKind k) {
  switch (k) {
    case DischargeErrorKind::ConditionOneViolated: return "ConditionOneViolated";
    case DischargeErrorKind::NonHornResidual: return "NonHornResidual";
    case DischargeErrorKind::WitnessOutOfScope: return "WitnessOutOfScope";
    case DischargeErrorKind::WrongDefinition: return "WrongDefinition";
    case DischargeErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "?";
}

namespace {

// Reduced definition before fresh variables are numbered.
struct Residual {
  Route route = Route::Dual;
  CnfFormula clauses;
  Lit head;
  std::vector<Lit> witness;
  std::vector<Var> rename;  ///< Choice: auxiliaries left over, in first-appearance order
  std::size_t fresh = 0;
};

[[noreturn]] void fail(DischargeErrorKind k, const std::string& what) { throw DischargeError(k, what); }

Residual dual_residual(const MonotonicDefinition& def, const TheoryLemma& lemma) {
  if (lemma.head() != ~def.head) fail(DischargeErrorKind::WrongDefinition, "lemma head is not the complement of the definition head");
  std::set<Var> aux(def.aux.begin(), def.aux.end());
  std::set<Var> inputs;
  for (const InputAtom& a : def.inputs) inputs.insert(a.var);

  Assignment m(def.max_var());
  for (Lit l : lemma.witness) {
    if (!aux.count(l.var())) fail(DischargeErrorKind::WitnessOutOfScope, "witness literal " + std::to_string(l.encoded()) + " is not over an auxiliary");
    if (!m.assign(l)) fail(DischargeErrorKind::WitnessOutOfScope, "witness assigns a variable both ways");
  }
  m.assign(lemma.head());
  Residual r;
  r.route = Route::Dual;
  r.head = lemma.head();
  r.witness = lemma.witness;
  r.clauses = reduce(def.clauses, m);

  std::vector<Lit> ma = lemma_antecedent(lemma);
  for (Lit l : ma)
    if (!inputs.count(l.var())) fail(DischargeErrorKind::WrongDefinition, "lemma mentions a non-input variable");
  Assignment am = Assignment::from_literals(def.max_var(), ma);
  if (has_empty_clause(reduce(r.clauses, am)) || unit_propagate(r.clauses, am).conflicting())
    fail(DischargeErrorKind::ConditionOneViolated, "the instantiated definition contradicts the lemma's assumptions");

  for (const Clause& c : r.clauses.clauses())
    for (Lit l : c)
      if (!inputs.count(l.var()))
        fail(DischargeErrorKind::NonHornResidual, "variable " + std::to_string(l.var()) + " survives the instantiation");
  for (const Clause& c : r.clauses.clauses())
    if (!is_tautology(c)) ++r.fresh;
  return r;
}

Residual choice_residual(const MonotonicDefinition& def, const TheoryLemma& lemma) {
  if (lemma.head() != def.head) fail(DischargeErrorKind::WrongDefinition, "lemma head differs from the definition head");
  std::set<Var> choice(def.choice.begin(), def.choice.end());
  std::set<Var> inputs;
  for (const InputAtom& a : def.inputs) inputs.insert(a.var);
  const Var n = def.max_var();

  std::vector<LBool> val(n + 1, LBool::Undef);
  for (Lit l : lemma.witness) {
    if (!choice.count(l.var())) fail(DischargeErrorKind::WitnessOutOfScope, "witness literal " + std::to_string(l.encoded()) + " is not over a choice variable");
    LBool want = lbool_of(l.positive());
    if (val[l.var()] != LBool::Undef && val[l.var()] != want) fail(DischargeErrorKind::WitnessOutOfScope, "witness assigns a variable both ways");
    val[l.var()] = want;
  }
  for (Var c : choice)
    if (val[c] == LBool::Undef) val[c] = LBool::False;

  auto is_aux = [&](Var v) { return v != def.head.var() && !inputs.count(v); };
  auto value = [&](Lit l) {
    LBool b = val[l.var()];
    if (b == LBool::Undef) return b;
    return (b == LBool::True) == l.positive() ? LBool::True : LBool::False;
  };

  // fold units over auxiliaries only
  const std::vector<Clause>& cs = def.clauses.clauses();
  std::vector<std::vector<std::size_t>> occ(n + 1);
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (!def.clauses.deleted(i))
      for (Lit l : cs[i]) occ[l.var()].push_back(i);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (!def.clauses.deleted(i)) queue.push_back(i);
  while (!queue.empty()) {
    std::size_t i = queue.back();
    queue.pop_back();
    std::optional<Lit> open;
    std::size_t unassigned = 0;
    bool sat = false;
    for (Lit l : cs[i]) {
      LBool b = value(l);
      if (b == LBool::True) {
        sat = true;
        break;
      }
      if (b == LBool::Undef && (!open || *open != l)) {
        ++unassigned;
        open = l;
      }
    }
    if (sat) continue;
    if (unassigned == 0) fail(DischargeErrorKind::ConditionOneViolated, "the instantiation falsifies clause " + to_string(cs[i]));
    if (unassigned == 1 && is_aux(open->var())) {
      val[open->var()] = lbool_of(open->positive());
      for (std::size_t j : occ[open->var()]) queue.push_back(j);
    }
  }

  Residual r;
  r.route = Route::Choice;
  r.head = lemma.head();
  r.witness = lemma.witness;
  r.clauses = CnfFormula(n);
  std::set<Var> named;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (def.clauses.deleted(i)) continue;
    Clause c;
    bool sat = false;
    for (Lit l : cs[i]) {
      LBool b = value(l);
      if (b == LBool::True) sat = true;
      if (b == LBool::Undef) c.push_back(l);
    }
    if (sat) continue;
    for (Lit l : c)
      if (is_aux(l.var()) && named.insert(l.var()).second) r.rename.push_back(l.var());
    r.clauses.add(std::move(c));
  }
  std::vector<Var> flips = def.flip_set();
  for (const Clause& c : r.clauses.clauses())
    if (!clause_is_horn(c, flips)) fail(DischargeErrorKind::NonHornResidual, "clause " + to_string(c) + " is not Horn after instantiation");
  r.fresh = r.rename.size();
  return r;
}

Residual residual(const MonotonicDefinition& def, Route route, const TheoryLemma& lemma) {
  return route == Route::Choice ? choice_residual(def, lemma) : dual_residual(def, lemma);
}

HornUpperBound finalize(const Residual& r, Var base) {
  HornUpperBound b;
  b.witness = r.witness;
  b.first_fresh = base + 1;
  b.last_fresh = base + static_cast<Var>(r.fresh);
  if (r.route == Route::Dual) {
    b.clauses = encode_implication(r.clauses, r.head, base);
    return b;
  }
  std::unordered_map<Var, Var> to;
  Var next = base;
  for (Var v : r.rename) to[v] = ++next;
  b.clauses = CnfFormula(std::max(next, r.head.var()));
  for (const Clause& c : r.clauses.clauses()) {
    Clause d;
    for (Lit l : c) {
      auto it = to.find(l.var());
      d.push_back(it == to.end() ? l : Lit::make(it->second, l.positive()));
    }
    b.clauses.add(std::move(d));
  }
  return b;
}

struct Plan {
  const MonotonicPredicate* pred = nullptr;
  Route route = Route::Direct;
  const MonotonicDefinition* def = nullptr;
};

Plan plan_for(const PredicateIndex& preds, const TheoryLemma& lemma) {
  auto it = preds.find(lemma.predicate_var);
  if (it == preds.end())
    fail(DischargeErrorKind::WrongDefinition, "no predicate is bound to variable " + std::to_string(lemma.predicate_var));
  Plan p;
  p.pred = it->second;
  p.route = p.pred->route(lemma.head_positive);
  p.def = &p.pred->definition_for(lemma.head_positive);
  return p;
}

// Per-lemma output, assembled in lemma order by both variants.
struct Piece {
  Plan plan;
  std::optional<Residual> res;
  CnfFormula part;
  bool verified = false;
  std::optional<DischargeError> error;
};

DischargeError with_index(const DischargeError& e, std::size_t i) {
  std::string what = e.what();
  std::string prefix = to_string(e.kind()) + ": ";
  if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
  return DischargeError(e.kind(), "lemma " + std::to_string(i) + ": " + what, i);
}

void stage_residual(Piece& pc, const PredicateIndex& preds, const TheoryLemma& lemma, std::size_t i) {
  try {
    pc.plan = plan_for(preds, lemma);
    if (pc.plan.route != Route::Direct) pc.res = residual(*pc.plan.def, pc.plan.route, lemma);
  } catch (const DischargeError& e) {
    pc.error = with_index(e, i);
  } catch (const Error& e) {
    pc.error = DischargeError(DischargeErrorKind::WrongDefinition, "lemma " + std::to_string(i) + ": " + e.what(), i);
  }
}

void stage_bound(Piece& pc, const TheoryLemma& lemma, Var base, std::size_t i) {
  if (pc.error) return;
  if (pc.plan.route == Route::Direct) {
    pc.verified = verify_lemma(pc.plan.def->clauses, lemma);
  } else {
    pc.part = finalize(*pc.res, base).clauses;
    pc.verified = verify_lemma(pc.part, lemma);
  }
  if (!pc.verified)
    pc.error = DischargeError(DischargeErrorKind::VerificationFailed,
                              "lemma " + std::to_string(i) + " " + to_string(lemma.clause) + " is not RUP against its bound", i);
}

ProofSpecificDefinition assemble(std::vector<Piece>& pieces, const std::vector<TheoryLemma>& lemmas, Var base) {
  for (Piece& pc : pieces)
    if (pc.error) throw *pc.error;
  ProofSpecificDefinition out;
  out.max_var = base;
  std::set<const MonotonicDefinition*> added;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Piece& pc = pieces[i];
    LemmaReport rep{i, lemmas[i].predicate_var, pc.plan.route, 0, pc.verified};
    const CnfFormula* src = nullptr;
    if (pc.plan.route == Route::Direct) {
      if (added.insert(pc.plan.def).second) src = &pc.plan.def->clauses;
    } else {
      src = &pc.part;
    }
    if (src) {
      for (std::size_t k = 0; k < src->size(); ++k)
        if (!src->deleted(k)) out.clauses.add((*src)[k]);
      rep.clauses_added = src->live_count();
      out.max_var = std::max(out.max_var, src->num_vars());
    }
    out.report.push_back(rep);
  }
  out.max_var = std::max(out.max_var, out.clauses.num_vars());
  out.clauses.set_num_vars(out.max_var);
  return out;
}

std::vector<Var> fresh_bases(const std::vector<Piece>& pieces, Var base) {
  std::vector<Var> bases(pieces.size());
  Var next = base;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bases[i] = next;
    if (pieces[i].res) next += static_cast<Var>(pieces[i].res->fresh);
  }
  return bases;
}

}  // namespace

HornUpperBound lemma_specific_horn(const MonotonicDefinition& def, const TheoryLemma& lemma, Var fresh_var_base) {
  return finalize(dual_residual(def, lemma), fresh_var_base);
}

HornUpperBound choice_specific_horn(const MonotonicDefinition& def, const TheoryLemma& lemma, Var fresh_var_base) {
  return finalize(choice_residual(def, lemma), fresh_var_base);
}

std::size_t fresh_needed(const MonotonicDefinition& def, Route route, const TheoryLemma& lemma) {
  return route == Route::Direct ? 0 : residual(def, route, lemma).fresh;
}

bool verify_lemma(const CnfFormula& bound, const TheoryLemma& lemma) { return rup_check(bound, lemma.clause); }

ProofSpecificDefinition proof_specific_definition(const PredicateIndex& preds, const std::vector<TheoryLemma>& lemmas,
                                                  Var fresh_var_base) {
  std::vector<Piece> pieces(lemmas.size());
  for (std::size_t i = 0; i < lemmas.size(); ++i) stage_residual(pieces[i], preds, lemmas[i], i);
  std::vector<Var> bases = fresh_bases(pieces, fresh_var_base);
  for (std::size_t i = 0; i < lemmas.size(); ++i) stage_bound(pieces[i], lemmas[i], bases[i], i);
  return assemble(pieces, lemmas, fresh_var_base);
}

ProofSpecificDefinition proof_specific_definition_parallel(const PredicateIndex& preds,
                                                           const std::vector<TheoryLemma>& lemmas, Var fresh_var_base,
                                                           int threads) {
  if (threads <= 0) threads = omp_get_max_threads();
  const long n = static_cast<long>(lemmas.size());
  std::vector<Piece> pieces(lemmas.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < n; ++i) stage_residual(pieces[i], preds, lemmas[i], static_cast<std::size_t>(i));
  std::vector<Var> bases = fresh_bases(pieces, fresh_var_base);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < n; ++i) stage_bound(pieces[i], lemmas[i], bases[i], static_cast<std::size_t>(i));
  return assemble(pieces, lemmas, fresh_var_base);
}

}  // namespace smmt
