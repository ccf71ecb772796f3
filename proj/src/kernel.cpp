#include "smmt/kernel.hpp"

#include <algorithm>

namespace smmt {

TheoryKernel::TheoryKernel(std::vector<const MonotonicPredicate*> preds, bool attach_witnesses)
    : preds_(std::move(preds)), witnesses_(attach_witnesses) {}

TheoryHandle TheoryKernel::push(std::size_t pred, std::size_t created_at, TheoryLemma lemma) {
  entries_.push_back({next_id_, pred, created_at, std::move(lemma), false});
  return next_id_++;
}

TheoryHooks::Propagation TheoryKernel::propagate(const Assignment& m) {
  Propagation out;
  for (std::size_t k = 0; k < preds_.size(); ++k) {
    const MonotonicPredicate& p = *preds_[k];
    const Lit atom = Lit::pos(p.predicate_var());
    const LBool val = m.value(atom);
    Approximation ap = approximate(m, p.inputs());
    std::optional<bool> forced;
    if (p.evaluate(ap.lower))
      forced = true;
    else if (!p.evaluate(ap.upper))
      forced = false;
    if (!forced) continue;
    if (val == lbool_of(*forced)) continue;
    TheoryHandle h = push(k, m.size(), p.make_lemma(m, *forced, false));
    if (val != LBool::Undef) {
      out.conflict = h;
      return out;
    }
    out.implied.push_back({Lit::make(p.predicate_var(), *forced), h});
  }
  return out;
}

TheoryLemma TheoryKernel::explain(TheoryHandle h) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), h,
                             [](const Entry& e, TheoryHandle id) { return e.id < id; });
  if (it == entries_.end() || it->id != h) throw Error("stale theory handle " + std::to_string(h));
  if (witnesses_ && !it->has_witness) {
    it->lemma.witness = preds_[it->pred]->witness(it->lemma);
    it->has_witness = true;
  }
  return it->lemma;
}

std::optional<TheoryHandle> TheoryKernel::final_check(const Assignment& m) {
  Propagation p = propagate(m);
  if (p.conflict) return p.conflict;
  // a total assignment leaves nothing to imply; an implication here means an unassigned atom
  if (!p.implied.empty()) throw Error("final check reached with an unassigned predicate atom");
  return std::nullopt;
}

void TheoryKernel::backtrack(std::size_t trail_size) {
  while (!entries_.empty() && entries_.back().created_at >= trail_size) entries_.pop_back();
}

}  // namespace smmt
