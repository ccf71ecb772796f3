#include "smmt/sat.hpp"

#include <algorithm>
#include <random>

namespace smmt {

namespace {

constexpr std::int64_t kNone = -1;

struct Reason {
  std::int64_t clause = kNone;
  std::int64_t handle = kNone;
};

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

// Max-activity heap, ties broken towards the lower variable.
class VarHeap {
public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}

  void reserve(Var n) { pos_.assign(n + 1, -1); }
  bool contains(Var v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  void insert(Var v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }
  void increased(Var v) {
    if (contains(v)) up(pos_[v]);
  }
  Var pop() {
    Var top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

private:
  bool before(Var a, Var b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }
  void up(int i) {
    Var v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }
  void down(int i) {
    Var v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<Var> heap_;
  std::vector<int> pos_;
};

}  // namespace

struct Solver::Impl {
  Var n;
  TheoryHooks* theory;
  SolverOptions opts;

  std::vector<Clause> clauses;
  std::vector<std::vector<std::uint32_t>> watches;
  Assignment assign;
  std::vector<int> level;
  std::vector<Reason> reason;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  double var_inc = 1.0;
  VarHeap heap{activity};
  std::vector<bool> phase;
  std::vector<char> seen;
  std::vector<char> level0_done;

  ProofCertificate proof;
  SolveStats stats;
  std::vector<Lit> decisions;
  std::optional<std::size_t> root_conflict;

  Impl(const CnfFormula& f, TheoryHooks* t, SolverOptions o)
      : n(f.num_vars()), theory(t), opts(o), watches(2 * (f.num_vars() + 1)), assign(f.num_vars()),
        level(f.num_vars() + 1, 0), reason(f.num_vars() + 1), activity(f.num_vars() + 1, 0.0),
        phase(f.num_vars() + 1, false), seen(f.num_vars() + 1, 0), level0_done(f.num_vars() + 1, 0) {
    if (opts.seed != 0) {
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> jitter(0.0, 1e-5);
      for (Var v = 1; v <= n; ++v) activity[v] = jitter(rng);
    }
    heap.reserve(n);
    for (Var v = 1; v <= n; ++v) heap.insert(v);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.deleted(i)) continue;
      Clause c = f[i];
      if (normalize(c)) continue;
      std::size_t ci = clauses.size();
      clauses.push_back(std::move(c));
      load(ci);
    }
  }

  void load(std::size_t ci) {
    const Clause& c = clauses[ci];
    if (root_conflict) return;
    if (c.empty()) {
      root_conflict = ci;
    } else if (c.size() == 1) {
      if (assign.is_false(c[0]))
        root_conflict = ci;
      else if (!assign.is_true(c[0]))
        enqueue(c[0], {static_cast<std::int64_t>(ci), kNone});
    } else {
      attach(ci);
    }
  }

  int dl() const { return static_cast<int>(trail_lim.size()); }

  void attach(std::size_t ci) {
    const Clause& c = clauses[ci];
    if (c.size() < 2) return;
    watches[c[0].index()].push_back(static_cast<std::uint32_t>(ci));
    watches[c[1].index()].push_back(static_cast<std::uint32_t>(ci));
  }

  void enqueue(Lit l, Reason r) {
    assign.assign(l);
    level[l.var()] = dl();
    reason[l.var()] = r;
  }

  std::optional<std::size_t> bcp() {
    const auto& trail = assign.trail();
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      ++stats.propagations;
      Lit fl = ~p;
      auto& ws = watches[fl.index()];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        std::uint32_t ci = ws[i++];
        Clause& c = clauses[ci];
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (assign.is_true(c[0])) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (!assign.is_false(c[k])) {
            std::swap(c[1], c[k]);
            watches[c[1].index()].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (assign.is_false(c[0])) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead = trail.size();
          return ci;
        }
        enqueue(c[0], {static_cast<std::int64_t>(ci), kNone});
      }
      ws.resize(j);
    }
    return std::nullopt;
  }

  // Adds a theory lemma to the database; `implied` (if valid) goes first.
  std::size_t materialize(TheoryHandle h, Lit implied) {
    TheoryLemma lemma = theory->explain(h);
    ++stats.theory_lemmas;
    if (opts.log_proof)
      proof.records.push_back(ProofRecord::theory(lemma.clause, lemma.predicate_var, lemma.witness));
    Clause c = lemma.clause;
    for (Lit l : c)
      if (l != implied && !assign.is_false(l))
        throw Error("theory lemma " + to_string(c) + " is not falsified under the current trail");
    if (implied.valid()) {
      auto it = std::find(c.begin(), c.end(), implied);
      if (it == c.end()) throw Error("theory lemma does not contain its implied literal");
      std::iter_swap(c.begin(), it);
      order_by_level(c, 1);
    } else {
      order_by_level(c, 0);
    }
    std::size_t ci = clauses.size();
    clauses.push_back(std::move(c));
    attach(ci);
    return ci;
  }

  // Fills the watch slots c[from..1] with the highest-level remaining literals.
  void order_by_level(Clause& c, std::size_t from) {
    for (std::size_t slot = from; slot < std::min<std::size_t>(c.size(), 2); ++slot) {
      std::size_t best = slot;
      for (std::size_t k = slot + 1; k < c.size(); ++k)
        if (level[c[k].var()] > level[c[best].var()]) best = k;
      std::swap(c[slot], c[best]);
    }
  }

  std::size_t reason_clause(Var v) {
    Reason& r = reason[v];
    if (r.clause == kNone) {
      if (r.handle == kNone) throw Error("reason requested for a decision variable");
      Lit implied = Lit::make(v, assign.is_true(Lit::pos(v)));
      r.clause = static_cast<std::int64_t>(materialize(static_cast<TheoryHandle>(r.handle), implied));
      r.handle = kNone;
    }
    return static_cast<std::size_t>(r.clause);
  }

  // Puts the reasons of a level-0 literal, transitively, into the database so
  // that dropping it from a learned clause stays RUP.
  void ensure_level0(Var root) {
    std::vector<Var> stack{root};
    while (!stack.empty()) {
      Var v = stack.back();
      stack.pop_back();
      if (level0_done[v]) continue;
      level0_done[v] = 1;
      Clause c = clauses[reason_clause(v)];
      for (Lit q : c)
        if (q.var() != v && !level0_done[q.var()]) stack.push_back(q.var());
    }
  }

  std::optional<std::size_t> propagate() {
    for (;;) {
      if (auto confl = bcp()) return confl;
      if (!theory) return std::nullopt;
      TheoryHooks::Propagation tp = theory->propagate(assign);
      if (tp.conflict) return materialize(*tp.conflict, Lit());
      bool progress = false;
      for (const auto& imp : tp.implied) {
        if (assign.is_true(imp.lit)) continue;
        if (assign.is_false(imp.lit)) return materialize(imp.handle, Lit());
        enqueue(imp.lit, {kNone, static_cast<std::int64_t>(imp.handle)});
        progress = true;
      }
      if (!progress) return std::nullopt;
    }
  }

  void bump(Var v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (Var u = 1; u <= n; ++u) activity[u] *= 1e-100;
      var_inc *= 1e-100;
    }
    heap.increased(v);
  }

  Learned analyze(std::size_t confl) {
    Clause learnt{Lit()};
    int path = 0;
    Lit p;
    std::size_t idx = assign.size();
    const auto& trail = assign.trail();
    for (;;) {
      Clause c = clauses[confl];
      for (Lit q : c) {
        if (p.valid() && q == p) continue;
        Var v = q.var();
        if (seen[v]) continue;
        if (level[v] == 0) {
          ensure_level0(v);
          continue;
        }
        seen[v] = 1;
        bump(v);
        if (level[v] >= dl())
          ++path;
        else
          learnt.push_back(q);
      }
      do --idx;
      while (!seen[trail[idx].var()]);
      p = trail[idx];
      seen[p.var()] = 0;
      if (--path == 0) break;
      confl = reason_clause(p.var());
    }
    learnt[0] = ~p;
    for (std::size_t k = 1; k < learnt.size(); ++k) seen[learnt[k].var()] = 0;
    int bj = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level[learnt[k].var()] > level[learnt[best].var()]) best = k;
      std::swap(learnt[1], learnt[best]);
      bj = level[learnt[1].var()];
    }
    var_inc /= 0.95;
    return {learnt, bj};
  }

  Learned learn(std::size_t confl) {
    Learned l = analyze(confl);
    ++stats.learned;
    if (opts.check_learned) {
      CnfFormula db(n, clauses);
      if (!rup_check(db, l.clause)) throw Error("learned clause " + to_string(l.clause) + " is not RUP");
    }
    if (opts.log_proof) proof.records.push_back(ProofRecord::learned(l.clause));
    return l;
  }

  void backtrack(int lvl) {
    if (dl() <= lvl) return;
    std::size_t keep = trail_lim[lvl];
    const auto& trail = assign.trail();
    for (std::size_t k = trail.size(); k-- > keep;) {
      Var v = trail[k].var();
      phase[v] = trail[k].positive();
      reason[v] = {};
      heap.insert(v);
    }
    assign.shrink_to(keep);
    trail_lim.resize(lvl);
    qhead = std::min(qhead, keep);
    if (theory) theory->backtrack(keep);
  }

  void decide(Lit l) {
    trail_lim.push_back(assign.size());
    enqueue(l, {});
    ++stats.decisions;
    if (opts.record_decisions) decisions.push_back(l);
  }

  void refute(std::size_t confl) {
    Clause c = clauses[confl];
    for (Lit q : c) ensure_level0(q.var());
    if (opts.log_proof) proof.records.push_back(ProofRecord::learned({}));
  }

  // Returns true if the conflict was the final one.
  bool handle_conflict(std::size_t confl) {
    ++stats.conflicts;
    int top = 0;
    for (Lit q : clauses[confl]) top = std::max(top, level[q.var()]);
    if (top == 0) {
      backtrack(0);
      refute(confl);
      return true;
    }
    backtrack(top);
    Learned l = learn(confl);
    backtrack(l.backjump_level);
    std::size_t ci = clauses.size();
    clauses.push_back(l.clause);
    attach(ci);
    enqueue(l.clause[0], {static_cast<std::int64_t>(ci), kNone});
    return false;
  }

  SolveResult finish(SolveStatus st) {
    SolveResult r;
    r.status = st;
    if (st == SolveStatus::Sat) r.model = assign;
    r.proof = proof;
    r.decisions = decisions;
    r.stats = stats;
    return r;
  }

  SolveResult solve() {
    if (root_conflict) {
      refute(*root_conflict);
      return finish(SolveStatus::Unsat);
    }
    int restart_idx = 0;
    std::uint64_t since_restart = 0;
    for (;;) {
      std::optional<std::size_t> confl = propagate();
      if (confl) {
        if (handle_conflict(*confl)) return finish(SolveStatus::Unsat);
        ++since_restart;
        if (opts.conflict_budget && stats.conflicts >= opts.conflict_budget)
          return finish(SolveStatus::Unknown);
        continue;
      }
      if (since_restart >= static_cast<std::uint64_t>(luby(2, restart_idx) * 64)) {
        ++restart_idx;
        since_restart = 0;
        ++stats.restarts;
        backtrack(0);
        continue;
      }
      Var next = 0;
      while (!heap.empty()) {
        Var v = heap.pop();
        if (!assign.assigned(v)) {
          next = v;
          break;
        }
      }
      if (next == 0) {
        if (theory) {
          if (auto h = theory->final_check(assign)) {
            if (handle_conflict(materialize(*h, Lit()))) return finish(SolveStatus::Unsat);
            continue;
          }
        }
        return finish(SolveStatus::Sat);
      }
      decide(Lit::make(next, phase[next]));
    }
  }
};

Solver::Solver(const CnfFormula& f, TheoryHooks* theory, SolverOptions opts)
    : impl_(std::make_unique<Impl>(f, theory, opts)) {}
Solver::~Solver() = default;

SolveResult Solver::solve() { return impl_->solve(); }
void Solver::decide(Lit l) {
  if (impl_->assign.assigned(l.var())) throw Error("decision on an assigned variable");
  impl_->decide(l);
}
std::optional<std::size_t> Solver::propagate() {
  if (impl_->root_conflict) return impl_->root_conflict;
  return impl_->propagate();
}
Solver::Learned Solver::learn_from_conflict(std::size_t conflict) {
  if (impl_->dl() == 0) throw Error("conflict at level 0 has nothing to learn");
  return impl_->learn(conflict);
}
int Solver::decision_level() const { return impl_->dl(); }
const Assignment& Solver::assignment() const { return impl_->assign; }
const std::vector<Clause>& Solver::clause_db() const { return impl_->clauses; }
const ProofCertificate& Solver::proof() const { return impl_->proof; }

SolveResult solve(const CnfFormula& f, TheoryHooks* theory, SolverOptions opts) {
  Solver s(f, theory, opts);
  return s.solve();
}

}  // namespace smmt
