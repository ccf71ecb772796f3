#include "smmt/cnf.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace smmt {

bool normalize(Clause& c) {
  std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
    return a.var() != b.var() ? a.var() < b.var() : a.encoded() < b.encoded();
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].var() == c[i - 1].var()) return true;
  return false;
}

bool is_tautology(const Clause& c) {
  Clause copy = c;
  return normalize(copy);
}

Assignment Assignment::from_literals(Var num_vars, std::span<const Lit> lits) {
  Var n = num_vars;
  for (Lit l : lits) n = std::max(n, l.var());
  Assignment a(n);
  for (Lit l : lits)
    if (!a.assign(l)) throw Error("conflicting literals in assignment");
  return a;
}

void Assignment::grow(Var num_vars) {
  if (num_vars + 1 > values_.size()) values_.resize(num_vars + 1, LBool::Undef);
}

bool Assignment::assign(Lit l) {
  grow(l.var());
  LBool cur = value(l);
  if (cur == LBool::True) return true;
  if (cur == LBool::False) return false;
  values_[l.var()] = lbool_of(l.positive());
  trail_.push_back(l);
  return true;
}

void Assignment::shrink_to(std::size_t size) {
  while (trail_.size() > size) {
    values_[trail_.back().var()] = LBool::Undef;
    trail_.pop_back();
  }
}

CnfFormula::CnfFormula(Var num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
  for (auto& c : clauses) add(std::move(c));
}

std::size_t CnfFormula::add(Clause c) {
  for (Lit l : c) num_vars_ = std::max(num_vars_, l.var());
  clauses_.push_back(std::move(c));
  return clauses_.size() - 1;
}

void CnfFormula::append(const CnfFormula& other) {
  num_vars_ = std::max(num_vars_, other.num_vars());
  for (std::size_t i = 0; i < other.size(); ++i)
    if (!other.deleted(i)) add(other[i]);
}

void CnfFormula::erase(std::size_t i) {
  if (i >= clauses_.size()) throw Error("erase: clause index out of range");
  if (deleted_.size() < clauses_.size()) deleted_.resize(clauses_.size(), false);
  deleted_[i] = true;
}

std::size_t CnfFormula::live_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < clauses_.size(); ++i) n += !deleted(i);
  return n;
}

std::vector<Clause> CnfFormula::live() const {
  std::vector<Clause> out;
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (!deleted(i)) out.push_back(clauses_[i]);
  return out;
}

CnfFormula reduce(const CnfFormula& f, const Assignment& m) {
  CnfFormula out(f.num_vars());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.deleted(i)) continue;
    const Clause& c = f[i];
    if (is_tautology(c)) continue;
    Clause kept;
    bool sat = false;
    for (Lit l : c) {
      LBool v = m.value(l);
      if (v == LBool::True) {
        sat = true;
        break;
      }
      if (v == LBool::Undef) kept.push_back(l);
    }
    if (!sat) out.add(std::move(kept));
  }
  return out;
}

bool has_empty_clause(const CnfFormula& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.deleted(i) && f[i].empty()) return true;
  return false;
}

namespace {

// Two-watched-literal propagation over a fixed clause list. Assignments only
// grow during one run, so satisfied clauses are never watched.
class WatchPropagator {
public:
  WatchPropagator(std::span<const Clause* const> clauses, Var num_vars, const Assignment& m)
      : clauses_(clauses) {
    Var n = std::max(num_vars, m.num_vars());
    for (const Clause* c : clauses)
      for (Lit l : *c) n = std::max(n, l.var());
    result_.assignment = m;
    result_.assignment.grow(n);
    result_.reason.assign(n + 1, std::nullopt);
    watches_.resize(2 * (n + 1));
    watch_.resize(clauses.size(), {0, 0});
  }

  PropagationResult run() {
    Assignment& a = result_.assignment;
    for (Lit l : a.trail()) queue_.push_back(l);
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const Clause& c = *clauses_[i];
      std::size_t first = npos, second = npos;
      bool sat = false;
      for (std::size_t k = 0; k < c.size(); ++k) {
        LBool v = a.value(c[k]);
        if (v == LBool::True) {
          sat = true;
          break;
        }
        if (v == LBool::Undef) {
          if (first == npos) first = k;
          else if (second == npos && c[k] != c[first]) second = k;
        }
      }
      if (sat) continue;
      if (first == npos) {
        result_.conflict = i;
        return std::move(result_);
      }
      if (second == npos) {
        enqueue(c[first], i);
        continue;
      }
      watch_[i] = {first, second};
      watches_[c[first].index()].push_back(i);
      watches_[c[second].index()].push_back(i);
    }
    while (!queue_.empty()) {
      Lit p = queue_.front();
      queue_.pop_front();
      Lit falsified = ~p;
      auto& ws = watches_[falsified.index()];
      std::size_t keep = 0;
      for (std::size_t w = 0; w < ws.size(); ++w) {
        std::size_t ci = ws[w];
        if (result_.conflict) {
          ws[keep++] = ci;
          continue;
        }
        const Clause& c = *clauses_[ci];
        auto& [w0, w1] = watch_[ci];
        if (c[w0] != falsified) std::swap(w0, w1);
        // c[w0] is the falsified watch
        if (a.is_true(c[w1])) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 0; k < c.size(); ++k) {
          if (k == w0 || k == w1 || c[k] == c[w1]) continue;
          if (!a.is_false(c[k])) {
            w0 = k;
            watches_[c[k].index()].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (a.is_false(c[w1])) {
          result_.conflict = ci;
        } else if (!a.assigned(c[w1].var())) {
          enqueue(c[w1], ci);
        }
      }
      ws.resize(keep);
      if (result_.conflict) break;
    }
    return std::move(result_);
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void enqueue(Lit l, std::size_t reason) {
    if (result_.assignment.is_true(l)) return;
    result_.assignment.assign(l);
    result_.reason[l.var()] = reason;
    queue_.push_back(l);
  }

  std::span<const Clause* const> clauses_;
  PropagationResult result_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::pair<std::size_t, std::size_t>> watch_;
  std::deque<Lit> queue_;
};

}  // namespace

PropagationResult unit_propagate(std::span<const Clause* const> clauses, Var num_vars,
                                 const Assignment& m) {
  return WatchPropagator(clauses, num_vars, m).run();
}

PropagationResult unit_propagate(const CnfFormula& f, const Assignment& m) {
  std::vector<const Clause*> ptrs;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.deleted(i)) continue;
    ptrs.push_back(&f[i]);
    ids.push_back(i);
  }
  PropagationResult r = unit_propagate(ptrs, f.num_vars(), m);
  if (r.conflict) r.conflict = ids[*r.conflict];
  for (auto& reason : r.reason)
    if (reason) reason = ids[*reason];
  return r;
}

std::vector<std::size_t> conflict_participants(std::span<const Clause* const> clauses,
                                               const PropagationResult& r) {
  std::vector<std::size_t> out;
  if (!r.conflict) return out;
  std::vector<bool> seen_clause(clauses.size(), false);
  std::vector<bool> seen_var(r.reason.size(), false);
  std::vector<std::size_t> stack{*r.conflict};
  seen_clause[*r.conflict] = true;
  while (!stack.empty()) {
    std::size_t ci = stack.back();
    stack.pop_back();
    out.push_back(ci);
    for (Lit l : *clauses[ci]) {
      Var v = l.var();
      if (v >= r.reason.size() || seen_var[v]) continue;
      seen_var[v] = true;
      const auto& reason = r.reason[v];
      if (reason && !seen_clause[*reason]) {
        seen_clause[*reason] = true;
        stack.push_back(*reason);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool rup_check(const CnfFormula& f, const Clause& c) {
  Assignment m(f.num_vars());
  for (Lit l : c)
    if (!m.assign(~l)) return true;  // tautology
  return unit_propagate(f, m).conflicting();
}

namespace {
bool flipped_var(std::span<const Var> flipped, Var v) {
  return std::find(flipped.begin(), flipped.end(), v) != flipped.end();
}
std::size_t count_sign(const Clause& c, std::span<const Var> flipped, bool positive) {
  std::size_t n = 0;
  for (Lit l : c) {
    bool pos = l.positive() != flipped_var(flipped, l.var());
    n += pos == positive;
  }
  return n;
}
}  // namespace

bool clause_is_horn(const Clause& c, std::span<const Var> flipped) {
  return count_sign(c, flipped, true) <= 1;
}

bool is_horn(const CnfFormula& f, std::span<const Var> flipped) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.deleted(i) && count_sign(f[i], flipped, true) > 1) return false;
  return true;
}

bool is_dual_horn(const CnfFormula& f, std::span<const Var> flipped) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.deleted(i) && count_sign(f[i], flipped, false) > 1) return false;
  return true;
}

CnfFormula encode_implication(const CnfFormula& antecedent, Lit head, Var fresh_var_base) {
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (antecedent.deleted(i)) continue;
    for (Lit l : antecedent[i])
      if (l.var() == head.var())
        throw Error("encode_implication: antecedent mentions the head variable");
  }
  CnfFormula out(std::max({antecedent.num_vars(), head.var(), fresh_var_base}));
  Clause top;
  Var next = fresh_var_base;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (antecedent.deleted(i) || is_tautology(antecedent[i])) continue;
    Lit sel = Lit::pos(++next);
    for (Lit c : antecedent[i]) out.add({~c, ~sel});
    top.push_back(sel);
  }
  top.push_back(head);
  out.add(std::move(top));
  out.set_num_vars(std::max(out.num_vars(), next));
  return out;
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::size_t declared = 0;
  Var declared_vars = 0;
  Clause cur;
  std::size_t clause_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "p") {
      std::string kind;
      long long v = -1, c = -1;
      if (!(ss >> kind >> v >> c) || kind != "cnf" || v < 0 || c < 0)
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      if (header) throw ParseError(lineno, "duplicate header");
      header = true;
      declared_vars = static_cast<Var>(v);
      declared = static_cast<std::size_t>(c);
      f.set_num_vars(declared_vars);
      continue;
    }
    if (!header) throw ParseError(lineno, "clause before header");
    ss.clear();
    ss.str(line);
    long long x;
    while (ss >> x) {
      if (cur.empty()) clause_line = lineno;
      if (x == 0) {
        f.add(std::move(cur));
        cur.clear();
        continue;
      }
      if (static_cast<unsigned long long>(std::llabs(x)) > declared_vars)
        throw ParseError(lineno, "literal " + std::to_string(x) + " exceeds declared variables");
      cur.push_back(Lit(static_cast<int>(x)));
    }
    if (!ss.eof()) throw ParseError(lineno, "unexpected token");
  }
  if (!cur.empty()) throw ParseError(clause_line, "clause not terminated by 0");
  if (!header) throw ParseError(lineno, "missing header");
  if (f.size() != declared)
    throw ParseError(lineno, "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(f.size()));
  f.set_num_vars(declared_vars);
  return f;
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return read_dimacs(in);
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.num_vars() << ' ' << f.live_count() << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.deleted(i)) continue;
    for (Lit l : f[i]) out << l.encoded() << ' ';
    out << "0\n";
  }
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

std::string to_string(const Clause& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(c[i].encoded());
  }
  return s + ")";
}

}  // namespace smmt
