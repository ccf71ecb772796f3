#include "smmt/drat.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace smmt {

std::size_t ProofCertificate::count(RecordKind k) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [k](const ProofRecord& r) { return r.kind == k; }));
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::RupFailed: return "rup-failed";
    case RejectReason::EmptyClauseNotDerived: return "empty-clause-not-derived";
    case RejectReason::BadDeletion: return "bad-deletion";
    case RejectReason::TheoryLemmaPresent: return "theory-lemma-present";
  }
  return "?";
}

namespace {

Clause sorted_key(const Clause& c) {
  Clause k = c;
  normalize(k);
  return k;
}

// Clause database for checking: original clauses get ids [0, n), record i adds
// id n + i.
class CheckDb {
public:
  explicit CheckDb(const CnfFormula& f) : num_vars_(f.num_vars()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.deleted(i)) continue;
      add(f[i], i);
    }
  }

  void add(const Clause& c, std::size_t id) {
    std::size_t slot = clauses_.size();
    clauses_.push_back(c);
    ids_.push_back(id);
    alive_.push_back(true);
    index_[sorted_key(c)].push_back(slot);
    for (Lit l : c) num_vars_ = std::max(num_vars_, l.var());
  }

  bool remove(const Clause& c) {
    auto it = index_.find(sorted_key(c));
    if (it == index_.end() || it->second.empty()) return false;
    alive_[it->second.back()] = false;
    it->second.pop_back();
    return true;
  }

  /// RUP check; on success `participants` receives ids of clauses in the conflict.
  bool rup(const Clause& c, std::vector<std::size_t>* participants) const {
    Assignment m(num_vars_);
    for (Lit l : c)
      if (!m.assign(~l)) return true;
    std::vector<const Clause*> ptrs;
    std::vector<std::size_t> slots;
    ptrs.reserve(clauses_.size());
    for (std::size_t s = 0; s < clauses_.size(); ++s) {
      if (!alive_[s]) continue;
      ptrs.push_back(&clauses_[s]);
      slots.push_back(s);
    }
    PropagationResult r = unit_propagate(ptrs, num_vars_, m);
    if (!r.conflicting()) return false;
    if (participants) {
      participants->clear();
      for (std::size_t p : conflict_participants(ptrs, r)) participants->push_back(ids_[slots[p]]);
    }
    return true;
  }

private:
  Var num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::size_t> ids_;
  std::vector<bool> alive_;
  std::map<Clause, std::vector<std::size_t>> index_;
};

struct ForwardTrace {
  Verdict verdict;
  std::vector<std::vector<std::size_t>> participants;  // per record
  std::size_t empty_record = 0;
};

ForwardTrace forward(const CnfFormula& f, const ProofCertificate& proof, CheckOptions opts,
                     bool trace) {
  ForwardTrace out;
  if (trace) out.participants.resize(proof.size());
  CheckDb db(f);
  const std::size_t base = f.size();
  for (std::size_t i = 0; i < proof.size(); ++i) {
    const ProofRecord& r = proof.records[i];
    switch (r.kind) {
      case RecordKind::Deletion:
        if (!db.remove(r.clause)) {
          out.verdict = {false, i, RejectReason::BadDeletion};
          return out;
        }
        break;
      case RecordKind::TheoryLemma:
        if (!opts.theory_lemmas_as_axioms) {
          out.verdict = {false, i, RejectReason::TheoryLemmaPresent};
          return out;
        }
        db.add(r.clause, base + i);
        break;
      case RecordKind::Learned:
        if (!db.rup(r.clause, trace ? &out.participants[i] : nullptr)) {
          out.verdict = {false, i, RejectReason::RupFailed};
          return out;
        }
        if (r.clause.empty()) {
          out.verdict = {true, i, RejectReason::None};
          out.empty_record = i;
          return out;
        }
        db.add(r.clause, base + i);
        break;
    }
  }
  out.verdict = {false, proof.size(), RejectReason::EmptyClauseNotDerived};
  return out;
}

}  // namespace

Verdict check_drat(const CnfFormula& f, const ProofCertificate& proof, CheckOptions opts) {
  return forward(f, proof, opts, false).verdict;
}

BackwardResult backward_check(const CnfFormula& f, const ProofCertificate& proof) {
  ForwardTrace t = forward(f, proof, {.theory_lemmas_as_axioms = true}, true);
  if (!t.verdict.verified)
    throw Error(std::string("backward_check: proof does not verify (") +
                to_string(t.verdict.reason) + " at record " + std::to_string(t.verdict.record) + ")");
  const std::size_t base = f.size();
  std::vector<bool> needed(proof.size(), false);
  needed[t.empty_record] = true;
  for (std::size_t i = t.empty_record + 1; i-- > 0;) {
    if (!needed[i] || proof.records[i].kind != RecordKind::Learned) continue;
    for (std::size_t id : t.participants[i])
      if (id >= base) needed[id - base] = true;
  }
  // Keep deletions of clauses that stay in the database: original clauses or
  // kept additions.
  std::map<Clause, std::vector<std::size_t>> live;  // key -> record indices (or npos for original)
  constexpr std::size_t original = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.deleted(i)) live[sorted_key(f[i])].push_back(original);
  BackwardResult out;
  for (std::size_t i = 0; i <= t.empty_record; ++i) {
    const ProofRecord& r = proof.records[i];
    if (r.kind == RecordKind::TheoryLemma) ++out.theory_lemmas_in;
    if (r.kind == RecordKind::Deletion) {
      auto& stack = live[sorted_key(r.clause)];
      std::size_t src = stack.back();
      stack.pop_back();
      if (src == original || needed[src]) {
        out.core.records.push_back(r);
        out.kept.push_back(i);
      }
      continue;
    }
    live[sorted_key(r.clause)].push_back(i);
    if (!needed[i]) continue;
    if (r.kind == RecordKind::TheoryLemma) ++out.theory_lemmas_kept;
    out.core.records.push_back(r);
    out.kept.push_back(i);
  }
  for (std::size_t i = t.empty_record + 1; i < proof.size(); ++i)
    if (proof.records[i].kind == RecordKind::TheoryLemma) ++out.theory_lemmas_in;
  return out;
}

ProofCertificate minimize_proof(const CnfFormula& f, const ProofCertificate& proof) {
  ProofCertificate cur = proof;
  if (!check_drat(f, cur)) throw Error("minimize_proof: proof does not verify");
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = cur.size(); k-- > 0;) {
      const ProofRecord& r = cur.records[k];
      if (r.kind != RecordKind::Learned || r.clause.empty()) continue;
      // a deletion of the dropped clause goes with it
      Clause key = sorted_key(r.clause);
      std::size_t paired = cur.size();
      for (std::size_t j = k + 1; j < cur.size(); ++j) {
        const ProofRecord& q = cur.records[j];
        if (q.kind == RecordKind::Deletion && sorted_key(q.clause) == key) {
          paired = j;
          break;
        }
      }
      ProofCertificate trial;
      trial.records.reserve(cur.size() - 1);
      for (std::size_t j = 0; j < cur.size(); ++j)
        if (j != k && j != paired) trial.records.push_back(cur.records[j]);
      if (check_drat(f, trial)) {
        cur = std::move(trial);
        changed = true;
      }
    }
  }
  return cur;
}

void write_certificate(std::ostream& out, const ProofCertificate& proof) {
  for (const ProofRecord& r : proof.records) {
    switch (r.kind) {
      case RecordKind::Learned: break;
      case RecordKind::Deletion: out << "d "; break;
      case RecordKind::TheoryLemma: out << "t " << r.predicate_var << ' '; break;
    }
    for (Lit l : r.clause) out << l.encoded() << ' ';
    out << '0';
    if (r.kind == RecordKind::TheoryLemma) {
      for (Lit l : r.witness) out << ' ' << l.encoded();
      out << " 0";
    }
    out << '\n';
  }
}

std::string certificate_to_string(const ProofCertificate& proof) {
  std::ostringstream out;
  write_certificate(out, proof);
  return out.str();
}

namespace {
std::vector<Lit> read_zero_terminated(std::istringstream& ss, std::size_t lineno, bool& terminated) {
  std::vector<Lit> lits;
  terminated = false;
  std::string tok;
  while (ss >> tok) {
    long long x;
    std::size_t used = 0;
    try {
      x = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad literal '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(lineno, "bad literal '" + tok + "'");
    if (x == 0) {
      terminated = true;
      return lits;
    }
    if (std::llabs(x) > 0x3fffffff) throw ParseError(lineno, "literal out of range");
    lits.push_back(Lit(static_cast<int>(x)));
  }
  return lits;
}
}  // namespace

ProofCertificate read_certificate(std::istream& in) {
  ProofCertificate proof;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "c") continue;
    ProofRecord r;
    bool terminated = false;
    std::istringstream whole(line);
    std::istringstream* rest = &ss;
    if (first == "d") {
      r.kind = RecordKind::Deletion;
      r.clause = read_zero_terminated(ss, lineno, terminated);
    } else if (first == "t") {
      r.kind = RecordKind::TheoryLemma;
      long long pv;
      if (!(ss >> pv) || pv <= 0) throw ParseError(lineno, "theory record needs a predicate variable");
      r.predicate_var = static_cast<Var>(pv);
      r.clause = read_zero_terminated(ss, lineno, terminated);
      if (!terminated) throw ParseError(lineno, "theory clause not terminated by 0");
      r.witness = read_zero_terminated(ss, lineno, terminated);
      bool has_pred = false;
      for (Lit l : r.clause) has_pred |= l.var() == r.predicate_var;
      if (!has_pred) throw ParseError(lineno, "theory clause does not mention its predicate variable");
    } else {
      r.kind = RecordKind::Learned;
      rest = &whole;
      r.clause = read_zero_terminated(whole, lineno, terminated);
    }
    if (!terminated) throw ParseError(lineno, "record not terminated by 0");
    std::string extra;
    if (*rest >> extra) throw ParseError(lineno, "trailing tokens after record");
    proof.records.push_back(std::move(r));
  }
  return proof;
}

ProofCertificate parse_certificate(const std::string& text) {
  std::istringstream in(text);
  return read_certificate(in);
}

}  // namespace smmt
