#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "smmt/cnf.hpp"

namespace smmt {

enum class RecordKind { Learned, Deletion, TheoryLemma };

/// One line of an (extended) DRAT certificate.
struct ProofRecord {
  RecordKind kind = RecordKind::Learned;
  Clause clause;
  std::vector<Lit> witness;  ///< TheoryLemma only
  Var predicate_var = 0;     ///< TheoryLemma only

  static ProofRecord learned(Clause c) { return {RecordKind::Learned, std::move(c), {}, 0}; }
  static ProofRecord deletion(Clause c) { return {RecordKind::Deletion, std::move(c), {}, 0}; }
  static ProofRecord theory(Clause c, Var pred, std::vector<Lit> witness) {
    return {RecordKind::TheoryLemma, std::move(c), std::move(witness), pred};
  }
  bool adds_clause() const { return kind != RecordKind::Deletion; }

  friend bool operator==(const ProofRecord&, const ProofRecord&) = default;
};

struct ProofCertificate {
  std::vector<ProofRecord> records;

  std::size_t size() const { return records.size(); }
  std::size_t count(RecordKind k) const;
  bool has_theory_records() const { return count(RecordKind::TheoryLemma) > 0; }

  friend bool operator==(const ProofCertificate&, const ProofCertificate&) = default;
};

enum class RejectReason { None, RupFailed, EmptyClauseNotDerived, BadDeletion, TheoryLemmaPresent };

const char* to_string(RejectReason r);

struct Verdict {
  bool verified = false;
  std::size_t record = 0;  ///< first failing record (== size() for EmptyClauseNotDerived)
  RejectReason reason = RejectReason::None;

  explicit operator bool() const { return verified; }
};

struct CheckOptions {
  /// Add TheoryLemma records unchecked instead of rejecting them.
  bool theory_lemmas_as_axioms = false;
};

/// Forward DRAT/RUP check. Every added clause must be RUP against the current
/// database; verification succeeds once the empty clause is added.
Verdict check_drat(const CnfFormula& f, const ProofCertificate& proof, CheckOptions opts = {});

struct BackwardResult {
  ProofCertificate core;
  std::vector<std::size_t> kept;  ///< indices into the input proof, ascending
  std::size_t theory_lemmas_in = 0;
  std::size_t theory_lemmas_kept = 0;
};

/// Trims `proof` to the records reachable from the final empty clause through
/// the recorded conflict participants. Theory lemmas are kept as axioms when
/// reached. Throws if the proof does not forward-verify.
BackwardResult backward_check(const CnfFormula& f, const ProofCertificate& proof);

/// Greedily drops addition records whose removal keeps the proof verifying,
/// repeating until every remaining record is necessary.
ProofCertificate minimize_proof(const CnfFormula& f, const ProofCertificate& proof);

void write_certificate(std::ostream& out, const ProofCertificate& proof);
std::string certificate_to_string(const ProofCertificate& proof);
ProofCertificate read_certificate(std::istream& in);
ProofCertificate parse_certificate(const std::string& text);

}  // namespace smmt
