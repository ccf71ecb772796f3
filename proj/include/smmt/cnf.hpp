#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smmt {

using Var = std::uint32_t;

/// Base class for every error the library reports.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// DIMACS-style signed literal. Variable 0 is invalid.
class Lit {
public:
  constexpr Lit() = default;
  explicit Lit(int encoded) : encoded_(encoded) {
    if (encoded == 0)
      throw Error("literal 0 is not a valid literal");
  }
  static Lit pos(Var v) { return Lit(static_cast<int>(v)); }
  static Lit neg(Var v) { return Lit(-static_cast<int>(v)); }
  static Lit make(Var v, bool positive) { return positive ? pos(v) : neg(v); }

  constexpr int encoded() const { return encoded_; }
  constexpr Var var() const { return static_cast<Var>(encoded_ < 0 ? -encoded_ : encoded_); }
  constexpr bool positive() const { return encoded_ > 0; }
  constexpr bool valid() const { return encoded_ != 0; }
  Lit operator~() const { return Lit(-encoded_); }
  /// Dense index for watch lists: 2*var + (negative ? 1 : 0).
  constexpr std::size_t index() const { return 2 * var() + (encoded_ < 0 ? 1 : 0); }

  friend constexpr bool operator==(Lit a, Lit b) = default;
  friend constexpr auto operator<=>(Lit a, Lit b) = default;

private:
  int encoded_ = 0;
};

inline Lit negate(Lit l) { return ~l; }

using Clause = std::vector<Lit>;

/// Sorts and removes duplicate literals. Returns true if the clause is a tautology.
bool normalize(Clause& c);
bool is_tautology(const Clause& c);

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

inline LBool lbool_of(bool b) { return b ? LBool::True : LBool::False; }

/// A partial assignment kept both as a value table and as an ordered trail.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(Var num_vars) : values_(num_vars + 1, LBool::Undef) {}
  static Assignment from_literals(Var num_vars, std::span<const Lit> lits);

  Var num_vars() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }
  void grow(Var num_vars);

  LBool value(Var v) const { return v < values_.size() ? values_[v] : LBool::Undef; }
  LBool value(Lit l) const {
    LBool b = value(l.var());
    if (b == LBool::Undef) return b;
    return (b == LBool::True) == l.positive() ? LBool::True : LBool::False;
  }
  bool is_true(Lit l) const { return value(l) == LBool::True; }
  bool is_false(Lit l) const { return value(l) == LBool::False; }
  bool assigned(Var v) const { return value(v) != LBool::Undef; }

  /// Assigns `l`. Returns false (and changes nothing) if `~l` is already assigned.
  bool assign(Lit l);
  /// Pops the trail back to `size` entries.
  void shrink_to(std::size_t size);

  const std::vector<Lit>& trail() const { return trail_; }
  std::size_t size() const { return trail_.size(); }
  bool total() const { return trail_.size() == num_vars(); }

private:
  std::vector<LBool> values_;
  std::vector<Lit> trail_;
};

/// Growable clause database with a deletion set.
class CnfFormula {
public:
  CnfFormula() = default;
  explicit CnfFormula(Var num_vars) : num_vars_(num_vars) {}
  CnfFormula(Var num_vars, std::vector<Clause> clauses);

  Var num_vars() const { return num_vars_; }
  void set_num_vars(Var n) { num_vars_ = n; }

  /// Appends a clause (kept verbatim); grows num_vars if needed. Returns its index.
  std::size_t add(Clause c);
  void append(const CnfFormula& other);

  std::size_t size() const { return clauses_.size(); }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  void erase(std::size_t i);
  bool deleted(std::size_t i) const { return i < deleted_.size() && deleted_[i]; }
  std::size_t live_count() const;

  /// Live clauses in index order.
  std::vector<Clause> live() const;

private:
  Var num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<bool> deleted_;
};

/// Removes satisfied clauses and falsified literals. Tautologies count as satisfied.
CnfFormula reduce(const CnfFormula& f, const Assignment& m);
/// True if the reduced formula contains the empty clause.
bool has_empty_clause(const CnfFormula& f);

struct PropagationResult {
  Assignment assignment;
  std::optional<std::size_t> conflict;   ///< index of the falsified clause
  /// reason[v] = clause index that implied v, if v was implied by propagation.
  std::vector<std::optional<std::size_t>> reason;

  bool conflicting() const { return conflict.has_value(); }
};

/// Unit propagation to fixpoint. Initial units are taken in clause-index order and
/// processed through a FIFO queue.
PropagationResult unit_propagate(const CnfFormula& f, const Assignment& m);

/// Unit propagation over an explicit clause list. Clause indices in the result
/// (conflict, reasons) are positions in `clauses`.
PropagationResult unit_propagate(std::span<const Clause* const> clauses, Var num_vars,
                                 const Assignment& m);

/// Clause positions (into `clauses`) that took part in the conflict, following
/// reasons transitively from the conflicting clause.
std::vector<std::size_t> conflict_participants(std::span<const Clause* const> clauses,
                                               const PropagationResult& r);

/// Reverse unit propagation check.
bool rup_check(const CnfFormula& f, const Clause& c);

/// Horn: at most one positive literal per clause, after flipping the variables
/// in `flipped` (empty means plain syntax).
bool is_horn(const CnfFormula& f, std::span<const Var> flipped = {});
bool is_dual_horn(const CnfFormula& f, std::span<const Var> flipped = {});
bool clause_is_horn(const Clause& c, std::span<const Var> flipped = {});

/// CNF for (antecedent => head) with one fresh selector per antecedent clause,
/// numbered from fresh_var_base + 1. Throws if antecedent mentions var(head).
CnfFormula encode_implication(const CnfFormula& antecedent, Lit head, Var fresh_var_base);

CnfFormula read_dimacs(std::istream& in);
CnfFormula parse_dimacs(const std::string& text);
void write_dimacs(std::ostream& out, const CnfFormula& f);
std::string to_dimacs(const CnfFormula& f);

std::string to_string(const Clause& c);

}  // namespace smmt
