#pragma once

#include <vector>

#include "smmt/predicate.hpp"

namespace smmt {

bool eval_cmp(const BitVec& a, const BitVec& b, const Assignment& m);
bool eval_sumcmp(const std::vector<BitVec>& A, const std::vector<BitVec>& B, const Assignment& m);

/// Horn clauses deriving `head` from a > b, compared from the msb. Aux atoms
/// ge_0..ge_k then gt_0..gt_k come from the pool. Widths must match.
void emit_cmp_positive(CircuitBuilder& cb, const BitVec& a, const BitVec& b, Lit head, std::vector<Var>* aux = nullptr);
/// Horn clauses deriving `head` from ¬(a > b); aux le_0..le_k then lt_0..lt_k.
void emit_cmp_negative(CircuitBuilder& cb, const BitVec& a, const BitVec& b, Lit head, std::vector<Var>* aux = nullptr);

/// Definition of `head` (standing for a > b) over the literal bits of a and b.
MonotonicDefinition cmp_positive_definition(const BitVec& a, const BitVec& b, Lit head, Var fresh_var_base);
/// Definition of `head` (standing for ¬(a > b)).
MonotonicDefinition cmp_negative_definition(const BitVec& a, const BitVec& b, Lit head, Var fresh_var_base);

/// Common width for comparing ΣA with ΣB without overflow.
std::size_t sumcmp_width(const std::vector<BitVec>& A, const std::vector<BitVec>& B);

/// mono_transform of (ripple-carry adders + comparison over the sums). `gt` is the
/// literal meaning ΣA > ΣB; positive_sign builds the definition of gt, else of ¬gt.
MonotonicDefinition sumcmp_definition(const std::vector<BitVec>& A, const std::vector<BitVec>& B, Lit gt,
                                      bool positive_sign, Var fresh_var_base);

/// val(lhs) > val(rhs) bound to a literal of the predicate atom. bv_gt p a b
/// uses gt = p; bv_ge q a b is bound as ¬(b > a), i.e. lhs = b, rhs = a, gt = ¬q.
class CmpPredicate : public MonotonicPredicate {
public:
  CmpPredicate(Var pred, BitVec lhs, BitVec rhs, Lit gt);
  static CmpPredicate greater(Var pred, BitVec a, BitVec b) { return {pred, std::move(a), std::move(b), Lit::pos(pred)}; }
  static CmpPredicate greater_equal(Var pred, BitVec a, BitVec b) {
    return {pred, std::move(b), std::move(a), Lit::neg(pred)};
  }

  std::string kind() const override { return "bv_cmp"; }
  bool evaluate(const Assignment& m) const override;
  void build_definitions(VarPool& pool) override;
  std::vector<const MonotonicDefinition*> definitions() const override { return {&pos_, &neg_}; }
  Route route(bool) const override { return Route::Direct; }
  const MonotonicDefinition& definition_for(bool head_positive) const override;
  std::vector<Lit> witness(const TheoryLemma&) const override { return {}; }
  void encode_eager(CircuitBuilder& cb) const override;

private:
  BitVec lhs_, rhs_;
  Lit gt_;
  MonotonicDefinition pos_, neg_;
};

/// ΣA > ΣB.
class SumCmpPredicate : public MonotonicPredicate {
public:
  SumCmpPredicate(Var pred, std::vector<BitVec> A, std::vector<BitVec> B);

  std::string kind() const override { return "bv_sum"; }
  bool evaluate(const Assignment& m) const override;
  void build_definitions(VarPool& pool) override;
  std::vector<const MonotonicDefinition*> definitions() const override { return {&pos_, &neg_}; }
  Route route(bool) const override { return Route::Dual; }
  const MonotonicDefinition& definition_for(bool head_positive) const override;
  std::vector<Lit> witness(const TheoryLemma& lemma) const override;
  void encode_eager(CircuitBuilder& cb) const override;

private:
  std::vector<BitVec> A_, B_;
  MonotonicDefinition pos_, neg_;
};

/// Input atoms for literal bits; constants are skipped. Throws on repeated variables.
std::vector<InputAtom> bit_inputs(const std::vector<std::pair<const BitVec*, bool>>& groups);

}  // namespace smmt
