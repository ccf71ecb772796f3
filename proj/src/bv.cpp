#include "smmt/bv.hpp"

#include <algorithm>
#include <set>

namespace smmt {

namespace {

std::uint64_t sum_values(const std::vector<BitVec>& vs, const Assignment& m) {
  std::uint64_t s = 0;
  for (const BitVec& v : vs) s += bv_value(v, m);
  return s;
}

std::vector<Var> fresh_range(VarPool& pool, std::size_t n) {
  std::vector<Var> out(n);
  for (Var& v : out) v = pool.fresh();
  return out;
}

MonotonicDefinition cmp_definition(const BitVec& a, const BitVec& b, Lit head, bool positive_schema, VarPool& pool) {
  if (a.size() != b.size()) throw Error("comparison widths differ");
  MonotonicDefinition d;
  d.head = head;
  // does raising a raise the predicate atom?
  bool a_raises = positive_schema == head.positive();
  d.inputs = bit_inputs({{&a, a_raises}, {&b, !a_raises}});
  CircuitBuilder cb(d.clauses, pool);
  if (positive_schema)
    emit_cmp_positive(cb, a, b, head, &d.aux);
  else
    emit_cmp_negative(cb, a, b, head, &d.aux);
  d.clauses.set_num_vars(std::max(d.clauses.num_vars(), pool.last()));
  return d;
}

MonotonicDefinition sum_definition(const std::vector<BitVec>& A, const std::vector<BitVec>& B, Lit gt,
                                   bool positive_sign, VarPool& pool) {
  std::vector<std::pair<const BitVec*, bool>> groups;
  for (const BitVec& v : A) groups.push_back({&v, gt.positive()});
  for (const BitVec& v : B) groups.push_back({&v, !gt.positive()});
  std::vector<InputAtom> inputs = bit_inputs(groups);

  CnfFormula d0;
  CircuitBuilder cb(d0, pool);
  const std::size_t w = sumcmp_width(A, B);
  BitVec sa = cb.sum(A, w), sb = cb.sum(B, w);
  Lit head = positive_sign ? gt : ~gt;
  if (positive_sign)
    emit_cmp_positive(cb, sa, sb, head);
  else
    emit_cmp_negative(cb, sa, sb, head);
  d0.set_num_vars(std::max(d0.num_vars(), pool.last()));
  MonotonicDefinition d = mono_transform(d0, head, inputs, pool.last());
  for (std::size_t i = 0; i <= inputs.size(); ++i) pool.fresh();
  return d;
}

}  // namespace

std::vector<InputAtom> bit_inputs(const std::vector<std::pair<const BitVec*, bool>>& groups) {
  std::vector<InputAtom> out;
  std::set<Var> seen;
  for (const auto& [vec, helps] : groups)
    for (const Bit& b : *vec) {
      if (b.is_const()) continue;
      if (!seen.insert(b.lit().var()).second)
        throw Error("variable " + std::to_string(b.lit().var()) + " occurs twice among the predicate's bits");
      out.push_back({b.lit().var(), helps == b.lit().positive()});
    }
  return out;
}

bool eval_cmp(const BitVec& a, const BitVec& b, const Assignment& m) { return bv_value(a, m) > bv_value(b, m); }

bool eval_sumcmp(const std::vector<BitVec>& A, const std::vector<BitVec>& B, const Assignment& m) {
  return sum_values(A, m) > sum_values(B, m);
}

void emit_cmp_positive(CircuitBuilder& cb, const BitVec& a, const BitVec& b, Lit head, std::vector<Var>* aux) {
  if (a.size() != b.size()) throw Error("comparison widths differ");
  const std::size_t k = a.size();
  std::vector<Var> ge = fresh_range(cb.pool(), k + 1), gt = fresh_range(cb.pool(), k + 1);
  auto G = [&](std::size_t i) { return Bit::var(ge[i]); };
  auto T = [&](std::size_t i) { return Bit::var(gt[i]); };
  for (std::size_t i = 0; i < k; ++i) {
    cb.clause({~G(i + 1), ~a[i], b[i], T(i)});
    cb.clause({~G(i + 1), ~a[i], G(i)});
    if (i > 0) cb.clause({~G(i + 1), b[i], G(i)});
  }
  for (std::size_t i = 0; i < k; ++i) cb.clause({~T(i), Bit::of(head)});
  cb.clause({G(k)});
  cb.clause({~T(k)});
  if (aux) {
    aux->insert(aux->end(), ge.begin(), ge.end());
    aux->insert(aux->end(), gt.begin(), gt.end());
  }
}

void emit_cmp_negative(CircuitBuilder& cb, const BitVec& a, const BitVec& b, Lit head, std::vector<Var>* aux) {
  if (a.size() != b.size()) throw Error("comparison widths differ");
  const std::size_t k = a.size();
  std::vector<Var> le = fresh_range(cb.pool(), k + 1), lt = fresh_range(cb.pool(), k + 1);
  auto L = [&](std::size_t i) { return Bit::var(le[i]); };
  auto T = [&](std::size_t i) { return Bit::var(lt[i]); };
  for (std::size_t i = 0; i < k; ++i) {
    cb.clause({~L(i + 1), a[i], ~b[i], T(i)});
    cb.clause({~L(i + 1), a[i], L(i)});
    cb.clause({~L(i + 1), ~b[i], L(i)});
  }
  for (std::size_t i = 0; i < k; ++i) cb.clause({~T(i), Bit::of(head)});
  cb.clause({~L(0), Bit::of(head)});
  cb.clause({L(k)});
  cb.clause({~T(k)});
  if (aux) {
    aux->insert(aux->end(), le.begin(), le.end());
    aux->insert(aux->end(), lt.begin(), lt.end());
  }
}

MonotonicDefinition cmp_positive_definition(const BitVec& a, const BitVec& b, Lit head, Var fresh_var_base) {
  VarPool pool(fresh_var_base);
  return cmp_definition(a, b, head, true, pool);
}

MonotonicDefinition cmp_negative_definition(const BitVec& a, const BitVec& b, Lit head, Var fresh_var_base) {
  VarPool pool(fresh_var_base);
  return cmp_definition(a, b, head, false, pool);
}

std::size_t sumcmp_width(const std::vector<BitVec>& A, const std::vector<BitVec>& B) {
  std::size_t k = 1;
  for (const BitVec& v : A) k = std::max(k, v.size());
  for (const BitVec& v : B) k = std::max(k, v.size());
  return sum_width(k, std::max<std::size_t>({A.size(), B.size(), 1}));
}

MonotonicDefinition sumcmp_definition(const std::vector<BitVec>& A, const std::vector<BitVec>& B, Lit gt,
                                      bool positive_sign, Var fresh_var_base) {
  VarPool pool(fresh_var_base);
  return sum_definition(A, B, gt, positive_sign, pool);
}

CmpPredicate::CmpPredicate(Var pred, BitVec lhs, BitVec rhs, Lit gt)
    : MonotonicPredicate(pred, {}), lhs_(std::move(lhs)), rhs_(std::move(rhs)), gt_(gt) {
  if (gt.var() != pred) throw Error("comparison literal must be over the predicate atom");
  std::size_t w = std::max(lhs_.size(), rhs_.size());
  lhs_ = resize(lhs_, w);
  rhs_ = resize(rhs_, w);
  inputs_ = bit_inputs({{&lhs_, gt.positive()}, {&rhs_, !gt.positive()}});
  for (const InputAtom& a : inputs_)
    if (a.var == pred) throw Error("comparison predicate atom is also one of its bits");
}

bool CmpPredicate::evaluate(const Assignment& m) const { return eval_cmp(lhs_, rhs_, m) == gt_.positive(); }

void CmpPredicate::build_definitions(VarPool& pool) {
  pos_ = cmp_definition(lhs_, rhs_, gt_, true, pool);
  neg_ = cmp_definition(lhs_, rhs_, ~gt_, false, pool);
}

const MonotonicDefinition& CmpPredicate::definition_for(bool head_positive) const {
  return Lit::make(pred_, head_positive) == gt_ ? pos_ : neg_;
}

void CmpPredicate::encode_eager(CircuitBuilder& cb) const {
  Bit g = cb.gt(lhs_, rhs_);
  cb.equate(Lit::pos(pred_), gt_.positive() ? g : ~g);
}

SumCmpPredicate::SumCmpPredicate(Var pred, std::vector<BitVec> A, std::vector<BitVec> B)
    : MonotonicPredicate(pred, {}), A_(std::move(A)), B_(std::move(B)) {
  std::vector<std::pair<const BitVec*, bool>> groups;
  for (const BitVec& v : A_) groups.push_back({&v, true});
  for (const BitVec& v : B_) groups.push_back({&v, false});
  inputs_ = bit_inputs(groups);
  for (const InputAtom& a : inputs_)
    if (a.var == pred) throw Error("sum predicate atom is also one of its bits");
}

bool SumCmpPredicate::evaluate(const Assignment& m) const { return eval_sumcmp(A_, B_, m); }

void SumCmpPredicate::build_definitions(VarPool& pool) {
  pos_ = sum_definition(A_, B_, Lit::pos(pred_), true, pool);
  neg_ = sum_definition(A_, B_, Lit::pos(pred_), false, pool);
}

const MonotonicDefinition& SumCmpPredicate::definition_for(bool head_positive) const {
  return head_positive ? neg_ : pos_;
}

std::vector<Lit> SumCmpPredicate::witness(const TheoryLemma& lemma) const {
  Assignment ext = lemma_completion(lemma, inputs_, max_input_var());
  return simulate_witness(definition_for(lemma.head_positive), ext, false);
}

void SumCmpPredicate::encode_eager(CircuitBuilder& cb) const {
  std::size_t w = sumcmp_width(A_, B_);
  BitVec sa = cb.sum(A_, w), sb = cb.sum(B_, w);
  cb.equate(Lit::pos(pred_), cb.gt(sa, sb));
}

}  // namespace smmt
