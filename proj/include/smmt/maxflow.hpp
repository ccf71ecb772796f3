#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "smmt/graph.hpp"

namespace smmt {

struct FlowResult {
  std::uint64_t value = 0;
  std::vector<std::uint64_t> flow;  ///< per edge
  std::vector<bool> source_side;    ///< residual-reachable from the source
};

/// Edge capacity under m: val(cap) if the edge is enabled, else 0.
std::uint64_t edge_capacity(const SymbolicGraph& g, std::size_t i, const Assignment& m);

/// Shortest augmenting paths (BFS, edge order). Stops once the value reaches `limit`.
FlowResult max_flow(const SymbolicGraph& g, std::size_t s, std::size_t t, const Assignment& m,
                    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max());

bool eval_maxflow(const SymbolicGraph& g, std::size_t s, std::size_t t, const BitVec& threshold, const Assignment& m);

/// maxflow(s, t) >= z.
class MaxFlowPredicate : public MonotonicPredicate {
public:
  MaxFlowPredicate(const SymbolicGraph& g, std::size_t s, std::size_t t, BitVec threshold, Var pred);

  std::string kind() const override { return "maxflow"; }
  bool evaluate(const Assignment& m) const override;
  std::vector<Lit> strengthen(const Assignment& ext, bool head_positive) const override;
  void build_definitions(VarPool& pool) override;
  std::vector<const MonotonicDefinition*> definitions() const override { return {&pos_, &neg_}; }
  Route route(bool) const override { return Route::Choice; }
  const MonotonicDefinition& definition_for(bool head_positive) const override { return head_positive ? pos_ : neg_; }
  std::vector<Lit> witness(const TheoryLemma& lemma) const override;
  void encode_eager(CircuitBuilder& cb) const override;

  /// Flow bits for a feasible flow meeting the threshold (positive definition's choice variables).
  std::vector<Lit> flow_witness(const Assignment& m) const;
  /// Side bits and capacity bounds of a cut below the threshold (negative definition's choice variables).
  std::vector<Lit> cut_witness_mf(const Assignment& m) const;

  std::size_t cap_width() const { return wc_; }

private:
  bool carries_flow(std::size_t i) const;

  const SymbolicGraph& g_;
  std::size_t s_, t_;
  BitVec z_;
  std::vector<BitVec> caps_;  ///< padded to wc_
  std::size_t wc_ = 1;
  MonotonicDefinition pos_, neg_;
  std::vector<std::vector<Var>> flow_vars_;  ///< per edge; empty if the edge carries no flow variable
  std::vector<Var> side_vars_;
  std::vector<std::vector<Var>> ub_vars_;
};

}  // namespace smmt
