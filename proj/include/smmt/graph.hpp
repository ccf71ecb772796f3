#pragma once

#include <cstddef>
#include <vector>

#include "smmt/predicate.hpp"

namespace smmt {

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Var var = 0;
  BitVec cap;  ///< empty unless the edge carries a capacity
};

struct SymbolicGraph {
  std::size_t nodes = 0;
  std::vector<GraphEdge> edges;

  std::size_t add_edge(std::size_t from, std::size_t to, Var var, BitVec cap = {});
  bool enabled(std::size_t i, const Assignment& m) const { return m.is_true(Lit::pos(edges[i].var)); }
};

/// Nodes reachable from src over enabled edges.
std::vector<bool> reachable_from(const SymbolicGraph& g, std::size_t src, const Assignment& m);
bool eval_reach(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m);

/// Edge indices of a BFS-shortest src->dst path; lowest edge index wins ties. Throws if unreachable.
std::vector<std::size_t> path_edges(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m);
/// Edge variables along path_edges.
std::vector<Var> path_witness(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m);

/// Reach status of every vertex as literals over `reach_atoms` (one per vertex). Throws if dst is reachable.
std::vector<Lit> cut_witness(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m,
                             const std::vector<Var>& reach_atoms);

/// reach^v atoms numbered fresh_var_base+1+v. Clauses in edge order, then
/// (¬reach^dst ∨ p), then (reach^src).
MonotonicDefinition positive_definition(const SymbolicGraph& g, std::size_t src, std::size_t dst, Var pred_var,
                                        Var fresh_var_base);

class ReachPredicate : public MonotonicPredicate {
public:
  ReachPredicate(const SymbolicGraph& g, std::size_t src, std::size_t dst, Var pred);

  std::string kind() const override { return "reach"; }
  bool evaluate(const Assignment& m) const override;
  std::vector<Lit> strengthen(const Assignment& ext, bool head_positive) const override;
  void build_definitions(VarPool& pool) override;
  std::vector<const MonotonicDefinition*> definitions() const override { return {&def_}; }
  Route route(bool head_positive) const override { return head_positive ? Route::Direct : Route::Dual; }
  const MonotonicDefinition& definition_for(bool) const override { return def_; }
  std::vector<Lit> witness(const TheoryLemma& lemma) const override;
  void encode_eager(CircuitBuilder& cb) const override;

  const SymbolicGraph& graph() const { return g_; }
  std::size_t source() const { return src_; }
  std::size_t target() const { return dst_; }

private:
  const SymbolicGraph& g_;
  std::size_t src_, dst_;
  MonotonicDefinition def_;
};

/// Bellman-Ford style unrolled reachability circuit: returns the bit "dst reachable".
Bit reach_circuit(CircuitBuilder& cb, const SymbolicGraph& g, std::size_t src, std::size_t dst,
                  const std::vector<Bit>& enabled);

}  // namespace smmt
