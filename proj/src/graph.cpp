#include "smmt/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace smmt {

std::size_t SymbolicGraph::add_edge(std::size_t from, std::size_t to, Var var, BitVec cap) {
  if (from >= nodes || to >= nodes) throw Error("edge endpoint out of range");
  for (const GraphEdge& e : edges)
    if (e.var == var) throw Error("edge variable " + std::to_string(var) + " used twice in one graph");
  edges.push_back({from, to, var, std::move(cap)});
  return edges.size() - 1;
}

namespace {

// BFS over enabled edges; parent[v] = edge index that discovered v.
std::vector<std::size_t> bfs(const SymbolicGraph& g, std::size_t src, const Assignment& m,
                             std::vector<bool>& seen) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> out(g.nodes);
  for (std::size_t i = 0; i < g.edges.size(); ++i) out[g.edges[i].from].push_back(i);
  std::vector<std::size_t> parent(g.nodes, none);
  seen.assign(g.nodes, false);
  std::deque<std::size_t> q{src};
  seen[src] = true;
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop_front();
    for (std::size_t i : out[u]) {
      if (!g.enabled(i, m)) continue;
      std::size_t v = g.edges[i].to;
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = i;
      q.push_back(v);
    }
  }
  return parent;
}

}  // namespace

std::vector<bool> reachable_from(const SymbolicGraph& g, std::size_t src, const Assignment& m) {
  std::vector<bool> seen;
  bfs(g, src, m, seen);
  return seen;
}

bool eval_reach(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m) {
  return reachable_from(g, src, m)[dst];
}

std::vector<std::size_t> path_edges(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m) {
  std::vector<bool> seen;
  std::vector<std::size_t> parent = bfs(g, src, m, seen);
  if (!seen[dst]) throw Error("path witness requested but the target is unreachable");
  std::vector<std::size_t> path;
  for (std::size_t v = dst; v != src; v = g.edges[parent[v]].from) path.push_back(parent[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Var> path_witness(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m) {
  std::vector<Var> out;
  for (std::size_t i : path_edges(g, src, dst, m)) out.push_back(g.edges[i].var);
  return out;
}

std::vector<Lit> cut_witness(const SymbolicGraph& g, std::size_t src, std::size_t dst, const Assignment& m,
                             const std::vector<Var>& reach_atoms) {
  std::vector<bool> seen = reachable_from(g, src, m);
  if (seen[dst]) throw Error("cut witness requested but the target is reachable");
  std::vector<Lit> out;
  for (std::size_t v = 0; v < g.nodes; ++v) out.push_back(Lit::make(reach_atoms.at(v), seen[v]));
  return out;
}

MonotonicDefinition positive_definition(const SymbolicGraph& g, std::size_t src, std::size_t dst, Var pred_var,
                                        Var fresh_var_base) {
  if (src >= g.nodes || dst >= g.nodes) throw Error("reach endpoint out of range");
  MonotonicDefinition d;
  d.head = Lit::pos(pred_var);
  std::set<Var> seen;
  for (const GraphEdge& e : g.edges)
    if (seen.insert(e.var).second) d.inputs.push_back({e.var, true});
  auto r = [&](std::size_t v) { return static_cast<Var>(fresh_var_base + 1 + v); };
  for (std::size_t v = 0; v < g.nodes; ++v) d.aux.push_back(r(v));
  d.clauses = CnfFormula(std::max<Var>(pred_var, r(g.nodes - 1)));
  for (const GraphEdge& e : g.edges) d.clauses.add({Lit::neg(r(e.from)), Lit::neg(e.var), Lit::pos(r(e.to))});
  d.clauses.add({Lit::neg(r(dst)), d.head});
  d.clauses.add({Lit::pos(r(src))});
  return d;
}

ReachPredicate::ReachPredicate(const SymbolicGraph& g, std::size_t src, std::size_t dst, Var pred)
    : MonotonicPredicate(pred, {}), g_(g), src_(src), dst_(dst) {
  if (src >= g.nodes || dst >= g.nodes) throw Error("reach endpoint out of range");
  std::set<Var> seen;
  for (const GraphEdge& e : g.edges) {
    if (e.var == pred) throw Error("reach predicate variable is also an edge variable");
    if (seen.insert(e.var).second) inputs_.push_back({e.var, true});
  }
}

bool ReachPredicate::evaluate(const Assignment& m) const { return eval_reach(g_, src_, dst_, m); }

std::vector<Lit> ReachPredicate::strengthen(const Assignment& ext, bool head_positive) const {
  std::vector<Lit> out;
  if (head_positive) {
    for (Var v : path_witness(g_, src_, dst_, ext)) out.push_back(Lit::pos(v));
    return out;
  }
  std::vector<bool> seen = reachable_from(g_, src_, ext);
  if (seen[dst_]) throw Error("negative reach lemma requested but the target is reachable");
  std::set<Var> used;
  for (const GraphEdge& e : g_.edges)
    if (seen[e.from] && !seen[e.to] && used.insert(e.var).second) out.push_back(Lit::neg(e.var));
  return out;
}

void ReachPredicate::build_definitions(VarPool& pool) {
  def_ = positive_definition(g_, src_, dst_, pred_, pool.last());
  for (std::size_t v = 0; v < g_.nodes; ++v) pool.fresh();
}

std::vector<Lit> ReachPredicate::witness(const TheoryLemma& lemma) const {
  Assignment ext = lemma_completion(lemma, inputs_, max_input_var());
  if (!lemma.head_positive) return cut_witness(g_, src_, dst_, ext, def_.aux);
  std::vector<Lit> out;
  out.push_back(Lit::pos(def_.aux[src_]));
  for (std::size_t i : path_edges(g_, src_, dst_, ext)) out.push_back(Lit::pos(def_.aux[g_.edges[i].to]));
  return out;
}

Bit reach_circuit(CircuitBuilder& cb, const SymbolicGraph& g, std::size_t src, std::size_t dst,
                  const std::vector<Bit>& enabled) {
  std::vector<Bit> r(g.nodes, Bit::constant(false));
  r[src] = Bit::constant(true);
  for (std::size_t round = 0; round + 1 < g.nodes; ++round) {
    std::vector<Bit> next = r;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const GraphEdge& e = g.edges[i];
      if (e.from == e.to) continue;
      next[e.to] = cb.or_(next[e.to], cb.and_(r[e.from], enabled[i]));
    }
    r = std::move(next);
  }
  return r[dst];
}

void ReachPredicate::encode_eager(CircuitBuilder& cb) const {
  std::vector<Bit> en;
  for (const GraphEdge& e : g_.edges) en.push_back(Bit::var(e.var));
  cb.equate(Lit::pos(pred_), reach_circuit(cb, g_, src_, dst_, en));
}

}  // namespace smmt
