#include "smmt/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "smmt/bv.hpp"

namespace smmt {

std::uint64_t edge_capacity(const SymbolicGraph& g, std::size_t i, const Assignment& m) {
  return g.enabled(i, m) ? bv_value(g.edges[i].cap, m) : 0;
}

FlowResult max_flow(const SymbolicGraph& g, std::size_t s, std::size_t t, const Assignment& m, std::uint64_t limit) {
  const std::size_t n = g.nodes, E = g.edges.size();
  std::vector<std::uint64_t> cap(E);
  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (std::size_t i = 0; i < E; ++i) {
    cap[i] = edge_capacity(g, i, m);
    if (g.edges[i].from == g.edges[i].to) continue;
    out[g.edges[i].from].push_back(i);
    in[g.edges[i].to].push_back(i);
  }
  FlowResult r;
  r.flow.assign(E, 0);
  struct Arc {
    std::size_t edge;
    bool forward;
  };
  // BFS in the residual graph; arcs in edge order, forward arcs first
  auto search = [&](std::vector<bool>& seen, std::vector<Arc>& parent) {
    seen.assign(n, false);
    parent.assign(n, {0, true});
    std::deque<std::size_t> q{s};
    seen[s] = true;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      for (std::size_t i : out[u]) {
        std::size_t v = g.edges[i].to;
        if (!seen[v] && r.flow[i] < cap[i]) {
          seen[v] = true;
          parent[v] = {i, true};
          q.push_back(v);
        }
      }
      for (std::size_t i : in[u]) {
        std::size_t v = g.edges[i].from;
        if (!seen[v] && r.flow[i] > 0) {
          seen[v] = true;
          parent[v] = {i, false};
          q.push_back(v);
        }
      }
    }
  };
  std::vector<bool> seen;
  std::vector<Arc> parent;
  while (r.value < limit) {
    search(seen, parent);
    if (!seen[t] || s == t) break;
    std::uint64_t delta = limit - r.value;
    for (std::size_t v = t; v != s;) {
      const Arc& a = parent[v];
      delta = std::min(delta, a.forward ? cap[a.edge] - r.flow[a.edge] : r.flow[a.edge]);
      v = a.forward ? g.edges[a.edge].from : g.edges[a.edge].to;
    }
    for (std::size_t v = t; v != s;) {
      const Arc& a = parent[v];
      if (a.forward)
        r.flow[a.edge] += delta;
      else
        r.flow[a.edge] -= delta;
      v = a.forward ? g.edges[a.edge].from : g.edges[a.edge].to;
    }
    r.value += delta;
  }
  search(seen, parent);
  r.source_side = seen;
  return r;
}

bool eval_maxflow(const SymbolicGraph& g, std::size_t s, std::size_t t, const BitVec& threshold, const Assignment& m) {
  std::uint64_t z = bv_value(threshold, m);
  return max_flow(g, s, t, m, z).value >= z;
}

MaxFlowPredicate::MaxFlowPredicate(const SymbolicGraph& g, std::size_t s, std::size_t t, BitVec threshold, Var pred)
    : MonotonicPredicate(pred, {}), g_(g), s_(s), t_(t), z_(std::move(threshold)) {
  if (s >= g.nodes || t >= g.nodes) throw Error("maxflow endpoint out of range");
  if (s == t) throw Error("maxflow source and target must differ");
  for (const GraphEdge& e : g.edges) {
    if (e.cap.empty()) throw Error("maxflow needs a capacity on every edge of the graph");
    wc_ = std::max(wc_, e.cap.size());
  }
  for (const GraphEdge& e : g.edges) caps_.push_back(resize(e.cap, wc_));
  std::set<Var> seen;
  auto add = [&](Var v, bool pos) {
    if (v == pred || !seen.insert(v).second)
      throw Error("variable " + std::to_string(v) + " occurs twice among the maxflow inputs");
    inputs_.push_back({v, pos});
  };
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    add(g.edges[i].var, true);
    for (const Bit& b : caps_[i])
      if (!b.is_const()) add(b.lit().var(), b.lit().positive());
  }
  for (const Bit& b : z_)
    if (!b.is_const()) add(b.lit().var(), !b.lit().positive());
}

bool MaxFlowPredicate::carries_flow(std::size_t i) const {
  const GraphEdge& e = g_.edges[i];
  return e.from != e.to && e.from != t_;
}

bool MaxFlowPredicate::evaluate(const Assignment& m) const { return eval_maxflow(g_, s_, t_, z_, m); }

std::vector<Lit> MaxFlowPredicate::strengthen(const Assignment& ext, bool head_positive) const {
  std::vector<Lit> out;
  const std::uint64_t z = bv_value(z_, ext);
  if (head_positive) {
    FlowResult f = max_flow(g_, s_, t_, ext, z);
    if (f.value < z) throw Error("positive maxflow lemma requested below the threshold");
    for (std::size_t i = 0; i < g_.edges.size(); ++i) {
      if (f.flow[i] == 0) continue;
      out.push_back(Lit::pos(g_.edges[i].var));
      for (const Bit& b : caps_[i])
        if (!b.is_const() && ext.is_true(b.lit())) out.push_back(b.lit());
    }
    for (const Bit& b : z_)
      if (!b.is_const() && ext.is_false(b.lit())) out.push_back(~b.lit());
    return out;
  }
  FlowResult f = max_flow(g_, s_, t_, ext);
  if (f.value >= z) throw Error("negative maxflow lemma requested at or above the threshold");
  for (std::size_t i = 0; i < g_.edges.size(); ++i) {
    const GraphEdge& e = g_.edges[i];
    if (!f.source_side[e.from] || f.source_side[e.to]) continue;
    if (!g_.enabled(i, ext)) {
      out.push_back(Lit::neg(e.var));
      continue;
    }
    for (const Bit& b : caps_[i])
      if (!b.is_const() && ext.is_false(b.lit())) out.push_back(~b.lit());
  }
  for (const Bit& b : z_)
    if (!b.is_const() && ext.is_true(b.lit())) out.push_back(b.lit());
  return out;
}

namespace {

BitVec bits_of(const std::vector<Var>& vs) {
  BitVec out;
  for (Var v : vs) out.push_back(Bit::var(v));
  return out;
}

std::vector<Var> fresh_vars(VarPool& pool, std::size_t n) {
  std::vector<Var> out(n);
  for (Var& v : out) v = pool.fresh();
  return out;
}

void collect_aux(MonotonicDefinition& d, Var first, Var last) {
  for (Var v = first; v <= last; ++v) d.aux.push_back(v);
}

}  // namespace

void MaxFlowPredicate::build_definitions(VarPool& pool) {
  const std::size_t E = g_.edges.size(), n = g_.nodes;
  const Lit mf = Lit::pos(pred_);

  // flow side: mf <= every edge within capacity, outflow <= inflow inside, inflow(t) >= z
  {
    MonotonicDefinition& d = pos_;
    d = {};
    d.head = mf;
    d.inputs = inputs_;
    const Var first = pool.last() + 1;
    CircuitBuilder cb(d.clauses, pool);
    flow_vars_.assign(E, {});
    for (std::size_t i = 0; i < E; ++i)
      if (carries_flow(i)) {
        flow_vars_[i] = fresh_vars(pool, wc_);
        d.choice.insert(d.choice.end(), flow_vars_[i].begin(), flow_vars_[i].end());
      }
    Clause top{mf};
    for (std::size_t i = 0; i < E; ++i) {
      if (!carries_flow(i)) continue;
      const Bit e = Bit::var(g_.edges[i].var);
      BitVec eb(wc_);
      for (std::size_t j = 0; j < wc_; ++j) {
        if (caps_[i][j].is_false()) {
          eb[j] = Bit::constant(false);
          continue;
        }
        eb[j] = Bit::var(pool.fresh());
        cb.clause({~e, ~caps_[i][j], eb[j]});
      }
      Lit ok = Lit::pos(pool.fresh());
      emit_cmp_negative(cb, bits_of(flow_vars_[i]), eb, ok);
      top.push_back(~ok);
    }
    std::vector<std::vector<BitVec>> in(n), out(n);
    for (std::size_t i = 0; i < E; ++i) {
      if (!carries_flow(i)) continue;
      out[g_.edges[i].from].push_back(bits_of(flow_vars_[i]));
      in[g_.edges[i].to].push_back(bits_of(flow_vars_[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == s_ || j == t_ || out[j].empty()) continue;
      std::size_t w = sum_width(wc_, std::max(in[j].size(), out[j].size()));
      BitVec so = cb.sum(out[j], w), si = cb.sum(in[j], w);
      Lit ok = Lit::pos(pool.fresh());
      emit_cmp_negative(cb, so, si, ok);
      top.push_back(~ok);
    }
    std::size_t w = std::max(z_.size(), sum_width(wc_, std::max<std::size_t>(in[t_].size(), 1)));
    BitVec sin = cb.sum(in[t_], w);
    Lit okz = Lit::pos(pool.fresh());
    emit_cmp_negative(cb, resize(z_, w), sin, okz);
    top.push_back(~okz);
    d.clauses.add(top);
    collect_aux(d, first, pool.last());
    d.clauses.set_num_vars(std::max(d.clauses.num_vars(), pool.last()));
  }

  // cut side: ¬mf <= s on the source side, t not, every edge small, z > Σ crossing bounds
  {
    MonotonicDefinition& d = neg_;
    d = {};
    d.head = ~mf;
    d.inputs = inputs_;
    const Var first = pool.last() + 1;
    CircuitBuilder cb(d.clauses, pool);
    side_vars_ = fresh_vars(pool, n);
    d.choice = side_vars_;
    ub_vars_.assign(E, {});
    for (std::size_t i = 0; i < E; ++i)
      if (g_.edges[i].from != g_.edges[i].to) {
        ub_vars_[i] = fresh_vars(pool, wc_);
        d.choice.insert(d.choice.end(), ub_vars_[i].begin(), ub_vars_[i].end());
      }
    Clause top{~mf, Lit::neg(side_vars_[s_]), Lit::pos(side_vars_[t_])};
    std::vector<BitVec> terms;
    for (std::size_t i = 0; i < E; ++i) {
      const GraphEdge& e = g_.edges[i];
      if (e.from == e.to) continue;
      // both directions
      Bit crossing = cb.and_(Bit::var(side_vars_[e.from]), ~Bit::var(side_vars_[e.to]));
      Bit small = Bit::var(pool.fresh());
      cb.clause({Bit::var(e.var), small});
      emit_cmp_negative(cb, caps_[i], bits_of(ub_vars_[i]), small.lit());
      cb.clause({crossing, small});
      top.push_back(~small.lit());
      BitVec term;
      for (Var u : ub_vars_[i]) term.push_back(cb.and_(crossing, Bit::var(u)));
      terms.push_back(term);
    }
    std::size_t w = std::max(z_.size(), sum_width(wc_, std::max<std::size_t>(terms.size(), 1)));
    BitVec U = cb.sum(terms, w);
    Lit gz = Lit::pos(pool.fresh());
    emit_cmp_positive(cb, resize(z_, w), U, gz);
    top.push_back(~gz);
    d.clauses.add(top);
    collect_aux(d, first, pool.last());
    d.clauses.set_num_vars(std::max(d.clauses.num_vars(), pool.last()));
  }
}

std::vector<Lit> MaxFlowPredicate::flow_witness(const Assignment& m) const {
  const std::uint64_t z = bv_value(z_, m);
  FlowResult f = max_flow(g_, s_, t_, m, z);
  if (f.value < z) throw Error("flow witness requested below the threshold");
  std::vector<Lit> out;
  for (std::size_t i = 0; i < g_.edges.size(); ++i)
    for (std::size_t j = 0; j < flow_vars_[i].size(); ++j)
      out.push_back(Lit::make(flow_vars_[i][j], (f.flow[i] >> j) & 1u));
  return out;
}

std::vector<Lit> MaxFlowPredicate::cut_witness_mf(const Assignment& m) const {
  const std::uint64_t z = bv_value(z_, m);
  FlowResult f = max_flow(g_, s_, t_, m);
  if (f.value >= z) throw Error("cut witness requested at or above the threshold");
  std::vector<Lit> out;
  for (std::size_t v = 0; v < g_.nodes; ++v) out.push_back(Lit::make(side_vars_[v], f.source_side[v]));
  for (std::size_t i = 0; i < g_.edges.size(); ++i) {
    if (ub_vars_[i].empty()) continue;
    const GraphEdge& e = g_.edges[i];
    bool crossing = f.source_side[e.from] && !f.source_side[e.to];
    std::uint64_t ub = crossing && !g_.enabled(i, m) ? 0 : bv_value(caps_[i], m);
    for (std::size_t j = 0; j < wc_; ++j) out.push_back(Lit::make(ub_vars_[i][j], (ub >> j) & 1u));
  }
  return out;
}

std::vector<Lit> MaxFlowPredicate::witness(const TheoryLemma& lemma) const {
  Assignment ext = lemma_completion(lemma, inputs_, max_input_var());
  return lemma.head_positive ? flow_witness(ext) : cut_witness_mf(ext);
}

void MaxFlowPredicate::encode_eager(CircuitBuilder& cb) const {
  const std::size_t E = g_.edges.size(), n = g_.nodes;
  VarPool& pool = cb.pool();
  const Bit p = Bit::var(pred_);

  // p => some flow meets the threshold
  std::vector<BitVec> flow(E);
  std::vector<std::vector<BitVec>> in(n), out(n);
  for (std::size_t i = 0; i < E; ++i) {
    if (!carries_flow(i)) continue;
    flow[i] = bits_of(fresh_vars(pool, wc_));
    BitVec eb(wc_);
    for (std::size_t j = 0; j < wc_; ++j) eb[j] = cb.and_(Bit::var(g_.edges[i].var), caps_[i][j]);
    cb.clause({~p, ~cb.gt(flow[i], eb)});
    out[g_.edges[i].from].push_back(flow[i]);
    in[g_.edges[i].to].push_back(flow[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == s_ || j == t_ || out[j].empty()) continue;
    std::size_t w = sum_width(wc_, std::max(in[j].size(), out[j].size()));
    cb.clause({~p, ~cb.gt(cb.sum(out[j], w), cb.sum(in[j], w))});
  }
  std::size_t w = std::max(z_.size(), sum_width(wc_, std::max<std::size_t>(in[t_].size(), 1)));
  cb.clause({~p, ~cb.gt(resize(z_, w), cb.sum(in[t_], w))});

  // ¬p => some cut stays below it
  std::vector<Bit> side;
  for (std::size_t v = 0; v < n; ++v) side.push_back(Bit::var(pool.fresh()));
  cb.clause({p, side[s_]});
  cb.clause({p, ~side[t_]});
  std::vector<BitVec> terms;
  for (std::size_t i = 0; i < E; ++i) {
    const GraphEdge& e = g_.edges[i];
    if (e.from == e.to) continue;
    BitVec ub = bits_of(fresh_vars(pool, wc_));
    Bit crossing = cb.and_(side[e.from], ~side[e.to]);
    // crossing and enabled => cap <= ub
    cb.clause({p, ~crossing, ~Bit::var(e.var), ~cb.gt(caps_[i], ub)});
    BitVec term;
    for (const Bit& u : ub) term.push_back(cb.and_(crossing, u));
    terms.push_back(term);
  }
  std::size_t wu = std::max(z_.size(), sum_width(wc_, std::max<std::size_t>(terms.size(), 1)));
  cb.clause({p, cb.gt(resize(z_, wu), cb.sum(terms, wu))});
}

}  // namespace smmt
