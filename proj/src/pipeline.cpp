#include "smmt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "smmt/bv.hpp"
#include "smmt/kernel.hpp"
#include "smmt/maxflow.hpp"

namespace smmt {

namespace {

constexpr std::size_t kMaxWidth = 32;

struct LineReader {
  std::istringstream in;
  std::size_t line;

  template <class T>
  T next(const char* what) {
    T v;
    if (!(in >> v)) throw ParseError(line, std::string("expected ") + what);
    return v;
  }
  void done() {
    std::string extra;
    if (in >> extra) throw ParseError(line, "unexpected trailing token '" + extra + "'");
  }
};

Var checked_var(long long v, Var n, std::size_t line) {
  if (v <= 0 || v > static_cast<long long>(n))
    throw ParseError(line, "variable " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return static_cast<Var>(v);
}

const BvDecl& find_bv(const std::map<int, const BvDecl*>& bvs, int id, std::size_t line) {
  auto it = bvs.find(id);
  if (it == bvs.end()) throw ParseError(line, "unknown bit-vector " + std::to_string(id));
  return *it->second;
}

BitVec to_bits(const BvDecl& d) {
  BitVec out;
  if (d.value) {
    for (std::size_t j = 0; j < d.width; ++j) out.push_back(Bit::constant((*d.value >> j) & 1u));
  } else {
    for (Var v : d.bits) out.push_back(Bit::var(v));
  }
  return out;
}

std::vector<BitVec> to_bits(const std::map<int, const BvDecl*>& bvs, const std::vector<int>& ids, std::size_t line) {
  std::vector<BitVec> out;
  for (int id : ids) out.push_back(to_bits(find_bv(bvs, id, line)));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* keyword(BindingKind k) {
  switch (k) {
    case BindingKind::Reach: return "reach";
    case BindingKind::Gt: return "bv_gt";
    case BindingKind::Ge: return "bv_ge";
    case BindingKind::SumGt: return "bv_sum_gt";
    case BindingKind::MaxFlowGe: return "maxflow_ge";
  }
  return "?";
}

}  // namespace

Instance parse_instance(const std::string& text) {
  Instance inst;
  std::istringstream all(text);
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::size_t want_clauses = 0;
  Var n = 0;
  Clause pending;
  std::size_t pending_line = 0;
  std::map<int, std::size_t> graph_at;
  std::set<int> bv_ids;
  std::set<Var> bound;

  while (std::getline(all, raw)) {
    ++line;
    LineReader r{std::istringstream(raw), line};
    std::string tok;
    if (!(r.in >> tok) || tok == "c") continue;
    if (!have_header) {
      if (tok != "p") throw ParseError(line, "expected 'p smmt <vars> <clauses>' header");
      if (r.next<std::string>("format") != "smmt") throw ParseError(line, "header format must be 'smmt'");
      long long nv = r.next<long long>("variable count"), nc = r.next<long long>("clause count");
      if (nv < 0 || nc < 0) throw ParseError(line, "negative count in header");
      r.done();
      n = static_cast<Var>(nv);
      want_clauses = static_cast<std::size_t>(nc);
      inst.cnf = CnfFormula(n);
      have_header = true;
      continue;
    }
    if (tok[0] == '-' || std::isdigit(static_cast<unsigned char>(tok[0]))) {
      r.in.clear();
      r.in.str(raw);
      long long x;
      if (pending.empty()) pending_line = line;
      while (r.in >> x) {
        if (x == 0) {
          inst.cnf.add(std::move(pending));
          pending.clear();
          pending_line = line;
          continue;
        }
        Var v = checked_var(x < 0 ? -x : x, n, line);
        pending.push_back(Lit::make(v, x > 0));
      }
      if (!r.in.eof()) throw ParseError(line, "malformed clause");
      continue;
    }
    if (!pending.empty()) throw ParseError(pending_line, "clause not terminated by 0");

    if (tok == "digraph") {
      GraphDecl g;
      g.id = r.next<int>("graph id");
      long long nodes = r.next<long long>("node count");
      r.done();
      if (nodes <= 0) throw ParseError(line, "graph needs at least one node");
      if (graph_at.count(g.id)) throw ParseError(line, "graph " + std::to_string(g.id) + " declared twice");
      g.nodes = static_cast<std::size_t>(nodes);
      g.line = line;
      graph_at[g.id] = inst.graphs.size();
      inst.graphs.push_back(std::move(g));
    } else if (tok == "edge" || tok == "edge_cap") {
      int gid = r.next<int>("graph id");
      auto it = graph_at.find(gid);
      if (it == graph_at.end()) throw ParseError(line, "edge on undeclared graph " + std::to_string(gid));
      GraphDecl& g = inst.graphs[it->second];
      long long from = r.next<long long>("source node"), to = r.next<long long>("target node");
      if (from < 0 || to < 0 || from >= static_cast<long long>(g.nodes) || to >= static_cast<long long>(g.nodes))
        throw ParseError(line, "edge endpoint outside 0.." + std::to_string(g.nodes - 1));
      EdgeDecl e;
      e.from = static_cast<std::size_t>(from);
      e.to = static_cast<std::size_t>(to);
      e.var = checked_var(r.next<long long>("edge variable"), n, line);
      if (tok == "edge_cap") e.cap = r.next<int>("capacity bit-vector id");
      r.done();
      for (const EdgeDecl& o : g.edges)
        if (o.var == e.var) throw ParseError(line, "edge variable " + std::to_string(e.var) + " used twice in graph");
      e.line = line;
      g.edges.push_back(e);
    } else if (tok == "bv" || tok == "bv_const") {
      BvDecl b;
      b.id = r.next<int>("bit-vector id");
      long long w = r.next<long long>("width");
      if (w <= 0 || w > static_cast<long long>(kMaxWidth))
        throw ParseError(line, "width must be in 1.." + std::to_string(kMaxWidth));
      b.width = static_cast<std::size_t>(w);
      if (tok == "bv") {
        for (std::size_t j = 0; j < b.width; ++j) b.bits.push_back(checked_var(r.next<long long>("bit variable"), n, line));
        std::set<Var> uniq(b.bits.begin(), b.bits.end());
        if (uniq.size() != b.bits.size()) throw ParseError(line, "repeated bit variable");
      } else {
        long long v = r.next<long long>("value");
        if (v < 0 || static_cast<unsigned long long>(v) >> b.width) throw ParseError(line, "constant does not fit the width");
        b.value = static_cast<std::uint64_t>(v);
      }
      r.done();
      if (!bv_ids.insert(b.id).second) throw ParseError(line, "bit-vector " + std::to_string(b.id) + " declared twice");
      b.line = line;
      inst.bvs.push_back(std::move(b));
    } else if (tok == "reach" || tok == "bv_gt" || tok == "bv_ge" || tok == "bv_sum_gt" || tok == "maxflow_ge") {
      BindingDecl d;
      d.line = line;
      if (tok == "reach") {
        d.kind = BindingKind::Reach;
        d.graph = r.next<int>("graph id");
        d.src = r.next<std::size_t>("source node");
        d.dst = r.next<std::size_t>("target node");
        d.pred = checked_var(r.next<long long>("predicate variable"), n, line);
      } else if (tok == "bv_gt" || tok == "bv_ge") {
        d.kind = tok == "bv_gt" ? BindingKind::Gt : BindingKind::Ge;
        d.pred = checked_var(r.next<long long>("predicate variable"), n, line);
        d.lhs = {r.next<int>("bit-vector id")};
        d.rhs = {r.next<int>("bit-vector id")};
      } else if (tok == "bv_sum_gt") {
        d.kind = BindingKind::SumGt;
        d.pred = checked_var(r.next<long long>("predicate variable"), n, line);
        long long na = r.next<long long>("addend count");
        if (na < 0) throw ParseError(line, "negative addend count");
        for (long long i = 0; i < na; ++i) d.lhs.push_back(r.next<int>("bit-vector id"));
        long long nb = r.next<long long>("addend count");
        if (nb < 0) throw ParseError(line, "negative addend count");
        for (long long i = 0; i < nb; ++i) d.rhs.push_back(r.next<int>("bit-vector id"));
      } else {
        d.kind = BindingKind::MaxFlowGe;
        d.graph = r.next<int>("graph id");
        d.src = r.next<std::size_t>("source node");
        d.dst = r.next<std::size_t>("target node");
        d.threshold = r.next<int>("threshold bit-vector id");
        d.pred = checked_var(r.next<long long>("predicate variable"), n, line);
      }
      r.done();
      if (!bound.insert(d.pred).second)
        throw ParseError(line, "variable " + std::to_string(d.pred) + " is already bound to a predicate");
      inst.bindings.push_back(std::move(d));
    } else {
      throw ParseError(line, "unknown section '" + tok + "'");
    }
  }
  if (!have_header) throw ParseError(std::max<std::size_t>(line, 1), "missing header");
  if (!pending.empty()) throw ParseError(pending_line, "clause not terminated by 0");
  if (inst.cnf.size() != want_clauses)
    throw ParseError(line, "header announces " + std::to_string(want_clauses) + " clauses, found " +
                               std::to_string(inst.cnf.size()));
  // resolve references and build the predicates once to surface binding errors
  Theory check(inst, false);
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p smmt " << inst.cnf.num_vars() << ' ' << inst.cnf.live_count() << '\n';
  for (const Clause& c : inst.cnf.live()) {
    for (Lit l : c) out << l.encoded() << ' ';
    out << "0\n";
  }
  for (const BvDecl& b : inst.bvs) {
    if (b.value) {
      out << "bv_const " << b.id << ' ' << b.width << ' ' << *b.value << '\n';
    } else {
      out << "bv " << b.id << ' ' << b.width;
      for (Var v : b.bits) out << ' ' << v;
      out << '\n';
    }
  }
  for (const GraphDecl& g : inst.graphs) {
    out << "digraph " << g.id << ' ' << g.nodes << '\n';
    for (const EdgeDecl& e : g.edges) {
      if (e.cap)
        out << "edge_cap " << g.id << ' ' << e.from << ' ' << e.to << ' ' << e.var << ' ' << *e.cap << '\n';
      else
        out << "edge " << g.id << ' ' << e.from << ' ' << e.to << ' ' << e.var << '\n';
    }
  }
  for (const BindingDecl& d : inst.bindings) {
    out << keyword(d.kind);
    switch (d.kind) {
      case BindingKind::Reach:
        out << ' ' << d.graph << ' ' << d.src << ' ' << d.dst << ' ' << d.pred;
        break;
      case BindingKind::Gt:
      case BindingKind::Ge:
        out << ' ' << d.pred << ' ' << d.lhs.at(0) << ' ' << d.rhs.at(0);
        break;
      case BindingKind::SumGt:
        out << ' ' << d.pred << ' ' << d.lhs.size();
        for (int id : d.lhs) out << ' ' << id;
        out << ' ' << d.rhs.size();
        for (int id : d.rhs) out << ' ' << id;
        break;
      case BindingKind::MaxFlowGe:
        out << ' ' << d.graph << ' ' << d.src << ' ' << d.dst << ' ' << d.threshold << ' ' << d.pred;
        break;
    }
    out << '\n';
  }
  return out.str();
}

Theory::Theory(const Instance& inst, bool build_definitions) {
  std::map<int, const BvDecl*> bvs;
  for (const BvDecl& b : inst.bvs) bvs[b.id] = &b;
  std::map<int, const SymbolicGraph*> graphs;
  for (const GraphDecl& g : inst.graphs) {
    SymbolicGraph& sg = graphs_.emplace_back();
    sg.nodes = g.nodes;
    for (const EdgeDecl& e : g.edges) {
      BitVec cap;
      if (e.cap) cap = to_bits(find_bv(bvs, *e.cap, e.line));
      sg.add_edge(e.from, e.to, e.var, cap);
    }
    graphs[g.id] = &sg;
  }
  auto graph = [&](const BindingDecl& d) -> const SymbolicGraph& {
    auto it = graphs.find(d.graph);
    if (it == graphs.end()) throw ParseError(d.line, "unknown graph " + std::to_string(d.graph));
    if (d.src >= it->second->nodes || d.dst >= it->second->nodes) throw ParseError(d.line, "node outside the graph");
    return *it->second;
  };
  for (const BindingDecl& d : inst.bindings) {
    try {
      switch (d.kind) {
        case BindingKind::Reach:
          preds_.push_back(std::make_unique<ReachPredicate>(graph(d), d.src, d.dst, d.pred));
          break;
        case BindingKind::Gt:
        case BindingKind::Ge: {
          BitVec a = to_bits(find_bv(bvs, d.lhs.at(0), d.line)), b = to_bits(find_bv(bvs, d.rhs.at(0), d.line));
          preds_.push_back(std::make_unique<CmpPredicate>(d.kind == BindingKind::Gt
                                                              ? CmpPredicate::greater(d.pred, a, b)
                                                              : CmpPredicate::greater_equal(d.pred, a, b)));
          break;
        }
        case BindingKind::SumGt:
          preds_.push_back(
              std::make_unique<SumCmpPredicate>(d.pred, to_bits(bvs, d.lhs, d.line), to_bits(bvs, d.rhs, d.line)));
          break;
        case BindingKind::MaxFlowGe:
          preds_.push_back(std::make_unique<MaxFlowPredicate>(graph(d), d.src, d.dst,
                                                              to_bits(find_bv(bvs, d.threshold, d.line)), d.pred));
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(d.line, e.what());
    }
    for (const InputAtom& a : preds_.back()->inputs())
      if (a.var == d.pred) throw ParseError(d.line, "predicate variable is also one of its inputs");
  }
  VarPool pool(inst.cnf.num_vars());
  if (build_definitions)
    for (PredicatePtr& p : preds_) p->build_definitions(pool);
  last_ = pool.last();
}

std::vector<const MonotonicPredicate*> Theory::predicates() const {
  std::vector<const MonotonicPredicate*> out;
  for (const PredicatePtr& p : preds_) out.push_back(p.get());
  return out;
}

PredicateIndex Theory::index() const {
  PredicateIndex idx;
  for (const PredicatePtr& p : preds_) idx[p->predicate_var()] = p.get();
  return idx;
}

bool Theory::consistent(const Assignment& model) const {
  for (const PredicatePtr& p : preds_)
    if (model.is_true(Lit::pos(p->predicate_var())) != p->evaluate(model)) return false;
  return true;
}

std::vector<TheoryLemma> theory_lemmas(const ProofCertificate& cert) {
  std::vector<TheoryLemma> out;
  for (const ProofRecord& r : cert.records) {
    if (r.kind != RecordKind::TheoryLemma) continue;
    TheoryLemma l;
    l.clause = r.clause;
    l.predicate_var = r.predicate_var;
    l.witness = r.witness;
    auto it = std::find_if(r.clause.begin(), r.clause.end(), [&](Lit x) { return x.var() == r.predicate_var; });
    if (it == r.clause.end()) throw Error("theory record " + to_string(r.clause) + " does not mention its predicate");
    l.head_positive = it->positive();
    out.push_back(std::move(l));
  }
  return out;
}

ProofCertificate as_plain_drat(const ProofCertificate& cert) {
  ProofCertificate out;
  for (const ProofRecord& r : cert.records)
    out.records.push_back(r.kind == RecordKind::Deletion ? r : ProofRecord::learned(r.clause));
  return out;
}

std::string report_to_string(const ProveReport& r) {
  std::ostringstream o;
  auto status = [](SolveStatus s) { return s == SolveStatus::Sat ? "SAT" : s == SolveStatus::Unsat ? "UNSAT" : "UNKNOWN"; };
  o << "status = " << status(r.status) << '\n'
    << "instance_vars = " << r.instance_vars << '\n'
    << "instance_clauses = " << r.instance_clauses << '\n'
    << "bindings = " << r.bindings << '\n'
    << "decisions = " << r.solver.decisions << '\n'
    << "conflicts = " << r.solver.conflicts << '\n'
    << "propagations = " << r.solver.propagations << '\n'
    << "restarts = " << r.solver.restarts << '\n'
    << "cert_records = " << r.cert_records << '\n'
    << "theory_lemmas_emitted = " << r.theory_emitted << '\n'
    << "theory_lemmas_core = " << r.theory_core << '\n'
    << "learned_core = " << r.learned_core << '\n';
  double frac = r.theory_emitted ? double(r.theory_core) / double(r.theory_emitted) : 0.0;
  o << "core_fraction = " << frac << '\n'
    << "route_direct = " << r.routes_direct << '\n'
    << "route_dual = " << r.routes_dual << '\n'
    << "route_choice = " << r.routes_choice << '\n'
    << "definition_clauses = " << r.definition_clauses << '\n'
    << "final_vars = " << r.final_vars << '\n'
    << "final_clauses = " << r.final_clauses << '\n'
    << "drat_records = " << r.drat_records << '\n'
    << "verified = " << (r.verified ? "true" : "false") << '\n';
  if (!r.reject_reason.empty()) o << "reject_reason = " << r.reject_reason << '\n';
  o << "time_solve_s = " << r.t_solve << '\n'
    << "time_backward_s = " << r.t_backward << '\n'
    << "time_discharge_s = " << r.t_discharge << '\n'
    << "time_check_s = " << r.t_check << '\n';
  return o.str();
}

ProveResult prove(const Instance& inst, const ProveOptions& opts) {
  ProveResult out;
  ProveReport& rep = out.report;
  rep.instance_vars = inst.cnf.num_vars();
  rep.instance_clauses = inst.cnf.live_count();
  rep.bindings = inst.bindings.size();

  Theory th(inst);
  TheoryKernel kernel(th.predicates(), opts.log_proof);
  SolverOptions so;
  so.log_proof = opts.log_proof;
  so.seed = opts.seed;
  so.conflict_budget = opts.conflict_budget;
  so.record_decisions = opts.record_decisions;
  auto t0 = std::chrono::steady_clock::now();
  SolveResult sr = solve(inst.cnf, &kernel, so);
  rep.t_solve = seconds_since(t0);
  rep.status = out.status = sr.status;
  rep.solver = sr.stats;
  out.decisions = std::move(sr.decisions);
  if (sr.status == SolveStatus::Sat) {
    if (!th.consistent(sr.model)) throw Error("solver model violates a theory predicate");
    out.model = std::move(sr.model);
    return out;
  }
  if (sr.status != SolveStatus::Unsat || !opts.log_proof) return out;

  out.certificate = std::move(sr.proof);
  rep.cert_records = out.certificate.size();
  rep.theory_emitted = out.certificate.count(RecordKind::TheoryLemma);

  ProofCertificate core = out.certificate;
  if (opts.backward_check) {
    t0 = std::chrono::steady_clock::now();
    core = backward_check(inst.cnf, out.certificate).core;
    rep.t_backward = seconds_since(t0);
  }
  rep.theory_core = core.count(RecordKind::TheoryLemma);
  rep.learned_core = core.count(RecordKind::Learned);

  t0 = std::chrono::steady_clock::now();
  std::vector<TheoryLemma> lemmas = theory_lemmas(core);
  ProofSpecificDefinition psd = opts.jobs > 1 ? proof_specific_definition_parallel(th.index(), lemmas, th.last_var(), opts.jobs)
                                              : proof_specific_definition(th.index(), lemmas, th.last_var());
  rep.t_discharge = seconds_since(t0);
  out.lemmas = psd.report;
  for (const LemmaReport& l : psd.report) {
    if (l.route == Route::Direct) ++rep.routes_direct;
    if (l.route == Route::Dual) ++rep.routes_dual;
    if (l.route == Route::Choice) ++rep.routes_choice;
  }
  rep.definition_clauses = psd.clauses.size();

  out.final_cnf = inst.cnf;
  out.final_cnf.append(psd.clauses);
  out.final_cnf.set_num_vars(std::max({out.final_cnf.num_vars(), psd.max_var, inst.cnf.num_vars()}));
  out.drat = as_plain_drat(core);
  if (opts.minimize) out.drat = minimize_proof(out.final_cnf, out.drat);
  rep.final_vars = out.final_cnf.num_vars();
  rep.final_clauses = out.final_cnf.live_count();
  rep.drat_records = out.drat.size();

  t0 = std::chrono::steady_clock::now();
  Verdict v = check_drat(out.final_cnf, out.drat);
  rep.t_check = seconds_since(t0);
  rep.verified = v.verified;
  if (!v.verified) rep.reject_reason = std::string(to_string(v.reason)) + " at record " + std::to_string(v.record);
  return out;
}

CnfFormula eager_encode(const Instance& inst, Var fresh_var_base) {
  Theory th(inst, false);
  CnfFormula out = inst.cnf;
  const Var base = std::max(fresh_var_base, inst.cnf.num_vars());
  VarPool pool(base);
  CircuitBuilder cb(out, pool);
  for (const MonotonicPredicate* p : th.predicates()) p->encode_eager(cb);
  if (pool.last() > base) out.set_num_vars(std::max(out.num_vars(), pool.last()));
  return out;
}

}  // namespace smmt
