#pragma once
// Running example: edges a..h = vars 1..8, reach = 9, reach atoms s..t = 10..15.

#include <initializer_list>

#include "smmt/graph.hpp"

namespace running {

using smmt::Clause;
using smmt::Lit;

enum : int { a = 1, b, c, d, e, f, g, h, reach, s, v1, v2, v3, v4, t };
enum Node : std::size_t { S = 0, V1, V2, V3, V4, T };

inline Clause C(std::initializer_list<int> xs) {
  Clause out;
  for (int x : xs) out.push_back(Lit(x));
  return out;
}

// edges declared in the order of the definition clauses they produce
inline smmt::SymbolicGraph graph() {
  smmt::SymbolicGraph gr;
  gr.nodes = 6;
  gr.add_edge(S, V1, a);
  gr.add_edge(V1, V3, c);
  gr.add_edge(V3, T, h);
  gr.add_edge(S, V2, b);
  gr.add_edge(V3, V2, e);
  gr.add_edge(V2, V4, d);
  gr.add_edge(V4, V3, f);
  gr.add_edge(V4, T, g);
  return gr;
}

inline smmt::CnfFormula reach_definition() {
  return smmt::CnfFormula(15, {C({-s, -a, v1}), C({-v1, -c, v3}), C({-v3, -h, t}), C({-s, -b, v2}),
                               C({-v3, -e, v2}), C({-v2, -d, v4}), C({-v4, -f, v3}), C({-v4, -g, t}),
                               C({-t, reach}), C({s})});
}

inline smmt::Assignment assign(std::initializer_list<int> lits, smmt::Var n = 15) {
  smmt::Assignment m(n);
  for (int x : lits) m.assign(Lit(x));
  return m;
}

}  // namespace running
