#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "smmt/cnf.hpp"

using namespace smmt;

namespace {

Clause C(std::initializer_list<int> xs) {
  Clause c;
  for (int x : xs) c.push_back(Lit(x));
  return c;
}

// running example numbering: edges a..h = 1..8, reach = 9, s v1 v2 v3 v4 t = 10..15
enum { a = 1, b, c, d, e, f, g, h, reach, s, v1, v2, v3, v4, t };

CnfFormula running_example() {
  return CnfFormula(15, {C({-s, -a, v1}), C({-v1, -c, v3}), C({-v3, -h, t}), C({-s, -b, v2}),
                         C({-v3, -e, v2}), C({-v2, -d, v4}), C({-v4, -f, v3}), C({-v4, -g, t}),
                         C({-t, reach}), C({s})});
}

}  // namespace

TEST(Literal, NegationAndEncoding) {
  Lit l(5);
  EXPECT_EQ(~~l, l);
  EXPECT_EQ((~l).encoded(), -5);
  EXPECT_EQ(l.var(), 5u);
  EXPECT_THROW(Lit(0), Error);
  EXPECT_NE(Lit(3).index(), Lit(-3).index());
}

TEST(Clause, NormalizeFlagsTautology) {
  Clause x = C({2, 1, 2});
  EXPECT_FALSE(normalize(x));
  EXPECT_EQ(x, C({1, 2}));
  Clause y = C({1, -1, 3});
  EXPECT_TRUE(normalize(y));
  EXPECT_TRUE(is_tautology(C({4, -4})));
}

TEST(Assignment, TrailAndConflicts) {
  Assignment m(3);
  EXPECT_TRUE(m.assign(Lit(1)));
  EXPECT_TRUE(m.assign(Lit(-2)));
  EXPECT_FALSE(m.assign(Lit(-1)));
  EXPECT_EQ(m.size(), 2u);
  EXPECT_TRUE(m.is_false(Lit(2)));
  m.shrink_to(1);
  EXPECT_FALSE(m.assigned(2));
}

TEST(Reduce, Basics) {
  CnfFormula f(3, {C({1, 2}), C({-1, 3})});
  CnfFormula r = reduce(f, Assignment::from_literals(3, std::vector{Lit(1)}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], C({3}));

  CnfFormula u(1, {C({1})});
  CnfFormula ru = reduce(u, Assignment::from_literals(1, std::vector{Lit(-1)}));
  EXPECT_TRUE(has_empty_clause(ru));

  CnfFormula taut(2, {C({1, -1, 2})});
  EXPECT_EQ(reduce(taut, Assignment(2)).size(), 0u);
}

TEST(Reduce, CutOfRunningExample) {
  std::vector<Lit> m{Lit(-reach), Lit(s), Lit(v1), Lit(v2), Lit(-v3), Lit(-v4), Lit(-t)};
  CnfFormula r = reduce(running_example(), Assignment::from_literals(15, m));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], C({-c}));
  EXPECT_EQ(r[1], C({-d}));
}

TEST(Reduce, Monotone) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    CnfFormula f(6);
    for (int i = 0; i < 8; ++i) {
      Clause cl;
      for (int j = 0; j < 3; ++j) {
        int v = 1 + rng() % 6;
        cl.push_back(Lit(rng() % 2 ? v : -v));
      }
      f.add(cl);
    }
    Assignment small(6), big(6);
    for (Var v = 1; v <= 6; ++v) {
      int r = rng() % 3;
      if (r == 2) continue;
      Lit l = Lit::make(v, r == 1);
      small.assign(l);
      big.assign(l);
    }
    for (Var v = 1; v <= 6; ++v)
      if (!big.assigned(v)) big.assign(Lit::make(v, rng() % 2));
    CnfFormula rs = reduce(f, small), rb = reduce(f, big);
    EXPECT_LE(rb.size(), rs.size());
  }
}

TEST(UnitPropagate, Chain) {
  CnfFormula f(2, {C({1}), C({-1, 2})});
  PropagationResult r = unit_propagate(f, Assignment(2));
  EXPECT_FALSE(r.conflicting());
  EXPECT_TRUE(r.assignment.is_true(Lit(1)));
  EXPECT_TRUE(r.assignment.is_true(Lit(2)));
  EXPECT_EQ(r.assignment.trail(), (std::vector{Lit(1), Lit(2)}));
}

TEST(UnitPropagate, NoUnits) {
  CnfFormula f(2, {C({1, 2})});
  EXPECT_EQ(unit_propagate(f, Assignment(2)).assignment.size(), 0u);
}

TEST(UnitPropagate, RunningExampleConflict) {
  std::vector<Lit> m{Lit(a), Lit(c), Lit(h), Lit(-reach)};
  PropagationResult r = unit_propagate(running_example(), Assignment::from_literals(15, m));
  EXPECT_TRUE(r.conflicting());
}

TEST(UnitPropagate, Fixpoint) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    CnfFormula f(8);
    for (int i = 0; i < 12; ++i) {
      Clause cl;
      int len = 1 + rng() % 3;
      for (int j = 0; j < len; ++j) {
        int v = 1 + rng() % 8;
        cl.push_back(Lit(rng() % 2 ? v : -v));
      }
      f.add(cl);
    }
    PropagationResult r1 = unit_propagate(f, Assignment(8));
    if (r1.conflicting()) continue;
    PropagationResult r2 = unit_propagate(f, r1.assignment);
    EXPECT_FALSE(r2.conflicting());
    EXPECT_EQ(r2.assignment.trail(), r1.assignment.trail());
    for (std::size_t i = 0; i < f.size(); ++i) {
      int unassigned = 0;
      bool sat = false;
      for (Lit l : f[i]) {
        sat |= r1.assignment.is_true(l);
        unassigned += !r1.assignment.assigned(l.var());
      }
      EXPECT_TRUE(sat || unassigned >= 2);
    }
  }
}

TEST(Rup, Examples) {
  EXPECT_TRUE(rup_check(running_example(), C({-a, -c, -h, reach})));
  EXPECT_TRUE(rup_check(CnfFormula(1, {C({1})}), C({1})));
  EXPECT_FALSE(rup_check(CnfFormula(2, {C({1, 2})}), C({1})));
}

TEST(Rup, SoundAgainstModelEnumeration) {
  std::mt19937 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Var n = 4 + rng() % 9;  // up to 12
    CnfFormula f(n);
    int m = 3 + rng() % 15;
    for (int i = 0; i < m; ++i) {
      Clause cl;
      int len = 1 + rng() % 3;
      for (int j = 0; j < len; ++j) {
        int v = 1 + rng() % n;
        cl.push_back(Lit(rng() % 2 ? v : -v));
      }
      f.add(cl);
    }
    Clause target;
    int len = rng() % 3;
    for (int j = 0; j < len; ++j) {
      int v = 1 + rng() % n;
      target.push_back(Lit(rng() % 2 ? v : -v));
    }
    if (rup_check(f, target)) {
      ++checked;
      EXPECT_TRUE(oracle::entails(f, target, n));
    }
  }
  EXPECT_GT(checked, 10);
}

// Horn theory: entailment of (negated positive conjunction OR head) is decided by UP.
TEST(Rup, CompleteOnHornFormulas) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Var n = 3 + rng() % 10;
    CnfFormula f(n);
    int m = 2 + rng() % 14;
    for (int i = 0; i < m; ++i) {
      Clause cl;
      int len = 1 + rng() % 3;
      bool has_pos = false;
      for (int j = 0; j < len; ++j) {
        int v = 1 + rng() % n;
        bool pos = !has_pos && rng() % 3 == 0;
        has_pos |= pos;
        cl.push_back(Lit(pos ? v : -v));
      }
      f.add(cl);
    }
    ASSERT_TRUE(is_horn(f));
    Var p = 1 + rng() % n;
    Clause lemma{Lit::pos(p)};
    for (Var v = 1; v <= n; ++v)
      if (v != p && rng() % 3 == 0) lemma.push_back(Lit::neg(v));
    EXPECT_EQ(oracle::entails(f, lemma, n), rup_check(f, lemma));
  }
}

TEST(Horn, Classification) {
  EXPECT_TRUE(is_horn(running_example()));
  EXPECT_FALSE(is_horn(CnfFormula(3, {C({1, 2, -3})})));
  EXPECT_TRUE(is_dual_horn(CnfFormula(13, {C({3, -11}), C({4, -12}), C({11, 12, -9})})));
  std::vector<Var> flip{2};
  EXPECT_TRUE(is_horn(CnfFormula(3, {C({1, 2, -3})}), flip));
}

TEST(EncodeImplication, CutBound) {
  CnfFormula ante(15, {C({-c}), C({-d})});
  CnfFormula out = encode_implication(ante, Lit(-reach), 15);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], C({c, -16}));
  EXPECT_EQ(out[1], C({d, -17}));
  EXPECT_EQ(out[2], C({16, 17, -reach}));
  EXPECT_TRUE(is_dual_horn(out));
}

TEST(EncodeImplication, EmptyAntecedentAndErrors) {
  CnfFormula out = encode_implication(CnfFormula(3), Lit(3), 3);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], C({3}));
  EXPECT_THROW(encode_implication(CnfFormula(3, {C({1, 3})}), Lit(-3), 3), Error);
}

TEST(EncodeImplication, TwoLiteralClause) {
  // x=1 y=2 p=3
  CnfFormula out = encode_implication(CnfFormula(3, {C({-1, -2})}), Lit(-3), 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], C({1, -4}));
  EXPECT_EQ(out[1], C({2, -4}));
  EXPECT_EQ(out[2], C({4, -3}));
}

TEST(EncodeImplication, EquivalentOverOriginalVars) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Var n = 2 + rng() % 8;  // head is var n+1... keep within 10
    const Var head = n + 1;
    CnfFormula ante(n);
    int m = rng() % 5;
    for (int i = 0; i < m; ++i) {
      Clause cl;
      int len = 1 + rng() % 3;
      for (int j = 0; j < len; ++j) {
        int v = 1 + rng() % n;
        cl.push_back(Lit(rng() % 2 ? v : -v));
      }
      ante.add(cl);
    }
    Lit hl = rng() % 2 ? Lit::pos(head) : Lit::neg(head);
    CnfFormula enc = encode_implication(ante, hl, head);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << head); ++mask) {
      bool expected = !oracle::formula_sat(ante, mask) || oracle::lit_true(hl, mask);
      std::vector<Lit> fixed;
      for (Var v = 1; v <= head; ++v) fixed.push_back(Lit::make(v, (mask >> (v - 1)) & 1));
      EXPECT_EQ(oracle::satisfiable_under(enc, fixed), expected);
    }
  }
}

TEST(Dimacs, RoundTripAndErrors) {
  CnfFormula f = running_example();
  CnfFormula g = parse_dimacs(to_dimacs(f));
  EXPECT_EQ(g.num_vars(), f.num_vars());
  EXPECT_EQ(g.clauses(), f.clauses());
  EXPECT_NO_THROW(parse_dimacs("c hi\np cnf 2 1\n1 -2 0\n"));
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 0\n"), ParseError);
  try {
    parse_dimacs("p cnf 2 1\n1 x 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
