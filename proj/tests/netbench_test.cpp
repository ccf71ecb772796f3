#include <gtest/gtest.h>

#include <functional>

#include "smmt/netbench.hpp"

using namespace smmt;
using namespace smmt::netbench;

namespace {

// every packet, every source-destination path, components applied hop by hop
bool deliverable(const NetworkSpec& spec) {
  std::vector<std::vector<std::size_t>> succ(spec.nodes.size());
  for (auto [u, v] : spec.edges) succ[u].push_back(v);
  std::function<bool(std::size_t, std::uint64_t)> walk = [&](std::size_t u, std::uint64_t pkt) {
    const Component& c = spec.nodes[u];
    if (c.kind == Kind::Destination) return c.control.contains(pkt, spec.width);
    std::uint64_t out = pkt;
    if (c.kind == Kind::Simple && (c.drop_all || !c.control.contains(pkt, spec.width))) return false;
    if (c.kind == Kind::Transformer) out = c.rewrite;
    for (std::size_t v : succ[u])
      if (walk(v, out)) return true;
    return false;
  };
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << spec.width); ++a)
    if (walk(spec.source(), a)) return true;
  return false;
}

NetworkSpec chain(std::vector<Component> middle, std::vector<std::pair<std::size_t, std::size_t>> edges, Cidr accept) {
  NetworkSpec s;
  s.width = 8;
  s.nodes.push_back({Kind::Source, 0, {}, 0, false});
  for (Component& c : middle) s.nodes.push_back(c);
  s.nodes.push_back({Kind::Destination, 2, accept, 0, false});
  s.edges = std::move(edges);
  return s;
}

}  // namespace

TEST(Generate, TwoLayersTwoComponents) {
  NetworkSpec s = generate(1, 2, 2);
  EXPECT_EQ(s.nodes.size(), 6u);
  EXPECT_EQ(s.nodes.front().kind, Kind::Source);
  EXPECT_EQ(s.nodes.back().kind, Kind::Destination);
  for (auto [u, v] : s.edges) {
    EXPECT_EQ(s.nodes[v].layer, s.nodes[u].layer + 1);
  }
}

TEST(Generate, Deterministic) {
  for (std::uint64_t seed : {1, 7, 99}) {
    const std::string a = write_instance(encode(generate(seed, 4, 3, 8, seed % 2)));
    const std::string b = write_instance(encode(generate(seed, 4, 3, 8, seed % 2)));
    EXPECT_EQ(a, b);
  }
  EXPECT_NE(write_instance(encode(generate(1, 3, 2))), write_instance(encode(generate(2, 3, 2))));
}

TEST(Generate, EveryComponentOnSomePath) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    NetworkSpec s = generate(seed, 1 + seed % 5, 1 + seed % 4, 6);
    std::vector<bool> in(s.nodes.size(), false), out(s.nodes.size(), false);
    for (auto [u, v] : s.edges) {
      out[u] = true;
      in[v] = true;
    }
    for (std::size_t i = 1; i + 1 < s.nodes.size(); ++i) EXPECT_TRUE(in[i] && out[i]) << seed << ' ' << i;
  }
}

TEST(Generate, RejectsBadSizes) {
  EXPECT_THROW(generate(1, 0, 2), Error);
  EXPECT_THROW(generate(1, 2, 0), Error);
  EXPECT_THROW(generate(1, 2, 2, 0), Error);
  EXPECT_THROW(generate(1, 2, 2, 40), Error);
}

TEST(Generate, NothingDeliverableByPacketEnumeration) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    NetworkSpec s = generate(seed, 1 + seed % 5, 1 + seed % 3, 4 + seed % 7);
    EXPECT_FALSE(deliverable(s)) << seed;
  }
  for (const TierEntry& e : oracle_tier()) EXPECT_FALSE(deliverable(generate(e.seed, e.layers, e.per_layer, e.width)));
}

TEST(Generate, AcceptanceIsAsWideAsPossible) {
  // one bit shorter and every block would overlap an arriving packet
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    NetworkSpec s = generate(seed, 3, 2, 6);
    const Cidr acc = s.nodes.back().control;
    const std::vector<bool> arrive = arriving(s).back();
    for (std::uint64_t a = 0; a < 64; ++a)
      if (acc.contains(a, 6)) EXPECT_FALSE(arrive[a]);
    if (acc.length <= 1) continue;
    for (std::uint64_t p = 0; p < (1u << (acc.length - 1)); ++p) {
      Cidr wider{p << (6 - acc.length + 1), acc.length - 1};
      bool hit = false;
      for (std::uint64_t a = 0; a < 64; ++a) hit = hit || (wider.contains(a, 6) && arrive[a]);
      EXPECT_TRUE(hit);
    }
  }
}

TEST(Encode, RoundTripsThroughTheParser) {
  for (const TierEntry& e : oracle_tier()) {
    Instance inst = encode(generate(e.seed, e.layers, e.per_layer, e.width, e.decoy));
    const std::string text = write_instance(inst);
    EXPECT_EQ(write_instance(parse_instance(text)), text) << e.name();
  }
}

TEST(Encode, DropEverythingIsUnsatAndVerified) {
  Component drop{Kind::Simple, 1, {}, 0, true};
  NetworkSpec s = chain({drop}, {{0, 1}, {1, 2}}, {0, 0});
  EXPECT_FALSE(deliverable(s));
  ProveResult r = prove(encode(s));
  ASSERT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_TRUE(r.report.verified) << r.report.reject_reason;
}

TEST(Encode, TransformerIntoBlockedBlock) {
  // s -> T(0xA0) -> S(0/1) -> d and s -> S(0/1) -> d, destination accepts 1/1
  Component t{Kind::Transformer, 1, {}, 0xA0, false};
  Component low{Kind::Simple, 1, {0x00, 1}, 0, false};
  Component low2{Kind::Simple, 2, {0x00, 1}, 0, false};
  NetworkSpec s = chain({t, low, low2}, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 4}}, {0x80, 1});
  s.nodes.back().layer = 3;
  EXPECT_FALSE(deliverable(s));
  ProveResult r = prove(encode(s));
  ASSERT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_TRUE(r.report.verified) << r.report.reject_reason;
  EXPECT_GT(r.report.routes_dual, 0u);

  // let the rewritten packet through and it is delivered
  s.nodes[3].control = {0x80, 1};
  EXPECT_TRUE(deliverable(s));
  ProveResult sat = prove(encode(s));
  ASSERT_EQ(sat.status, SolveStatus::Sat);
  EXPECT_TRUE(Theory(encode(s)).consistent(sat.model));
}

TEST(Encode, OpeningTheAcceptanceMakesItSatisfiable) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    NetworkSpec s = generate(seed, 3, 2, 6);
    const std::vector<bool> arrive = arriving(s).back();
    auto it = std::find(arrive.begin(), arrive.end(), true);
    if (it == arrive.end()) continue;
    s.nodes.back().control = {static_cast<std::uint64_t>(it - arrive.begin()), 6};
    EXPECT_TRUE(deliverable(s));
    Instance inst = encode(s);
    ProveResult r = prove(inst);
    ASSERT_EQ(r.status, SolveStatus::Sat) << seed;
    EXPECT_TRUE(Theory(inst).consistent(r.model));
  }
}

TEST(Encode, SmallTierSolvesAndVerifies) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    ProveResult r = prove(encode(generate(seed, 3, 2, 8, seed % 2)));
    ASSERT_EQ(r.status, SolveStatus::Unsat) << seed;
    EXPECT_TRUE(r.report.verified) << seed << ": " << r.report.reject_reason;
  }
}

TEST(Encode, DecoyLemmasAreTrimmed) {
  ProveResult r = prove(encode(generate(4, 3, 2, 8, true)));
  ASSERT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_TRUE(r.report.verified);
  EXPECT_LT(r.report.theory_core, r.report.theory_emitted);
}

TEST(Manifest, RoundTrip) {
  const std::vector<TierEntry> tier = oracle_tier();
  ASSERT_EQ(tier.size(), 24u);
  for (const TierEntry& e : tier) {
    EXPECT_EQ(e.width, 8u);
    EXPECT_GE(e.layers, 3u);
    EXPECT_LE(e.layers, 5u);
  }
  const std::string text = manifest_to_string(tier);
  EXPECT_EQ(manifest_to_string(parse_manifest(text)), text);
  EXPECT_THROW(parse_manifest("net-s1-l3-k2-w8 2 3 2 8 0\n"), ParseError);
  EXPECT_THROW(parse_manifest("x 1 2\n"), ParseError);
}
