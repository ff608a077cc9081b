#include <gtest/gtest.h>

#include <random>

#include "medp/flow.hpp"
#include "support/fixtures.hpp"

namespace medp {
namespace {

MultiGraph complete(int n) {
  MultiGraph g(n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) g.add_edge(a, b);
  }
  return g;
}

TEST(Connectivity, CompleteGraphsAndCapacities) {
  EXPECT_EQ(local_edge_connectivity(complete(4), 0, 3), 3);
  EXPECT_EQ(local_edge_connectivity(complete(6), 1, 4), 5);
  MultiGraph g(3);
  g.add_edge(0, 1, 5);
  g.add_edge(1, 2, 2);
  g.add_edge(0, 2, 1);
  EXPECT_EQ(local_edge_connectivity(g, 0, 2), 3);
  EXPECT_THROW(local_edge_connectivity(g, 1, 1), InvalidInput);
}

TEST(Connectivity, DisconnectedIsZero) {
  MultiGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  EXPECT_EQ(local_edge_connectivity(g, 0, 3), 0);
}

TEST(MaxFlow, RationalSuppliesAreScaled) {
  MultiGraph g(3);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  const FlowNetwork net = FlowNetwork::make(g, {{0, Rational(1, 2)}, {1, Rational(2, 3)}}, {2});
  EXPECT_EQ(net.scale, 6);
  const MaxFlowResult mf = max_flow(net);
  EXPECT_EQ(mf.value, 7);
  const auto pieces = decompose_flow(mf, net);
  std::int64_t total = 0;
  for (const FlowPiece& p : pieces) {
    EXPECT_EQ(walk_end(g, p.start, p.edges), 2);
    total += p.amount;
  }
  EXPECT_EQ(total, 7);
}

TEST(SupplyRouting, FeasibleReturnsPathsMatchingSupplies) {
  const MultiGraph g = complete(5);
  const std::map<NodeId, Rational> supply{{0, Rational(3, 2)}, {1, Rational(1)}, {2, Rational(1, 3)}};
  const std::vector<NodeId> targets{3, 4};
  const auto out = route_supplies_or_cut(g, supply, targets, Rational(1));
  ASSERT_TRUE(std::holds_alternative<ToSetFlow>(out));
  const ToSetFlow& f = std::get<ToSetFlow>(out);
  std::map<NodeId, Rational> sent;
  std::vector<Rational> load(static_cast<std::size_t>(g.num_edges()));
  for (const SupplyPath& p : f.paths) {
    const NodeId end = walk_end(g, p.source, p.edges);
    EXPECT_TRUE(end == 3 || end == 4);
    sent[p.source] += p.amount;
    for (EdgeId e : p.edges) load[static_cast<std::size_t>(e)] += p.amount;
  }
  EXPECT_EQ(sent, supply);
  for (const Edge& e : g.edges()) EXPECT_LE(load[static_cast<std::size_t>(e.id)], Rational(e.cap));
}

TEST(SupplyRouting, InfeasibleReturnsVerifiedCut) {
  // Pocket {0, 1} behind a single edge to the target.
  MultiGraph g(4);
  g.add_edge(0, 1, 3);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 3, 5);
  const std::map<NodeId, Rational> supply{{0, Rational(1)}, {1, Rational(1, 2)}};
  const std::vector<NodeId> targets{3};
  const auto out = route_supplies_or_cut(g, supply, targets, Rational(1));
  ASSERT_TRUE(std::holds_alternative<CutCertificate>(out));
  const CutCertificate& c = std::get<CutCertificate>(out);
  EXPECT_TRUE(verify_certificate(c, g, supply));
  EXPECT_EQ(c.nodes, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(c.capacity, Rational(1));
  EXPECT_EQ(c.supply, Rational(3, 2));
  for (NodeId t : targets) EXPECT_EQ(std::count(c.nodes.begin(), c.nodes.end(), t), 0);
}

TEST(SupplyRouting, SlackScalesDemand) {
  MultiGraph g(2);
  g.add_edge(0, 1, 1);
  const std::map<NodeId, Rational> supply{{0, Rational(3)}};
  const std::vector<NodeId> targets{1};
  EXPECT_TRUE(std::holds_alternative<ToSetFlow>(route_supplies_or_cut(g, supply, targets, Rational(1, 3))));
  EXPECT_TRUE(std::holds_alternative<CutCertificate>(route_supplies_or_cut(g, supply, targets, Rational(1, 2))));
  EXPECT_THROW(route_supplies_or_cut(g, supply, {}, Rational(1)), InvalidInput);
}

TEST(SupplyRouting, RandomGraphsEitherRouteOrCertify) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 8);
    MultiGraph g(n);
    for (NodeId v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng() % v), v, 1 + static_cast<int>(rng() % 3));
    std::map<NodeId, Rational> supply;
    for (NodeId v = 1; v < n; ++v) {
      if (rng() % 2) supply[v] = make_rational(static_cast<std::int64_t>(1 + rng() % 7), static_cast<std::int64_t>(1 + rng() % 3));
    }
    const std::vector<NodeId> targets{0};
    const auto out = route_supplies_or_cut(g, supply, targets, Rational(1));
    if (const auto* c = std::get_if<CutCertificate>(&out)) {
      EXPECT_TRUE(verify_certificate(*c, g, supply));
      const auto parts = centralize_cut(g, c->nodes, supply);
      for (const CutCertificate& p : parts) {
        EXPECT_TRUE(verify_certificate(p, g, supply));
        EXPECT_EQ(induced_components(g, p.nodes).size(), 1u);
      }
    } else {
      Rational total = 0;
      for (const SupplyPath& p : std::get<ToSetFlow>(out).paths) total += p.amount;
      Rational want = 0;
      for (const auto& [v, s] : supply) want += s;
      EXPECT_EQ(total, want);
    }
  }
}

TEST(CentralizeCut, RejectsNonViolatingSet) {
  const MultiGraph g = complete(4);
  const std::map<NodeId, Rational> supply{{0, Rational(1)}};
  const std::vector<NodeId> nodes{0};
  EXPECT_THROW(centralize_cut(g, nodes, supply), InvalidInput);
}

TEST(CentralizeCut, SplitsIntoViolatingComponents) {
  MultiGraph g(5);
  g.add_edge(0, 4);
  g.add_edge(1, 4);
  g.add_edge(2, 4);
  const std::map<NodeId, Rational> supply{{0, Rational(2)}, {1, Rational(2)}, {2, Rational(1)}};
  const std::vector<NodeId> nodes{0, 1, 2};
  const auto parts = centralize_cut(g, nodes, supply);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].nodes, (std::vector<NodeId>{0}));
  EXPECT_EQ(parts[1].nodes, (std::vector<NodeId>{1}));
}

TEST(RationalFlowDecomposition, CancelsCycles) {
  MultiGraph g(4);
  const EdgeId a = g.add_edge(0, 1);
  const EdgeId b = g.add_edge(1, 2);
  const EdgeId c = g.add_edge(2, 0);
  const EdgeId d = g.add_edge(2, 3);
  std::vector<Rational> flow(4);
  flow[static_cast<std::size_t>(a)] = Rational(3, 2);
  flow[static_cast<std::size_t>(b)] = Rational(3, 2);
  flow[static_cast<std::size_t>(c)] = Rational(1);  // 2 -> 0, closes a cycle
  flow[static_cast<std::size_t>(d)] = Rational(1, 2);
  const auto paths = decompose_rational_flow(g, flow, 0, 3);
  Rational total = 0;
  for (const auto& [edges, amount] : paths) {
    EXPECT_TRUE(is_simple_path(g, 0, 3, edges));
    total += amount;
  }
  EXPECT_EQ(total, Rational(1, 2));
}

}  // namespace
}  // namespace medp
