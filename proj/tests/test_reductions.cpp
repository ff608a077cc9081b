#include <gtest/gtest.h>

#include <random>

#include "medp/medp.hpp"
#include "support/fixtures.hpp"

namespace medp {
namespace {

TEST(Clusters, SingleTerminal) {
  MultiGraph g(2);
  g.add_edge(0, 1);
  const std::vector<NodeId> S{0};
  const std::vector<NodeId> R{1};
  const auto clusters = cluster_terminals(g, S, R, {{0, Rational(1)}});
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].terminals, S);
  EXPECT_EQ(clusters[0].weight, Rational(1));
  EXPECT_TRUE(cluster_terminals(g, {}, R, {}).empty());
}

MultiGraph path_graph(int n) {
  MultiGraph g(n);
  for (NodeId v = 1; v < n; ++v) g.add_edge(v - 1, v);
  return g;
}

TEST(Clusters, PathOfFourHalfTerminalsStaysWhole) {
  // Total weight 2 is already within [1, 2], so the scheme stops at once.
  const MultiGraph g = path_graph(5);
  const std::vector<NodeId> S{0, 1, 2, 3};
  const std::vector<NodeId> R{4};
  std::map<NodeId, Rational> x;
  for (NodeId v : S) x[v] = Rational(1, 2);
  const auto clusters = cluster_terminals(g, S, R, x);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].weight, Rational(2));
  EXPECT_TRUE(clusters[0].holds_root);
}

TEST(Clusters, PathOfFiveHalfTerminalsSplits) {
  const MultiGraph g = path_graph(6);
  const std::vector<NodeId> S{0, 1, 2, 3, 4};
  const std::vector<NodeId> R{5};
  std::map<NodeId, Rational> x;
  for (NodeId v : S) x[v] = Rational(1, 2);
  const auto clusters = cluster_terminals(g, S, R, x);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0].terminals, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(clusters[0].weight, Rational(1));
  EXPECT_EQ(clusters[1].terminals, (std::vector<NodeId>{2, 3, 4}));
  EXPECT_EQ(clusters[1].weight, Rational(3, 2));
}

TEST(Clusters, StarOfFiveUnitTerminals) {
  MultiGraph g(6);
  for (NodeId v = 1; v <= 5; ++v) g.add_edge(0, v);
  const std::vector<NodeId> S{1, 2, 3, 4, 5};
  const std::vector<NodeId> R{0};
  std::map<NodeId, Rational> x;
  for (NodeId v : S) x[v] = Rational(1);
  auto clusters = cluster_terminals(g, S, R, x);
  EXPECT_GE(clusters.size(), 3u);
  for (const Cluster& c : clusters) {
    EXPECT_GE(c.weight, Rational(1));
    EXPECT_LE(c.weight, Rational(2));
  }
  cluster_paths(g, clusters, R);
  for (const Cluster& c : clusters) EXPECT_EQ(c.exit_end, 0);
}

TEST(Clusters, RandomTreesGiveDisjointSubtreesAndExitPaths) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 10);
    MultiGraph g(n);
    for (NodeId v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng() % v), v, n);
    const std::vector<NodeId> R{0};
    std::vector<NodeId> S;
    std::map<NodeId, Rational> x;
    for (NodeId v = 1; v < n; ++v) {
      if (rng() % 2) {
        S.push_back(v);
        x[v] = make_rational(static_cast<std::int64_t>(1 + rng() % 4), 4);
      }
    }
    auto clusters = cluster_terminals(g, S, R, x);
    std::vector<int> tree_use(static_cast<std::size_t>(g.num_edges()), 0);
    Rational total = 0;
    for (const Cluster& c : clusters) {
      for (EdgeId e : c.tree_edges) ++tree_use[static_cast<std::size_t>(e)];
      if (!c.holds_root) EXPECT_GE(c.weight, Rational(1));
      EXPECT_LE(c.weight, Rational(2));
      total += c.weight;
    }
    for (int u : tree_use) EXPECT_LE(u, 1);
    Rational want = 0;
    for (const auto& [v, w] : x) want += w;
    EXPECT_EQ(total, want);
    // Capacity n per tree edge lets every cluster reach the root.
    cluster_paths(g, clusters, R);
    std::vector<int> exit_use(static_cast<std::size_t>(g.num_edges()), 0);
    for (const Cluster& c : clusters) {
      EXPECT_EQ(walk_end(g, c.anchor, c.exit_path), c.exit_end);
      for (EdgeId e : c.exit_path) ++exit_use[static_cast<std::size_t>(e)];
    }
    for (const Edge& e : g.edges()) EXPECT_LE(exit_use[static_cast<std::size_t>(e.id)], e.cap);
  }
}

TEST(MoveTerminals, EmptySetIsIdentity) {
  const testing::StarCase sc = testing::star_case(3);
  const auto out = move_terminals(sc.prep.instance, sc.flush, {}, sc.roots);
  ASSERT_TRUE(std::holds_alternative<MoveResult>(out));
  const MoveResult& mv = std::get<MoveResult>(out);
  EXPECT_TRUE(mv.record.moved.empty());
  EXPECT_EQ(mv.routing.value(), sc.flush.value());
  EXPECT_EQ(mv.instance.graph().num_edges(), sc.prep.instance.graph().num_edges());
  IntegralRouting inner = testing::greedy_integral(mv.instance, mv.routing, 1);
  const IntegralRouting lifted = lift_routing(mv.record, sc.prep.instance, mv.instance, inner);
  EXPECT_EQ(lifted.value(), inner.value());
}

TEST(MoveTerminals, FlushStarRoundTrip) {
  int moved_any = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const testing::StarCase sc = testing::star_case(seed);
    const auto out = move_terminals(sc.prep.instance, sc.flush, sc.movers, sc.roots);
    ASSERT_TRUE(std::holds_alternative<MoveResult>(out)) << seed;
    const MoveResult& mv = std::get<MoveResult>(out);
    validate_fractional(mv.routing, mv.instance);
    EXPECT_EQ(mv.routing.value() * 5, sc.flush.value()) << seed;
    EXPECT_EQ(mv.instance.num_demands(), sc.prep.instance.num_demands());
    for (std::size_t i = 0; i < mv.record.star_edge.size(); ++i) {
      EXPECT_EQ(mv.instance.graph().edge(mv.record.star_edge[i]).cap, 1);
    }
    moved_any += mv.record.moved.empty() ? 0 : 1;

    for (int cap : {1, 2}) {
      const IntegralRouting inner = testing::filter_and_greedy(mv, cap);
      const Rational inner_cong = congestion_of(inner, mv.instance.graph());
      const IntegralRouting lifted = lift_routing(mv.record, sc.prep.instance, mv.instance, inner);
      EXPECT_EQ(lifted.value(), inner.value());
      EXPECT_FALSE(check_integral(lifted, sc.prep.instance, inner_cong + 2).has_value()) << seed;
    }
  }
  EXPECT_GT(moved_any, 10);
}

TEST(LiftRouting, RejectsDoubleUseOfAStar) {
  // Two demands from the same side of a single edge: both terminals on the
  // left share one cluster, so both routed paths would use its star.
  MultiGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2, 2);
  g.add_edge(2, 3);
  const std::vector<std::pair<NodeId, NodeId>> pairs{{0, 3}, {0, 3}};
  const MatchingInstance inst = normalize_to_matching(g, pairs);
  FractionalRouting f;
  f.paths.push_back({0, {3, 0, 1, 2, 4}, Rational(1, 2)});
  f.paths.push_back({1, {5, 0, 1, 2, 6}, Rational(1, 2)});
  validate_fractional(f, inst);
  const std::vector<NodeId> S{inst.demand(0).s, inst.demand(1).s};
  const std::vector<NodeId> R{1};
  const auto out = move_terminals(inst, f, S, R);
  ASSERT_TRUE(std::holds_alternative<MoveResult>(out));
  const MoveResult& mv = std::get<MoveResult>(out);
  ASSERT_EQ(mv.record.clusters.size(), 1u);
  const IntegralRouting both = testing::greedy_integral(mv.instance, mv.routing, 2);
  ASSERT_EQ(both.value(), 2);
  EXPECT_THROW(lift_routing(mv.record, inst, mv.instance, both), InvalidInput);
  const IntegralRouting one = filter_one_path_per_star(mv.record, both, mv.instance.graph());
  EXPECT_EQ(one.value(), 1);
  EXPECT_NO_THROW(lift_routing(mv.record, inst, mv.instance, one));
}

TEST(MoveTerminals, InfeasibleSupplyReturnsCut) {
  // Four unit demands 0 -> 2 along the path 0-1-2; R = {3} hangs off node 1
  // by a single unit edge, so the left terminals' supply 4 cannot reach it.
  MultiGraph g(4);
  g.add_edge(0, 1, 4);
  g.add_edge(1, 2, 4);
  g.add_edge(1, 3);
  const std::vector<std::pair<NodeId, NodeId>> pairs(4, {0, 2});
  const MatchingInstance inst = normalize_to_matching(g, pairs);
  FractionalRouting f;
  std::vector<NodeId> S;
  for (DemandId h = 0; h < 4; ++h) {
    // Leaf edges follow the three graph edges, two per demand.
    const EdgeId s_leaf = 3 + 2 * h;
    f.paths.push_back({h, {s_leaf, 0, 1, s_leaf + 1}, Rational(1)});
    S.push_back(inst.demand(h).s);
  }
  validate_fractional(f, inst);
  const std::vector<NodeId> R{3};
  const auto out = move_terminals(inst, f, S, R);
  ASSERT_TRUE(std::holds_alternative<CutCertificate>(out));
  const CutCertificate& cut = std::get<CutCertificate>(out);
  EXPECT_TRUE(cut.violated());
  std::map<NodeId, Rational> supplies;
  for (NodeId t : S) supplies[t] = 1;
  EXPECT_TRUE(verify_certificate(cut, inst.graph(), supplies));
  EXPECT_FALSE(std::binary_search(cut.nodes.begin(), cut.nodes.end(), NodeId{3}));

  const std::vector<NodeId> near{1};
  EXPECT_TRUE(std::holds_alternative<MoveResult>(move_terminals(inst, f, S, near)));
}

TEST(Eulerianize, AllDegreesEven) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 10);
    MultiGraph g(n);
    for (NodeId v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng() % v), v, 1 + static_cast<int>(rng() % 3));
    const EulerianGraph w = eulerianize(g);
    for (NodeId v = 0; v < n; ++v) EXPECT_EQ(w.graph.degree(v) % 2, 0);
    EXPECT_EQ(w.graph.num_edges(), g.total_capacity() + static_cast<std::int64_t>(w.duplicated.size()));
  }
}

void check_sparsifier(const MultiGraph& g, const std::vector<NodeId>& S) {
  const Sparsifier sp = build_sparsifier(g, S);
  ASSERT_EQ(sp.terminals, S);
  EXPECT_EQ(sp.sigma, static_cast<int>(S.size() * S.size()));
  EXPECT_EQ(sp.rho, 2);
  for (std::size_t a = 0; a < S.size(); ++a) {
    for (std::size_t b = a + 1; b < S.size(); ++b) {
      const auto lh = local_edge_connectivity(sp.h, static_cast<NodeId>(a), static_cast<NodeId>(b));
      EXPECT_GE(lh, local_edge_connectivity(g, S[a], S[b]));
    }
  }
  // Route every F edge at once; loads stay within c_e + 1.
  std::vector<HPath> all;
  for (EdgeId e = 0; e < sp.h.num_edges(); ++e) all.push_back({e, sp.h.edge(e).u, {e}});
  std::vector<std::int64_t> load(static_cast<std::size_t>(g.num_edges()), 0);
  for (const RoutedPath& p : embed_routing(sp, g, all)) {
    const Edge& he = sp.h.edge(p.demand);
    EXPECT_TRUE(is_simple_path(g, S[static_cast<std::size_t>(he.u)], S[static_cast<std::size_t>(he.v)], p.edges));
    for (EdgeId e : p.edges) ++load[static_cast<std::size_t>(e)];
  }
  for (const Edge& e : g.edges()) EXPECT_LE(load[static_cast<std::size_t>(e.id)], e.cap + 1);
}

TEST(Sparsifier, CompleteGraphK5) {
  MultiGraph g(5);
  for (NodeId a = 0; a < 5; ++a) {
    for (NodeId b = a + 1; b < 5; ++b) g.add_edge(a, b);
  }
  check_sparsifier(g, {0, 1, 2});
}

TEST(Sparsifier, RandomGraphs) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 8);
    MultiGraph g(n);
    for (NodeId v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng() % v), v, 1 + static_cast<int>(rng() % 2));
    for (int extra = 0; extra < n; ++extra) {
      const NodeId a = static_cast<NodeId>(rng() % n);
      const NodeId b = static_cast<NodeId>(rng() % n);
      if (a != b) g.add_edge(a, b);
    }
    std::vector<NodeId> S = all_nodes(g);
    std::shuffle(S.begin(), S.end(), rng);
    S.resize(static_cast<std::size_t>(2 + static_cast<int>(rng() % 3)));
    std::sort(S.begin(), S.end());
    check_sparsifier(g, S);
  }
}

TEST(Sparsifier, EmptyTerminalSetIsInvalid) {
  MultiGraph g(2);
  g.add_edge(0, 1);
  EXPECT_THROW(build_sparsifier(g, {}), InvalidInput);
}

}  // namespace
}  // namespace medp
