#pragma once

// Small hand-built instances shared by the test suites. Reference values in
// comments come from tools/oracles/derive_constants.py.

#include <algorithm>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "medp/medp.hpp"

namespace medp::testing {

struct Fixture {
  std::string name;
  RawInstance raw;
  Rational lp;  // exact LP optimum
  int exact_cap1 = 0;
  int exact_cap2 = 0;
};

inline RawInstance make_raw(int n, const std::vector<std::tuple<int, int, int>>& edges,
                            std::vector<std::pair<NodeId, NodeId>> pairs) {
  RawInstance raw;
  raw.graph = MultiGraph(n);
  for (const auto& [u, v, c] : edges) raw.graph.add_edge(u, v, c);
  raw.pairs = std::move(pairs);
  return raw;
}

inline std::vector<std::tuple<int, int, int>> grid_edges(int r, int c) {
  std::vector<std::tuple<int, int, int>> e;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      if (j + 1 < c) e.emplace_back(i * c + j, i * c + j + 1, 1);
      if (i + 1 < r) e.emplace_back(i * c + j, (i + 1) * c + j, 1);
    }
  }
  return e;
}

/// Values derived by the independent Python oracle and frozen here.
inline std::vector<Fixture> fixtures() {
  const std::vector<std::tuple<int, int, int>> k4{{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}};
  std::vector<std::tuple<int, int, int>> star5;
  for (int i = 1; i <= 5; ++i) star5.emplace_back(0, i, 1);
  return {
      {"k4_three_pairs", make_raw(4, k4, {{0, 1}, {2, 3}, {0, 2}}), Rational(3), 3, 3},
      {"triangle_two_pairs", make_raw(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, {{0, 1}, {0, 2}}), Rational(2), 2, 2},
      {"bridge_two_pairs", make_raw(4, {{0, 1, 1}, {2, 1, 1}, {1, 3, 1}}, {{0, 3}, {2, 3}}), Rational(1), 1, 2},
      {"k4_two_disjoint", make_raw(4, k4, {{0, 1}, {2, 3}}), Rational(2), 2, 2},
      {"grid3_crossing", make_raw(9, grid_edges(3, 3), {{0, 6}, {3, 7}, {6, 8}}), Rational(3), 3, 3},
      {"cycle4_diagonals", make_raw(4, {{0, 1, 1}, {1, 3, 1}, {3, 2, 1}, {2, 0, 1}}, {{0, 3}, {1, 2}}), Rational(2), 1, 2},
      {"star5_three_pairs", make_raw(6, star5, {{1, 2}, {3, 4}, {5, 1}}), Rational(2), 2, 3},
      {"cap2_path_three_pairs", make_raw(3, {{0, 1, 2}, {1, 2, 1}}, {{0, 2}, {0, 2}, {0, 1}}), Rational(2), 2, 3},
  };
}

/// A pocket behind a bridge: hub triangle 0-1-2 with an extra node x on the
/// separator {0, 2}, bridge 2-3, a pocket cycle 3..2+len of capacity `cap`,
/// optionally an inner cycle hanging off the pocket. Demands pair random
/// pocket nodes. The decomposition is a hub bag, a hub side bag {0, 2, x},
/// and fans over the cycles, so the lowest size-2 separator is {0, 2}.
struct Pocket {
  RawInstance raw;
  TreeDecomposition decomposition;
};

inline Pocket make_pocket(std::uint64_t seed, bool inner_pocket) {
  std::mt19937_64 rng(seed);
  const int len = 6 + static_cast<int>(seed % 6);
  const int inner = inner_pocket ? 5 + static_cast<int>(seed % 3) : 0;
  const int x = 3 + len;
  const int base = 4 + len;
  Pocket out;
  MultiGraph& g = out.raw.graph;
  g = MultiGraph(4 + len + inner);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(0, x);
  g.add_edge(2, x);
  g.add_edge(2, 3);
  std::uniform_int_distribution<int> cap(2, 4);
  for (int i = 0; i < len; ++i) g.add_edge(3 + i, 3 + (i + 1) % len, cap(rng));
  const int att = 3 + len / 2;
  if (inner_pocket) {
    g.add_edge(att, base);
    for (int i = 0; i < inner; ++i) g.add_edge(base + i, base + (i + 1) % inner, 4);
  }
  std::uniform_int_distribution<int> pick(3, 2 + len);
  if (inner_pocket) {
    std::uniform_int_distribution<int> ipick(base, base + inner - 1);
    for (int j = 0; j < 4; ++j) {
      const int a = ipick(rng);
      const int b = ipick(rng);
      if (a != b) out.raw.pairs.emplace_back(a, b);
    }
  }
  const std::size_t want = out.raw.pairs.size() + 3 + seed % 4;
  while (out.raw.pairs.size() < want) {
    const int a = pick(rng);
    const int b = pick(rng);
    if (a != b) out.raw.pairs.emplace_back(a, b);
  }
  out.raw.pairs.emplace_back(0, 1);

  TreeDecomposition& d = out.decomposition;
  d.bags = {{{0, 1, 2}, false}, {{0, 2, x}, false}, {{2, 3}, false}};
  d.tree_edges = {{0, 1}, {0, 2}};
  int prev = 2;
  int holder = 2;
  for (int i = 4; i + 1 <= 2 + len; ++i) {
    d.bags.push_back({{3, i, i + 1}, false});
    d.tree_edges.emplace_back(prev, d.num_bags() - 1);
    prev = d.num_bags() - 1;
    if (i == att || i + 1 == att) holder = prev;
  }
  if (inner_pocket) {
    d.bags.push_back({{att, base}, false});
    d.tree_edges.emplace_back(holder, d.num_bags() - 1);
    int q = d.num_bags() - 1;
    for (int i = 1; i + 1 < inner; ++i) {
      d.bags.push_back({{base, base + i, base + i + 1}, false});
      d.tree_edges.emplace_back(q, d.num_bags() - 1);
      q = d.num_bags() - 1;
    }
  }
  for (Bag& b : d.bags) normalize_bag(b);
  d.root = 0;
  d.k = 2;
  d.p = 2;
  return out;
}

/// Normalized instance plus extended decomposition.
inline PreparedInstance prepare(const RawInstance& raw, const TreeDecomposition& d) {
  return prepare_instance(raw, d);
}

inline IntegralRouting as_integral(const FractionalRouting& f) {
  IntegralRouting r;
  for (const FlowPath& p : f.paths) r.paths.push_back({p.demand, p.edges});
  return r;
}

/// Picks flow paths in order of decreasing value, at most one per demand,
/// while every edge stays within cap * c_e.
inline IntegralRouting greedy_integral(const MatchingInstance& inst, const FractionalRouting& f, int cap) {
  std::vector<const FlowPath*> order;
  for (const FlowPath& p : f.paths) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const FlowPath* a, const FlowPath* b) { return a->value > b->value; });
  std::vector<std::int64_t> load(static_cast<std::size_t>(inst.graph().num_edges()), 0);
  std::vector<char> done(static_cast<std::size_t>(inst.num_demands()), 0);
  IntegralRouting r;
  for (const FlowPath* p : order) {
    if (done[static_cast<std::size_t>(p->demand)]) continue;
    bool fits = true;
    for (EdgeId e : p->edges) fits = fits && load[static_cast<std::size_t>(e)] < cap * inst.graph().edge(e).cap;
    if (!fits) continue;
    for (EdgeId e : p->edges) ++load[static_cast<std::size_t>(e)];
    done[static_cast<std::size_t>(p->demand)] = 1;
    r.paths.push_back({p->demand, p->edges});
  }
  return r;
}

/// Greedy integral routing of a moved instance, then at most one path per
/// pendant star so that it can be lifted.
inline IntegralRouting filter_and_greedy(const MoveResult& mv, int cap) {
  IntegralRouting r = greedy_integral(mv.instance, mv.routing, cap);
  return filter_one_path_per_star(mv.record, r, mv.instance.graph());
}

// Random through-v instances: a hub v joined to random spokes, demands
// between spoke nodes, flow on random simple paths through v scaled to fit.
struct ThroughV {
  MatchingInstance inst;
  FractionalRouting f;
  NodeId v = 0;
};

inline ThroughV through_v_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = 6 + static_cast<int>(rng() % 5);
  MultiGraph g(n);
  for (NodeId u = 1; u < n; ++u) g.add_edge(0, u, 1 + static_cast<int>(rng() % 2));
  for (int extra = 0; extra < n / 2; ++extra) {
    const NodeId a = 1 + static_cast<NodeId>(rng() % (n - 1));
    const NodeId b = 1 + static_cast<NodeId>(rng() % (n - 1));
    if (a != b) g.add_edge(a, b);
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  const int k = 2 + static_cast<int>(rng() % 3);
  while (static_cast<int>(pairs.size()) < k) {
    const NodeId a = 1 + static_cast<NodeId>(rng() % (n - 1));
    const NodeId b = 1 + static_cast<NodeId>(rng() % (n - 1));
    if (a != b) pairs.emplace_back(a, b);
  }
  ThroughV out{normalize_to_matching(g, pairs), {}, 0};
  const MultiGraph& gn = out.inst.graph();
  for (DemandId h = 0; h < out.inst.num_demands(); ++h) {
    auto paths = enumerate_simple_paths(gn, out.inst.demand(h).s, out.inst.demand(h).t, 1000);
    std::vector<std::vector<EdgeId>> through;
    for (auto& p : paths) {
      if (path_contains_node(gn, out.inst.demand(h).s, p, 0)) through.push_back(std::move(p));
    }
    std::shuffle(through.begin(), through.end(), rng);
    const std::size_t take = std::min<std::size_t>(through.size(), 1 + rng() % 3);
    for (std::size_t i = 0; i < take; ++i) {
      out.f.paths.push_back({h, through[i], make_rational(1, static_cast<std::int64_t>(take))});
    }
  }
  // Scale to feasibility by the exact maximum edge congestion.
  const auto loads = out.f.edge_loads(gn.num_edges());
  Rational worst = 1;
  for (const Edge& e : gn.edges()) {
    const Rational q = loads[static_cast<std::size_t>(e.id)] / e.cap;
    if (q > worst) worst = q;
  }
  for (FlowPath& p : out.f.paths) p.value /= worst;
  validate_fractional(out.f, out.inst);
  return out;
}

/// Degenerate star with a flush LP routing; movers are the terminals
/// attached outside the center bag, roots are the center bag's nodes.
struct StarCase {
  PreparedInstance prep;
  FractionalRouting flush;
  std::vector<NodeId> movers;
  std::vector<NodeId> roots;
};

inline StarCase star_case(std::uint64_t seed) {
  const int p = 1 + static_cast<int>(seed % 2);
  const GeneratedInstance gi = generate_degenerate_star(2 + static_cast<int>(seed % 3), p, 2 + static_cast<int>(seed % 4), seed);
  StarCase sc{prepare_instance(gi.raw, gi.decomposition), {}, {}, {}};
  const FractionalRouting f = solve_lp(sc.prep.instance, Rational(1, 20));
  sc.flush = flush_filter(f, sc.prep.decomposition, sc.prep.instance).routing;
  const auto& center = gi.decomposition.bags[0].nodes;
  sc.roots = center;
  const auto marg = marginals_of(sc.flush, sc.prep.instance);
  const MultiGraph& g = sc.prep.instance.graph();
  for (const auto& [t, x] : marg) {
    const NodeId a = g.edge(g.incident(t)[0]).other(t);
    if (!std::binary_search(center.begin(), center.end(), a)) sc.movers.push_back(t);
  }
  return sc;
}

}  // namespace medp::testing
