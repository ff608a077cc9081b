#pragma once

// Seeded instance generators: series-parallel graphs, partial k-trees and
// grids with crossing demands. The first two emit the decomposition they
// were built from.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "medp/decomposition.hpp"
#include "medp/errors.hpp"
#include "medp/graph.hpp"

namespace medp {

struct GeneratedInstance {
  RawInstance raw;
  TreeDecomposition decomposition;
};

namespace detail {

/// Deletes edges in random order whenever the graph stays connected, each
/// with probability `drop`.
inline MultiGraph thin_edges(const MultiGraph& g, double drop, std::mt19937_64& rng) {
  std::vector<char> keep(static_cast<std::size_t>(g.num_edges()), 1);
  std::vector<EdgeId> order(static_cast<std::size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) order[static_cast<std::size_t>(e)] = e;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(drop);
  auto build = [&] {
    MultiGraph out(g.num_nodes());
    for (const Edge& e : g.edges()) {
      if (keep[static_cast<std::size_t>(e.id)]) out.add_edge(e.u, e.v, e.cap);
    }
    return out;
  };
  for (EdgeId e : order) {
    if (!coin(rng)) continue;
    keep[static_cast<std::size_t>(e)] = 0;
    if (!is_connected(build())) keep[static_cast<std::size_t>(e)] = 1;
  }
  return build();
}

inline std::vector<std::pair<NodeId, NodeId>> random_pairs(int n, int count, std::mt19937_64& rng) {
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const NodeId a = pick(rng);
    const NodeId b = pick(rng);
    if (a != b) pairs.emplace_back(a, b);
  }
  return pairs;
}

/// Random k-tree on n nodes with its construction decomposition: a (k+1)-clique
/// root bag, then every new node joins a random k-subset of a random bag.
inline GeneratedInstance random_k_tree(int n, int k, double drop, int demands, std::mt19937_64& rng) {
  MultiGraph g(n);
  TreeDecomposition d;
  std::vector<NodeId> first;
  for (NodeId v = 0; v <= k; ++v) first.push_back(v);
  for (NodeId a = 0; a <= k; ++a) {
    for (NodeId b = a + 1; b <= k; ++b) g.add_edge(a, b, 1);
  }
  d.bags.push_back(Bag{first, false});
  for (NodeId v = k + 1; v < n; ++v) {
    std::uniform_int_distribution<int> bag_pick(0, d.num_bags() - 1);
    const int parent = bag_pick(rng);
    std::vector<NodeId> clique = d.bags[static_cast<std::size_t>(parent)].nodes;
    std::shuffle(clique.begin(), clique.end(), rng);
    clique.resize(static_cast<std::size_t>(k));
    for (NodeId u : clique) g.add_edge(u, v, 1);
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    d.bags.push_back(Bag{clique, false});
    d.tree_edges.emplace_back(parent, d.num_bags() - 1);
  }
  d.root = 0;
  d.k = d.p = k;
  GeneratedInstance out;
  out.raw.graph = thin_edges(g, drop, rng);
  out.raw.pairs = random_pairs(n, demands, rng);
  out.decomposition = std::move(d);
  return out;
}

}  // namespace detail

/// Series-parallel graph: a random 2-tree thinned by connectivity-preserving
/// deletions. Bags are the triangles {u, v, w} of the construction.
inline GeneratedInstance generate_series_parallel(int n, int demands, std::uint64_t seed) {
  if (n < 3) throw InvalidInput("series-parallel generator needs at least 3 nodes");
  if (demands < 0) throw InvalidInput("negative demand count");
  std::mt19937_64 rng(seed);
  return detail::random_k_tree(n, 2, 0.35, demands, rng);
}

/// Partial k-tree: a random k-tree thinned by connectivity-preserving deletions.
inline GeneratedInstance generate_partial_k_tree(int n, int k, int demands, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("partial k-tree generator needs k >= 1");
  if (n < k + 1) throw InvalidInput("partial k-tree generator needs at least k+1 nodes");
  if (demands < 0) throw InvalidInput("negative demand count");
  std::mt19937_64 rng(seed);
  return detail::random_k_tree(n, k, 0.35, demands, rng);
}

/// rows x cols grid; demand i joins the left end of row i to the bottom end
/// of column i. The decomposition comes from min-degree elimination.
inline GeneratedInstance generate_grid(int rows, int cols, int demands) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw InvalidInput("grid generator needs at least 2 nodes");
  if (demands < 0 || demands > std::min(rows, cols)) throw InvalidInput("grid generator needs demands <= min(rows, cols)");
  auto id = [cols](int r, int c) { return static_cast<NodeId>(r * cols + c); };
  GeneratedInstance out;
  out.raw.graph = MultiGraph(rows * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) out.raw.graph.add_edge(id(r, c), id(r, c + 1), 1);
      if (r + 1 < rows) out.raw.graph.add_edge(id(r, c), id(r + 1, c), 1);
    }
  }
  for (int i = 0; i < demands; ++i) out.raw.pairs.emplace_back(id(i, 0), id(rows - 1, i));
  out.decomposition = build_decomposition_heuristic(out.raw.graph, EliminationHeuristic::kMinDegree);
  return out;
}

/// Star of degenerate leaves: a center path on p+1 nodes, and per leaf a
/// random connected interior joined to a random separator of at most p
/// center nodes. The decomposition is the star itself.
inline GeneratedInstance generate_degenerate_star(int leaves, int p, int demands, std::uint64_t seed) {
  if (leaves < 1 || p < 1) throw InvalidInput("star generator needs leaves >= 1 and p >= 1");
  if (demands < 0) throw InvalidInput("negative demand count");
  std::mt19937_64 rng(seed);
  GeneratedInstance out;
  MultiGraph& g = out.raw.graph;
  TreeDecomposition& d = out.decomposition;
  std::vector<NodeId> center;
  for (int i = 0; i <= p; ++i) center.push_back(g.add_node());
  for (int i = 0; i < p; ++i) g.add_edge(center[static_cast<std::size_t>(i)], center[static_cast<std::size_t>(i) + 1], 1);
  d.bags.push_back(Bag{center, false});
  std::uniform_int_distribution<int> sep_size(1, p);
  std::uniform_int_distribution<int> interior_size(2, 4);
  std::uniform_int_distribution<int> cap(1, 2);
  for (int l = 0; l < leaves; ++l) {
    std::vector<NodeId> sep = center;
    std::shuffle(sep.begin(), sep.end(), rng);
    sep.resize(static_cast<std::size_t>(sep_size(rng)));
    std::vector<NodeId> inner;
    const int m = interior_size(rng);
    for (int i = 0; i < m; ++i) {
      const NodeId v = g.add_node();
      if (!inner.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
        g.add_edge(inner[pick(rng)], v, cap(rng));
      }
      inner.push_back(v);
    }
    for (NodeId s : sep) {
      std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
      g.add_edge(s, inner[pick(rng)], cap(rng));
    }
    // One extra chord for some non-tree structure.
    std::uniform_int_distribution<std::size_t> pick(0, inner.size() - 1);
    const NodeId a = inner[pick(rng)];
    const NodeId b = inner[pick(rng)];
    if (a != b) g.add_edge(a, b, 1);
    std::vector<NodeId> nodes = sep;
    nodes.insert(nodes.end(), inner.begin(), inner.end());
    std::sort(nodes.begin(), nodes.end());
    d.bags.push_back(Bag{nodes, true});
    d.tree_edges.emplace_back(0, d.num_bags() - 1);
  }
  d.root = 0;
  d.k = 0;
  d.p = p;
  out.raw.pairs = detail::random_pairs(g.num_nodes(), demands, rng);
  return out;
}

}  // namespace medp
