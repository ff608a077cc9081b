#pragma once

// Rooted tree decompositions with degenerate leaves ((k,p)-decompositions),
// validation, restriction to node subsets, contraction of width-k subtrees
// into degenerate leaves, and flushness filtering of fractional routings.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"

namespace medp {

struct Bag {
  std::vector<NodeId> nodes;  // sorted, distinct
  bool degenerate = false;
};

/// Bag ids are indices into `bags`; tree edge ids are indices into
/// `tree_edges`. Separators of tree edges not incident to a degenerate leaf
/// have size <= k, the others <= p.
struct TreeDecomposition {
  std::vector<Bag> bags;
  std::vector<std::pair<int, int>> tree_edges;
  int root = 0;
  int k = 0;
  int p = 0;

  int num_bags() const { return static_cast<int>(bags.size()); }

  /// (neighbour bag, tree edge id) per bag.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(bags.size());
    for (std::size_t i = 0; i < tree_edges.size(); ++i) {
      const auto [a, b] = tree_edges[i];
      adj.at(static_cast<std::size_t>(a)).emplace_back(b, static_cast<int>(i));
      adj.at(static_cast<std::size_t>(b)).emplace_back(a, static_cast<int>(i));
    }
    return adj;
  }

  std::vector<NodeId> separator(int tree_edge) const {
    const auto [a, b] = tree_edges.at(static_cast<std::size_t>(tree_edge));
    const auto& x = bags.at(static_cast<std::size_t>(a)).nodes;
    const auto& y = bags.at(static_cast<std::size_t>(b)).nodes;
    std::vector<NodeId> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
  }

  bool degenerate_incident(int tree_edge) const {
    const auto [a, b] = tree_edges.at(static_cast<std::size_t>(tree_edge));
    return bags.at(static_cast<std::size_t>(a)).degenerate || bags.at(static_cast<std::size_t>(b)).degenerate;
  }

  /// Parent bag and parent tree edge per bag (-1 at the root), plus a BFS
  /// order from the root. Throws if the tree is malformed.
  struct Rooting {
    std::vector<int> parent;
    std::vector<int> parent_edge;
    std::vector<int> order;
  };
  Rooting rooting() const {
    Rooting r;
    const int n = num_bags();
    if (n == 0) return r;
    if (root < 0 || root >= n) throw InvalidInput("decomposition root out of range");
    if (static_cast<int>(tree_edges.size()) != n - 1) throw InvalidInput("decomposition tree has wrong edge count");
    const auto adj = adjacency();
    r.parent.assign(static_cast<std::size_t>(n), -2);
    r.parent_edge.assign(static_cast<std::size_t>(n), -1);
    r.parent[static_cast<std::size_t>(root)] = -1;
    r.order.push_back(root);
    for (std::size_t i = 0; i < r.order.size(); ++i) {
      const int a = r.order[i];
      for (const auto& [b, e] : adj[static_cast<std::size_t>(a)]) {
        if (r.parent[static_cast<std::size_t>(b)] != -2) continue;
        r.parent[static_cast<std::size_t>(b)] = a;
        r.parent_edge[static_cast<std::size_t>(b)] = e;
        r.order.push_back(b);
      }
    }
    if (static_cast<int>(r.order.size()) != n) throw InvalidInput("decomposition tree is not connected");
    return r;
  }

  /// Separator between a bag and its parent; empty at the root.
  std::vector<NodeId> parent_separator(int bag, const Rooting& r) const {
    const int e = r.parent_edge.at(static_cast<std::size_t>(bag));
    return e < 0 ? std::vector<NodeId>{} : separator(e);
  }

  std::vector<NodeId> covered_nodes() const {
    std::set<NodeId> all;
    for (const Bag& b : bags) all.insert(b.nodes.begin(), b.nodes.end());
    return {all.begin(), all.end()};
  }
};

inline void normalize_bag(Bag& b) {
  std::sort(b.nodes.begin(), b.nodes.end());
  b.nodes.erase(std::unique(b.nodes.begin(), b.nodes.end()), b.nodes.end());
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string property;
  std::string detail;
  std::vector<int> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  int max_separator = 0;
  int max_bag = 0;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& property) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.property == property; });
  }
};

/// Graph G[[X]]: G[X] plus a clique on every separator of X, relabelled to
/// 0..|X|-1 in bag order.
inline MultiGraph augmented_bag_graph(const TreeDecomposition& d, int bag, const MultiGraph& g) {
  const auto& nodes = d.bags.at(static_cast<std::size_t>(bag)).nodes;
  std::map<NodeId, int> local;
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
  MultiGraph out(static_cast<int>(nodes.size()));
  std::set<std::pair<int, int>> present;
  for (const Edge& e : g.edges()) {
    auto a = local.find(e.u);
    auto b = local.find(e.v);
    if (a == local.end() || b == local.end()) continue;
    out.add_edge(a->second, b->second, e.cap);
    present.insert(std::minmax(a->second, b->second));
  }
  const auto adj = d.adjacency();
  for (const auto& [nb, te] : adj[static_cast<std::size_t>(bag)]) {
    (void)nb;
    const auto sep = d.separator(te);
    for (std::size_t i = 0; i < sep.size(); ++i) {
      for (std::size_t j = i + 1; j < sep.size(); ++j) {
        const auto key = std::minmax(local[sep[i]], local[sep[j]]);
        if (present.insert(key).second) out.add_edge(key.first, key.second, 1);
      }
    }
  }
  return out;
}

using ClassCheck = std::function<bool(const MultiGraph&)>;

/// Checks the decomposition properties and width bounds; never throws on an
/// invalid decomposition, every failure is reported with a witness.
inline ValidationReport validate(const TreeDecomposition& d, const MultiGraph& g,
                                 const ClassCheck& class_check = {}) {
  ValidationReport rep;
  auto fail = [&](std::string prop, std::string detail, std::vector<int> witness) {
    rep.violations.push_back({std::move(prop), std::move(detail), std::move(witness)});
  };
  const int nb = d.num_bags();
  if (nb == 0) {
    if (g.num_nodes() > 0) fail("structure", "no bags", {});
    return rep;
  }
  for (int b = 0; b < nb; ++b) {
    const auto& nodes = d.bags[static_cast<std::size_t>(b)].nodes;
    rep.max_bag = std::max(rep.max_bag, static_cast<int>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!g.has_node(nodes[i])) fail("structure", "bag holds unknown node", {b, nodes[i]});
      if (i > 0 && nodes[i - 1] >= nodes[i]) fail("structure", "bag not sorted/distinct", {b});
    }
  }
  for (std::size_t i = 0; i < d.tree_edges.size(); ++i) {
    const auto [a, b] = d.tree_edges[i];
    if (a < 0 || b < 0 || a >= nb || b >= nb || a == b) {
      fail("structure", "tree edge references invalid bag", {static_cast<int>(i)});
      return rep;
    }
  }
  TreeDecomposition::Rooting rooting;
  try {
    rooting = d.rooting();
  } catch (const InvalidInput& e) {
    fail("structure", e.what(), {d.root});
    return rep;
  }
  if (!rep.ok()) return rep;
  const auto adj = d.adjacency();

  // (i) occurrence connectivity
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(g.num_nodes()));
  for (int b = 0; b < nb; ++b) {
    for (NodeId v : d.bags[static_cast<std::size_t>(b)].nodes) holders[static_cast<std::size_t>(v)].push_back(b);
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto& hs = holders[static_cast<std::size_t>(v)];
    if (hs.empty()) {
      fail("occurrence", "node in no bag", {v});
      continue;
    }
    // Bags holding v form a subtree iff exactly one of them has its parent
    // outside the set.
    int tops = 0;
    for (int b : hs) {
      const int par = rooting.parent[static_cast<std::size_t>(b)];
      if (par < 0 || !std::binary_search(d.bags[static_cast<std::size_t>(par)].nodes.begin(),
                                         d.bags[static_cast<std::size_t>(par)].nodes.end(), v)) {
        ++tops;
      }
    }
    if (tops != 1) fail("occurrence", "bags holding node do not form a subtree", {v});
  }

  // (ii) edge coverage
  for (const Edge& e : g.edges()) {
    bool covered = false;
    for (int b : holders[static_cast<std::size_t>(e.u)]) {
      const auto& nodes = d.bags[static_cast<std::size_t>(b)].nodes;
      if (std::binary_search(nodes.begin(), nodes.end(), e.v)) {
        covered = true;
        break;
      }
    }
    if (!covered) fail("coverage", "edge in no bag", {e.id, e.u, e.v});
  }

  // widths and degenerate flags
  if (d.k > d.p) fail("width", "k exceeds p", {d.k, d.p});
  for (int te = 0; te < static_cast<int>(d.tree_edges.size()); ++te) {
    const int s = static_cast<int>(d.separator(te).size());
    rep.max_separator = std::max(rep.max_separator, s);
    const int bound = d.degenerate_incident(te) ? d.p : d.k;
    if (s > bound) fail("width", "separator larger than its bound", {te, s, bound});
  }
  for (int b = 0; b < nb; ++b) {
    if (d.bags[static_cast<std::size_t>(b)].degenerate && adj[static_cast<std::size_t>(b)].size() > 1) {
      fail("degenerate", "degenerate flag on a non-leaf bag", {b});
    }
  }

  // (iii) class membership of augmented bag graphs
  if (class_check) {
    for (int b = 0; b < nb; ++b) {
      if (d.bags[static_cast<std::size_t>(b)].degenerate) continue;
      if (!class_check(augmented_bag_graph(d, b, g))) fail("class", "augmented bag graph outside class", {b});
    }
  }
  return rep;
}

/// Class check for "graphs with at most q nodes".
inline ClassCheck at_most_nodes(int q) {
  return [q](const MultiGraph& g) { return g.num_nodes() <= q; };
}

// ---------------------------------------------------------------------------
// Restriction

/// Intersects bags with U, drops empty bags and reconnects each surviving bag
/// to its nearest surviving ancestor. Degenerate flags are inherited. Node
/// ids are unchanged and surviving bags keep their relative order.
inline TreeDecomposition restrict_to(const TreeDecomposition& d, const MultiGraph& g, std::span<const NodeId> nodes) {
  if (induced_components(g, nodes).size() != 1) {
    throw InvalidInput("restrict: induced subgraph is not connected");
  }
  std::set<NodeId> keep(nodes.begin(), nodes.end());
  const auto rooting = d.rooting();
  std::vector<int> new_id(static_cast<std::size_t>(d.num_bags()), -1);
  TreeDecomposition out;
  out.k = d.k;
  out.p = d.p;
  for (int b = 0; b < d.num_bags(); ++b) {
    Bag nb;
    nb.degenerate = d.bags[static_cast<std::size_t>(b)].degenerate;
    for (NodeId v : d.bags[static_cast<std::size_t>(b)].nodes) {
      if (keep.count(v)) nb.nodes.push_back(v);
    }
    if (nb.nodes.empty()) continue;
    new_id[static_cast<std::size_t>(b)] = out.num_bags();
    out.bags.push_back(std::move(nb));
  }
  std::vector<int> forest_roots;
  for (int b : rooting.order) {
    const int id = new_id[static_cast<std::size_t>(b)];
    if (id < 0) continue;
    int anc = rooting.parent[static_cast<std::size_t>(b)];
    while (anc >= 0 && new_id[static_cast<std::size_t>(anc)] < 0) anc = rooting.parent[static_cast<std::size_t>(anc)];
    if (anc < 0) {
      forest_roots.push_back(id);
    } else {
      out.tree_edges.emplace_back(new_id[static_cast<std::size_t>(anc)], id);
    }
  }
  int root = forest_roots.front();
  for (int b : rooting.order) {
    const int id = new_id[static_cast<std::size_t>(b)];
    if (id >= 0 && !out.bags[static_cast<std::size_t>(id)].degenerate) {
      root = id;
      break;
    }
  }
  for (int fr : forest_roots) {
    if (fr != root && !(out.tree_edges.empty() && forest_roots.size() == 1)) {
      // Separate surviving subtrees share no nodes; join them at the root.
      bool same_tree = false;
      if (forest_roots.size() == 1) same_tree = true;
      if (!same_tree) out.tree_edges.emplace_back(root, fr);
    }
  }
  out.root = root;
  const auto adj = out.adjacency();
  for (int b = 0; b < out.num_bags(); ++b) {
    if (out.bags[static_cast<std::size_t>(b)].degenerate && adj[static_cast<std::size_t>(b)].size() > 1) {
      throw InvariantViolation("restrict: degenerate bag became internal");
    }
  }
  return out;
}

/// Maps bag contents through `node_map` (old id -> new id, -1 drops the
/// node). Bags left empty are removed as in restrict_to.
inline TreeDecomposition relabel(const TreeDecomposition& d, std::span<const NodeId> node_map) {
  TreeDecomposition out = d;
  for (Bag& b : out.bags) {
    std::vector<NodeId> mapped;
    for (NodeId v : b.nodes) {
      const NodeId m = node_map[static_cast<std::size_t>(v)];
      if (m >= 0) mapped.push_back(m);
    }
    b.nodes = std::move(mapped);
    normalize_bag(b);
  }
  for (const Bag& b : out.bags) {
    if (b.nodes.empty()) throw InvalidInput("relabel: bag left empty; restrict first");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction into degenerate leaves

struct NewLeaf {
  int bag = -1;                 // bag id in the contracted decomposition
  std::vector<NodeId> separator;  // S_L, size k
  std::vector<NodeId> nodes;      // union of the contracted bags
};

struct Contraction {
  TreeDecomposition decomposition;
  std::vector<NewLeaf> leaves;
};

/// Contracts every maximal subtree hanging below a separator of size exactly
/// k (on a tree edge not incident to a degenerate leaf) into one degenerate
/// leaf. The result is a (k-1, p)-decomposition.
inline Contraction contract_to_degenerate(const TreeDecomposition& d, int k) {
  if (k <= 0) throw InvalidInput("contract_to_degenerate: k must be positive");
  const auto rooting = d.rooting();
  const int nb = d.num_bags();
  // owner[b] = top bag of the contracted subtree containing b, or -1.
  std::vector<int> owner(static_cast<std::size_t>(nb), -1);
  for (int b : rooting.order) {
    const int par = rooting.parent[static_cast<std::size_t>(b)];
    if (par < 0) continue;
    if (owner[static_cast<std::size_t>(par)] >= 0) {
      owner[static_cast<std::size_t>(b)] = owner[static_cast<std::size_t>(par)];
      continue;
    }
    const int te = rooting.parent_edge[static_cast<std::size_t>(b)];
    if (!d.degenerate_incident(te) && static_cast<int>(d.separator(te).size()) == k) {
      owner[static_cast<std::size_t>(b)] = b;
    }
  }
  Contraction out;
  out.decomposition.k = k - 1;
  out.decomposition.p = d.p;
  std::vector<int> new_id(static_cast<std::size_t>(nb), -1);
  for (int b = 0; b < nb; ++b) {
    const int o = owner[static_cast<std::size_t>(b)];
    if (o >= 0 && o != b) continue;
    new_id[static_cast<std::size_t>(b)] = out.decomposition.num_bags();
    out.decomposition.bags.push_back(d.bags[static_cast<std::size_t>(b)]);
    if (o == b) out.decomposition.bags.back().degenerate = true;
  }
  for (int b = 0; b < nb; ++b) {
    const int o = owner[static_cast<std::size_t>(b)];
    if (o >= 0 && o != b) {
      Bag& target = out.decomposition.bags[static_cast<std::size_t>(new_id[static_cast<std::size_t>(o)])];
      target.nodes.insert(target.nodes.end(), d.bags[static_cast<std::size_t>(b)].nodes.begin(),
                          d.bags[static_cast<std::size_t>(b)].nodes.end());
    }
  }
  for (Bag& b : out.decomposition.bags) normalize_bag(b);
  for (int b = 0; b < nb; ++b) {
    const int par = rooting.parent[static_cast<std::size_t>(b)];
    if (par < 0 || new_id[static_cast<std::size_t>(b)] < 0) continue;
    out.decomposition.tree_edges.emplace_back(new_id[static_cast<std::size_t>(par)], new_id[static_cast<std::size_t>(b)]);
  }
  out.decomposition.root = new_id[static_cast<std::size_t>(d.root)];
  for (int b = 0; b < nb; ++b) {
    if (owner[static_cast<std::size_t>(b)] != b) continue;
    NewLeaf leaf;
    leaf.bag = new_id[static_cast<std::size_t>(b)];
    leaf.separator = d.separator(rooting.parent_edge[static_cast<std::size_t>(b)]);
    leaf.nodes = out.decomposition.bags[static_cast<std::size_t>(leaf.bag)].nodes;
    out.leaves.push_back(std::move(leaf));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flushness

struct FlushResult {
  FractionalRouting routing;
  Rational dropped;
};

/// True when path `p` is flush: every degenerate leaf containing one of its
/// endpoints has its separator met by the path.
inline bool is_flush_path(const FlowPath& p, const TreeDecomposition& d, const TreeDecomposition::Rooting& r,
                          const MatchingInstance& inst) {
  const MultiGraph& g = inst.graph();
  const Demand& dem = inst.demand(p.demand);
  const auto nodes = walk_nodes(g, dem.s, p.edges);
  std::set<NodeId> on(nodes.begin(), nodes.end());
  for (int b = 0; b < d.num_bags(); ++b) {
    const Bag& bag = d.bags[static_cast<std::size_t>(b)];
    if (!bag.degenerate) continue;
    const bool ends_inside = std::binary_search(bag.nodes.begin(), bag.nodes.end(), dem.s) ||
                             std::binary_search(bag.nodes.begin(), bag.nodes.end(), dem.t);
    if (!ends_inside) continue;
    const auto sep = d.parent_separator(b, r);
    if (std::none_of(sep.begin(), sep.end(), [&](NodeId v) { return on.count(v) > 0; })) return false;
  }
  return true;
}

/// Removes exactly the flow paths that end inside a degenerate leaf without
/// meeting its separator.
inline FlushResult flush_filter(const FractionalRouting& routing, const TreeDecomposition& d,
                                const MatchingInstance& inst) {
  const auto r = d.rooting();
  FlushResult out;
  out.dropped = 0;
  for (const FlowPath& p : routing.paths) {
    if (is_flush_path(p, d, r, inst)) {
      out.routing.paths.push_back(p);
    } else {
      out.dropped += p.value;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shapes

enum class Shape { kSingleGraph, kDegeneratePair, kDegenerateStar, kHasWidthKEdge, kGeneral };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::kSingleGraph: return "single-graph";
    case Shape::kDegeneratePair: return "degenerate-pair";
    case Shape::kDegenerateStar: return "degenerate-star";
    case Shape::kHasWidthKEdge: return "has-width-k-edge";
    case Shape::kGeneral: return "general";
  }
  return "?";
}

struct ShapeReport {
  Shape shape = Shape::kGeneral;
  std::vector<int> bags;  // witness bags (center first for stars)
  int tree_edge = -1;     // witness for has-width-k-edge
};

inline ShapeReport classify_shape(const TreeDecomposition& d) {
  ShapeReport rep;
  const int nb = d.num_bags();
  if (nb == 1) {
    rep.shape = Shape::kSingleGraph;
    rep.bags = {0};
    return rep;
  }
  if (nb == 2 && d.bags[0].degenerate && d.bags[1].degenerate) {
    rep.shape = Shape::kDegeneratePair;
    rep.bags = {0, 1};
    rep.tree_edge = 0;
    return rep;
  }
  const auto adj = d.adjacency();
  for (int c = 0; c < nb; ++c) {
    if (d.bags[static_cast<std::size_t>(c)].degenerate) continue;
    if (static_cast<int>(adj[static_cast<std::size_t>(c)].size()) != nb - 1) continue;
    bool all_degenerate = true;
    for (int b = 0; b < nb; ++b) {
      if (b != c && !d.bags[static_cast<std::size_t>(b)].degenerate) all_degenerate = false;
    }
    if (!all_degenerate) continue;
    rep.shape = Shape::kDegenerateStar;
    rep.bags.push_back(c);
    for (int b = 0; b < nb; ++b) {
      if (b != c) rep.bags.push_back(b);
    }
    return rep;
  }
  if (d.k > 0) {
    for (int te = 0; te < static_cast<int>(d.tree_edges.size()); ++te) {
      if (!d.degenerate_incident(te) && static_cast<int>(d.separator(te).size()) == d.k) {
        rep.shape = Shape::kHasWidthKEdge;
        rep.tree_edge = te;
        rep.bags = {d.tree_edges[static_cast<std::size_t>(te)].first, d.tree_edges[static_cast<std::size_t>(te)].second};
        return rep;
      }
    }
  }
  rep.shape = Shape::kGeneral;
  return rep;
}

// ---------------------------------------------------------------------------
// Heuristic construction

enum class EliminationHeuristic { kMinDegree, kMinFill };

/// Elimination-order decomposition of a connected graph. Always valid, width
/// not guaranteed minimal, no degenerate leaves. k = p = max bag size - 1.
inline TreeDecomposition build_decomposition_heuristic(const MultiGraph& g,
                                                       EliminationHeuristic mode = EliminationHeuristic::kMinDegree) {
  const int n = g.num_nodes();
  TreeDecomposition d;
  if (n == 0) return d;
  std::vector<std::set<NodeId>> nbr(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    nbr[static_cast<std::size_t>(e.u)].insert(e.v);
    nbr[static_cast<std::size_t>(e.v)].insert(e.u);
  }
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<int> order_pos(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> order;
  std::vector<std::vector<NodeId>> bag_of(static_cast<std::size_t>(n));
  auto fill_in = [&](NodeId v) {
    const auto& nb = nbr[static_cast<std::size_t>(v)];
    int missing = 0;
    for (auto a = nb.begin(); a != nb.end(); ++a) {
      for (auto b = std::next(a); b != nb.end(); ++b) missing += !nbr[static_cast<std::size_t>(*a)].count(*b);
    }
    return missing;
  };
  for (int step = 0; step < n; ++step) {
    NodeId best = -1;
    long best_score = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      const long score = mode == EliminationHeuristic::kMinDegree
                             ? static_cast<long>(nbr[static_cast<std::size_t>(v)].size())
                             : static_cast<long>(fill_in(v)) * (n + 1) + static_cast<long>(nbr[static_cast<std::size_t>(v)].size());
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    const auto nb = nbr[static_cast<std::size_t>(best)];
    std::vector<NodeId> bag(nb.begin(), nb.end());
    bag.push_back(best);
    std::sort(bag.begin(), bag.end());
    bag_of[static_cast<std::size_t>(best)] = bag;
    for (NodeId a : nb) {
      for (NodeId b : nb) {
        if (a != b) nbr[static_cast<std::size_t>(a)].insert(b);
      }
      nbr[static_cast<std::size_t>(a)].erase(best);
    }
    gone[static_cast<std::size_t>(best)] = 1;
    order_pos[static_cast<std::size_t>(best)] = step;
    order.push_back(best);
  }
  for (int i = 0; i < n; ++i) d.bags.push_back(Bag{bag_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])], false});
  for (int i = 0; i < n; ++i) {
    const NodeId v = order[static_cast<std::size_t>(i)];
    int parent = -1;
    for (NodeId w : bag_of[static_cast<std::size_t>(v)]) {
      if (w == v) continue;
      const int pos = order_pos[static_cast<std::size_t>(w)];
      if (parent < 0 || pos < parent) parent = pos;
    }
    if (parent < 0 && i != n - 1) parent = n - 1;  // other components hang off the root
    if (parent >= 0) d.tree_edges.emplace_back(parent, i);
  }
  d.root = n - 1;
  int width = 0;
  for (const Bag& b : d.bags) width = std::max(width, static_cast<int>(b.nodes.size()) - 1);
  d.k = d.p = width;
  return d;
}

/// Extends a decomposition of a raw graph to its normalized instance. Every
/// appended leaf node joins the first bag holding its attachment if that bag
/// is degenerate; otherwise it gets a degenerate leaf bag {attachment, leaf}
/// below that bag.
inline TreeDecomposition attach_leaf_bags(const TreeDecomposition& d, const MultiGraph& normalized, int raw_nodes) {
  TreeDecomposition out = d;
  for (NodeId leaf = raw_nodes; leaf < normalized.num_nodes(); ++leaf) {
    if (normalized.degree(leaf) != 1) throw InvalidInput("attach_leaf_bags: appended node is not a leaf");
    const NodeId a = normalized.edge(normalized.incident(leaf)[0]).other(leaf);
    int holder = -1;
    for (int b = 0; b < d.num_bags(); ++b) {
      if (std::binary_search(d.bags[static_cast<std::size_t>(b)].nodes.begin(),
                             d.bags[static_cast<std::size_t>(b)].nodes.end(), a)) {
        holder = b;
        break;
      }
    }
    if (holder < 0) throw InvalidInput("attach_leaf_bags: attachment node in no bag");
    Bag& h = out.bags[static_cast<std::size_t>(holder)];
    if (h.degenerate) {
      h.nodes.insert(std::upper_bound(h.nodes.begin(), h.nodes.end(), leaf), leaf);
      continue;
    }
    out.bags.push_back(Bag{{std::min(a, leaf), std::max(a, leaf)}, true});
    out.tree_edges.emplace_back(holder, out.num_bags() - 1);
  }
  out.p = std::max({out.p, out.k, 1});
  return out;
}

}  // namespace medp
