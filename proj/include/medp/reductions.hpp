#pragma once

// Terminal moving via clustering, and integer sparsifiers built by
// Eulerianization plus splitting-off, each with its lift-back transform.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "medp/errors.hpp"
#include "medp/flow.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"

namespace medp {

/// Unique path between `a` and `b` using only `tree_edges`. Throws if the
/// edges do not connect them.
inline std::vector<EdgeId> tree_path(const MultiGraph& g, std::span<const EdgeId> tree_edges, NodeId a, NodeId b) {
  if (a == b) return {};
  std::map<NodeId, std::vector<EdgeId>> adj;
  for (EdgeId e : tree_edges) {
    adj[g.edge(e).u].push_back(e);
    adj[g.edge(e).v].push_back(e);
  }
  std::map<NodeId, EdgeId> via{{a, -1}};
  std::vector<NodeId> queue{a};
  for (std::size_t i = 0; i < queue.size() && !via.count(b); ++i) {
    const NodeId x = queue[i];
    for (EdgeId e : adj[x]) {
      const NodeId y = g.edge(e).other(x);
      if (via.emplace(y, e).second) queue.push_back(y);
    }
  }
  if (!via.count(b)) throw InvariantViolation("tree_path: nodes not connected in tree");
  std::vector<EdgeId> path;
  for (NodeId x = b; x != a;) {
    const EdgeId e = via[x];
    path.push_back(e);
    x = g.edge(e).other(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Clustering

struct Cluster {
  int id = -1;
  std::vector<NodeId> terminals;  // S_i
  std::vector<EdgeId> tree_edges;  // T_i
  Rational weight;                 // x(S_i)
  NodeId top = -1;                 // highest node of T_i in the BFS forest
  NodeId root = -1;                // R node of the BFS tree holding T_i
  bool holds_root = false;         // T_i contains `root`; its exit path is trivial
  NodeId anchor = -1;              // s_i, where the exit path starts
  NodeId exit_end = -1;            // r_i in R
  std::vector<EdgeId> exit_path;   // P_i from anchor to exit_end
};

namespace detail {

struct BfsForest {
  std::vector<EdgeId> parent_edge;
  std::vector<NodeId> parent;
  std::vector<int> depth;
  std::vector<NodeId> root;
};

inline BfsForest bfs_forest(const MultiGraph& g, std::span<const NodeId> sources) {
  const std::size_t n = static_cast<std::size_t>(g.num_nodes());
  BfsForest f{std::vector<EdgeId>(n, -1), std::vector<NodeId>(n, -1), std::vector<int>(n, -1),
              std::vector<NodeId>(n, -1)};
  std::vector<NodeId> order(sources.begin(), sources.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (NodeId r : order) {
    f.depth[static_cast<std::size_t>(r)] = 0;
    f.root[static_cast<std::size_t>(r)] = r;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeId x = order[i];
    for (EdgeId e : g.incident(x)) {
      const NodeId y = g.edge(e).other(x);
      if (f.depth[static_cast<std::size_t>(y)] >= 0) continue;
      f.depth[static_cast<std::size_t>(y)] = f.depth[static_cast<std::size_t>(x)] + 1;
      f.parent[static_cast<std::size_t>(y)] = x;
      f.parent_edge[static_cast<std::size_t>(y)] = e;
      f.root[static_cast<std::size_t>(y)] = f.root[static_cast<std::size_t>(x)];
      order.push_back(y);
    }
  }
  return f;
}

}  // namespace detail

/// Partitions the positively weighted nodes of S into clusters with
/// 1 <= x(S_i) <= 2 (the cluster holding a tree root may weigh less) and
/// edge-disjoint spanning subtrees, using the deepest-subtree scheme on a
/// BFS forest grown from R. Exit paths are not filled in.
inline std::vector<Cluster> cluster_terminals(const MultiGraph& g, std::span<const NodeId> terminals,
                                              std::span<const NodeId> roots,
                                              const std::map<NodeId, Rational>& marginals) {
  std::vector<Cluster> clusters;
  if (terminals.empty()) return clusters;
  if (roots.empty()) throw InvalidInput("cluster_terminals: empty root set");
  const auto forest = detail::bfs_forest(g, roots);
  const std::size_t n = static_cast<std::size_t>(g.num_nodes());
  std::set<NodeId> root_set(roots.begin(), roots.end());
  std::vector<Rational> weight(n);
  std::vector<char> is_member(n, 0);
  for (NodeId s : terminals) {
    if (root_set.count(s)) continue;
    auto it = marginals.find(s);
    if (it == marginals.end() || it->second <= 0) continue;
    if (forest.depth[static_cast<std::size_t>(s)] < 0) {
      throw InvalidInput("cluster_terminals: terminal " + std::to_string(s) + " cannot reach the root set");
    }
    weight[static_cast<std::size_t>(s)] = it->second;
    is_member[static_cast<std::size_t>(s)] = 1;
  }
  // Children lists over tree edges that are still active.
  std::vector<char> active(n, 0);  // active[v]: the edge v-parent(v) is still present
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
    if (forest.parent[static_cast<std::size_t>(v)] >= 0) {
      active[static_cast<std::size_t>(v)] = 1;
      children[static_cast<std::size_t>(forest.parent[static_cast<std::size_t>(v)])].push_back(v);
    }
  }
  for (auto& c : children) std::sort(c.begin(), c.end());

  auto collect = [&](NodeId top, std::vector<NodeId>& nodes) {
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      nodes.push_back(x);
      for (NodeId c : children[static_cast<std::size_t>(x)]) {
        if (active[static_cast<std::size_t>(c)]) stack.push_back(c);
      }
    }
  };

  std::vector<NodeId> sorted_roots(root_set.begin(), root_set.end());
  for (NodeId r : sorted_roots) {
    while (true) {
      std::vector<NodeId> comp;
      collect(r, comp);
      // Subtree weights, children before parents (reverse BFS depth).
      std::sort(comp.begin(), comp.end(), [&](NodeId a, NodeId b) {
        const int da = forest.depth[static_cast<std::size_t>(a)];
        const int db = forest.depth[static_cast<std::size_t>(b)];
        return da != db ? da > db : a < b;
      });
      std::map<NodeId, Rational> sub;
      for (NodeId x : comp) {
        Rational s = weight[static_cast<std::size_t>(x)];
        for (NodeId c : children[static_cast<std::size_t>(x)]) {
          if (active[static_cast<std::size_t>(c)]) s += sub[c];
        }
        sub[x] = s;
      }
      const Rational total = sub[r];
      if (total == 0) break;
      auto make_cluster = [&](NodeId top, const std::vector<NodeId>& member_tops, bool include_top) {
        Cluster c;
        c.id = static_cast<int>(clusters.size());
        c.top = top;
        c.root = r;
        c.weight = 0;
        std::vector<NodeId> nodes;
        if (include_top) {
          collect(top, nodes);
        } else {
          nodes.push_back(top);
          for (NodeId t : member_tops) collect(t, nodes);
        }
        for (NodeId x : nodes) {
          if (x != top || include_top) {
            if (is_member[static_cast<std::size_t>(x)] && weight[static_cast<std::size_t>(x)] > 0) {
              c.terminals.push_back(x);
              c.weight += weight[static_cast<std::size_t>(x)];
              weight[static_cast<std::size_t>(x)] = 0;
            }
          }
          if (x != top) {
            c.tree_edges.push_back(forest.parent_edge[static_cast<std::size_t>(x)]);
            c.holds_root = c.holds_root || x == r;
          }
        }
        c.holds_root = c.holds_root || top == r;
        for (NodeId x : nodes) {
          if (x != top) active[static_cast<std::size_t>(x)] = 0;
        }
        std::sort(c.terminals.begin(), c.terminals.end());
        std::sort(c.tree_edges.begin(), c.tree_edges.end());
        clusters.push_back(std::move(c));
      };
      if (total <= 2) {
        make_cluster(r, {}, true);
        break;
      }
      NodeId v = -1;
      for (NodeId x : comp) {  // deepest first, then lowest id
        if (sub[x] >= 1) {
          v = x;
          break;
        }
      }
      Rational child_sum = 0;
      std::vector<NodeId> live_children;
      for (NodeId c : children[static_cast<std::size_t>(v)]) {
        if (!active[static_cast<std::size_t>(c)]) continue;
        live_children.push_back(c);
        child_sum += sub[c];
      }
      if (child_sum < 1) {
        make_cluster(v, {}, true);
      } else {
        std::vector<NodeId> prefix;
        Rational acc = 0;
        for (NodeId c : live_children) {
          prefix.push_back(c);
          acc += sub[c];
          if (acc >= 1) break;
        }
        make_cluster(v, prefix, false);
      }
    }
  }
  return clusters;
}

/// Fills in pairwise edge-disjoint exit paths P_i from each cluster to R by
/// an integral max-flow (one unit per cluster). Clusters whose subtree holds
/// their BFS root get the trivial path at that root.
inline void cluster_paths(const MultiGraph& g, std::vector<Cluster>& clusters, std::span<const NodeId> roots) {
  const int n = g.num_nodes();
  std::vector<std::size_t> needy;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    Cluster& c = clusters[i];
    c.exit_path.clear();
    if (c.holds_root) {
      c.anchor = c.root;
      c.exit_end = c.root;
    } else {
      needy.push_back(i);
    }
  }
  if (needy.empty()) return;
  const int src = n + static_cast<int>(needy.size());
  const int snk = src + 1;
  detail::Dinic dinic(snk + 1);
  std::vector<int> edge_arc;
  std::int64_t big = 1;
  for (const Edge& e : g.edges()) {
    edge_arc.push_back(dinic.add_arc(e.u, e.v, e.cap, e.cap));
    big += e.cap;
  }
  std::vector<std::vector<std::pair<NodeId, int>>> term_arcs(needy.size());
  for (std::size_t j = 0; j < needy.size(); ++j) {
    const int cnode = n + static_cast<int>(j);
    dinic.add_arc(src, cnode, 1);
    for (NodeId s : clusters[needy[j]].terminals) term_arcs[j].emplace_back(s, dinic.add_arc(cnode, s, 1));
  }
  std::set<NodeId> root_set(roots.begin(), roots.end());
  for (NodeId r : root_set) dinic.add_arc(r, snk, big);
  const std::int64_t value = dinic.run(src, snk);
  if (value != static_cast<std::int64_t>(needy.size())) {
    throw InvariantViolation("cluster_paths: only " + std::to_string(value) + " of " + std::to_string(needy.size()) +
                             " clusters reach the root set");
  }
  std::vector<std::pair<NodeId, Rational>> sources;
  std::map<NodeId, std::size_t> owner;
  for (std::size_t j = 0; j < needy.size(); ++j) {
    for (const auto& [s, arc] : term_arcs[j]) {
      if (dinic.flow(arc) == 1) {
        sources.emplace_back(s, Rational(1));
        owner[s] = needy[j];
      }
    }
  }
  const FlowNetwork net = FlowNetwork::make(g, sources, {root_set.begin(), root_set.end()});
  MaxFlowResult mf;
  mf.value = value;
  for (int arc : edge_arc) mf.edge_flow.push_back(dinic.flow(arc));
  mf.source_flow.assign(sources.size(), 1);
  for (FlowPiece& piece : decompose_flow(mf, net)) {
    Cluster& c = clusters[owner.at(piece.start)];
    c.anchor = piece.start;
    c.exit_end = walk_end(g, piece.start, piece.edges);
    c.exit_path = std::move(piece.edges);
  }
}

// ---------------------------------------------------------------------------
// Moving terminals

/// Everything needed to map routings between the original instance and the
/// instance with terminals hung off pendant stars.
struct TransformRecord {
  std::vector<Cluster> clusters;
  int base_nodes = 0;  // nodes and edges below these ids are the original ones
  int base_edges = 0;
  std::vector<NodeId> star_center;  // u_i per cluster
  std::vector<EdgeId> star_edge;    // r_i u_i per cluster
  std::map<NodeId, NodeId> moved;   // original terminal -> its new leaf
  std::map<NodeId, NodeId> origin;  // new leaf -> original terminal
  std::map<NodeId, int> cluster_of;  // original terminal -> cluster index
  std::map<EdgeId, NodeId> leaf_edge;  // new leaf edge -> new leaf
};

struct MoveResult {
  MatchingInstance instance;
  FractionalRouting routing;
  TransformRecord record;
};

using MoveOutcome = std::variant<MoveResult, CutCertificate>;

/// Moves the positively routed terminals of S to pendant stars next to R.
/// The returned routing is the extended flow scaled by exactly 1/5, so its
/// value is val(routing)/5 and it is feasible in the new graph.
inline MoveOutcome move_terminals(const MatchingInstance& inst, const FractionalRouting& routing,
                                  std::span<const NodeId> S, std::span<const NodeId> R) {
  const MultiGraph& g = inst.graph();
  const auto marg = marginals_of(routing, inst);
  std::set<NodeId> root_set(R.begin(), R.end());
  std::vector<NodeId> movers;
  std::map<NodeId, Rational> supplies;
  for (NodeId s : S) {
    if (!inst.is_terminal(s)) throw InvalidInput("move_terminals: node " + std::to_string(s) + " is not a terminal");
    auto it = marg.find(s);
    if (it == marg.end() || root_set.count(s)) continue;
    movers.push_back(s);
    supplies[s] = it->second;
  }
  std::sort(movers.begin(), movers.end());
  movers.erase(std::unique(movers.begin(), movers.end()), movers.end());

  TransformRecord rec;
  rec.base_nodes = g.num_nodes();
  rec.base_edges = g.num_edges();
  if (movers.empty()) {
    return MoveResult{inst, routing, rec};
  }
  if (R.empty()) throw InvalidInput("move_terminals: empty target set");
  const SupplyOutcome check = route_supplies_or_cut(g, supplies, R, Rational(1));
  if (auto* cut = std::get_if<CutCertificate>(&check)) return *cut;

  rec.clusters = cluster_terminals(g, movers, R, marg);
  cluster_paths(g, rec.clusters, R);

  MultiGraph g2 = g;
  for (std::size_t i = 0; i < rec.clusters.size(); ++i) {
    const NodeId u = g2.add_node();
    rec.star_center.push_back(u);
    rec.star_edge.push_back(g2.add_edge(rec.clusters[i].exit_end, u, 1));
    for (NodeId s : rec.clusters[i].terminals) {
      const NodeId leaf = g2.add_node();
      rec.leaf_edge[g2.add_edge(leaf, u, 1)] = leaf;
      rec.moved[s] = leaf;
      rec.origin[leaf] = s;
      rec.cluster_of[s] = static_cast<int>(i);
    }
  }
  std::vector<Demand> demands = inst.demands();
  for (Demand& d : demands) {
    if (auto it = rec.moved.find(d.s); it != rec.moved.end()) d.s = it->second;
    if (auto it = rec.moved.find(d.t); it != rec.moved.end()) d.t = it->second;
  }
  MatchingInstance moved_inst(std::move(g2), std::move(demands));
  const MultiGraph& gm = moved_inst.graph();

  // Walk from a moved terminal's new leaf to the terminal itself in G:
  // leaf - u_i - r_i, then P_i reversed to s_i, then the T_i path to s.
  auto entry_walk = [&](NodeId s) {
    const int ci = rec.cluster_of.at(s);
    const Cluster& c = rec.clusters[static_cast<std::size_t>(ci)];
    const NodeId leaf = rec.moved.at(s);
    std::vector<EdgeId> w{gm.incident(leaf)[0], rec.star_edge[static_cast<std::size_t>(ci)]};
    const auto back = reversed(c.exit_path);
    w.insert(w.end(), back.begin(), back.end());
    const auto down = tree_path(g, c.tree_edges, c.anchor, s);
    w.insert(w.end(), down.begin(), down.end());
    return w;
  };

  std::map<std::pair<DemandId, std::vector<EdgeId>>, Rational> merged;
  for (const FlowPath& p : routing.paths) {
    if (p.value == 0) continue;
    const Demand& d = inst.demand(p.demand);
    std::vector<EdgeId> walk;
    NodeId start = d.s;
    if (rec.moved.count(d.s)) {
      walk = entry_walk(d.s);
      start = rec.moved.at(d.s);
    }
    walk.insert(walk.end(), p.edges.begin(), p.edges.end());
    if (rec.moved.count(d.t)) {
      const auto tail = reversed(entry_walk(d.t));
      walk.insert(walk.end(), tail.begin(), tail.end());
    }
    merged[{p.demand, shortcut_walk(gm, start, walk)}] += p.value / 5;
  }
  FractionalRouting out;
  for (auto& [key, value] : merged) out.paths.push_back({key.first, key.second, value});
  if (auto err = check_fractional(out, moved_inst)) {
    throw InvariantViolation("move_terminals: scaled extension infeasible: " + *err);
  }
  return MoveResult{std::move(moved_inst), std::move(out), std::move(rec)};
}

/// Keeps, in order, the paths that touch no pendant star already used by an
/// earlier kept path. lift_routing requires this property.
inline IntegralRouting filter_one_path_per_star(const TransformRecord& rec, const IntegralRouting& routing,
                                                const MultiGraph& moved_graph) {
  IntegralRouting out;
  out.declared_congestion = routing.declared_congestion;
  std::set<NodeId> centers(rec.star_center.begin(), rec.star_center.end());
  std::set<NodeId> used;
  for (const RoutedPath& p : routing.paths) {
    std::set<NodeId> touched;
    for (EdgeId e : p.edges) {
      for (NodeId x : {moved_graph.edge(e).u, moved_graph.edge(e).v}) {
        if (centers.count(x)) touched.insert(x);
      }
    }
    if (std::any_of(touched.begin(), touched.end(), [&](NodeId x) { return used.count(x) > 0; })) continue;
    used.insert(touched.begin(), touched.end());
    out.paths.push_back(p);
  }
  return out;
}

/// Maps a routing of the moved instance back to the original instance. Each
/// pendant star may be used by at most one path; then every P_i and every
/// T_i is used at most once and the congestion grows by at most 2.
inline IntegralRouting lift_routing(const TransformRecord& rec, const MatchingInstance& original,
                                    const MatchingInstance& moved_inst, const IntegralRouting& routing) {
  const MultiGraph& g = original.graph();
  const MultiGraph& gm = moved_inst.graph();
  std::map<NodeId, int> center_cluster;
  for (std::size_t i = 0; i < rec.star_center.size(); ++i) center_cluster[rec.star_center[i]] = static_cast<int>(i);
  std::map<NodeId, int> star_users;
  IntegralRouting out;
  for (const RoutedPath& p : routing.paths) {
    const Demand& d = moved_inst.demand(p.demand);
    const auto nodes = walk_nodes(gm, d.s, p.edges);
    std::set<NodeId> centers_here;
    for (NodeId x : nodes) {
      if (center_cluster.count(x)) centers_here.insert(x);
    }
    for (NodeId c : centers_here) {
      if (++star_users[c] > 1) {
        throw InvalidInput("lift_routing: pendant star " + std::to_string(c) + " used by more than one path");
      }
    }
    // Image of a moved-graph node in G: leaves map to their terminal, star
    // centers to the anchor s_i of their cluster.
    auto image = [&](NodeId x) -> NodeId {
      if (auto it = rec.origin.find(x); it != rec.origin.end()) return it->second;
      if (auto it = center_cluster.find(x); it != center_cluster.end()) {
        return rec.clusters[static_cast<std::size_t>(it->second)].anchor;
      }
      return x;
    };
    std::vector<EdgeId> walk;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      const EdgeId e = p.edges[i];
      const NodeId a = nodes[i];
      const NodeId b = nodes[i + 1];
      if (e < rec.base_edges) {
        walk.push_back(e);
        continue;
      }
      if (auto it = rec.leaf_edge.find(e); it != rec.leaf_edge.end()) {
        const NodeId s = rec.origin.at(it->second);
        const Cluster& c = rec.clusters[static_cast<std::size_t>(rec.cluster_of.at(s))];
        const auto seg = tree_path(g, c.tree_edges, image(a), image(b));
        walk.insert(walk.end(), seg.begin(), seg.end());
        continue;
      }
      // A star edge r_i u_i: traverse P_i.
      const auto it = std::find(rec.star_edge.begin(), rec.star_edge.end(), e);
      if (it == rec.star_edge.end()) throw InvalidInput("lift_routing: unknown edge " + std::to_string(e));
      const Cluster& c = rec.clusters[static_cast<std::size_t>(it - rec.star_edge.begin())];
      if (image(a) == c.anchor) {
        walk.insert(walk.end(), c.exit_path.begin(), c.exit_path.end());
      } else {
        const auto back = reversed(c.exit_path);
        walk.insert(walk.end(), back.begin(), back.end());
      }
    }
    const Demand& od = original.demand(p.demand);
    out.paths.push_back({p.demand, shortcut_walk(g, od.s, walk)});
  }
  if (routing.declared_congestion) out.declared_congestion = *routing.declared_congestion + 2;
  return out;
}

// ---------------------------------------------------------------------------
// Sparsifiers

/// The unit multigraph W: one unit edge per capacity unit of the source
/// graph plus one extra copy of every T-join edge, so all degrees are even.
struct EulerianGraph {
  MultiGraph graph;
  std::vector<EdgeId> origin;      // W edge -> source edge
  std::vector<EdgeId> duplicated;  // E', source edge ids, sorted
};

/// Eulerianizes by duplicating a T-join for the odd-degree nodes. Odd nodes
/// are paired within each component in id order along BFS shortest paths;
/// the T-join is the symmetric difference of those paths.
inline EulerianGraph eulerianize(const MultiGraph& g) {
  std::vector<char> parity(static_cast<std::size_t>(g.num_edges()), 0);
  for (const auto& comp : induced_components(g, all_nodes(g))) {
    std::vector<NodeId> odd;
    for (NodeId v : comp) {
      std::int64_t deg = 0;
      for (EdgeId e : g.incident(v)) deg += g.edge(e).cap;
      if (deg % 2) odd.push_back(v);
    }
    for (std::size_t i = 0; i + 1 < odd.size(); i += 2) {
      const auto forest = detail::bfs_forest(g, std::span<const NodeId>(&odd[i], 1));
      for (NodeId x = odd[i + 1]; x != odd[i];) {
        const EdgeId e = forest.parent_edge[static_cast<std::size_t>(x)];
        parity[static_cast<std::size_t>(e)] ^= 1;
        x = forest.parent[static_cast<std::size_t>(x)];
      }
    }
  }
  EulerianGraph out{MultiGraph(g.num_nodes()), {}, {}};
  for (const Edge& e : g.edges()) {
    for (std::int64_t c = 0; c < e.cap; ++c) {
      out.graph.add_edge(e.u, e.v, 1);
      out.origin.push_back(e.id);
    }
  }
  for (const Edge& e : g.edges()) {
    if (!parity[static_cast<std::size_t>(e.id)]) continue;
    out.graph.add_edge(e.u, e.v, 1);
    out.origin.push_back(e.id);
    out.duplicated.push_back(e.id);
  }
  return out;
}

/// H = (S, F): every F edge is a unit edge carrying a walk in the source
/// graph, oriented from terminals[a] to terminals[b] for F edge (a, b).
/// Walks of different F edges use disjoint W edges, so each source edge e
/// carries at most c_e + 1 of them.
struct Sparsifier {
  std::vector<NodeId> terminals;  // sorted; H node i is terminals[i]
  MultiGraph h;
  std::vector<std::vector<EdgeId>> embedded;  // per F edge, source-graph walk
  std::vector<EdgeId> duplicated;              // E'
  int sigma = 0;                               // |S|^2
  int rho = 2;
};

namespace detail {

struct LiveEdge {
  NodeId a;
  NodeId b;
  std::vector<EdgeId> walk;  // W edges oriented from a to b
  bool alive = true;
};

inline MultiGraph live_graph(int n, const std::vector<LiveEdge>& edges) {
  MultiGraph g(n);
  for (const LiveEdge& e : edges) {
    if (e.alive) g.add_edge(e.a, e.b, 1);
  }
  return g;
}

}  // namespace detail

/// Splits off every node outside S in id order, choosing at each step the
/// first incident pair (lexicographic live-edge order) that keeps all
/// pairwise S connectivities. Edges of the source graph are unit edges of
/// `w`; the returned walks are in terms of source edges (via w.origin).
inline Sparsifier split_off(const EulerianGraph& w, std::span<const NodeId> S) {
  if (S.empty()) throw InvalidInput("split_off: empty terminal set");
  const MultiGraph& g = w.graph;
  const int n = g.num_nodes();
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) % 2) throw InvalidInput("split_off: graph is not Eulerian at node " + std::to_string(v));
  }
  std::vector<NodeId> terms(S.begin(), S.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::set<NodeId> term_set(terms.begin(), terms.end());

  std::vector<detail::LiveEdge> live;
  for (const Edge& e : g.edges()) live.push_back({e.u, e.v, {e.id}, true});

  auto lambdas = [&](const MultiGraph& gg) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) out.push_back(local_edge_connectivity(gg, terms[i], terms[j]));
    }
    return out;
  };
  const auto target = lambdas(g);

  for (NodeId v = 0; v < n; ++v) {
    if (term_set.count(v)) continue;
    while (true) {
      std::vector<std::size_t> inc;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (live[i].alive && (live[i].a == v || live[i].b == v)) inc.push_back(i);
      }
      if (inc.empty()) break;
      bool done = false;
      for (std::size_t x = 0; x < inc.size() && !done; ++x) {
        for (std::size_t y = x + 1; y < inc.size() && !done; ++y) {
          detail::LiveEdge& e1 = live[inc[x]];
          detail::LiveEdge& e2 = live[inc[y]];
          // Orient e1 as u -> v and e2 as v -> w.
          std::vector<EdgeId> w1 = e1.b == v ? e1.walk : reversed(e1.walk);
          const NodeId u = e1.b == v ? e1.a : e1.b;
          std::vector<EdgeId> w2 = e2.a == v ? e2.walk : reversed(e2.walk);
          const NodeId t = e2.a == v ? e2.b : e2.a;
          e1.alive = false;
          e2.alive = false;
          if (u != t) live.push_back({u, t, {}, true});
          bool ok = lambdas(detail::live_graph(n, live)) == target;
          if (ok) {
            if (u != t) {
              w1.insert(w1.end(), w2.begin(), w2.end());
              live.back().walk = std::move(w1);
            }
            done = true;
          } else {
            if (u != t) live.pop_back();
            live[inc[x]].alive = true;
            live[inc[y]].alive = true;
          }
        }
      }
      if (!done) {
        throw InvariantViolation("split_off: no admissible pair at node " + std::to_string(v) + " (degree " +
                                 std::to_string(inc.size()) + ")");
      }
    }
  }

  Sparsifier sp;
  sp.terminals = terms;
  sp.h = MultiGraph(static_cast<int>(terms.size()));
  sp.duplicated = w.duplicated;
  sp.sigma = static_cast<int>(terms.size() * terms.size());
  std::map<NodeId, int> index;
  for (std::size_t i = 0; i < terms.size(); ++i) index[terms[i]] = static_cast<int>(i);
  for (const detail::LiveEdge& e : live) {
    if (!e.alive) continue;
    sp.h.add_edge(index.at(e.a), index.at(e.b), 1);
    std::vector<EdgeId> walk;
    for (EdgeId x : e.walk) walk.push_back(w.origin[static_cast<std::size_t>(x)]);
    sp.embedded.push_back(std::move(walk));
  }
  return sp;
}

/// Convenience: (|S|^2, 2)-sparsifier of `g` for S.
inline Sparsifier build_sparsifier(const MultiGraph& g, std::span<const NodeId> S) {
  return split_off(eulerianize(g), S);
}

/// A path in H given by its start node (H index) and H edge ids.
struct HPath {
  DemandId demand = -1;
  int start = -1;
  std::vector<EdgeId> edges;
};

/// Replaces every H edge by its embedded walk and shortcuts the result to a
/// simple path in the source graph.
inline std::vector<EdgeId> embed_path(const Sparsifier& sp, const MultiGraph& g, const HPath& path) {
  std::vector<EdgeId> walk;
  int at = path.start;
  for (EdgeId e : path.edges) {
    const Edge& he = sp.h.edge(e);
    const auto& emb = sp.embedded.at(static_cast<std::size_t>(e));
    if (he.u == at) {
      walk.insert(walk.end(), emb.begin(), emb.end());
    } else if (he.v == at) {
      const auto back = reversed(emb);
      walk.insert(walk.end(), back.begin(), back.end());
    } else {
      throw InvalidInput("embed_path: H edge " + std::to_string(e) + " does not continue the path");
    }
    at = he.other(at);
  }
  return shortcut_walk(g, sp.terminals.at(static_cast<std::size_t>(path.start)), walk);
}

inline std::vector<RoutedPath> embed_routing(const Sparsifier& sp, const MultiGraph& g,
                                             std::span<const HPath> routing) {
  std::vector<RoutedPath> out;
  for (const HPath& p : routing) out.push_back({p.demand, embed_path(sp, g, p)});
  return out;
}

}  // namespace medp
