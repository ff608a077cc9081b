#pragma once

// Core graph, instance and routing types.
//
// Paths are stored as edge-id sequences oriented from the demand's first
// terminal `s` to its second terminal `t`; the node sequence is recovered by
// walking from `s`.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medp/errors.hpp"
#include "medp/rational.hpp"

namespace medp {

using NodeId = int;
using EdgeId = int;
using DemandId = int;

struct Edge {
  EdgeId id = -1;
  NodeId u = -1;
  NodeId v = -1;
  std::int64_t cap = 1;

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool touches(NodeId x) const { return x == u || x == v; }
};

/// Undirected capacitated multigraph with dense node and edge ids.
/// Parallel edges are allowed, self-loops are not.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(int num_nodes) : adjacency_(static_cast<std::size_t>(num_nodes)) {
    if (num_nodes < 0) throw InvalidInput("negative node count");
  }

  NodeId add_node() {
    adjacency_.emplace_back();
    return static_cast<NodeId>(adjacency_.size()) - 1;
  }

  EdgeId add_edge(NodeId u, NodeId v, std::int64_t cap = 1) {
    if (!has_node(u) || !has_node(v)) {
      throw InvalidInput("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
    }
    if (u == v) throw InvalidInput("self-loop at node " + std::to_string(u));
    if (cap < 1) throw InvalidInput("edge capacity must be >= 1");
    const EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{id, u, v, cap});
    adjacency_[static_cast<std::size_t>(u)].push_back(id);
    adjacency_[static_cast<std::size_t>(v)].push_back(id);
    return id;
  }

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool has_node(NodeId v) const { return v >= 0 && v < num_nodes(); }
  bool has_edge(EdgeId e) const { return e >= 0 && e < num_edges(); }

  const Edge& edge(EdgeId e) const {
    if (!has_edge(e)) throw InvalidInput("dangling edge id " + std::to_string(e));
    return edges_[static_cast<std::size_t>(e)];
  }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> incident(NodeId v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  int degree(NodeId v) const { return static_cast<int>(incident(v).size()); }

  std::int64_t total_capacity() const {
    std::int64_t total = 0;
    for (const Edge& e : edges_) total += e.cap;
    return total;
  }

  /// Full rescan of the adjacency index against the edge records.
  bool adjacency_consistent() const {
    std::vector<std::vector<EdgeId>> rebuilt(adjacency_.size());
    for (const Edge& e : edges_) {
      if (!has_node(e.u) || !has_node(e.v) || e.u == e.v || e.cap < 1) return false;
      rebuilt[static_cast<std::size_t>(e.u)].push_back(e.id);
      rebuilt[static_cast<std::size_t>(e.v)].push_back(e.id);
    }
    return rebuilt == adjacency_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
};

// ---------------------------------------------------------------------------
// Walks

/// Node sequence of the walk starting at `start`. Throws if an edge does not
/// continue the walk.
inline std::vector<NodeId> walk_nodes(const MultiGraph& g, NodeId start, std::span<const EdgeId> edges) {
  std::vector<NodeId> nodes{start};
  NodeId at = start;
  for (EdgeId id : edges) {
    const Edge& e = g.edge(id);
    if (!e.touches(at)) {
      throw InvalidInput("edge " + std::to_string(id) + " does not continue walk at node " + std::to_string(at));
    }
    at = e.other(at);
    nodes.push_back(at);
  }
  return nodes;
}

inline NodeId walk_end(const MultiGraph& g, NodeId start, std::span<const EdgeId> edges) {
  return walk_nodes(g, start, edges).back();
}

/// True when the edges form a walk from `start` to `end` without repeated nodes.
inline bool is_simple_path(const MultiGraph& g, NodeId start, NodeId end, std::span<const EdgeId> edges) {
  for (EdgeId id : edges) {
    if (!g.has_edge(id)) return false;
  }
  std::vector<NodeId> nodes;
  try {
    nodes = walk_nodes(g, start, edges);
  } catch (const InvalidInput&) {
    return false;
  }
  if (nodes.back() != end) return false;
  std::sort(nodes.begin(), nodes.end());
  return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

/// Removes cycles from a walk, keeping the first arrival at every node.
/// The result is a simple path with the same endpoints whose edges are a
/// sub-multiset of the input.
inline std::vector<EdgeId> shortcut_walk(const MultiGraph& g, NodeId start, std::span<const EdgeId> edges) {
  std::vector<EdgeId> out;
  std::vector<NodeId> nodes{start};
  std::map<NodeId, std::size_t> position{{start, 0}};
  NodeId at = start;
  for (EdgeId id : edges) {
    const Edge& e = g.edge(id);
    if (!e.touches(at)) throw InvalidInput("shortcut_walk: broken walk at edge " + std::to_string(id));
    at = e.other(at);
    auto it = position.find(at);
    if (it != position.end()) {
      const std::size_t keep = it->second;
      for (std::size_t i = keep + 1; i < nodes.size(); ++i) position.erase(nodes[i]);
      nodes.resize(keep + 1);
      out.resize(keep);
    } else {
      out.push_back(id);
      nodes.push_back(at);
      position[at] = nodes.size() - 1;
    }
  }
  return out;
}

inline std::vector<EdgeId> reversed(std::vector<EdgeId> edges) {
  std::reverse(edges.begin(), edges.end());
  return edges;
}

inline bool path_contains_node(const MultiGraph& g, NodeId start, std::span<const EdgeId> edges, NodeId v) {
  if (start == v) return true;
  NodeId at = start;
  for (EdgeId id : edges) {
    at = g.edge(id).other(at);
    if (at == v) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Instances

struct Demand {
  NodeId s = -1;
  NodeId t = -1;
};

/// The triple (graph, terminals, perfect demand matching on the terminals).
/// Every terminal is a degree-1 leaf and belongs to exactly one demand.
class MatchingInstance {
 public:
  MatchingInstance() = default;

  MatchingInstance(MultiGraph graph, std::vector<Demand> demands)
      : graph_(std::move(graph)), demands_(std::move(demands)) {
    terminal_demand_.assign(static_cast<std::size_t>(graph_.num_nodes()), -1);
    for (std::size_t h = 0; h < demands_.size(); ++h) {
      for (NodeId x : {demands_[h].s, demands_[h].t}) {
        if (!graph_.has_node(x)) throw InvalidInput("demand endpoint " + std::to_string(x) + " not in graph");
        if (terminal_demand_[static_cast<std::size_t>(x)] != -1) {
          throw InvalidInput("terminal " + std::to_string(x) + " occurs in more than one demand");
        }
        if (graph_.degree(x) != 1) {
          throw InvalidInput("terminal " + std::to_string(x) + " is not a degree-1 leaf");
        }
        terminal_demand_[static_cast<std::size_t>(x)] = static_cast<DemandId>(h);
      }
      terminals_.push_back(demands_[h].s);
      terminals_.push_back(demands_[h].t);
    }
    std::sort(terminals_.begin(), terminals_.end());
  }

  const MultiGraph& graph() const { return graph_; }
  const std::vector<Demand>& demands() const { return demands_; }
  int num_demands() const { return static_cast<int>(demands_.size()); }
  const Demand& demand(DemandId h) const { return demands_.at(static_cast<std::size_t>(h)); }
  const std::vector<NodeId>& terminals() const { return terminals_; }

  /// Demand id of terminal `v`, or -1 when `v` is not a terminal.
  DemandId demand_of(NodeId v) const {
    if (!graph_.has_node(v)) return -1;
    return terminal_demand_[static_cast<std::size_t>(v)];
  }
  bool is_terminal(NodeId v) const { return demand_of(v) != -1; }

 private:
  MultiGraph graph_;
  std::vector<Demand> demands_;
  std::vector<NodeId> terminals_;
  std::vector<DemandId> terminal_demand_;
};

// ---------------------------------------------------------------------------
// Routings

struct FlowPath {
  DemandId demand = -1;
  std::vector<EdgeId> edges;
  Rational value;
};

/// Weighted flow paths; a feasible solution of the multicommodity LP.
struct FractionalRouting {
  std::vector<FlowPath> paths;

  Rational value() const {
    Rational total = 0;
    for (const FlowPath& p : paths) total += p.value;
    return total;
  }

  std::vector<Rational> demand_totals(int num_demands) const {
    std::vector<Rational> z(static_cast<std::size_t>(num_demands));
    for (const FlowPath& p : paths) z.at(static_cast<std::size_t>(p.demand)) += p.value;
    return z;
  }

  std::vector<Rational> edge_loads(int num_edges) const {
    std::vector<Rational> load(static_cast<std::size_t>(num_edges));
    for (const FlowPath& p : paths) {
      for (EdgeId e : p.edges) load.at(static_cast<std::size_t>(e)) += p.value;
    }
    return load;
  }

  /// Drops zero-valued paths.
  void prune() {
    std::erase_if(paths, [](const FlowPath& p) { return p.value == 0; });
  }
};

/// Returns a description of the first violated invariant, or nullopt.
/// Exact: any overload by a positive margin is rejected.
inline std::optional<std::string> check_fractional(const FractionalRouting& routing, const MatchingInstance& inst) {
  const MultiGraph& g = inst.graph();
  for (std::size_t i = 0; i < routing.paths.size(); ++i) {
    const FlowPath& p = routing.paths[i];
    if (p.demand < 0 || p.demand >= inst.num_demands()) return "path " + std::to_string(i) + ": unknown demand";
    if (p.value < 0) return "path " + std::to_string(i) + ": negative value";
    const Demand& d = inst.demand(p.demand);
    if (!is_simple_path(g, d.s, d.t, p.edges)) {
      return "path " + std::to_string(i) + ": not a simple path joining its demand";
    }
  }
  const auto z = routing.demand_totals(inst.num_demands());
  for (std::size_t h = 0; h < z.size(); ++h) {
    if (z[h] > 1) return "demand " + std::to_string(h) + " routed " + to_string(z[h]) + " > 1";
  }
  const auto load = routing.edge_loads(g.num_edges());
  for (const Edge& e : g.edges()) {
    if (load[static_cast<std::size_t>(e.id)] > e.cap) {
      return "edge " + std::to_string(e.id) + " overloaded: " + to_string(load[static_cast<std::size_t>(e.id)]);
    }
  }
  return std::nullopt;
}

inline void validate_fractional(const FractionalRouting& routing, const MatchingInstance& inst) {
  if (auto err = check_fractional(routing, inst)) throw InvalidInput("fractional routing: " + *err);
}

struct RoutedPath {
  DemandId demand = -1;
  std::vector<EdgeId> edges;
};

/// One path per routed demand. `declared_congestion` is the bound the
/// producer certifies; validation checks the recount against it.
struct IntegralRouting {
  std::vector<RoutedPath> paths;
  std::optional<Rational> declared_congestion;

  int value() const { return static_cast<int>(paths.size()); }
};

/// Per-edge path count. Throws on a dangling edge id.
inline std::vector<std::int64_t> edge_loads(const IntegralRouting& routing, const MultiGraph& g) {
  std::vector<std::int64_t> load(static_cast<std::size_t>(g.num_edges()), 0);
  for (const RoutedPath& p : routing.paths) {
    for (EdgeId e : p.edges) {
      if (!g.has_edge(e)) throw InvalidInput("dangling edge id " + std::to_string(e) + " in routing");
      ++load[static_cast<std::size_t>(e)];
    }
  }
  return load;
}

/// max_e load(e)/c_e; zero for the empty routing.
inline Rational congestion_of(const IntegralRouting& routing, const MultiGraph& g) {
  const auto load = edge_loads(routing, g);
  Rational worst = 0;
  for (const Edge& e : g.edges()) {
    const Rational c = make_rational(load[static_cast<std::size_t>(e.id)], e.cap);
    if (c > worst) worst = c;
  }
  return worst;
}

inline std::optional<std::string> check_integral(const IntegralRouting& routing, const MatchingInstance& inst,
                                                 const std::optional<Rational>& congestion_bound) {
  std::vector<char> seen(static_cast<std::size_t>(inst.num_demands()), 0);
  for (std::size_t i = 0; i < routing.paths.size(); ++i) {
    const RoutedPath& p = routing.paths[i];
    if (p.demand < 0 || p.demand >= inst.num_demands()) return "path " + std::to_string(i) + ": unknown demand";
    if (seen[static_cast<std::size_t>(p.demand)]++) return "demand " + std::to_string(p.demand) + " routed twice";
    const Demand& d = inst.demand(p.demand);
    if (!is_simple_path(inst.graph(), d.s, d.t, p.edges)) {
      return "path " + std::to_string(i) + " (demand " + std::to_string(p.demand) + "): not a simple path";
    }
  }
  const Rational cong = congestion_of(routing, inst.graph());
  if (congestion_bound && cong > *congestion_bound) {
    return "congestion " + to_string(cong) + " exceeds bound " + to_string(*congestion_bound);
  }
  if (routing.declared_congestion && cong > *routing.declared_congestion) {
    return "congestion " + to_string(cong) + " exceeds declared " + to_string(*routing.declared_congestion);
  }
  return std::nullopt;
}

inline void validate_integral(const IntegralRouting& routing, const MatchingInstance& inst,
                              const std::optional<Rational>& congestion_bound = std::nullopt) {
  if (auto err = check_integral(routing, inst, congestion_bound)) throw InvalidInput("integral routing: " + *err);
}

/// x(v) = z_h for each terminal v of demand h with positive flow.
inline std::map<NodeId, Rational> marginals_of(const FractionalRouting& routing, const MatchingInstance& inst) {
  std::map<NodeId, Rational> x;
  const auto z = routing.demand_totals(inst.num_demands());
  for (DemandId h = 0; h < inst.num_demands(); ++h) {
    if (z[static_cast<std::size_t>(h)] == 0) continue;
    x[inst.demand(h).s] = z[static_cast<std::size_t>(h)];
    x[inst.demand(h).t] = z[static_cast<std::size_t>(h)];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Normalization

/// Raw pair list on an arbitrary graph.
struct RawInstance {
  MultiGraph graph;
  std::vector<std::pair<NodeId, NodeId>> pairs;
};

/// Attaches a fresh leaf (unit edge) for every pair endpoint. The original
/// nodes and edges keep their ids; demand h corresponds to pair h. Leaf nodes
/// and edges are appended in pair order (s-leaf, then t-leaf).
inline MatchingInstance normalize_to_matching(const MultiGraph& graph,
                                              std::span<const std::pair<NodeId, NodeId>> pairs) {
  MultiGraph g = graph;
  std::vector<Demand> demands;
  demands.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (!graph.has_node(a) || !graph.has_node(b)) {
      throw InvalidInput("pair endpoint not in graph: (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    const NodeId la = g.add_node();
    g.add_edge(la, a, 1);
    const NodeId lb = g.add_node();
    g.add_edge(lb, b, 1);
    demands.push_back(Demand{la, lb});
  }
  return MatchingInstance(std::move(g), std::move(demands));
}

/// Maps a path of the normalized instance back to the raw graph by dropping
/// the two leaf edges.
inline std::vector<EdgeId> strip_leaf_edges(std::span<const EdgeId> path) {
  if (path.size() < 2) throw InvalidInput("normalized path shorter than its two leaf edges");
  return {path.begin() + 1, path.end() - 1};
}

inline IntegralRouting denormalize(const IntegralRouting& routing) {
  IntegralRouting out;
  out.declared_congestion = routing.declared_congestion;
  for (const RoutedPath& p : routing.paths) out.paths.push_back({p.demand, strip_leaf_edges(p.edges)});
  return out;
}

inline FractionalRouting denormalize(const FractionalRouting& routing) {
  FractionalRouting out;
  for (const FlowPath& p : routing.paths) out.paths.push_back({p.demand, strip_leaf_edges(p.edges), p.value});
  return out;
}

/// Raw-graph view of a routing: pair endpoints instead of leaf terminals.
inline std::optional<std::string> check_raw_integral(const IntegralRouting& routing, const RawInstance& raw,
                                                     const std::optional<Rational>& congestion_bound) {
  std::vector<char> seen(raw.pairs.size(), 0);
  for (std::size_t i = 0; i < routing.paths.size(); ++i) {
    const RoutedPath& p = routing.paths[i];
    if (p.demand < 0 || p.demand >= static_cast<int>(raw.pairs.size())) {
      return "path " + std::to_string(i) + ": unknown demand";
    }
    if (seen[static_cast<std::size_t>(p.demand)]++) return "demand " + std::to_string(p.demand) + " routed twice";
    const auto [s, t] = raw.pairs[static_cast<std::size_t>(p.demand)];
    if (!is_simple_path(raw.graph, s, t, p.edges)) return "path " + std::to_string(i) + ": not a simple s-t path";
  }
  const Rational cong = congestion_of(routing, raw.graph);
  if (congestion_bound && cong > *congestion_bound) {
    return "congestion " + to_string(cong) + " exceeds bound " + to_string(*congestion_bound);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Unit capacities

struct UnitizedGraph {
  MultiGraph graph;
  std::vector<EdgeId> origin;  // unit edge -> original edge
};

/// Replaces each edge of capacity c by c parallel unit edges. Copies of an
/// original edge are contiguous and ordered by original edge id.
inline UnitizedGraph unitize_capacities(const MultiGraph& graph) {
  UnitizedGraph out{MultiGraph(graph.num_nodes()), {}};
  for (const Edge& e : graph.edges()) {
    for (std::int64_t c = 0; c < e.cap; ++c) {
      out.graph.add_edge(e.u, e.v, 1);
      out.origin.push_back(e.id);
    }
  }
  return out;
}

inline IntegralRouting deunitize(const IntegralRouting& routing, const UnitizedGraph& unit) {
  IntegralRouting out;
  out.declared_congestion = routing.declared_congestion;
  for (const RoutedPath& p : routing.paths) {
    RoutedPath q{p.demand, {}};
    for (EdgeId e : p.edges) q.edges.push_back(unit.origin.at(static_cast<std::size_t>(e)));
    out.paths.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Induced sub-instances

/// A sub-instance with dense relabelled ids and maps to and from its parent.
struct SubInstance {
  MatchingInstance instance;
  std::vector<NodeId> node_to_parent;
  std::vector<EdgeId> edge_to_parent;
  std::vector<DemandId> demand_to_parent;
  std::vector<NodeId> node_from_parent;
  std::vector<EdgeId> edge_from_parent;
  std::vector<DemandId> demand_from_parent;
};

/// Induces the instance on `nodes` (kept in the given order), optionally
/// dropping edges rejected by `keep_edge`. A demand survives when both its
/// terminals survive as degree-1 leaves.
inline SubInstance induce(const MatchingInstance& parent, std::span<const NodeId> nodes,
                          const std::function<bool(EdgeId)>& keep_edge = {}) {
  const MultiGraph& pg = parent.graph();
  SubInstance sub;
  sub.node_from_parent.assign(static_cast<std::size_t>(pg.num_nodes()), -1);
  sub.edge_from_parent.assign(static_cast<std::size_t>(pg.num_edges()), -1);
  sub.demand_from_parent.assign(static_cast<std::size_t>(parent.num_demands()), -1);
  MultiGraph g(static_cast<int>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!pg.has_node(nodes[i])) throw InvalidInput("induce: node out of range");
    if (sub.node_from_parent[static_cast<std::size_t>(nodes[i])] != -1) throw InvalidInput("induce: repeated node");
    sub.node_from_parent[static_cast<std::size_t>(nodes[i])] = static_cast<NodeId>(i);
    sub.node_to_parent.push_back(nodes[i]);
  }
  for (const Edge& e : pg.edges()) {
    const NodeId a = sub.node_from_parent[static_cast<std::size_t>(e.u)];
    const NodeId b = sub.node_from_parent[static_cast<std::size_t>(e.v)];
    if (a < 0 || b < 0) continue;
    if (keep_edge && !keep_edge(e.id)) continue;
    sub.edge_from_parent[static_cast<std::size_t>(e.id)] = g.add_edge(a, b, e.cap);
    sub.edge_to_parent.push_back(e.id);
  }
  std::vector<Demand> demands;
  for (DemandId h = 0; h < parent.num_demands(); ++h) {
    const Demand& d = parent.demand(h);
    const NodeId s = sub.node_from_parent[static_cast<std::size_t>(d.s)];
    const NodeId t = sub.node_from_parent[static_cast<std::size_t>(d.t)];
    if (s < 0 || t < 0 || g.degree(s) != 1 || g.degree(t) != 1) continue;
    sub.demand_from_parent[static_cast<std::size_t>(h)] = static_cast<DemandId>(demands.size());
    sub.demand_to_parent.push_back(h);
    demands.push_back(Demand{s, t});
  }
  sub.instance = MatchingInstance(std::move(g), std::move(demands));
  return sub;
}

/// Paths of `routing` lying entirely inside the sub-instance, relabelled.
inline FractionalRouting restrict_routing(const SubInstance& sub, const FractionalRouting& routing) {
  FractionalRouting out;
  for (const FlowPath& p : routing.paths) {
    const DemandId h = sub.demand_from_parent.at(static_cast<std::size_t>(p.demand));
    if (h < 0) continue;
    std::vector<EdgeId> edges;
    bool inside = true;
    for (EdgeId e : p.edges) {
      const EdgeId m = sub.edge_from_parent.at(static_cast<std::size_t>(e));
      if (m < 0) {
        inside = false;
        break;
      }
      edges.push_back(m);
    }
    if (inside) out.paths.push_back({h, std::move(edges), p.value});
  }
  return out;
}

inline IntegralRouting lift_to_parent(const SubInstance& sub, const IntegralRouting& routing) {
  IntegralRouting out;
  out.declared_congestion = routing.declared_congestion;
  for (const RoutedPath& p : routing.paths) {
    RoutedPath q{sub.demand_to_parent.at(static_cast<std::size_t>(p.demand)), {}};
    for (EdgeId e : p.edges) q.edges.push_back(sub.edge_to_parent.at(static_cast<std::size_t>(e)));
    out.paths.push_back(std::move(q));
  }
  return out;
}

/// Connected components (sorted node lists) of the subgraph induced on `nodes`.
inline std::vector<std::vector<NodeId>> induced_components(const MultiGraph& g, std::span<const NodeId> nodes) {
  std::vector<char> in(static_cast<std::size_t>(g.num_nodes()), 0);
  for (NodeId v : nodes) in[static_cast<std::size_t>(v)] = 1;
  std::vector<char> seen(in.size(), 0);
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<NodeId>> comps;
  for (NodeId root : sorted) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<NodeId> comp{root};
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (EdgeId id : g.incident(comp[i])) {
        const NodeId w = g.edge(id).other(comp[i]);
        if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::vector<NodeId> all_nodes(const MultiGraph& g) {
  std::vector<NodeId> v(static_cast<std::size_t>(g.num_nodes()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline bool is_connected(const MultiGraph& g) {
  if (g.num_nodes() == 0) return true;
  const auto nodes = all_nodes(g);
  return induced_components(g, nodes).size() == 1;
}

/// Nodes that are not degree-1 leaves. Pendant terminal leaves add no
/// branching to path search, so size guards count these nodes.
inline int core_node_count(const MultiGraph& g) {
  int n = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) n += g.degree(v) != 1;
  return n;
}

}  // namespace medp
