#pragma once

// Integral rounding: single-node routing, rerouting to a set, the base
// cases, the degenerate-or-route step and the (k,p) recursion.

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "medp/decomposition.hpp"
#include "medp/errors.hpp"
#include "medp/flow.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"
#include "medp/reductions.hpp"

namespace medp {

// ---------------------------------------------------------------------------
// Routing through a single node

/// A walk from a terminal to the routing node, carrying `amount`.
struct Half {
  NodeId terminal = -1;
  std::vector<EdgeId> walk;
  Rational amount;
};

inline Rational ceil_div3(const Rational& r) { return Rational(ceil_of(r / 3)); }

/// Routes demands through `v` given feasible half-flows: both terminals of a
/// demand must carry the same total, and the overlaid halves must respect
/// capacities. Clusters all terminals towards v, takes edge-disjoint exit
/// paths and a maximum matching on the cluster graph. Value >= ceil(val/3),
/// congestion <= 2.
inline IntegralRouting route_halves(const MatchingInstance& inst, std::span<const Half> halves, NodeId v) {
  const MultiGraph& g = inst.graph();
  std::map<NodeId, Rational> marg;
  std::vector<Rational> load(static_cast<std::size_t>(g.num_edges()));
  for (const Half& h : halves) {
    if (h.amount < 0) throw InvalidInput("route_halves: negative amount");
    if (h.amount == 0) continue;
    if (!inst.is_terminal(h.terminal)) throw InvalidInput("route_halves: half does not start at a terminal");
    if (walk_end(g, h.terminal, h.walk) != v) throw InvalidInput("route_halves: half does not end at the node");
    marg[h.terminal] += h.amount;
    for (EdgeId e : h.walk) load[static_cast<std::size_t>(e)] += h.amount;
  }
  for (const Edge& e : g.edges()) {
    if (load[static_cast<std::size_t>(e.id)] > e.cap) throw InvalidInput("route_halves: halves overload an edge");
  }
  Rational val = 0;
  for (DemandId h = 0; h < inst.num_demands(); ++h) {
    const Demand& d = inst.demand(h);
    const Rational zs = marg.count(d.s) ? marg[d.s] : Rational(0);
    const Rational zt = marg.count(d.t) ? marg[d.t] : Rational(0);
    if (zs != zt) throw InvalidInput("route_halves: unequal half totals for demand " + std::to_string(h));
    if (zs > 1) throw InvalidInput("route_halves: demand routed more than once");
    val += zs;
  }
  IntegralRouting out;
  out.declared_congestion = Rational(2);
  if (val == 0) return out;

  std::vector<NodeId> terms;
  for (const auto& [t, x] : marg) terms.push_back(t);
  const std::vector<NodeId> root{v};
  std::vector<Cluster> clusters = cluster_terminals(g, terms, root, marg);
  cluster_paths(g, clusters, root);
  std::map<NodeId, int> cluster_of;
  for (const Cluster& c : clusters) {
    for (NodeId s : c.terminals) cluster_of[s] = c.id;
  }

  using MatchGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const int nc = static_cast<int>(clusters.size());
  MatchGraph mg(static_cast<std::size_t>(nc));
  std::map<std::pair<int, int>, DemandId> edge_demand;
  for (DemandId h = 0; h < inst.num_demands(); ++h) {
    const Demand& d = inst.demand(h);
    if (!cluster_of.count(d.s) || !cluster_of.count(d.t)) continue;
    const int a = cluster_of[d.s];
    const int b = cluster_of[d.t];
    if (a != b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      if (edge_demand.emplace(key, h).second) boost::add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b), mg);
    } else {
      const auto dummy = boost::add_vertex(mg);
      edge_demand.emplace(std::make_pair(a, static_cast<int>(dummy)), h);
      boost::add_edge(static_cast<std::size_t>(a), dummy, mg);
    }
  }
  std::vector<boost::graph_traits<MatchGraph>::vertex_descriptor> mate(boost::num_vertices(mg));
  boost::edmonds_maximum_cardinality_matching(mg, &mate[0]);
  const auto none = boost::graph_traits<MatchGraph>::null_vertex();

  for (int a = 0; a < nc; ++a) {
    if (mate[static_cast<std::size_t>(a)] == none) continue;
    const int b = static_cast<int>(mate[static_cast<std::size_t>(a)]);
    if (b < nc && b < a) continue;  // each cluster pair once
    const DemandId h = edge_demand.at(b < nc ? std::make_pair(std::min(a, b), std::max(a, b)) : std::make_pair(a, b));
    const Demand& d = inst.demand(h);
    const Cluster& cs = clusters[static_cast<std::size_t>(cluster_of.at(d.s))];
    const Cluster& ct = clusters[static_cast<std::size_t>(cluster_of.at(d.t))];
    std::vector<EdgeId> walk;
    if (cs.id == ct.id) {
      walk = tree_path(g, cs.tree_edges, d.s, d.t);
    } else {
      walk = tree_path(g, cs.tree_edges, d.s, cs.anchor);
      walk.insert(walk.end(), cs.exit_path.begin(), cs.exit_path.end());
      const auto back = reversed(ct.exit_path);
      walk.insert(walk.end(), back.begin(), back.end());
      const auto down = tree_path(g, ct.tree_edges, ct.anchor, d.t);
      walk.insert(walk.end(), down.begin(), down.end());
    }
    out.paths.push_back({h, shortcut_walk(g, d.s, walk)});
  }
  std::sort(out.paths.begin(), out.paths.end(), [](const RoutedPath& x, const RoutedPath& y) { return x.demand < y.demand; });
  if (auto err = check_integral(out, inst, Rational(2))) throw InvariantViolation("route_halves: " + *err);
  if (Rational(out.value()) < ceil_div3(val)) {
    throw GuaranteeViolation("route_halves: routed " + std::to_string(out.value()) + " < ceil(" + to_string(val) + "/3)");
  }
  return out;
}

/// Every positive flow path must contain v. Contract: value >= floor(val/12)
/// at congestion <= 2; the router delivers ceil(val/3).
inline IntegralRouting route_through_node(const MatchingInstance& inst, const FractionalRouting& routing, NodeId v) {
  const MultiGraph& g = inst.graph();
  if (!g.has_node(v)) throw InvalidInput("route_through_node: unknown node");
  std::vector<Half> halves;
  for (const FlowPath& p : routing.paths) {
    if (p.value == 0) continue;
    const Demand& d = inst.demand(p.demand);
    const auto nodes = walk_nodes(g, d.s, p.edges);
    const auto it = std::find(nodes.begin(), nodes.end(), v);
    if (it == nodes.end()) {
      throw InvalidInput("route_through_node: a flow path of demand " + std::to_string(p.demand) + " misses node " +
                         std::to_string(v));
    }
    const auto idx = static_cast<std::size_t>(it - nodes.begin());
    halves.push_back({d.s, {p.edges.begin(), p.edges.begin() + static_cast<std::ptrdiff_t>(idx)}, p.value});
    halves.push_back({d.t, reversed({p.edges.begin() + static_cast<std::ptrdiff_t>(idx), p.edges.end()}), p.value});
  }
  if (inst.is_terminal(v)) {
    // All flow belongs to v's own demand; route one of its paths.
    IntegralRouting out;
    out.declared_congestion = Rational(2);
    for (const FlowPath& p : routing.paths) {
      if (p.value > 0) {
        out.paths.push_back({p.demand, p.edges});
        break;
      }
    }
    return out;
  }
  return route_halves(inst, halves, v);
}

/// Value of the flow paths through each node.
inline std::map<NodeId, Rational> through_flow(const MatchingInstance& inst, const FractionalRouting& routing) {
  std::map<NodeId, Rational> out;
  for (const FlowPath& p : routing.paths) {
    if (p.value == 0) continue;
    for (NodeId x : walk_nodes(inst.graph(), inst.demand(p.demand).s, p.edges)) out[x] += p.value;
  }
  return out;
}

/// Node of `candidates` carrying the most flow; lowest id on ties. -1 if no
/// candidate carries flow.
inline NodeId best_node(const MatchingInstance& inst, const FractionalRouting& routing,
                        std::span<const NodeId> candidates) {
  const auto flow = through_flow(inst, routing);
  NodeId best = -1;
  Rational best_value = 0;
  std::vector<NodeId> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId v : sorted) {
    auto it = flow.find(v);
    if (it != flow.end() && it->second > best_value) {
      best = v;
      best_value = it->second;
    }
  }
  return best;
}

inline FractionalRouting paths_through(const MatchingInstance& inst, const FractionalRouting& routing, NodeId v) {
  FractionalRouting out;
  for (const FlowPath& p : routing.paths) {
    if (p.value > 0 && path_contains_node(inst.graph(), inst.demand(p.demand).s, p.edges, v)) out.paths.push_back(p);
  }
  return out;
}

/// Routes through the node of S receiving the most of `to_set` (which must
/// deliver at least x(s)/alpha from every terminal s into S). Contract:
/// value >= floor(val/(36 alpha |S|)) at congestion <= 2.
inline IntegralRouting reroute_to_set(const MatchingInstance& inst, const FractionalRouting& routing,
                                      const ToSetFlow& to_set, const Rational& alpha, std::span<const NodeId> S) {
  const MultiGraph& g = inst.graph();
  if (alpha < 1) throw InvalidInput("reroute_to_set: alpha must be >= 1");
  if (S.empty()) throw InvalidInput("reroute_to_set: empty set");
  std::set<NodeId> target(S.begin(), S.end());
  const auto marg = marginals_of(routing, inst);
  std::map<NodeId, Rational> delivered;
  std::map<NodeId, Rational> received;
  std::vector<Rational> load(static_cast<std::size_t>(g.num_edges()));
  for (const SupplyPath& q : to_set.paths) {
    if (q.amount < 0) throw InvalidInput("reroute_to_set: negative flow");
    const NodeId end = walk_end(g, q.source, q.edges);
    if (!target.count(end)) throw InvalidInput("reroute_to_set: flow path does not end in the set");
    delivered[q.source] += q.amount;
    received[end] += q.amount;
    for (EdgeId e : q.edges) load[static_cast<std::size_t>(e)] += q.amount;
  }
  for (const Edge& e : g.edges()) {
    if (load[static_cast<std::size_t>(e.id)] > e.cap) throw InvalidInput("reroute_to_set: to-set flow overloads an edge");
  }
  for (const auto& [s, x] : marg) {
    if (delivered[s] < x / alpha) {
      throw InvalidInput("reroute_to_set: terminal " + std::to_string(s) + " sends less than x/alpha to the set");
    }
  }
  const Rational val = routing.value();
  IntegralRouting empty;
  empty.declared_congestion = Rational(2);
  NodeId v = -1;
  Rational most = 0;
  for (NodeId x : target) {
    if (received[x] > most) {
      most = received[x];
      v = x;
    }
  }
  if (v < 0) return empty;

  std::map<NodeId, std::vector<const SupplyPath*>> to_v;
  for (const SupplyPath& q : to_set.paths) {
    if (q.amount > 0 && walk_end(g, q.source, q.edges) == v) to_v[q.source].push_back(&q);
  }
  const auto z = routing.demand_totals(inst.num_demands());
  std::map<std::pair<NodeId, std::vector<EdgeId>>, Rational> merged;
  for (DemandId h = 0; h < inst.num_demands(); ++h) {
    const Rational& zh = z[static_cast<std::size_t>(h)];
    if (zh == 0) continue;
    const Demand& d = inst.demand(h);
    auto sent = [&](NodeId s) {
      Rational y = 0;
      for (const SupplyPath* q : to_v[s]) y += q->amount;
      return y;
    };
    const Rational ys = sent(d.s);
    const Rational yt = sent(d.t);
    if (ys == 0 && yt == 0) continue;
    const NodeId a = ys >= yt ? d.s : d.t;
    const NodeId b = a == d.s ? d.t : d.s;
    const Rational ya = std::max(ys, yt);
    const Rational y = std::min(ya, zh);
    const Rational factor = y / ya / 3;
    for (const SupplyPath* q : to_v[a]) {
      merged[{a, q->edges}] += q->amount * factor;
      for (const FlowPath& p : routing.paths) {
        if (p.demand != h || p.value == 0) continue;
        std::vector<EdgeId> walk = b == d.s ? p.edges : reversed(p.edges);
        walk.insert(walk.end(), q->edges.begin(), q->edges.end());
        merged[{b, std::move(walk)}] += p.value / zh * q->amount * factor;
      }
    }
  }
  std::vector<Half> halves;
  for (auto& [key, amount] : merged) halves.push_back({key.first, key.second, amount});
  IntegralRouting out = route_halves(inst, halves, v);
  const Rational floor_bound(floor_of(val / (36 * alpha * static_cast<long>(target.size()))));
  if (Rational(out.value()) < floor_bound) {
    throw GuaranteeViolation("reroute_to_set: routed " + std::to_string(out.value()) + " below contract " +
                             to_string(floor_bound));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

using OracleFn = std::function<IntegralRouting(const MatchingInstance&, const FractionalRouting&)>;

struct OracleProfile {
  std::string id;
  Rational alpha;
  Rational beta;
  OracleFn route;
};

/// Calls the oracle and checks its contract on the result.
inline IntegralRouting call_oracle(const OracleProfile& oracle, const MatchingInstance& inst,
                                   const FractionalRouting& routing) {
  IntegralRouting out = oracle.route(inst, routing);
  if (auto err = check_integral(out, inst, oracle.beta)) {
    throw GuaranteeViolation("oracle " + oracle.id + " returned an invalid routing: " + *err);
  }
  const Rational need(floor_of(routing.value() / oracle.alpha));
  if (Rational(out.value()) < need) {
    throw GuaranteeViolation("oracle " + oracle.id + " routed " + std::to_string(out.value()) + " < floor(" +
                             to_string(routing.value()) + "/" + to_string(oracle.alpha) + ")");
  }
  return out;
}

/// Oracle for graphs with at most q non-leaf nodes: routes through the node
/// carrying the most flow. alpha = 12q, beta = 2.
inline OracleProfile default_small_graph_oracle(int q) {
  if (q < 1) throw InvalidInput("small-graph oracle needs q >= 1");
  OracleProfile o;
  o.id = "small:" + std::to_string(q);
  o.alpha = Rational(12 * q);
  o.beta = Rational(2);
  o.route = [q](const MatchingInstance& inst, const FractionalRouting& routing) {
    const MultiGraph& g = inst.graph();
    if (core_node_count(g) > q) {
      throw InvalidInput("small-graph oracle: " + std::to_string(core_node_count(g)) + " non-leaf nodes exceed q=" +
                         std::to_string(q));
    }
    std::vector<NodeId> core;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (g.degree(v) != 1) core.push_back(v);
    }
    const NodeId v = best_node(inst, routing, core);
    if (v < 0) {
      IntegralRouting empty;
      empty.declared_congestion = Rational(2);
      return empty;
    }
    return route_through_node(inst, paths_through(inst, routing, v), v);
  };
  return o;
}

// ---------------------------------------------------------------------------
// Ledger

enum class Mode { kTreewidth, kGeneric };

inline const char* mode_name(Mode m) { return m == Mode::kTreewidth ? "treewidth" : "generic"; }

/// One recursion node of the rounding. Optional fields are present only for
/// the steps that produce them.
struct LedgerRecord {
  int id = -1;
  int parent = -1;
  std::string step;  // base, reroute, cut, lower-k, components, empty
  std::string shape;
  std::string mode;
  int k = 0;
  int p = 0;
  int nodes = 0;
  int demands = 0;
  Rational alpha;
  Rational beta;
  Rational value;          // fractional value entering the node (after flush)
  Rational flush_dropped;  // removed by the defensive flush filter
  Rational cut_dropped;    // removed because it crossed delta(U)
  std::optional<Rational> cut_capacity;
  std::optional<Rational> val_fu;
  std::optional<Rational> val_fu_reduced;
  std::optional<Rational> val_fubar;
  std::string arm;  // "degenerate", "leaf-reroute" or "fallback"
  int restarts = 0;
  int routed = 0;
  Rational congestion;
  Rational gamma;
  bool satisfied = true;
  std::optional<bool> charging_ok;
  std::optional<bool> conservation_ok;
  std::optional<Rational> base_bound;  // local bound of the base-case step
  std::optional<bool> base_bound_ok;
  std::string note;
};

struct GuaranteeLedger {
  std::vector<LedgerRecord> records;

  bool all_satisfied() const {
    return std::all_of(records.begin(), records.end(), [](const LedgerRecord& r) { return r.satisfied; });
  }
  bool invariants_hold() const {
    return std::all_of(records.begin(), records.end(), [](const LedgerRecord& r) {
      return r.charging_ok.value_or(true) && r.conservation_ok.value_or(true);
    });
  }
};

struct RoundingConfig {
  Mode mode = Mode::kTreewidth;
  int p = 1;
  OracleProfile oracle;  // used in generic mode
};

/// alpha used in the guarantee: 12(p+1) in treewidth mode, the oracle's alpha otherwise.
inline Rational guarantee_alpha(const RoundingConfig& cfg) {
  return cfg.mode == Mode::kTreewidth ? Rational(12 * (cfg.p + 1)) : cfg.oracle.alpha;
}

inline Rational congestion_bound(const RoundingConfig& cfg) {
  return cfg.mode == Mode::kTreewidth ? Rational(2) : cfg.oracle.beta + 3;
}

/// gamma = val / (216 alpha p^2 3^k).
inline Rational gamma_of(const Rational& val, const Rational& alpha, int p, int k) {
  mpz_class three_k;
  mpz_ui_pow_ui(three_k.get_mpz_t(), 3, static_cast<unsigned long>(std::max(k, 0)));
  return val / (Rational(216) * alpha * Rational(p) * Rational(p) * Rational(three_k));
}

// ---------------------------------------------------------------------------
// Base case

namespace detail {

inline IntegralRouting union_routings(std::vector<IntegralRouting> parts, const Rational& declared) {
  IntegralRouting out;
  out.declared_congestion = declared;
  for (auto& r : parts) {
    for (auto& p : r.paths) out.paths.push_back(std::move(p));
  }
  std::sort(out.paths.begin(), out.paths.end(), [](const RoutedPath& a, const RoutedPath& b) { return a.demand < b.demand; });
  return out;
}

/// The five-step star pipeline: move terminals out of the leaves, replace
/// every leaf graph by a sparsifier on its separator, call the oracle,
/// embed back and lift.
inline IntegralRouting generic_star(const MatchingInstance& inst, const FractionalRouting& f,
                                    const TreeDecomposition& d, const ShapeReport& shape, const RoundingConfig& cfg,
                                    LedgerRecord& rec) {
  const int center = shape.bags.front();
  const auto& X = d.bags[static_cast<std::size_t>(center)].nodes;
  std::set<NodeId> in_x(X.begin(), X.end());
  std::vector<int> leaves(shape.bags.begin() + 1, shape.bags.end());
  std::vector<std::vector<NodeId>> sep;
  std::set<NodeId> R;
  std::set<NodeId> interior;
  for (int b : leaves) {
    const auto& xb = d.bags[static_cast<std::size_t>(b)].nodes;
    std::vector<NodeId> s;
    std::set_intersection(xb.begin(), xb.end(), X.begin(), X.end(), std::back_inserter(s));
    R.insert(s.begin(), s.end());
    for (NodeId v : xb) {
      if (!in_x.count(v)) interior.insert(v);
    }
    sep.push_back(std::move(s));
  }
  const auto marg = marginals_of(f, inst);
  std::vector<NodeId> movers;
  for (const auto& [t, x] : marg) {
    if (interior.count(t)) movers.push_back(t);
  }
  const std::vector<NodeId> roots(R.begin(), R.end());
  MoveOutcome moved = move_terminals(inst, f, movers, roots);
  if (std::holds_alternative<CutCertificate>(moved)) {
    throw InvariantViolation("generic base case: flush flow cannot reach the separators");
  }
  MoveResult& mv = std::get<MoveResult>(moved);
  const MultiGraph& gm = mv.instance.graph();

  // Edge classes of the moved graph: -1 center, -2 added by the move, i >= 0 leaf i.
  std::vector<int> edge_class(static_cast<std::size_t>(gm.num_edges()), -2);
  for (EdgeId e = 0; e < mv.record.base_edges; ++e) {
    const Edge& ed = gm.edge(e);
    if (in_x.count(ed.u) && in_x.count(ed.v)) {
      edge_class[static_cast<std::size_t>(e)] = -1;
      continue;
    }
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto& xb = d.bags[static_cast<std::size_t>(leaves[i])].nodes;
      if (std::binary_search(xb.begin(), xb.end(), ed.u) && std::binary_search(xb.begin(), xb.end(), ed.v)) {
        edge_class[static_cast<std::size_t>(e)] = static_cast<int>(i);
        break;
      }
    }
    if (edge_class[static_cast<std::size_t>(e)] == -2) throw InvariantViolation("generic base case: uncovered edge");
  }

  // Leaf graphs and their sparsifiers.
  struct LeafGraph {
    std::vector<NodeId> nodes;  // local -> moved-graph node
    std::map<NodeId, NodeId> local;
    MultiGraph graph;
    std::vector<EdgeId> edge_map;  // local edge -> moved-graph edge
    Sparsifier sp;
    std::map<std::pair<int, int>, std::pair<std::int64_t, std::vector<std::int64_t>>> pair_flow;
  };
  std::vector<LeafGraph> lg(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    LeafGraph& L = lg[i];
    L.nodes = d.bags[static_cast<std::size_t>(leaves[i])].nodes;
    for (std::size_t j = 0; j < L.nodes.size(); ++j) L.local[L.nodes[j]] = static_cast<NodeId>(j);
    L.graph = MultiGraph(static_cast<int>(L.nodes.size()));
    for (EdgeId e = 0; e < mv.record.base_edges; ++e) {
      if (edge_class[static_cast<std::size_t>(e)] != static_cast<int>(i)) continue;
      L.graph.add_edge(L.local.at(gm.edge(e).u), L.local.at(gm.edge(e).v), gm.edge(e).cap);
      L.edge_map.push_back(e);
    }
    std::vector<NodeId> s_local;
    for (NodeId s : sep[i]) s_local.push_back(L.local.at(s));
    L.sp = build_sparsifier(L.graph, s_local);
  }

  // G'': the center, the moved leaves hung directly at r_i, and the F edges.
  MultiGraph g2(0);
  std::map<NodeId, NodeId> to2;
  for (NodeId x : X) to2[x] = g2.add_node();
  struct EdgeOrigin {
    int kind;  // 0 center, 1 moved leaf, 2 sparsifier edge
    EdgeId edge;  // moved-graph edge (kinds 0, 1) or H edge (kind 2)
    int leaf;     // leaf index for kind 2
  };
  std::vector<EdgeOrigin> origin2;
  std::map<EdgeId, EdgeId> center_to2;
  for (EdgeId e = 0; e < mv.record.base_edges; ++e) {
    if (edge_class[static_cast<std::size_t>(e)] != -1) continue;
    center_to2[e] = g2.add_edge(to2.at(gm.edge(e).u), to2.at(gm.edge(e).v), gm.edge(e).cap);
    origin2.push_back({0, e, -1});
  }
  std::map<EdgeId, EdgeId> leaf_to2;  // moved-graph leaf edge -> G'' edge
  for (const auto& [leaf_edge, leaf] : mv.record.leaf_edge) {
    const NodeId s = mv.record.origin.at(leaf);
    const Cluster& c = mv.record.clusters[static_cast<std::size_t>(mv.record.cluster_of.at(s))];
    const NodeId l2 = g2.add_node();
    to2[leaf] = l2;
    leaf_to2[leaf_edge] = g2.add_edge(l2, to2.at(c.exit_end), 1);
    origin2.push_back({1, leaf_edge, -1});
  }
  std::vector<std::vector<EdgeId>> f_to2(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const Sparsifier& sp = lg[i].sp;
    for (EdgeId he = 0; he < sp.h.num_edges(); ++he) {
      const NodeId a = lg[i].nodes[static_cast<std::size_t>(sp.terminals[static_cast<std::size_t>(sp.h.edge(he).u)])];
      const NodeId b = lg[i].nodes[static_cast<std::size_t>(sp.terminals[static_cast<std::size_t>(sp.h.edge(he).v)])];
      f_to2[i].push_back(g2.add_edge(to2.at(a), to2.at(b), 1));
      origin2.push_back({2, he, static_cast<int>(i)});
    }
  }
  const auto z = mv.routing.demand_totals(mv.instance.num_demands());
  std::vector<Demand> dem2;
  std::vector<DemandId> dem2_origin;
  std::vector<DemandId> dem2_of(static_cast<std::size_t>(mv.instance.num_demands()), -1);
  for (DemandId h = 0; h < mv.instance.num_demands(); ++h) {
    if (z[static_cast<std::size_t>(h)] == 0) continue;
    const Demand& dm = mv.instance.demand(h);
    if (!to2.count(dm.s) || !to2.count(dm.t)) {
      throw InvariantViolation("generic base case: positive demand with a terminal outside the center");
    }
    dem2_of[static_cast<std::size_t>(h)] = static_cast<DemandId>(dem2.size());
    dem2.push_back({to2.at(dm.s), to2.at(dm.t)});
    dem2_origin.push_back(h);
  }
  for (const Demand& dm : dem2) {
    for (NodeId t : {dm.s, dm.t}) {
      if (g2.degree(t) != 1) throw InvariantViolation("generic base case: terminal is not a leaf of the sparsified graph");
    }
  }
  const MatchingInstance inst2(g2, dem2);

  // Flow on G'': per-demand arc flows; leaf runs replaced by normalized
  // max-flows in the sparsifiers; everything scaled by 1/p^2.
  auto pair_flow = [&](std::size_t i, int a, int b) -> const std::pair<std::int64_t, std::vector<std::int64_t>>& {
    auto key = std::make_pair(a, b);
    auto it = lg[i].pair_flow.find(key);
    if (it != lg[i].pair_flow.end()) return it->second;
    const MultiGraph& h = lg[i].sp.h;
    detail::Dinic dinic(h.num_nodes());
    std::vector<int> arcs;
    for (const Edge& e : h.edges()) arcs.push_back(dinic.add_arc(e.u, e.v, e.cap, e.cap));
    const std::int64_t lambda = dinic.run(a, b);
    std::vector<std::int64_t> fl;
    for (int arc : arcs) fl.push_back(dinic.flow(arc));
    return lg[i].pair_flow.emplace(key, std::make_pair(lambda, std::move(fl))).first->second;
  };
  const Rational p2 = Rational(cfg.p) * Rational(cfg.p);
  std::vector<std::vector<Rational>> arc(dem2.size(), std::vector<Rational>(static_cast<std::size_t>(g2.num_edges())));
  for (const FlowPath& path : mv.routing.paths) {
    if (path.value == 0) continue;
    const DemandId h2 = dem2_of[static_cast<std::size_t>(path.demand)];
    auto& flow = arc[static_cast<std::size_t>(h2)];
    const auto nodes = walk_nodes(gm, mv.instance.demand(path.demand).s, path.edges);
    std::size_t i = 0;
    while (i < path.edges.size()) {
      const EdgeId e = path.edges[i];
      const int cls = edge_class[static_cast<std::size_t>(e)];
      const NodeId from = nodes[i];
      if (cls == -1) {
        const EdgeId e2 = center_to2.at(e);
        flow[static_cast<std::size_t>(e2)] += gm.edge(e).u == from ? path.value : -path.value;
        ++i;
      } else if (cls == -2) {
        if (auto it = leaf_to2.find(e); it != leaf_to2.end()) {
          // G'' leaf edge is (leaf, r): forward when leaving the leaf.
          const bool from_leaf = mv.record.origin.count(from) > 0;
          flow[static_cast<std::size_t>(it->second)] += from_leaf ? path.value : -path.value;
        }
        ++i;
      } else {
        std::size_t j = i;
        while (j < path.edges.size() && edge_class[static_cast<std::size_t>(path.edges[j])] == cls) ++j;
        const NodeId to = nodes[j];
        const LeafGraph& L = lg[static_cast<std::size_t>(cls)];
        const auto ta = std::lower_bound(L.sp.terminals.begin(), L.sp.terminals.end(), L.local.at(from));
        const auto tb = std::lower_bound(L.sp.terminals.begin(), L.sp.terminals.end(), L.local.at(to));
        if (ta == L.sp.terminals.end() || *ta != L.local.at(from) || tb == L.sp.terminals.end() ||
            *tb != L.local.at(to) || from == to) {
          throw InvariantViolation("generic base case: leaf segment does not join two separator nodes");
        }
        const auto& [lambda, fl] = pair_flow(static_cast<std::size_t>(cls), static_cast<int>(ta - L.sp.terminals.begin()),
                                             static_cast<int>(tb - L.sp.terminals.begin()));
        if (lambda == 0) throw InvariantViolation("generic base case: sparsifier disconnects a used pair");
        for (std::size_t he = 0; he < fl.size(); ++he) {
          if (fl[he] == 0) continue;
          flow[static_cast<std::size_t>(f_to2[static_cast<std::size_t>(cls)][he])] +=
              path.value * Rational(fl[he]) / Rational(lambda);
        }
        i = j;
      }
    }
  }
  FractionalRouting f2;
  for (std::size_t h2 = 0; h2 < dem2.size(); ++h2) {
    for (Rational& x : arc[h2]) x /= p2;
    for (auto& [edges, amount] : decompose_rational_flow(g2, arc[h2], dem2[h2].s, dem2[h2].t)) {
      f2.paths.push_back({static_cast<DemandId>(h2), std::move(edges), amount});
    }
  }
  if (auto err = check_fractional(f2, inst2)) throw InvariantViolation("generic base case: sparsified flow: " + *err);
  if (f2.value() * p2 != mv.routing.value()) {
    throw InvariantViolation("generic base case: sparsified flow lost value");
  }

  IntegralRouting r2 = call_oracle(cfg.oracle, inst2, f2);

  // Keep paths that touch each pendant star and each F edge at most once.
  std::set<int> used_cluster;
  std::set<EdgeId> used_f;
  IntegralRouting rm;
  for (const RoutedPath& p : r2.paths) {
    std::set<int> cl;
    std::set<EdgeId> fe;
    for (EdgeId e : p.edges) {
      const EdgeOrigin& o = origin2[static_cast<std::size_t>(e)];
      if (o.kind == 1) {
        cl.insert(mv.record.cluster_of.at(mv.record.origin.at(mv.record.leaf_edge.at(o.edge))));
      } else if (o.kind == 2) {
        fe.insert(e);
      }
    }
    const bool clash = std::any_of(cl.begin(), cl.end(), [&](int c) { return used_cluster.count(c) > 0; }) ||
                       std::any_of(fe.begin(), fe.end(), [&](EdgeId e) { return used_f.count(e) > 0; });
    if (clash) continue;
    used_cluster.insert(cl.begin(), cl.end());
    used_f.insert(fe.begin(), fe.end());
    // Map the path back into the moved graph.
    const DemandId h = dem2_origin[static_cast<std::size_t>(p.demand)];
    const auto nodes2 = walk_nodes(g2, dem2[static_cast<std::size_t>(p.demand)].s, p.edges);
    std::vector<EdgeId> walk;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      const EdgeOrigin& o = origin2[static_cast<std::size_t>(p.edges[i])];
      if (o.kind == 0) {
        walk.push_back(o.edge);
      } else if (o.kind == 1) {
        const NodeId leaf = mv.record.leaf_edge.at(o.edge);
        const int ci = mv.record.cluster_of.at(mv.record.origin.at(leaf));
        const EdgeId star = mv.record.star_edge[static_cast<std::size_t>(ci)];
        const bool from_leaf = nodes2[i] == to2.at(leaf);
        if (from_leaf) {
          walk.push_back(o.edge);
          walk.push_back(star);
        } else {
          walk.push_back(star);
          walk.push_back(o.edge);
        }
      } else {
        const LeafGraph& L = lg[static_cast<std::size_t>(o.leaf)];
        const Edge& he = L.sp.h.edge(o.edge);
        const NodeId hu = to2.at(L.nodes[static_cast<std::size_t>(L.sp.terminals[static_cast<std::size_t>(he.u)])]);
        std::vector<EdgeId> emb;
        for (EdgeId le : L.sp.embedded[static_cast<std::size_t>(o.edge)]) emb.push_back(L.edge_map[static_cast<std::size_t>(le)]);
        if (nodes2[i] != hu) emb = reversed(std::move(emb));
        walk.insert(walk.end(), emb.begin(), emb.end());
      }
    }
    rm.paths.push_back({h, shortcut_walk(gm, mv.instance.demand(h).s, walk)});
  }
  rm.declared_congestion = cfg.oracle.beta + 1;
  if (auto err = check_integral(rm, mv.instance, cfg.oracle.beta + 1)) {
    throw InvariantViolation("generic base case: embedded routing: " + *err);
  }
  IntegralRouting out = lift_routing(mv.record, inst, mv.instance, rm);
  out.declared_congestion = cfg.oracle.beta + 3;
  rec.note = "moved " + std::to_string(mv.record.moved.size()) + " terminals into " +
             std::to_string(mv.record.clusters.size()) + " clusters; oracle routed " + std::to_string(r2.value()) +
             ", kept " + std::to_string(rm.value());
  rec.base_bound = Rational(floor_of(f.value() / (5 * cfg.oracle.alpha * p2)));
  return out;
}

}  // namespace detail

/// Routes a flush flow on a decomposition of one of the base shapes.
inline IntegralRouting base_case(const MatchingInstance& inst, const FractionalRouting& f, const TreeDecomposition& d,
                                 const RoundingConfig& cfg, LedgerRecord* rec_out = nullptr) {
  LedgerRecord scratch;
  LedgerRecord& rec = rec_out ? *rec_out : scratch;
  const ShapeReport shape = classify_shape(d);
  const Rational val = f.value();
  IntegralRouting out;
  out.declared_congestion = congestion_bound(cfg);
  if (val == 0) return out;
  switch (shape.shape) {
    case Shape::kSingleGraph: {
      const OracleProfile oracle = cfg.mode == Mode::kTreewidth ? default_small_graph_oracle(cfg.p + 1) : cfg.oracle;
      out = call_oracle(oracle, inst, f);
      rec.base_bound = Rational(floor_of(val / oracle.alpha));
      break;
    }
    case Shape::kDegeneratePair:
    case Shape::kDegenerateStar: {
      if (shape.shape == Shape::kDegenerateStar && cfg.mode == Mode::kGeneric) {
        out = detail::generic_star(inst, f, d, shape, cfg, rec);
        break;
      }
      const std::vector<NodeId> candidates = shape.shape == Shape::kDegeneratePair
                                                 ? d.separator(0)
                                                 : d.bags[static_cast<std::size_t>(shape.bags.front())].nodes;
      const NodeId v = best_node(inst, f, candidates);
      if (v >= 0) out = route_through_node(inst, paths_through(inst, f, v), v);
      const Rational denom = shape.shape == Shape::kDegeneratePair ? Rational(12 * static_cast<long>(candidates.size()))
                                                                   : Rational(12 * (cfg.p + 1));
      rec.base_bound = Rational(floor_of(val / denom));
      break;
    }
    default:
      throw InvalidInput(std::string("base_case: shape ") + shape_name(shape.shape) + " is not a base shape");
  }
  out.declared_congestion = congestion_bound(cfg);
  if (auto err = check_integral(out, inst, congestion_bound(cfg))) throw InvariantViolation("base_case: " + *err);
  rec.base_bound_ok = Rational(out.value()) >= *rec.base_bound;
  return out;
}

// ---------------------------------------------------------------------------
// Degenerate-or-route

struct DegenerateOutcome {
  int arm = 1;  // 1: reduced decomposition, 2: routed inside new leaves, 0: restart
  Contraction contraction;
  FractionalRouting reduced;  // f'_U
  IntegralRouting routing;    // arm 2
  std::vector<NodeId> restart_nodes;  // arm 0, in instance coordinates
};

/// Contracts the size-k subtrees into degenerate leaves and keeps the flush
/// part f'_U. If it retains at least half the value, returns it (arm 1).
/// Otherwise reroutes the dropped flow inside each new leaf to its
/// separator (arm 2), or reports a violating set found inside a leaf
/// (restart).
inline DegenerateOutcome degenerate_or_route(const MatchingInstance& inst, const FractionalRouting& f,
                                             const TreeDecomposition& d, int k) {
  if (k < 1) throw InvalidInput("degenerate_or_route: k must be >= 1");
  DegenerateOutcome out;
  out.contraction = contract_to_degenerate(d, k);
  const auto rooting = out.contraction.decomposition.rooting();
  FractionalRouting dropped;
  for (const FlowPath& p : f.paths) {
    if (is_flush_path(p, out.contraction.decomposition, rooting, inst)) {
      out.reduced.paths.push_back(p);
    } else {
      dropped.paths.push_back(p);
    }
  }
  if (2 * out.reduced.value() >= f.value()) {
    out.arm = 1;
    return out;
  }
  out.arm = 2;
  out.routing.declared_congestion = Rational(2);
  const MultiGraph& g = inst.graph();
  for (const NewLeaf& leaf : out.contraction.leaves) {
    std::set<NodeId> sep(leaf.separator.begin(), leaf.separator.end());
    const auto sub = induce(inst, leaf.nodes, [&](EdgeId e) {
      return !(sep.count(g.edge(e).u) && sep.count(g.edge(e).v));
    });
    FractionalRouting inside;
    for (const FlowPath& p : dropped.paths) {
      const auto nodes = walk_nodes(g, inst.demand(p.demand).s, p.edges);
      if (std::none_of(nodes.begin(), nodes.end(), [&](NodeId x) { return sep.count(x) > 0; })) {
        inside.paths.push_back(p);
      }
    }
    FractionalRouting fl = restrict_routing(sub, inside);
    fl.prune();
    if (fl.paths.empty()) continue;
    std::vector<NodeId> targets;
    for (NodeId s : leaf.separator) targets.push_back(sub.node_from_parent[static_cast<std::size_t>(s)]);
    const auto marg = marginals_of(fl, sub.instance);
    const SupplyOutcome res = route_supplies_or_cut(sub.instance.graph(), marg, targets, Rational(1, 6));
    if (const auto* cut = std::get_if<CutCertificate>(&res)) {
      out.arm = 0;
      for (NodeId x : cut->nodes) out.restart_nodes.push_back(sub.node_to_parent[static_cast<std::size_t>(x)]);
      return out;
    }
    const IntegralRouting r = reroute_to_set(sub.instance, fl, std::get<ToSetFlow>(res), Rational(6), targets);
    for (RoutedPath& p : lift_to_parent(sub, r).paths) out.routing.paths.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Main recursion

namespace detail {

class KsumEngine {
 public:
  explicit KsumEngine(RoundingConfig cfg) : cfg_(std::move(cfg)) {}

  IntegralRouting solve(const MatchingInstance& inst, FractionalRouting f, TreeDecomposition d, int parent) {
    const std::size_t idx = ledger_.records.size();
    ledger_.records.emplace_back();
    {
      LedgerRecord& rec = ledger_.records[idx];
      rec.id = static_cast<int>(idx);
      rec.parent = parent;
      rec.mode = mode_name(cfg_.mode);
      rec.k = d.k;
      rec.p = cfg_.p;
      rec.nodes = inst.graph().num_nodes();
      rec.demands = inst.num_demands();
      rec.alpha = guarantee_alpha(cfg_);
      rec.beta = congestion_bound(cfg_);
    }
    f.prune();
    FlushResult flushed = flush_filter(f, d, inst);
    f = std::move(flushed.routing);
    const Rational val = f.value();
    {
      LedgerRecord& rec = ledger_.records[idx];
      rec.flush_dropped = flushed.dropped;
      rec.value = val;
      rec.gamma = gamma_of(val, rec.alpha, cfg_.p, d.k);
    }
    IntegralRouting out = dispatch(inst, f, d, idx);
    out.declared_congestion = congestion_bound(cfg_);
    if (auto err = check_integral(out, inst, congestion_bound(cfg_))) {
      throw InvariantViolation("ksum_round node " + std::to_string(idx) + ": " + *err);
    }
    LedgerRecord& rec = ledger_.records[idx];
    rec.routed = out.value();
    rec.congestion = congestion_of(out, inst.graph());
    rec.satisfied = Rational(rec.routed) >= Rational(floor_of(rec.gamma));
    return out;
  }

  GuaranteeLedger take_ledger() { return std::move(ledger_); }

 private:
  LedgerRecord& rec(std::size_t idx) { return ledger_.records[idx]; }

  IntegralRouting empty() const {
    IntegralRouting r;
    r.declared_congestion = congestion_bound(cfg_);
    return r;
  }

  IntegralRouting child(const SubInstance& sub, const FractionalRouting& f, const TreeDecomposition& d_parent,
                        const MultiGraph& g, std::span<const NodeId> nodes, int k, std::size_t idx) {
    TreeDecomposition dc = relabel(restrict_to(d_parent, g, nodes), sub.node_from_parent);
    dc.k = k;
    return lift_to_parent(sub, solve(sub.instance, restrict_routing(sub, f), std::move(dc), static_cast<int>(idx)));
  }

  IntegralRouting dispatch(const MatchingInstance& inst, const FractionalRouting& f, const TreeDecomposition& d,
                           std::size_t idx) {
    const MultiGraph& g = inst.graph();
    if (f.value() == 0) {
      rec(idx).step = "empty";
      return empty();
    }
    const auto comps = induced_components(g, all_nodes(g));
    if (comps.size() > 1) {
      rec(idx).step = "components";
      std::vector<IntegralRouting> parts;
      for (const auto& c : comps) {
        const SubInstance sub = induce(inst, c);
        parts.push_back(child(sub, f, d, g, c, d.k, idx));
      }
      return union_routings(std::move(parts), congestion_bound(cfg_));
    }
    const ShapeReport shape = classify_shape(d);
    rec(idx).shape = shape_name(shape.shape);
    switch (shape.shape) {
      case Shape::kSingleGraph:
      case Shape::kDegeneratePair:
      case Shape::kDegenerateStar: {
        rec(idx).step = "base";
        LedgerRecord local;
        IntegralRouting r = base_case(inst, f, d, cfg_, &local);
        rec(idx).base_bound = local.base_bound;
        rec(idx).base_bound_ok = local.base_bound_ok;
        rec(idx).note = local.note;
        return r;
      }
      case Shape::kGeneral: {
        if (d.k == 0) throw InvariantViolation("ksum_round: k = 0 on a connected graph that is not a base shape");
        rec(idx).step = "lower-k";
        TreeDecomposition lower = d;
        lower.k = d.k - 1;
        return solve(inst, f, std::move(lower), static_cast<int>(idx));
      }
      case Shape::kHasWidthKEdge:
        return cut_step(inst, f, d, shape.tree_edge, idx);
    }
    throw InvariantViolation("ksum_round: unknown shape");
  }

  IntegralRouting cut_step(const MatchingInstance& inst, const FractionalRouting& f, const TreeDecomposition& d,
                           int tree_edge, std::size_t idx) {
    const MultiGraph& g = inst.graph();
    const std::vector<NodeId> ve = d.separator(tree_edge);
    const auto marg = marginals_of(f, inst);
    const Rational sixth(1, 6);
    SupplyOutcome res = route_supplies_or_cut(g, marg, ve, sixth);
    if (auto* flow = std::get_if<ToSetFlow>(&res)) {
      rec(idx).step = "reroute";
      return reroute_to_set(inst, f, *flow, Rational(6), ve);
    }
    rec(idx).step = "cut";
    std::vector<NodeId> U = centralize_cut(g, std::get<CutCertificate>(res).nodes, marg, sixth).front().nodes;
    while (true) {
      const CutCertificate cert = make_certificate(g, U, marg, sixth);
      std::vector<char> in_u(static_cast<std::size_t>(g.num_nodes()), 0);
      for (NodeId x : U) in_u[static_cast<std::size_t>(x)] = 1;
      std::vector<NodeId> rest;
      for (NodeId x = 0; x < g.num_nodes(); ++x) {
        if (!in_u[static_cast<std::size_t>(x)]) rest.push_back(x);
      }
      FractionalRouting f_in;
      FractionalRouting f_out;
      Rational crossing = 0;
      for (const FlowPath& p : f.paths) {
        const auto nodes = walk_nodes(g, inst.demand(p.demand).s, p.edges);
        const bool all_in = std::all_of(nodes.begin(), nodes.end(), [&](NodeId x) { return in_u[static_cast<std::size_t>(x)]; });
        const bool all_out = std::none_of(nodes.begin(), nodes.end(), [&](NodeId x) { return in_u[static_cast<std::size_t>(x)]; });
        if (all_in) {
          f_in.paths.push_back(p);
        } else if (all_out) {
          f_out.paths.push_back(p);
        } else {
          crossing += p.value;
        }
      }
      const Rational val_u = f_in.value();
      const Rational val_ubar = f_out.value();
      {
        LedgerRecord& r = rec(idx);
        r.cut_capacity = cert.capacity;
        r.cut_dropped = crossing;
        r.val_fu = val_u;
        r.val_fubar = val_ubar;
        r.conservation_ok = val_u + val_ubar + crossing == f.value() && crossing <= cert.capacity;
      }
      const SubInstance sub_u = induce(inst, U);
      TreeDecomposition d_u = relabel(restrict_to(d, g, U), sub_u.node_from_parent);
      FractionalRouting fu = restrict_routing(sub_u, f_in);
      FlushResult fu_flush = flush_filter(fu, d_u, sub_u.instance);
      rec(idx).flush_dropped += fu_flush.dropped;
      DegenerateOutcome dg = degenerate_or_route(sub_u.instance, fu_flush.routing, d_u, d.k);
      if (dg.arm == 0) {
        std::vector<NodeId> w;
        for (NodeId x : dg.restart_nodes) w.push_back(sub_u.node_to_parent[static_cast<std::size_t>(x)]);
        std::optional<std::vector<NodeId>> next;
        for (auto& comp : induced_components(g, w)) {
          if (make_certificate(g, comp, marg, sixth).violated()) {
            next = std::move(comp);
            break;
          }
        }
        if (next && next->size() < U.size()) {
          U = std::move(*next);
          ++rec(idx).restarts;
          continue;
        }
        dg.arm = -1;  // no violating set in this graph: fall back to the reduced decomposition
      }
      rec(idx).val_fu_reduced = dg.reduced.value();
      std::vector<IntegralRouting> parts;
      if (dg.arm == 2) {
        rec(idx).arm = "leaf-reroute";
        parts.push_back(lift_to_parent(sub_u, dg.routing));
      } else {
        rec(idx).arm = dg.arm == 1 ? "degenerate" : "fallback";
        rec(idx).charging_ok = 2 * cert.capacity <= val_u;
        TreeDecomposition reduced = dg.contraction.decomposition;
        parts.push_back(lift_to_parent(sub_u, solve(sub_u.instance, dg.reduced, std::move(reduced), static_cast<int>(idx))));
      }
      for (const auto& comp : induced_components(g, rest)) {
        const SubInstance sub = induce(inst, comp);
        parts.push_back(child(sub, f_out, d, g, comp, d.k, idx));
      }
      return union_routings(std::move(parts), congestion_bound(cfg_));
    }
  }

  RoundingConfig cfg_;
  GuaranteeLedger ledger_;
};

}  // namespace detail

struct RoundingResult {
  IntegralRouting routing;
  GuaranteeLedger ledger;
};

/// Rounds a flow that is flush with a (k,p)-decomposition `d`. The routing
/// has congestion <= 2 (treewidth mode) or <= beta + 3 (generic mode); the
/// ledger records the value guarantee at every recursion node.
inline RoundingResult ksum_round(const MatchingInstance& inst, const FractionalRouting& f, const TreeDecomposition& d,
                                 const RoundingConfig& cfg) {
  if (cfg.p < 1) throw InvalidInput("ksum_round: p must be >= 1");
  if (cfg.mode == Mode::kGeneric && !cfg.oracle.route) throw InvalidInput("ksum_round: generic mode needs an oracle");
  if (d.k > cfg.p || d.p > cfg.p) throw InvalidInput("ksum_round: decomposition parameters exceed p");
  const ValidationReport rep = validate(d, inst.graph());
  if (!rep.ok()) {
    const Violation& v = rep.violations.front();
    throw InvalidInput("ksum_round: invalid decomposition (" + v.property + ": " + v.detail + ")");
  }
  validate_fractional(f, inst);
  detail::KsumEngine engine(cfg);
  RoundingResult out;
  out.routing = engine.solve(inst, f, d, -1);
  out.ledger = engine.take_ledger();
  return out;
}

}  // namespace medp
