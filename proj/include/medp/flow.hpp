#pragma once

// Integral max-flow (Dinic), flow decomposition, and the exact
// supply-to-set feasibility test with its cut certificate.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"

namespace medp {

namespace detail {

/// Level-graph blocking-flow max-flow on a directed arc list.
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<std::size_t>(n)) {}

  int num_nodes() const { return static_cast<int>(head_.size()); }

  /// Adds arc from->to with `cap` and its reverse with `rev_cap`; returns the
  /// forward arc index (the reverse is index ^ 1).
  int add_arc(int from, int to, std::int64_t cap, std::int64_t rev_cap = 0) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, cap});
    arcs_.push_back({from, rev_cap, rev_cap});
    head_[static_cast<std::size_t>(from)].push_back(id);
    head_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  std::int64_t run(int source, int sink) {
    std::int64_t total = 0;
    while (build_levels(source, sink)) {
      next_.assign(head_.size(), 0);
      while (std::int64_t pushed = augment(source, sink, std::numeric_limits<std::int64_t>::max())) {
        total += pushed;
      }
    }
    return total;
  }

  /// Net flow pushed along the forward arc `id` (negative when the reverse
  /// direction carries more).
  std::int64_t flow(int id) const {
    const Arc& a = arcs_[static_cast<std::size_t>(id)];
    return a.original - a.residual;
  }

  /// Nodes reachable from `source` in the residual network.
  std::vector<char> residual_reachable(int source) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> stack{source};
    seen[static_cast<std::size_t>(source)] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int id : head_[static_cast<std::size_t>(v)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(id)];
        if (a.residual > 0 && !seen[static_cast<std::size_t>(a.to)]) {
          seen[static_cast<std::size_t>(a.to)] = 1;
          stack.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    std::int64_t residual;
    std::int64_t original;
  };

  bool build_levels(int source, int sink) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int id : head_[static_cast<std::size_t>(v)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(id)];
        if (a.residual > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  std::int64_t augment(int v, int sink, std::int64_t limit) {
    if (v == sink) return limit;
    auto& it = next_[static_cast<std::size_t>(v)];
    const auto& out = head_[static_cast<std::size_t>(v)];
    for (; it < out.size(); ++it) {
      const int id = out[it];
      Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (a.residual <= 0 || level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(v)] + 1) {
        continue;
      }
      const std::int64_t pushed = augment(a.to, sink, std::min(limit, a.residual));
      if (pushed > 0) {
        a.residual -= pushed;
        arcs_[static_cast<std::size_t>(id ^ 1)].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace detail

/// Pairwise min-cut value between two nodes, counting capacities.
inline std::int64_t local_edge_connectivity(const MultiGraph& g, NodeId a, NodeId b) {
  if (a == b) throw InvalidInput("local_edge_connectivity of a node with itself");
  detail::Dinic dinic(g.num_nodes());
  for (const Edge& e : g.edges()) dinic.add_arc(e.u, e.v, e.cap, e.cap);
  return dinic.run(a, b);
}

// ---------------------------------------------------------------------------
// Flow networks with super-source and super-sink

/// A base graph with rational supplies attached at some nodes and a sink set.
/// All supplies and capacities are scaled by `scale` (the LCM of supply
/// denominators) so that the max-flow runs on integers.
struct FlowNetwork {
  MultiGraph graph;
  std::vector<std::pair<NodeId, Rational>> sources;
  std::vector<NodeId> sinks;
  mpz_class scale = 1;

  static FlowNetwork make(MultiGraph graph, std::vector<std::pair<NodeId, Rational>> sources,
                          std::vector<NodeId> sinks) {
    FlowNetwork net{std::move(graph), std::move(sources), std::move(sinks), 1};
    for (const auto& [v, s] : net.sources) {
      if (!net.graph.has_node(v)) throw InvalidInput("supply at unknown node " + std::to_string(v));
      if (s < 0) throw InvalidInput("negative supply");
      net.scale = lcm_of(net.scale, s.get_den());
    }
    for (NodeId t : net.sinks) {
      if (!net.graph.has_node(t)) throw InvalidInput("sink at unknown node " + std::to_string(t));
    }
    return net;
  }

  std::int64_t scaled_supply(std::size_t i) const {
    const Rational s = sources.at(i).second * Rational(scale);
    return to_int64(s.get_num());
  }
  std::int64_t scaled_capacity(EdgeId e) const { return to_int64(mpz_class(graph.edge(e).cap) * scale); }
};

struct MaxFlowResult {
  std::int64_t value = 0;               // in scaled units
  std::vector<std::int64_t> edge_flow;  // signed, positive means u -> v
  std::vector<std::int64_t> source_flow;
  std::vector<char> source_side;  // graph nodes on the residual-reachable side
};

/// Integral max-flow from the super-source to the super-sink. The returned
/// cut is the minimal source side (residual reachability).
inline MaxFlowResult max_flow(const FlowNetwork& net) {
  const MultiGraph& g = net.graph;
  const int n = g.num_nodes();
  const int src = n;
  const int snk = n + 1;
  detail::Dinic dinic(n + 2);
  std::int64_t finite = 0;
  std::vector<int> edge_arc;
  for (const Edge& e : g.edges()) {
    const std::int64_t c = net.scaled_capacity(e.id);
    finite += c;
    edge_arc.push_back(dinic.add_arc(e.u, e.v, c, c));
  }
  std::vector<int> source_arc;
  for (std::size_t i = 0; i < net.sources.size(); ++i) {
    const std::int64_t s = net.scaled_supply(i);
    finite += s;
    source_arc.push_back(dinic.add_arc(src, net.sources[i].first, s));
  }
  const std::int64_t unbounded = finite + 1;
  std::set<NodeId> sink_set(net.sinks.begin(), net.sinks.end());
  for (NodeId t : sink_set) dinic.add_arc(t, snk, unbounded);

  MaxFlowResult r;
  r.value = dinic.run(src, snk);
  for (int id : edge_arc) r.edge_flow.push_back(dinic.flow(id));
  for (int id : source_arc) r.source_flow.push_back(dinic.flow(id));
  const auto reach = dinic.residual_reachable(src);
  r.source_side.assign(reach.begin(), reach.begin() + n);
  return r;
}

struct FlowPiece {
  NodeId start = -1;
  std::vector<EdgeId> edges;
  std::int64_t amount = 0;
};

/// Decomposes a conservation-respecting integral flow into source-to-sink
/// paths. Circulations are discarded.
inline std::vector<FlowPiece> decompose_flow(const MaxFlowResult& flow, const FlowNetwork& net) {
  const MultiGraph& g = net.graph;
  const int n = g.num_nodes();
  if (static_cast<int>(flow.edge_flow.size()) != g.num_edges() || flow.source_flow.size() != net.sources.size()) {
    throw InvalidInput("decompose_flow: flow does not match network");
  }
  // Residual amounts per directed use of each edge, plus injections and absorptions.
  std::vector<std::int64_t> inject(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < net.sources.size(); ++i) {
    if (flow.source_flow[i] < 0 || flow.source_flow[i] > net.scaled_supply(i)) {
      throw InvalidInput("decompose_flow: source flow out of range");
    }
    inject[static_cast<std::size_t>(net.sources[i].first)] += flow.source_flow[i];
  }
  std::vector<std::int64_t> net_in(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    const std::int64_t f = flow.edge_flow[static_cast<std::size_t>(e.id)];
    if (f > net.scaled_capacity(e.id) || -f > net.scaled_capacity(e.id)) {
      throw InvalidInput("decompose_flow: edge " + std::to_string(e.id) + " over capacity");
    }
    net_in[static_cast<std::size_t>(e.v)] += f;
    net_in[static_cast<std::size_t>(e.u)] -= f;
  }
  std::vector<char> is_sink(static_cast<std::size_t>(n), 0);
  for (NodeId t : net.sinks) is_sink[static_cast<std::size_t>(t)] = 1;
  std::vector<std::int64_t> absorb(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) {
    const std::int64_t excess = net_in[static_cast<std::size_t>(v)] + inject[static_cast<std::size_t>(v)];
    if (is_sink[static_cast<std::size_t>(v)] && excess >= 0) {
      absorb[static_cast<std::size_t>(v)] = excess;
    } else if (excess != 0) {
      throw InvalidInput("decompose_flow: flow does not conserve at node " + std::to_string(v));
    }
  }

  std::vector<std::int64_t> rem(flow.edge_flow.begin(), flow.edge_flow.end());
  std::vector<FlowPiece> pieces;
  auto outgoing = [&](NodeId v) -> std::optional<EdgeId> {
    for (EdgeId id : g.incident(v)) {
      const Edge& e = g.edge(id);
      const std::int64_t f = rem[static_cast<std::size_t>(id)];
      if ((e.u == v && f > 0) || (e.v == v && f < 0)) return id;
    }
    return std::nullopt;
  };
  auto amount_on = [&](EdgeId id) { return std::abs(rem[static_cast<std::size_t>(id)]); };
  auto consume = [&](EdgeId id, NodeId from, std::int64_t a) {
    rem[static_cast<std::size_t>(id)] += g.edge(id).u == from ? -a : a;
  };

  for (NodeId start = 0; start < n; ++start) {
    while (inject[static_cast<std::size_t>(start)] > 0) {
      std::vector<NodeId> nodes{start};
      std::vector<EdgeId> edges;
      std::map<NodeId, std::size_t> pos{{start, 0}};
      while (true) {
        const NodeId at = nodes.back();
        if (absorb[static_cast<std::size_t>(at)] > 0) break;
        const auto next = outgoing(at);
        if (!next) throw InvariantViolation("decompose_flow: dead end at node " + std::to_string(at));
        const NodeId to = g.edge(*next).other(at);
        auto it = pos.find(to);
        if (it == pos.end()) {
          edges.push_back(*next);
          nodes.push_back(to);
          pos[to] = nodes.size() - 1;
          continue;
        }
        // Cycle: cancel it and rewind the walk to `to`.
        std::vector<EdgeId> cyc(edges.begin() + static_cast<std::ptrdiff_t>(it->second), edges.end());
        cyc.push_back(*next);
        std::int64_t a = std::numeric_limits<std::int64_t>::max();
        for (EdgeId id : cyc) a = std::min(a, amount_on(id));
        NodeId from = to;
        for (EdgeId id : cyc) {
          consume(id, from, a);
          from = g.edge(id).other(from);
        }
        for (std::size_t i = it->second + 1; i < nodes.size(); ++i) pos.erase(nodes[i]);
        nodes.resize(it->second + 1);
        edges.resize(it->second);
      }
      std::int64_t a = std::min(inject[static_cast<std::size_t>(start)], absorb[static_cast<std::size_t>(nodes.back())]);
      for (EdgeId id : edges) a = std::min(a, amount_on(id));
      NodeId from = start;
      for (EdgeId id : edges) {
        consume(id, from, a);
        from = g.edge(id).other(from);
      }
      inject[static_cast<std::size_t>(start)] -= a;
      absorb[static_cast<std::size_t>(nodes.back())] -= a;
      pieces.push_back({start, edges, a});
    }
  }
  return pieces;
}

// ---------------------------------------------------------------------------
// Supply-to-set routing with cut certificates

/// A node set U witnessing c(delta(U)) < slack * supply(U).
struct CutCertificate {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> boundary;
  Rational capacity;  // c(U)
  Rational supply;    // total supply inside U, unscaled
  Rational slack = 1;

  bool violated() const { return capacity < slack * supply; }
};

inline std::vector<EdgeId> boundary_of(const MultiGraph& g, std::span<const NodeId> nodes) {
  std::vector<char> in(static_cast<std::size_t>(g.num_nodes()), 0);
  for (NodeId v : nodes) in[static_cast<std::size_t>(v)] = 1;
  std::vector<EdgeId> out;
  for (const Edge& e : g.edges()) {
    if (in[static_cast<std::size_t>(e.u)] != in[static_cast<std::size_t>(e.v)]) out.push_back(e.id);
  }
  return out;
}

inline CutCertificate make_certificate(const MultiGraph& g, std::vector<NodeId> nodes,
                                       const std::map<NodeId, Rational>& supplies, const Rational& slack) {
  std::sort(nodes.begin(), nodes.end());
  CutCertificate cert;
  cert.boundary = boundary_of(g, nodes);
  cert.capacity = 0;
  for (EdgeId e : cert.boundary) cert.capacity += g.edge(e).cap;
  cert.supply = 0;
  for (NodeId v : nodes) {
    if (auto it = supplies.find(v); it != supplies.end()) cert.supply += it->second;
  }
  cert.slack = slack;
  cert.nodes = std::move(nodes);
  return cert;
}

/// Recounts boundary, capacity and supply and checks the violated inequality.
inline bool verify_certificate(const CutCertificate& cert, const MultiGraph& g,
                               const std::map<NodeId, Rational>& supplies) {
  const CutCertificate again = make_certificate(g, cert.nodes, supplies, cert.slack);
  return again.boundary == cert.boundary && again.capacity == cert.capacity && again.supply == cert.supply &&
         again.violated();
}

struct SupplyPath {
  NodeId source = -1;
  std::vector<EdgeId> edges;
  Rational amount;
};

/// Flow delivering slack * supply(v) from every supplied node to the targets.
struct ToSetFlow {
  std::vector<SupplyPath> paths;
  Rational slack = 1;
};

using SupplyOutcome = std::variant<ToSetFlow, CutCertificate>;

/// Either routes slack * supply(v) from every node to `targets`
/// simultaneously, or returns U disjoint from the targets with
/// c(U) < slack * supply(U).
inline SupplyOutcome route_supplies_or_cut(const MultiGraph& g, const std::map<NodeId, Rational>& supplies,
                                           std::span<const NodeId> targets, const Rational& slack) {
  if (targets.empty()) throw InvalidInput("route_supplies_or_cut: empty target set");
  if (slack <= 0) throw InvalidInput("route_supplies_or_cut: slack must be positive");
  std::vector<std::pair<NodeId, Rational>> sources;
  for (const auto& [v, s] : supplies) {
    if (s < 0) throw InvalidInput("route_supplies_or_cut: negative supply");
    if (s > 0) sources.emplace_back(v, s * slack);
  }
  const FlowNetwork net = FlowNetwork::make(g, sources, {targets.begin(), targets.end()});
  const MaxFlowResult mf = max_flow(net);
  std::int64_t wanted = 0;
  for (std::size_t i = 0; i < net.sources.size(); ++i) wanted += net.scaled_supply(i);
  if (mf.value == wanted) {
    ToSetFlow out;
    out.slack = slack;
    const Rational scale(net.scale);
    for (FlowPiece& piece : decompose_flow(mf, net)) {
      out.paths.push_back({piece.start, std::move(piece.edges), Rational(piece.amount) / scale});
    }
    return out;
  }
  std::vector<NodeId> side;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (mf.source_side[static_cast<std::size_t>(v)]) side.push_back(v);
  }
  CutCertificate cert = make_certificate(g, side, supplies, slack);
  if (!cert.violated()) throw InvariantViolation("route_supplies_or_cut: min cut does not certify infeasibility");
  return cert;
}

/// Connected components of G[U] that individually violate the cut inequality.
inline std::vector<CutCertificate> centralize_cut(const MultiGraph& g, std::span<const NodeId> nodes,
                                                  const std::map<NodeId, Rational>& supplies,
                                                  const Rational& slack = 1) {
  const CutCertificate whole = make_certificate(g, {nodes.begin(), nodes.end()}, supplies, slack);
  if (!whole.violated()) throw InvalidInput("centralize_cut: set does not violate the cut inequality");
  std::vector<CutCertificate> out;
  for (auto& comp : induced_components(g, nodes)) {
    CutCertificate c = make_certificate(g, std::move(comp), supplies, slack);
    if (c.violated()) out.push_back(std::move(c));
  }
  if (out.empty()) throw InvariantViolation("centralize_cut: no violating component");
  return out;
}

// ---------------------------------------------------------------------------
// Rational arc-flow decomposition for one commodity

/// Decomposes a single-commodity s-t flow given as signed rational edge flows
/// (positive means u -> v) into simple s-t paths. Cycles are cancelled, so
/// the per-edge path load never exceeds |flow|.
inline std::vector<std::pair<std::vector<EdgeId>, Rational>> decompose_rational_flow(
    const MultiGraph& g, std::vector<Rational> flow, NodeId s, NodeId t) {
  std::vector<std::pair<std::vector<EdgeId>, Rational>> out;
  auto out_edge = [&](NodeId v) -> std::optional<EdgeId> {
    for (EdgeId id : g.incident(v)) {
      const Edge& e = g.edge(id);
      const Rational& f = flow[static_cast<std::size_t>(id)];
      if ((e.u == v && f > 0) || (e.v == v && f < 0)) return id;
    }
    return std::nullopt;
  };
  auto push = [&](EdgeId id, NodeId from, const Rational& a) {
    if (g.edge(id).u == from) {
      flow[static_cast<std::size_t>(id)] -= a;
    } else {
      flow[static_cast<std::size_t>(id)] += a;
    }
  };
  auto mag = [&](EdgeId id) -> Rational { return abs(flow[static_cast<std::size_t>(id)]); };
  while (true) {
    std::vector<NodeId> nodes{s};
    std::vector<EdgeId> edges;
    std::map<NodeId, std::size_t> pos{{s, 0}};
    bool reached = false;
    while (true) {
      const NodeId at = nodes.back();
      if (at == t) {
        reached = true;
        break;
      }
      const auto next = out_edge(at);
      if (!next) break;
      const NodeId to = g.edge(*next).other(at);
      auto it = pos.find(to);
      if (it == pos.end()) {
        edges.push_back(*next);
        nodes.push_back(to);
        pos[to] = nodes.size() - 1;
        continue;
      }
      std::vector<EdgeId> cyc(edges.begin() + static_cast<std::ptrdiff_t>(it->second), edges.end());
      cyc.push_back(*next);
      Rational a = mag(cyc.front());
      for (EdgeId id : cyc) a = std::min(a, mag(id));
      NodeId from = to;
      for (EdgeId id : cyc) {
        push(id, from, a);
        from = g.edge(id).other(from);
      }
      for (std::size_t i = it->second + 1; i < nodes.size(); ++i) pos.erase(nodes[i]);
      nodes.resize(it->second + 1);
      edges.resize(it->second);
    }
    if (!reached || edges.empty()) break;
    Rational a = mag(edges.front());
    for (EdgeId id : edges) a = std::min(a, mag(id));
    NodeId from = s;
    for (EdgeId id : edges) {
      push(id, from, a);
      from = g.edge(id).other(from);
    }
    out.emplace_back(std::move(edges), a);
  }
  return out;
}

}  // namespace medp
