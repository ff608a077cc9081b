#pragma once

// Multiplicative-weights (Garg-Konemann) solver for the path LP of maximum
// edge-disjoint paths:
//
//   max sum_h z_h  s.t.  sum_{P in P_h} x_P = z_h <= 1,
//                        sum_{P ∋ e} x_P <= c_e,   x >= 0.
//
// Each demand carries one auxiliary unit-capacity edge so that z_h <= 1 is
// just another packing constraint. Lengths are tracked in floating point
// (they only steer path selection); the routed amounts are integer counts,
// and the final scaling by the exact maximum congestion keeps the returned
// solution exactly feasible.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"

namespace medp {

struct LpStats {
  std::int64_t iterations = 0;
  double dual_bound = 0;  // best certified upper bound on the LP optimum seen
  bool early_stop = false;
};

namespace detail {

struct ShortestPath {
  long double length = std::numeric_limits<long double>::infinity();
  std::vector<EdgeId> edges;
};

inline ShortestPath dijkstra(const MultiGraph& g, const std::vector<long double>& len, NodeId s, NodeId t) {
  const auto inf = std::numeric_limits<long double>::infinity();
  std::vector<long double> dist(static_cast<std::size_t>(g.num_nodes()), inf);
  std::vector<EdgeId> via(static_cast<std::size_t>(g.num_nodes()), -1);
  using Item = std::pair<long double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(s)] = 0;
  pq.emplace(0, s);
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    if (v == t) break;
    for (EdgeId id : g.incident(v)) {
      const NodeId w = g.edge(id).other(v);
      const long double nd = d + len[static_cast<std::size_t>(id)];
      if (nd < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = nd;
        via[static_cast<std::size_t>(w)] = id;
        pq.emplace(nd, w);
      }
    }
  }
  ShortestPath sp;
  if (dist[static_cast<std::size_t>(t)] == inf) return sp;
  sp.length = dist[static_cast<std::size_t>(t)];
  for (NodeId at = t; at != s;) {
    const EdgeId id = via[static_cast<std::size_t>(at)];
    sp.edges.push_back(id);
    at = g.edge(id).other(at);
  }
  std::reverse(sp.edges.begin(), sp.edges.end());
  return sp;
}

}  // namespace detail

/// Returns a feasible fractional routing of value at least (1 - epsilon)
/// times the LP optimum. Deterministic.
inline FractionalRouting solve_lp(const MatchingInstance& inst, const Rational& epsilon, LpStats* stats = nullptr) {
  if (epsilon <= 0 || epsilon > Rational(1, 4)) throw InvalidInput("solve_lp: epsilon must lie in (0, 1/4]");
  FractionalRouting out;
  if (inst.num_demands() == 0) return out;

  const MultiGraph& g = inst.graph();
  const int m = g.num_edges();
  const int k = inst.num_demands();
  const long double eps = static_cast<long double>(epsilon.get_d()) / 3.0L;
  const long double rows = static_cast<long double>(m + k);
  const long double log_delta = std::log1p(eps) - std::log((1.0L + eps) * rows) / eps;
  const long double delta = std::exp(log_delta);

  std::vector<long double> len(static_cast<std::size_t>(m));
  for (const Edge& e : g.edges()) len[static_cast<std::size_t>(e.id)] = delta / static_cast<long double>(e.cap);
  std::vector<long double> aux(static_cast<std::size_t>(k), delta);

  std::map<std::pair<DemandId, std::vector<EdgeId>>, std::int64_t> count;
  std::vector<std::int64_t> load(static_cast<std::size_t>(m), 0);
  std::vector<std::int64_t> routed(static_cast<std::size_t>(k), 0);
  std::int64_t units = 0;
  long double best_dual = std::numeric_limits<long double>::infinity();
  LpStats local;

  auto primal_ratio = [&]() -> long double {
    long double worst = 0;
    for (const Edge& e : g.edges()) {
      worst = std::max(worst, static_cast<long double>(load[static_cast<std::size_t>(e.id)]) / e.cap);
    }
    for (std::int64_t r : routed) worst = std::max(worst, static_cast<long double>(r));
    return worst == 0 ? 0 : static_cast<long double>(units) / worst;
  };

  while (true) {
    long double volume = 0;
    for (const Edge& e : g.edges()) volume += len[static_cast<std::size_t>(e.id)] * e.cap;
    for (long double a : aux) volume += a;
    if (volume >= 1) break;

    DemandId best = -1;
    detail::ShortestPath best_path;
    for (DemandId h = 0; h < k; ++h) {
      detail::ShortestPath sp = detail::dijkstra(g, len, inst.demand(h).s, inst.demand(h).t);
      if (sp.edges.empty()) continue;
      sp.length += aux[static_cast<std::size_t>(h)];
      if (sp.length < best_path.length) {
        best_path = std::move(sp);
        best = h;
      }
    }
    if (best < 0) break;  // no demand is connected
    best_dual = std::min(best_dual, volume / best_path.length);

    // All capacities are >= 1 and the auxiliary edge has capacity 1, so the
    // bottleneck of every path is exactly one unit.
    for (EdgeId e : best_path.edges) {
      load[static_cast<std::size_t>(e)] += 1;
      len[static_cast<std::size_t>(e)] *= 1.0L + eps / static_cast<long double>(g.edge(e).cap);
    }
    aux[static_cast<std::size_t>(best)] *= 1.0L + eps;
    routed[static_cast<std::size_t>(best)] += 1;
    ++count[{best, best_path.edges}];
    ++units;
    ++local.iterations;

    const long double target = (1.0L - static_cast<long double>(epsilon.get_d())) * best_dual * (1.0L + 1e-9L);
    if (primal_ratio() >= target) {
      local.early_stop = true;
      break;
    }
  }

  if (units > 0) {
    Rational worst = 0;
    for (const Edge& e : g.edges()) {
      worst = std::max(worst, make_rational(load[static_cast<std::size_t>(e.id)], e.cap));
    }
    for (std::int64_t r : routed) worst = std::max(worst, Rational(r));
    for (const auto& [key, c] : count) {
      out.paths.push_back({key.first, key.second, Rational(c) / worst});
    }
  }
  local.dual_bound = static_cast<double>(best_dual);
  if (stats) *stats = local;
  return out;
}

}  // namespace medp
