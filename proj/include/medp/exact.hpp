#pragma once

// Brute-force ground truth for desk-scale instances: exact integral MEDP
// under a congestion cap, and the exact LP optimum over all simple paths.
// Guards are hard errors; an oracle never returns an under-searched answer.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"

namespace medp {

inline constexpr int kExactMaxNodes = 14;
inline constexpr int kExactMaxDemands = 5;
inline constexpr std::size_t kExactLpMaxPaths = 5000;

struct ExactResult {
  int value = 0;
  IntegralRouting routing;
  std::int64_t nodes_expanded = 0;
  std::int64_t paths_enumerated = 0;
};

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const MultiGraph& g, std::span<const std::pair<NodeId, NodeId>> pairs, int cap)
      : g_(g), pairs_(pairs.begin(), pairs.end()) {
    residual_.reserve(static_cast<std::size_t>(g.num_edges()));
    for (const Edge& e : g.edges()) residual_.push_back(e.cap * cap);
    on_path_.assign(static_cast<std::size_t>(g.num_nodes()), 0);
    chosen_.resize(pairs_.size());
  }

  ExactResult run() {
    search(0, 0);
    result_.value = static_cast<int>(best_.size());
    result_.routing.paths = best_;
    return result_;
  }

 private:
  void search(std::size_t i, int routed) {
    ++result_.nodes_expanded;
    if (routed > best_value_) {
      best_value_ = routed;
      best_.clear();
      for (std::size_t h = 0; h < i; ++h) {
        if (chosen_[h].first) best_.push_back({static_cast<DemandId>(h), chosen_[h].second});
      }
    }
    if (i == pairs_.size() || best_value_ == static_cast<int>(pairs_.size())) return;
    if (routed + static_cast<int>(pairs_.size() - i) <= best_value_) return;
    const auto [s, t] = pairs_[i];
    std::vector<EdgeId> path;
    if (s == t) {
      chosen_[i] = {true, {}};
      search(i + 1, routed + 1);
    } else {
      on_path_[static_cast<std::size_t>(s)] = 1;
      extend(i, routed, s, t, path);
      on_path_[static_cast<std::size_t>(s)] = 0;
    }
    chosen_[i] = {false, {}};
    search(i + 1, routed);
  }

  void extend(std::size_t i, int routed, NodeId at, NodeId t, std::vector<EdgeId>& path) {
    if (best_value_ == static_cast<int>(pairs_.size())) return;
    if (at == t) {
      ++result_.paths_enumerated;
      chosen_[i] = {true, path};
      // Later demands may reuse this path's nodes; only edges are exclusive.
      const auto nodes = walk_nodes(g_, pairs_[i].first, path);
      for (NodeId x : nodes) on_path_[static_cast<std::size_t>(x)] = 0;
      search(i + 1, routed + 1);
      for (NodeId x : nodes) on_path_[static_cast<std::size_t>(x)] = 1;
      return;
    }
    for (EdgeId id : g_.incident(at)) {
      if (residual_[static_cast<std::size_t>(id)] == 0) continue;
      const NodeId w = g_.edge(id).other(at);
      if (on_path_[static_cast<std::size_t>(w)]) continue;
      --residual_[static_cast<std::size_t>(id)];
      on_path_[static_cast<std::size_t>(w)] = 1;
      path.push_back(id);
      extend(i, routed, w, t, path);
      path.pop_back();
      on_path_[static_cast<std::size_t>(w)] = 0;
      ++residual_[static_cast<std::size_t>(id)];
    }
  }

  const MultiGraph& g_;
  std::vector<std::pair<NodeId, NodeId>> pairs_;
  std::vector<std::int64_t> residual_;
  std::vector<char> on_path_;
  std::vector<std::pair<bool, std::vector<EdgeId>>> chosen_;
  std::vector<RoutedPath> best_;
  int best_value_ = -1;
  ExactResult result_;
};

}  // namespace detail

/// Exact maximum number of pairs routable with load <= congestion_cap * c_e.
/// Works on a raw pair list (pairs may repeat nodes; a pair (a, a) is
/// routable by the empty path).
inline ExactResult exact_medp(const MultiGraph& g, std::span<const std::pair<NodeId, NodeId>> pairs,
                              int congestion_cap) {
  if (congestion_cap < 1) throw InvalidInput("exact_medp: congestion cap must be >= 1");
  if (core_node_count(g) > kExactMaxNodes || static_cast<int>(pairs.size()) > kExactMaxDemands) {
    throw GuardExceeded("exact_medp: instance above guard (" + std::to_string(kExactMaxNodes) + " core nodes, " +
                        std::to_string(kExactMaxDemands) + " demands)");
  }
  for (const auto& [s, t] : pairs) {
    if (!g.has_node(s) || !g.has_node(t)) throw InvalidInput("exact_medp: pair endpoint not in graph");
  }
  ExactResult r = detail::ExactSearch(g, pairs, congestion_cap).run();
  r.routing.declared_congestion = Rational(congestion_cap);
  return r;
}

inline ExactResult exact_medp(const MatchingInstance& inst, int congestion_cap) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Demand& d : inst.demands()) pairs.emplace_back(d.s, d.t);
  return exact_medp(inst.graph(), pairs, congestion_cap);
}

/// All simple s-t paths, DFS in incident-edge order.
inline std::vector<std::vector<EdgeId>> enumerate_simple_paths(const MultiGraph& g, NodeId s, NodeId t,
                                                               std::size_t limit) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<char> on(static_cast<std::size_t>(g.num_nodes()), 0);
  std::vector<EdgeId> path;
  auto dfs = [&](auto&& self, NodeId at) -> void {
    if (at == t) {
      out.push_back(path);
      if (out.size() > limit) throw GuardExceeded("path enumeration exceeds " + std::to_string(limit) + " paths");
      return;
    }
    for (EdgeId id : g.incident(at)) {
      const NodeId w = g.edge(id).other(at);
      if (on[static_cast<std::size_t>(w)]) continue;
      on[static_cast<std::size_t>(w)] = 1;
      path.push_back(id);
      self(self, w);
      path.pop_back();
      on[static_cast<std::size_t>(w)] = 0;
    }
  };
  on[static_cast<std::size_t>(s)] = 1;
  dfs(dfs, s);
  return out;
}

namespace detail {

/// Revised primal simplex for max 1^T x s.t. A x <= b, x >= 0 with b >= 0,
/// exact rationals, dense basis inverse. Columns are 0/1 incidence lists.
/// Dantzig pricing, switching to Bland's rule after a run of degenerate
/// pivots.
inline Rational packing_lp_optimum(const std::vector<std::vector<int>>& columns, const std::vector<Rational>& b) {
  const std::size_t rows = b.size();
  const std::size_t n = columns.size();
  // Variables 0..n-1 are structural, n..n+rows-1 are slacks.
  std::vector<std::vector<Rational>> binv(rows, std::vector<Rational>(rows));
  for (std::size_t i = 0; i < rows; ++i) binv[i][i] = 1;
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = n + i;
  std::vector<char> is_basic(n + rows, 0);
  for (std::size_t i = 0; i < rows; ++i) is_basic[n + i] = 1;
  std::vector<Rational> xb = b;
  int degenerate_run = 0;

  auto cost = [&](std::size_t j) { return j < n ? Rational(1) : Rational(0); };
  while (true) {
    std::vector<Rational> y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] >= n) continue;
      for (std::size_t c = 0; c < rows; ++c) y[c] += binv[i][c];
    }
    const bool bland = degenerate_run > 50;
    std::size_t enter = n + rows;
    Rational best = 0;
    for (std::size_t j = 0; j < n + rows; ++j) {
      if (is_basic[j]) continue;
      Rational d = cost(j);
      if (j < n) {
        for (int r : columns[j]) d -= y[static_cast<std::size_t>(r)];
      } else {
        d -= y[j - n];
      }
      if (d > best) {
        best = d;
        enter = j;
        if (bland) break;
      }
    }
    if (enter == n + rows) break;

    std::vector<Rational> u(rows);
    if (enter < n) {
      for (int r : columns[enter]) {
        for (std::size_t i = 0; i < rows; ++i) u[i] += binv[i][static_cast<std::size_t>(r)];
      }
    } else {
      for (std::size_t i = 0; i < rows; ++i) u[i] = binv[i][enter - n];
    }
    std::size_t leave = rows;
    Rational ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (u[i] <= 0) continue;
      const Rational q = xb[i] / u[i];
      if (leave == rows || q < ratio || (q == ratio && basis[i] < basis[leave])) {
        leave = i;
        ratio = q;
      }
    }
    if (leave == rows) throw InvariantViolation("packing LP unbounded");
    degenerate_run = ratio == 0 ? degenerate_run + 1 : 0;

    const Rational pivot = u[leave];
    for (std::size_t c = 0; c < rows; ++c) binv[leave][c] /= pivot;
    xb[leave] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || u[i] == 0) continue;
      const Rational f = u[i];
      for (std::size_t c = 0; c < rows; ++c) binv[i][c] -= f * binv[leave][c];
      xb[i] -= f * xb[leave];
    }
    is_basic[basis[leave]] = 0;
    basis[leave] = enter;
    is_basic[enter] = 1;
  }
  Rational value = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < n) value += xb[i];
  }
  return value;
}

}  // namespace detail

/// Exact optimum of the path LP over every simple s_h-t_h path.
inline Rational exact_lp_small(const MatchingInstance& inst) {
  const MultiGraph& g = inst.graph();
  std::vector<std::vector<int>> columns;
  std::vector<int> edge_row(static_cast<std::size_t>(g.num_edges()), -1);
  std::vector<Rational> b(static_cast<std::size_t>(inst.num_demands()), Rational(1));
  std::size_t total = 0;
  for (DemandId h = 0; h < inst.num_demands(); ++h) {
    const auto paths = enumerate_simple_paths(g, inst.demand(h).s, inst.demand(h).t, kExactLpMaxPaths - total);
    total += paths.size();
    for (const auto& p : paths) {
      std::vector<int> col{h};
      for (EdgeId e : p) {
        if (edge_row[static_cast<std::size_t>(e)] < 0) {
          edge_row[static_cast<std::size_t>(e)] = static_cast<int>(b.size());
          b.emplace_back(g.edge(e).cap);
        }
        col.push_back(edge_row[static_cast<std::size_t>(e)]);
      }
      columns.push_back(std::move(col));
    }
  }
  if (columns.empty()) return 0;
  return detail::packing_lp_optimum(columns, b);
}

}  // namespace medp
