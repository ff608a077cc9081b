#pragma once

// JSON encoding of instances, routings, decompositions and ledgers.

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "medp/decomposition.hpp"
#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/rational.hpp"
#include "medp/rounding.hpp"

namespace medp {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename T>
T get_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string(what) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string(what) + ": bad field '" + key + "': " + e.what());
  }
}

inline Rational get_rational(const Json& j, const char* key, const char* what) {
  const Json& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw InvalidInput(std::string(what) + ": field '" + key + "' must be a \"p/q\" string");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instances

inline Json to_json(const MultiGraph& g, std::span<const std::pair<NodeId, NodeId>> pairs) {
  Json j;
  j["nodes"] = g.num_nodes();
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"cap", e.cap}});
  j["edges"] = std::move(edges);
  Json demands = Json::array();
  for (const auto& [s, t] : pairs) demands.push_back({{"s", s}, {"t", t}});
  j["demands"] = std::move(demands);
  return j;
}

inline Json to_json(const RawInstance& raw) { return to_json(raw.graph, raw.pairs); }

inline Json to_json(const MatchingInstance& inst) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Demand& d : inst.demands()) pairs.emplace_back(d.s, d.t);
  return to_json(inst.graph(), pairs);
}

inline RawInstance raw_instance_from_json(const Json& j) {
  RawInstance raw;
  const int n = detail::get_field<int>(j, "nodes", "instance");
  raw.graph = MultiGraph(n);
  for (const Json& e : detail::get_field<Json>(j, "edges", "instance")) {
    raw.graph.add_edge(detail::get_field<NodeId>(e, "u", "edge"), detail::get_field<NodeId>(e, "v", "edge"),
                       detail::get_field<std::int64_t>(e, "cap", "edge"));
  }
  for (const Json& d : detail::get_field<Json>(j, "demands", "instance")) {
    const NodeId s = detail::get_field<NodeId>(d, "s", "demand");
    const NodeId t = detail::get_field<NodeId>(d, "t", "demand");
    if (!raw.graph.has_node(s) || !raw.graph.has_node(t)) throw InvalidInput("demand endpoint not in graph");
    raw.pairs.emplace_back(s, t);
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Routings

inline Json to_json(const FractionalRouting& r) {
  Json paths = Json::array();
  for (const FlowPath& p : r.paths) {
    paths.push_back({{"demand", p.demand}, {"edges", p.edges}, {"value", to_string(p.value)}});
  }
  return Json{{"paths", std::move(paths)}};
}

inline Json to_json(const IntegralRouting& r) {
  Json paths = Json::array();
  for (const RoutedPath& p : r.paths) paths.push_back({{"demand", p.demand}, {"edges", p.edges}, {"value", "1/1"}});
  return Json{{"paths", std::move(paths)}};
}

inline FractionalRouting fractional_from_json(const Json& j) {
  FractionalRouting r;
  for (const Json& p : detail::get_field<Json>(j, "paths", "routing")) {
    FlowPath fp;
    fp.demand = detail::get_field<DemandId>(p, "demand", "path");
    fp.edges = detail::get_field<std::vector<EdgeId>>(p, "edges", "path");
    fp.value = p.contains("value") ? detail::get_rational(p, "value", "path") : Rational(1);
    r.paths.push_back(std::move(fp));
  }
  return r;
}

/// True when every path has value 1 (the encoding of an integral routing).
inline bool is_integral_json(const Json& j) {
  for (const Json& p : detail::get_field<Json>(j, "paths", "routing")) {
    if (p.contains("value") && detail::get_rational(p, "value", "path") != 1) return false;
  }
  return true;
}

inline IntegralRouting integral_from_json(const Json& j) {
  IntegralRouting r;
  for (const FlowPath& p : fractional_from_json(j).paths) {
    if (p.value != 1) throw InvalidInput("integral routing path with value " + to_string(p.value));
    r.paths.push_back({p.demand, p.edges});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Decompositions

inline Json to_json(const TreeDecomposition& d) {
  Json bags = Json::array();
  for (int b = 0; b < d.num_bags(); ++b) {
    const Bag& bag = d.bags[static_cast<std::size_t>(b)];
    bags.push_back({{"id", b}, {"nodes", bag.nodes}, {"degenerate", bag.degenerate}});
  }
  Json edges = Json::array();
  for (const auto& [a, b] : d.tree_edges) edges.push_back(Json::array({a, b}));
  return Json{{"bags", std::move(bags)}, {"tree_edges", std::move(edges)}, {"root", d.root}, {"k", d.k}, {"p", d.p}};
}

inline TreeDecomposition decomposition_from_json(const Json& j) {
  TreeDecomposition d;
  const Json bags = detail::get_field<Json>(j, "bags", "decomposition");
  d.bags.resize(bags.size());
  std::vector<char> seen(bags.size(), 0);
  for (const Json& b : bags) {
    const int id = detail::get_field<int>(b, "id", "bag");
    if (id < 0 || id >= static_cast<int>(bags.size()) || seen[static_cast<std::size_t>(id)]) {
      throw InvalidInput("decomposition: bag ids must be a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(id)] = 1;
    Bag& bag = d.bags[static_cast<std::size_t>(id)];
    bag.nodes = detail::get_field<std::vector<NodeId>>(b, "nodes", "bag");
    bag.degenerate = b.contains("degenerate") ? detail::get_field<bool>(b, "degenerate", "bag") : false;
    normalize_bag(bag);
  }
  for (const Json& e : detail::get_field<Json>(j, "tree_edges", "decomposition")) {
    const auto pair = e.get<std::vector<int>>();
    if (pair.size() != 2) throw InvalidInput("decomposition: tree edge must have two bag ids");
    for (int b : pair) {
      if (b < 0 || b >= d.num_bags()) throw InvalidInput("decomposition: tree edge references unknown bag");
    }
    d.tree_edges.emplace_back(pair[0], pair[1]);
  }
  d.root = detail::get_field<int>(j, "root", "decomposition");
  d.k = detail::get_field<int>(j, "k", "decomposition");
  d.p = detail::get_field<int>(j, "p", "decomposition");
  return d;
}

// ---------------------------------------------------------------------------
// Ledger

inline Json to_json(const LedgerRecord& r) {
  Json j;
  j["id"] = r.id;
  j["parent"] = r.parent;
  j["step"] = r.step;
  if (!r.shape.empty()) j["shape"] = r.shape;
  j["mode"] = r.mode;
  j["k"] = r.k;
  j["p"] = r.p;
  j["nodes"] = r.nodes;
  j["demands"] = r.demands;
  j["alpha"] = to_string(r.alpha);
  j["beta"] = to_string(r.beta);
  j["value"] = to_string(r.value);
  j["flush_dropped"] = to_string(r.flush_dropped);
  j["cut_dropped"] = to_string(r.cut_dropped);
  if (r.cut_capacity) j["cut_capacity"] = to_string(*r.cut_capacity);
  if (r.val_fu) j["val_f_u"] = to_string(*r.val_fu);
  if (r.val_fu_reduced) j["val_f_u_reduced"] = to_string(*r.val_fu_reduced);
  if (r.val_fubar) j["val_f_ubar"] = to_string(*r.val_fubar);
  if (!r.arm.empty()) j["arm"] = r.arm;
  if (r.restarts) j["restarts"] = r.restarts;
  j["routed"] = r.routed;
  j["congestion"] = to_string(r.congestion);
  j["gamma"] = to_string(r.gamma);
  j["satisfied"] = r.satisfied;
  if (r.charging_ok) j["charging_ok"] = *r.charging_ok;
  if (r.conservation_ok) j["conservation_ok"] = *r.conservation_ok;
  if (r.base_bound) j["base_bound"] = to_string(*r.base_bound);
  if (r.base_bound_ok) j["base_bound_ok"] = *r.base_bound_ok;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const GuaranteeLedger& ledger) {
  Json j = Json::array();
  for (const LedgerRecord& r : ledger.records) j.push_back(to_json(r));
  return j;
}

}  // namespace medp
