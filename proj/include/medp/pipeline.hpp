#pragma once

// End-to-end run: LP relaxation, flush filtering and (k,p) rounding.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "medp/decomposition.hpp"
#include "medp/errors.hpp"
#include "medp/graph.hpp"
#include "medp/json_io.hpp"
#include "medp/lp.hpp"
#include "medp/rational.hpp"
#include "medp/rounding.hpp"

namespace medp {

struct RunConfig {
  Rational epsilon{1, 20};
  Mode mode = Mode::kTreewidth;
  std::optional<int> k;  // overrides the decomposition's k
  std::optional<int> p;  // overrides the decomposition's p
  int oracle_q = 0;      // small-graph oracle size; 0 means p + 1
};

inline void check_epsilon(const Rational& eps) {
  if (eps <= 0 || eps > Rational(1, 4)) throw InvalidInput("epsilon must lie in (0, 1/4]");
}

/// True when the pairs already form a matching instance: distinct terminals,
/// each a degree-1 leaf.
inline bool is_matching_form(const RawInstance& raw) {
  std::vector<char> used(static_cast<std::size_t>(raw.graph.num_nodes()), 0);
  for (const auto& [s, t] : raw.pairs) {
    for (NodeId x : {s, t}) {
      if (used[static_cast<std::size_t>(x)] || raw.graph.degree(x) != 1) return false;
      used[static_cast<std::size_t>(x)] = 1;
    }
  }
  return true;
}

struct PreparedInstance {
  MatchingInstance instance;
  TreeDecomposition decomposition;
  bool normalized = false;
};

/// Builds the matching instance (normalizing raw pair lists) and a
/// decomposition covering it. A decomposition of the raw graph is extended
/// with leaf bags; without one, min-degree elimination is used.
inline PreparedInstance prepare_instance(const RawInstance& raw, const std::optional<TreeDecomposition>& given) {
  PreparedInstance out;
  if (is_matching_form(raw)) {
    std::vector<Demand> demands;
    for (const auto& [s, t] : raw.pairs) demands.push_back({s, t});
    out.instance = MatchingInstance(raw.graph, std::move(demands));
  } else {
    out.instance = normalize_to_matching(raw.graph, raw.pairs);
    out.normalized = true;
  }
  TreeDecomposition d = given ? *given : build_decomposition_heuristic(raw.graph, EliminationHeuristic::kMinDegree);
  const auto covered = d.covered_nodes();
  const bool covers_all = static_cast<int>(covered.size()) == out.instance.graph().num_nodes();
  out.decomposition = covers_all ? d : attach_leaf_bags(d, out.instance.graph(), raw.graph.num_nodes());
  return out;
}

struct Report {
  Rational fractional;  // LP value
  int routed = 0;
  Rational congestion;
  Rational gamma;
  bool satisfied = true;
  GuaranteeLedger ledger;
  std::int64_t ms = 0;
  FractionalRouting lp;
  IntegralRouting routing;
};

namespace detail {

/// Runs fn, prefixing any library error with the stage name.
template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  const std::string tag = std::string(stage) + ": ";
  try {
    return fn();
  } catch (const InvalidInput& e) {
    throw InvalidInput(tag + e.what());
  } catch (const GuaranteeViolation& e) {
    throw GuaranteeViolation(tag + e.what());
  } catch (const GuardExceeded& e) {
    throw GuardExceeded(tag + e.what());
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(tag + e.what());
  }
}

}  // namespace detail

inline RoundingConfig rounding_config(const RunConfig& cfg, const TreeDecomposition& d) {
  RoundingConfig rc;
  rc.mode = cfg.mode;
  rc.p = std::max({cfg.p.value_or(d.p), d.k, 1});
  const int q = cfg.oracle_q > 0 ? cfg.oracle_q : rc.p + 1;
  rc.oracle = default_small_graph_oracle(q);
  return rc;
}

/// Solves the LP unless `lp` is given, then flush-filters and rounds.
inline Report run_pipeline(const PreparedInstance& prepared, const RunConfig& cfg,
                           const std::optional<FractionalRouting>& lp = std::nullopt) {
  const auto start = std::chrono::steady_clock::now();
  check_epsilon(cfg.epsilon);
  TreeDecomposition d = prepared.decomposition;
  if (cfg.k) d.k = *cfg.k;
  if (cfg.p) d.p = *cfg.p;
  const MatchingInstance& inst = prepared.instance;
  Report rep;
  rep.lp = detail::staged("lp", [&] {
    if (lp) {
      validate_fractional(*lp, inst);
      return *lp;
    }
    return solve_lp(inst, cfg.epsilon);
  });
  rep.fractional = rep.lp.value();
  const FlushResult flushed = detail::staged("flush", [&] { return flush_filter(rep.lp, d, inst); });
  const RoundingConfig rc = rounding_config(cfg, d);
  RoundingResult rr = detail::staged("round", [&] { return ksum_round(inst, flushed.routing, d, rc); });
  rep.routing = std::move(rr.routing);
  rep.ledger = std::move(rr.ledger);
  rep.routed = rep.routing.value();
  rep.congestion = congestion_of(rep.routing, inst.graph());
  rep.gamma = gamma_of(flushed.routing.value(), guarantee_alpha(rc), rc.p, d.k);
  rep.satisfied = Rational(rep.routed) >= Rational(floor_of(rep.gamma)) && rep.ledger.all_satisfied();
  rep.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Report JSON; with `timing` false the wall time is written as 0 so that
/// identical runs give identical bytes.
inline Json report_json(const Report& r, bool timing = true) {
  Json j;
  j["fractional"] = to_string(r.fractional);
  j["routed"] = r.routed;
  j["congestion"] = to_string(r.congestion);
  j["gamma"] = to_string(r.gamma);
  j["satisfied"] = r.satisfied;
  j["ledger"] = to_json(r.ledger);
  j["ms"] = timing ? r.ms : 0;
  return j;
}

}  // namespace medp
