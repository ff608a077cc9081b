#include <gtest/gtest.h>

#include <random>

#include "medp/exact.hpp"
#include "medp/lp.hpp"
#include "support/fixtures.hpp"

namespace medp {
namespace {

TEST(Lp, RejectsBadEpsilon) {
  const auto fx = testing::fixtures().front();
  const MatchingInstance inst = normalize_to_matching(fx.raw.graph, fx.raw.pairs);
  EXPECT_THROW(solve_lp(inst, Rational(0)), InvalidInput);
  EXPECT_THROW(solve_lp(inst, Rational(1, 3)), InvalidInput);
  EXPECT_NO_THROW(solve_lp(inst, Rational(1, 4)));
}

TEST(Lp, EmptyInstance) {
  const MatchingInstance inst(MultiGraph(2), {});
  EXPECT_EQ(solve_lp(inst, Rational(1, 20)).value(), Rational(0));
}

TEST(Lp, ExactLpMatchesFrozenFixtures) {
  for (const auto& fx : testing::fixtures()) {
    const MatchingInstance inst = normalize_to_matching(fx.raw.graph, fx.raw.pairs);
    EXPECT_EQ(exact_lp_small(inst), fx.lp) << fx.name;
  }
}

TEST(Lp, WithinEpsilonOfOptimumOnFixtures) {
  for (const Rational eps : {Rational(1, 4), Rational(1, 20), Rational(1, 100)}) {
    for (const auto& fx : testing::fixtures()) {
      const MatchingInstance inst = normalize_to_matching(fx.raw.graph, fx.raw.pairs);
      LpStats stats;
      const FractionalRouting f = solve_lp(inst, eps, &stats);
      validate_fractional(f, inst);
      EXPECT_LE(f.value(), fx.lp) << fx.name;
      EXPECT_GE(f.value(), (1 - eps) * fx.lp) << fx.name << " eps " << to_string(eps);
      EXPECT_GT(stats.iterations, 0);
    }
  }
}

TEST(Lp, DeterministicOutput) {
  const auto fx = testing::fixtures()[4];
  const MatchingInstance inst = normalize_to_matching(fx.raw.graph, fx.raw.pairs);
  const FractionalRouting a = solve_lp(inst, Rational(1, 20));
  const FractionalRouting b = solve_lp(inst, Rational(1, 20));
  ASSERT_EQ(a.paths.size(), b.paths.size());
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    EXPECT_EQ(a.paths[i].demand, b.paths[i].demand);
    EXPECT_EQ(a.paths[i].edges, b.paths[i].edges);
    EXPECT_EQ(a.paths[i].value, b.paths[i].value);
  }
}

TEST(Lp, RandomInstancesAgainstExactLp) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 7);
    MultiGraph g(n);
    for (NodeId v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng() % v), v, 1 + static_cast<int>(rng() % 2));
    for (int extra = 0; extra < n / 2; ++extra) {
      const NodeId a = static_cast<NodeId>(rng() % n);
      const NodeId b = static_cast<NodeId>(rng() % n);
      if (a != b) g.add_edge(a, b);
    }
    std::vector<std::pair<NodeId, NodeId>> pairs;
    const int k = 1 + static_cast<int>(rng() % 4);
    while (static_cast<int>(pairs.size()) < k) {
      const NodeId a = static_cast<NodeId>(rng() % n);
      const NodeId b = static_cast<NodeId>(rng() % n);
      if (a != b) pairs.emplace_back(a, b);
    }
    const MatchingInstance inst = normalize_to_matching(g, pairs);
    const Rational star = exact_lp_small(inst);
    const FractionalRouting f = solve_lp(inst, Rational(1, 20));
    validate_fractional(f, inst);
    EXPECT_LE(f.value(), star);
    EXPECT_GE(f.value(), Rational(19, 20) * star) << "trial " << trial;
    // The LP bounds the integral optimum.
    EXPECT_LE(Rational(exact_medp(inst, 1).value), star);
  }
}

}  // namespace
}  // namespace medp
