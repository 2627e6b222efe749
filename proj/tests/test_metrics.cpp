#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "dynleiden/errors.hpp"
#include "dynleiden/leiden.hpp"
#include "dynleiden/metrics.hpp"
#include "dynleiden/partition.hpp"
#include "test_oracles.hpp"

using namespace dynleiden;

namespace {

Graph make(std::size_t n, std::vector<WeightedEdge> edges) { return graph_from_edges(n, edges); }

std::vector<CommunityId> random_membership(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<CommunityId> f(n);
  for (auto& c : f) c = static_cast<CommunityId>(rng() % k);
  return f;
}

}  // namespace

TEST(Modularity, SingleEdgeOneCommunity) {
  const Graph g = make(2, {{0, 1, 1}});
  EXPECT_NEAR(modularity(g, Partition(g, {0, 0})), 0.0, 1e-12);
}

TEST(Modularity, TwoDisjointEdges) {
  const Graph g = make(4, {{0, 1, 1}, {2, 3, 1}});
  const std::vector<CommunityId> f{0, 0, 1, 1};
  EXPECT_NEAR(oracle::modularity(4, oracle::edge_map(g), f), 0.5, 1e-12);
  EXPECT_NEAR(modularity(g, Partition(g, f)), 0.5, 1e-12);
  EXPECT_NEAR(modularity(g, std::span<const CommunityId>(f)), 0.5, 1e-12);
}

TEST(Modularity, TriangleOneCommunity) {
  // Σ_{v∈C} w(v,C)/2m = 6/6 and (d(C)/2m)^2 = 1, so Q is exactly zero.
  const Graph g = make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  const std::vector<CommunityId> f{0, 0, 0};
  EXPECT_NEAR(oracle::modularity(3, oracle::edge_map(g), f), 0.0, 1e-12);
  EXPECT_NEAR(modularity(g, Partition(g, f)), 0.0, 1e-12);
}

TEST(Modularity, EmptyGraphThrows) {
  const Graph g(3);
  EXPECT_THROW(modularity(g, Partition::singletons(g)), EmptyGraph);
}

TEST(Modularity, MatchesOracleWithSelfLoopsAndResolution) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    const auto edges = oracle::random_edges(rng, n, 0.3, 0.3);
    const Graph g = make(n, edges);
    if (g.total_weight() == 0.0) continue;
    const auto f = random_membership(rng, n, 1 + rng() % 5);
    const double gamma = 0.5 + static_cast<double>(rng() % 100) / 100.0;
    const double expected = oracle::modularity(n, oracle::edge_map(edges), f, gamma);
    EXPECT_NEAR(modularity(g, Partition(g, f), gamma), expected, 1e-9);
    EXPECT_NEAR(modularity(g, std::span<const CommunityId>(f), gamma), expected, 1e-9);
  }
}

TEST(Partition, MovesKeepAggregatesConsistent) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 25;
    const Graph g = make(n, oracle::random_edges(rng, n, 0.3, 0.2));
    Partition p(g, random_membership(rng, n, 4));
    for (int step = 0; step < 40; ++step) {
      const VertexId v = rng() % n;
      const auto ids = p.community_ids();
      const CommunityId target = rng() % 4 == 0 ? kEmptyCommunity : ids[rng() % ids.size()];
      p.move(g, v, target);
      const Partition fresh(g, std::vector<CommunityId>(p.membership().begin(), p.membership().end()));
      ASSERT_EQ(p.community_ids(), fresh.community_ids());
      std::size_t covered = 0;
      for (const CommunityId c : p.community_ids()) {
        const auto& a = p.community(c);
        const auto& b = fresh.community(c);
        EXPECT_FALSE(a.members.empty());
        covered += a.members.size();
        for (const VertexId x : a.members) EXPECT_EQ(p.community_of(x), c);
        EXPECT_NEAR(a.degree, b.degree, 1e-9);
        EXPECT_NEAR(a.internal, b.internal, 1e-9);
      }
      EXPECT_EQ(covered, n);
    }
  }
}

TEST(ModularityGain, IsolatedVertexAndSelfTarget) {
  const Graph g = make(3, {{0, 1, 1}});
  const Partition p(g, {0, 1, 2});
  EXPECT_EQ(modularity_gain(g, p, 2, 0), 0.0);
  EXPECT_EQ(modularity_gain(g, p, 2, kEmptyCommunity), 0.0);
  EXPECT_EQ(modularity_gain(g, p, 0, 0), 0.0);
  EXPECT_THROW(modularity_gain(g, p, 7, 0), UnknownVertex);
  EXPECT_THROW(modularity_gain(g, p, 0, 9), UnknownCommunity);
}

TEST(ModularityGain, IsHalfTheExactDifference) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n = 2 + rng() % 29;
    const auto edges = oracle::random_edges(rng, n, 0.2, 0.1);
    const Graph g = make(n, edges);
    if (g.total_weight() == 0.0) continue;
    const auto f = random_membership(rng, n, 1 + rng() % 6);
    const Partition p(g, f);
    const VertexId v = rng() % n;
    const auto ids = p.community_ids();
    const CommunityId target = rng() % 5 == 0 ? kEmptyCommunity : ids[rng() % ids.size()];
    auto after = f;
    after[v] = target == kEmptyCommunity ? 1000 : target;
    const auto em = oracle::edge_map(edges);
    const double diff = oracle::modularity(n, em, after) - oracle::modularity(n, em, f);
    EXPECT_NEAR(diff, 2.0 * modularity_gain(g, p, v, target), 1e-9);
    ++checked;
  }
}

TEST(Lemma, Thresholds) {
  LemmaParams far{.alpha = 1, .m = 1e6, .d_v = 3, .d_u = 3, .w_vu = 1, .d_i = 6};
  EXPECT_FALSE(lemma_threshold(LemmaCase::kIntraDeletion2, far));
  EXPECT_FALSE(lemma_threshold(LemmaCase::kCrossDeletion1, far));

  LemmaParams p{.alpha = 0, .m = 10, .d_v = 3, .d_u = 4, .w_vu = 2, .d_i = 7};
  const double rhs = (2 * 10 * 2.0 - 3 * 4.0) / (4 * 10 + 2 * 2.0);
  p.alpha = rhs + 1e-9;
  EXPECT_TRUE(lemma_threshold(LemmaCase::kIntraDeletion1, p));
  p.alpha = rhs - 1e-9;
  EXPECT_FALSE(lemma_threshold(LemmaCase::kIntraDeletion1, p));

  for (const double alpha : {0.0, 1.0, 1e9}) {
    p.alpha = alpha;
    EXPECT_FALSE(lemma_threshold(LemmaCase::kInsertion4, p));
  }
  p.alpha = 1;
  p.w_vu = 0;
  EXPECT_FALSE(lemma_threshold(LemmaCase::kIntraDeletion3, p));
  p.w_vu = 2;
  p.d_u = 0;
  EXPECT_THROW(lemma_threshold(LemmaCase::kInsertion2, p), DivisionByZero);
  p.d_u = 4;
  p.d_v = 0;
  EXPECT_THROW(lemma_threshold(LemmaCase::kInsertion3, p), DivisionByZero);
  p.d_v = 3;
  p.m = 0;
  EXPECT_THROW(lemma_threshold(LemmaCase::kInsertion1, p), std::invalid_argument);
  p.m = 10;
  p.alpha = -1;
  EXPECT_THROW(lemma_threshold(LemmaCase::kInsertion1, p), std::invalid_argument);
}

TEST(Lemma, InsertionCases) {
  // Case 1 has two disjuncts; either suffices.
  LemmaParams p{.alpha = 0, .m = 10, .d_v = 2, .d_u = 4, .w_vu = 1, .d_i = 6};
  const double via_degree = 2.0 * 1 / 4 * 10 - 2;  // 3
  const double via_total = 4.0 * 10 - 6;           // 34
  p.alpha = via_degree + 0.5;
  EXPECT_TRUE(lemma_threshold(LemmaCase::kInsertion1, p));
  EXPECT_TRUE(lemma_threshold(LemmaCase::kInsertion2, p));
  p.alpha = via_degree - 0.5;
  EXPECT_FALSE(lemma_threshold(LemmaCase::kInsertion1, p));
  EXPECT_LT(via_degree, via_total);
  const double case3 = 1.0 / 2 * 10 - 0.5 * 4;  // 3
  p.alpha = case3 + 0.1;
  EXPECT_TRUE(lemma_threshold(LemmaCase::kInsertion3, p));
  p.alpha = case3 - 0.1;
  EXPECT_FALSE(lemma_threshold(LemmaCase::kInsertion3, p));
}

TEST(Lemma, SmallAlphaCannotTriggerFarCases) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    LemmaParams p;
    p.m = 1e5 + static_cast<double>(rng() % 100000);
    p.d_v = 1 + static_cast<double>(rng() % 20);
    p.d_u = 1 + static_cast<double>(rng() % 50);
    p.w_vu = 1 + static_cast<double>(rng() % 5);
    p.d_i = p.d_u + p.d_v;
    p.alpha = 1 + static_cast<double>(rng() % 10);
    for (const auto kind : {LemmaCase::kIntraDeletion2, LemmaCase::kIntraDeletion3,
                            LemmaCase::kIntraDeletion4, LemmaCase::kCrossDeletion1,
                            LemmaCase::kCrossDeletion3, LemmaCase::kInsertion3}) {
      EXPECT_FALSE(lemma_threshold(kind, p));
    }
  }
}

TEST(Connectivity, Basic) {
  const Graph g = make(3, {{0, 1, 1}, {1, 2, 1}});
  const Partition ok(g, {0, 0, 1});
  for (const auto& r : check_connectivity(g, ok)) EXPECT_TRUE(r.connected);
  const Partition split(g, {0, 1, 0});
  const auto report = check_connectivity(g, split);
  ASSERT_EQ(report.size(), 2u);
  EXPECT_FALSE(report[0].connected);
  EXPECT_EQ(report[0].size, 2u);
  EXPECT_TRUE(report[1].connected);
}

TEST(Connectivity, CanonicalAfterUpdate) {
  const Graph g = apply_delta(graph_from_edges(8, oracle::canonical_edges()),
                              DeltaBatch{{0, 2, 1.0}, {2, 4, -1.0}});
  const std::vector<CommunityId> f{0, 0, 0, 0, 1, 1, 1, 1};
  const Partition p(g, f);
  const auto em = oracle::edge_map(g);
  for (const auto& r : check_connectivity(g, p)) {
    EXPECT_TRUE(r.connected);
    EXPECT_EQ(r.connected, oracle::connected(8, em, p.community(r.community).members));
  }
}

TEST(VertexOptimality, Examples) {
  const Graph single(1);
  EXPECT_EQ(vertex_optimality_fraction(single, Partition::singletons(single)), 1.0);

  std::vector<WeightedEdge> edges;
  for (VertexId a = 0; a < 4; ++a) {
    for (VertexId b = a + 1; b < 4; ++b) {
      edges.push_back({a, b, 1});
      edges.push_back({a + 4, b + 4, 1});
    }
  }
  edges.push_back({3, 4, 1});
  const Graph g = make(8, edges);
  const std::vector<CommunityId> f{0, 0, 0, 0, 1, 1, 1, 1};
  // Oracle: no single move (to another block or a fresh one) raises modularity.
  const auto em = oracle::edge_map(edges);
  const double base = oracle::modularity(8, em, f);
  for (VertexId v = 0; v < 8; ++v) {
    for (const CommunityId c : {0u, 1u, 2u}) {
      auto moved = f;
      moved[v] = c;
      EXPECT_LE(oracle::modularity(8, em, moved), base + 1e-12);
    }
  }
  EXPECT_EQ(vertex_optimality_fraction(g, Partition(g, f)), 1.0);
  EXPECT_LT(vertex_optimality_fraction(g, Partition(g, {0, 1, 0, 1, 0, 1, 0, 1})), 1.0);
}

TEST(LevelConsistency, AggregateKeepsModularity) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const Graph g = make(n, oracle::random_edges(rng, n, 0.2, 0.1));
    if (g.total_weight() == 0.0) continue;
    const auto f = random_membership(rng, n, 1 + rng() % 5);
    // Random refinement of f: split each community by a coin.
    std::vector<VertexId> s(n);
    std::map<std::pair<CommunityId, int>, VertexId> ids;
    for (VertexId v = 0; v < n; ++v) {
      auto [it, _] = ids.try_emplace({f[v], static_cast<int>(rng() % 3)}, static_cast<VertexId>(ids.size()));
      s[v] = it->second;
    }
    const Graph h = aggregate_graph(g, s, ids.size());
    std::vector<CommunityId> lifted(ids.size());
    for (VertexId v = 0; v < n; ++v) lifted[s[v]] = f[v];
    const double gamma = 0.5 + static_cast<double>(rng() % 100) / 100.0;
    EXPECT_NEAR(modularity(h, std::span<const CommunityId>(lifted), gamma),
                modularity(g, std::span<const CommunityId>(f), gamma), 1e-9);
    EXPECT_EQ(oracle::edge_map(h), oracle::aggregate(oracle::edge_map(g), s));
  }
}
