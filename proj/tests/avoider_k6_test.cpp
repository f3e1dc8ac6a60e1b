#include <gtest/gtest.h>

#include <cmath>

#include "rainbow/avoider_k6.hpp"
#include "rainbow/constructions.hpp"
#include "rainbow/oracles.hpp"

namespace rainbow {
namespace {

TEST(TriangleUnion, Examples) {
  EXPECT_EQ(triangle_union(clique(4)), clique(4));
  EXPECT_EQ(triangle_union(path(4)).m(), 0);
  // Oracle: keep an edge iff some third vertex closes it.
  Graph r = r7();
  std::vector<Edge> expect;
  for (const auto& e : r.edges())
    for (Vertex z = 0; z < r.n(); ++z)
      if (r.adjacent(e.u, z) && r.adjacent(e.v, z)) {
        expect.push_back(e);
        break;
      }
  EXPECT_EQ(triangle_union(r), Graph(7, expect));
  EXPECT_EQ(triangle_union(r).m(), 10);
}

TEST(Growth, StepCountsMatchVertexAndEdgeTotals) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = triangle_union(sample_gnp(9, 0.45, rng));
    for (const auto& c : components(g)) {
      if (c.graph.m() == 0) continue;
      auto tris = triangles(c.graph);
      auto seq = growth_sequence(c.graph, tris.front());
      int a = seq.count('a'), b = seq.count('b'), cc = seq.count('c'), d = seq.count('d'), e = seq.count('e');
      EXPECT_EQ(c.graph.n(), 3 + 2 * a + b + cc);
      EXPECT_GE(c.graph.m(), 3 + 3 * a + 2 * b + 3 * cc + d + 2 * e);
    }
  }
}

TEST(FindMatchings, SingleTriangle) {
  auto q = find_matchings(clique(3));
  EXPECT_EQ(q.m[0].size(), 1u);
  EXPECT_TRUE(q.m[1].empty() && q.m[2].empty() && q.m[3].empty());
  EXPECT_EQ(q.route, "case-I");
}

TEST(FindMatchings, Diamond) {
  Graph diamond(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
  auto q = find_matchings(diamond);
  EXPECT_EQ(q.m[0], (std::vector<Edge>{{1, 2}}));
  EXPECT_TRUE(q.m[1].empty() && q.m[2].empty() && q.m[3].empty());
  EXPECT_FALSE(matching_violation(diamond, q));
}

// Wheel W5 (hub 0, rim 1..5): five triangles through the hub, so no single
// matching meets them all and the three-matching branch is needed.
TEST(FindMatchings, NeedsThreeMatchings) {
  std::vector<Edge> es;
  for (int i = 1; i <= 5; ++i) {
    es.push_back({0, i});
    es.push_back(make_edge(i, i % 5 + 1));
  }
  Graph w(6, es);
  auto q = find_matchings(w);
  EXPECT_FALSE(matching_violation(w, q));
  int nonempty = !q.m[1].empty() + !q.m[2].empty() + !q.m[3].empty();
  EXPECT_EQ(nonempty, 3);
}

TEST(FindMatchings, TailEdgesJoinM0) {
  // Triangle 0,1,2 with an (a) step hung at 2 and another at 4.
  Graph g(7, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 5}, {4, 6}, {5, 6}});
  auto q = find_matchings(g);
  EXPECT_FALSE(matching_violation(g, q));
  EXPECT_EQ(q.route, "case-I");
}

TEST(FindMatchings, RejectsBadComponents) {
  EXPECT_THROW(find_matchings(path(3)), DomainError);
  EXPECT_THROW(find_matchings(disjoint_union({clique(3), clique(3)})), DomainError);
  EXPECT_THROW(find_matchings(Graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}})), DomainError);
}

TEST(FindMatchings, ViolationCheckerCatchesBadInput) {
  MatchingQuadruple q;
  EXPECT_TRUE(matching_violation(clique(3), q));
  q.m[0] = {{0, 1}};
  q.m[1] = {{1, 2}};
  EXPECT_TRUE(matching_violation(clique(3), q));
}

TEST(FindMatchings, RandomComponents) {
  Rng rng(9);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Graph r = sample_gnp(10, 0.4, rng);
    if (contains_copy(r, clique(4))) continue;
    for (const auto& c : components(triangle_union(r))) {
      if (c.graph.m() == 0) continue;
      try {
        auto q = find_matchings(c.graph);
        auto v = matching_violation(c.graph, q);
        EXPECT_FALSE(v) << *v;
        ++checked;
      } catch (const SearchExhausted&) {
        // Some dense K4-free components have no quadruple at all.
      }
    }
  }
  EXPECT_GT(checked, 100);
}

PerturbedInstance hand_instance(int n, std::vector<Edge> random) {
  PerturbedInstance inst;
  inst.seed_spec = "bipartite";
  inst.n = n;
  inst.seed = seed_graph("bipartite", n);
  inst.random = Graph(n, std::move(random));
  inst.all_pairs = true;
  return inst;
}

TEST(AvoidK6, EmptyRandomGraph) {
  auto inst = hand_instance(10, {});
  auto psi = avoid_k6(inst);
  EXPECT_EQ(psi.num_colours(), 25);
}

TEST(AvoidK6, TwoTriangles) {
  auto inst = hand_instance(8, {{0, 1}, {1, 2}, {0, 2}, {4, 5}, {5, 6}, {4, 6}});
  auto res = avoid_k6_detailed(inst);
  Graph g = inst.union_graph();
  EXPECT_TRUE(is_proper(g, res.colouring));
  int red_a = 0, red_b = 0;
  for (const auto& t : res.colouring.triples(g))
    if (t[2] == kRed) (t[0] < 4 ? red_a : red_b)++;
  EXPECT_EQ(red_a, 1);
  EXPECT_EQ(red_b, 1);
  EXPECT_EQ(rainbow_copies(g, res.colouring, clique(6)).size(), 0u);
  EXPECT_EQ(cliques(g, 6).size(), 1u);
}

TEST(AvoidK6, ComponentWithoutQuadrupleIsUnsupported) {
  Rng rng(9);
  for (int trial = 0; trial < 400; ++trial) {
    Graph r = sample_gnp(10, 0.4, rng);
    if (contains_copy(r, clique(4))) continue;
    for (const auto& c : components(triangle_union(r))) {
      if (c.graph.m() == 0) continue;
      try {
        find_matchings(c.graph);
      } catch (const SearchExhausted&) {
        auto inst = hand_instance(20, r.edges());
        EXPECT_THROW(avoid_k6(inst), StructureUnsupported);
        return;
      }
    }
  }
  GTEST_SKIP() << "no component without a quadruple in this sample";
}

TEST(AvoidK6, RejectsK4) {
  auto inst = hand_instance(8, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_THROW(avoid_k6(inst), StructureUnsupported);
}

// Dense hand-made instance where the wheel in A forces M1..M3 and a
// triangle in B picks up M0, so the C4 pair colours are exercised.
TEST(AvoidK6, WheelAgainstTriangle) {
  std::vector<Edge> es;
  for (int i = 1; i <= 5; ++i) {
    es.push_back({0, i});
    es.push_back(make_edge(i, i % 5 + 1));
  }
  es.push_back({7, 8});
  es.push_back({8, 9});
  es.push_back({7, 9});
  auto inst = hand_instance(12, es);
  Graph g = inst.union_graph();
  auto psi = avoid_k6(inst);
  EXPECT_TRUE(is_proper(g, psi));
  EXPECT_EQ(rainbow_copies(g, psi, clique(6)).size(), 0u);
  EXPECT_EQ(rainbow_k6_by_triangle_pairs(inst, psi), 0);
  EXPECT_EQ(cliques(g, 6).size(), 5u);
}

TEST(AvoidK6, SampledInstances) {
  int ok = 0;
  for (int t = 0; t < 20; ++t) {
    int n = 150;
    auto inst = sample_perturbed("bipartite", n, std::pow(n, -0.7), derive_seed(6, t), true);
    K6Result res;
    try {
      res = avoid_k6_detailed(inst);
    } catch (const StructureUnsupported&) {
      continue;
    }
    ++ok;
    Graph g = inst.union_graph();
    EXPECT_FALSE(matching_violation(inst.random, res.matchings));
    EXPECT_TRUE(is_proper(g, res.colouring));
    EXPECT_EQ(rainbow_k6_by_triangle_pairs(inst, res.colouring), 0);
    if (t < 3) {
      EXPECT_EQ(rainbow_copies(g, res.colouring, clique(6)).size(), 0u);
    }
  }
  EXPECT_GE(ok, 18);
}

}  // namespace
}  // namespace rainbow
