#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rainbow/canonical.hpp"
#include "rainbow/constructions.hpp"
#include "rainbow/copies.hpp"
#include "rainbow/density.hpp"
#include "rainbow/io.hpp"
#include "rainbow/oracles.hpp"
#include "rainbow/random.hpp"

namespace rainbow {
namespace {

Graph random_graph(int n, double p, Rng& rng) {
  std::vector<Edge> es;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) es.push_back({a, b});
  return Graph(n, es);
}

TEST(Graph, NormalizesAndIndexesEdges) {
  Graph g(4, {{2, 1}, {0, 3}, {1, 2}, {3, 2}});
  ASSERT_EQ(g.m(), 3);
  EXPECT_EQ(g.edge(0), (Edge{0, 3}));
  EXPECT_EQ(g.edge(1), (Edge{1, 2}));
  EXPECT_EQ(g.edge(2), (Edge{2, 3}));
  EXPECT_EQ(g.edge_id(3, 2), 2);
  EXPECT_EQ(g.edge_id(0, 1), -1);
  EXPECT_TRUE(g.adjacent(2, 1));
  EXPECT_EQ(g.degree(2), 2);
  EXPECT_THROW(Graph(3, {{1, 1}}), ParameterError);
  EXPECT_THROW(Graph(3, {{0, 3}}), ParameterError);
}

TEST(Constructions, R7MatchesDefinition) {
  Graph g = r7();
  EXPECT_EQ(g.n(), 7);
  std::vector<Edge> expected{{0, 1}, {1, 2}, {0, 3}, {0, 4}, {1, 3},
                             {1, 4}, {1, 5}, {1, 6}, {2, 5}, {2, 6}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(g.edges(), expected);
}

TEST(Constructions, TkHasOneHub) {
  Graph g = t_graph(5);
  EXPECT_EQ(g.n(), 11);
  EXPECT_EQ(g.m(), 15);
  int hubs = 0;
  for (int v = 0; v < g.n(); ++v) hubs += g.degree(v) == 10;
  EXPECT_EQ(hubs, 1);
  EXPECT_EQ(g.degree(0), 10);
}

TEST(Constructions, JoinOfSingletonsIsK2) { EXPECT_EQ(join(clique(1), clique(1)), clique(2)); }

TEST(Constructions, KDeltaCounts) {
  Graph g = k_delta(25, 49);
  EXPECT_EQ(g.n(), 1 + 25 + 25 * 49);
  EXPECT_EQ(g.m(), 25 + 2 * 25 * 49);
}

TEST(Constructions, TriangleCountsOfTkAndKDelta) {
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(triangles(t_graph(k)).size(), static_cast<size_t>(k));
  for (int s = 1; s <= 5; ++s)
    for (int t = 0; t <= 4; ++t) {
      Graph g = k_delta(s, t);
      auto ts = triangles(g);
      ASSERT_EQ(ts.size(), static_cast<size_t>(s * t));
      for (const auto& tr : ts) {
        int skeleton = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            Edge e = make_edge(tr[i], tr[j]);
            skeleton += e.u == 0 && e.v >= 1 && e.v <= s;
          }
        EXPECT_EQ(skeleton, 1);
      }
    }
}

TEST(Constructions, ParameterErrors) {
  EXPECT_THROW(clique(0), ParameterError);
  EXPECT_THROW(complete_bipartite(0, 3), ParameterError);
  EXPECT_THROW(t_graph(0), ParameterError);
  EXPECT_THROW(k_delta(0, 2), ParameterError);
}

TEST(Constructions, SpecParser) {
  EXPECT_EQ(parse_graph_spec("K4"), clique(4));
  EXPECT_EQ(parse_graph_spec("K3,3"), complete_bipartite(3, 3));
  EXPECT_EQ(parse_graph_spec("hatk34"), hat_k(3, 4));
  EXPECT_EQ(parse_graph_spec("HatK(3,5)"), hat_k(3, 5));
  EXPECT_EQ(parse_graph_spec("r7"), r7());
  EXPECT_EQ(parse_graph_spec("T10"), t_graph(10));
  EXPECT_EQ(parse_graph_spec("KDelta(5,5)"), k_delta(5, 5));
  EXPECT_EQ(parse_graph_spec("Join(K1,3;K1,4)"), join(star(3), star(4)));
  EXPECT_EQ(parse_graph_spec("Union(K3;K3)"), disjoint_union({clique(3), clique(3)}));
  EXPECT_THROW(parse_graph_spec("Q5"), ParameterError);
  EXPECT_THROW(parse_graph_spec("K4)"), ParameterError);
}

TEST(Copies, SmallCounts) {
  EXPECT_EQ(enumerate_copies(clique(4), clique(3)).size(), 4u);
  EXPECT_EQ(enumerate_copies(clique(5), clique(4)).size(), 5u);
  EXPECT_EQ(enumerate_copies(r7(), clique(3)).size(), oracle::triangles(r7()).size());
  EXPECT_EQ(enumerate_copies(r7(), clique(3)).size(), 4u);
}

TEST(Copies, AgreesWithInjectionOracle) {
  Rng rng(20240601);
  std::vector<Graph> patterns{clique(3), path(3), path(4), cycle(4), star(3),
                              Graph(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}),
                              disjoint_union({clique(2), clique(2)}), clique(4)};
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform_int(4, 8);
    Graph g = random_graph(n, 0.3 + 0.5 * rng.uniform01(), rng);
    for (const auto& h : patterns) {
      auto fast = enumerate_copies(g, h);
      auto slow = oracle::copies(g, h);
      ASSERT_EQ(fast.size(), slow.size()) << "trial " << trial;
      for (const auto& emb : fast)
        for (const auto& e : h.edges()) ASSERT_TRUE(g.adjacent(emb[e.u], emb[e.v]));
    }
  }
}

TEST(Copies, AutomorphismsMatchPermutationCount) {
  for (const auto& h : {clique(3), path(4), cycle(4), star(3), r7(), t_graph(2), hat_k(3, 2)}) {
    std::vector<int> p(h.n());
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t count = 0;
    do count += relabel(h, p) == h;
    while (std::next_permutation(p.begin(), p.end()));
    EXPECT_EQ(count_automorphisms(h), count);
  }
}

TEST(CommonNeighbourhood, Examples) {
  EXPECT_EQ(common_neighbourhood(clique(5), {1, 3}), (std::vector<Vertex>{0, 2, 4}));
  EXPECT_EQ(common_neighbourhood(complete_bipartite(3, 3), {0, 1}), (std::vector<Vertex>{3, 4, 5}));
  EXPECT_EQ(common_neighbourhood(r7(), {0, 2}), (std::vector<Vertex>{1}));
}

TEST(CommonNeighbourhood, SubsetOfEachNeighbourhood) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = random_graph(30, 0.4, rng);
    std::vector<Vertex> xs{rng.uniform_int(0, 9), rng.uniform_int(10, 19), rng.uniform_int(20, 29)};
    for (Vertex w : common_neighbourhood(g, xs))
      for (Vertex x : xs) EXPECT_TRUE(g.adjacent(w, x));
  }
}

TEST(Components, Examples) {
  EXPECT_EQ(components(disjoint_union({clique(3), clique(3)})).size(), 2u);
  auto iso = components(empty_graph(4));
  ASSERT_EQ(iso.size(), 4u);
  for (const auto& c : iso) EXPECT_EQ(c.graph.n(), 1);
  EXPECT_EQ(components(r7()).size(), 1u);
  auto parts = components(Graph(5, {{3, 4}, {0, 2}}));
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].to_parent, (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(parts[2].to_parent, (std::vector<Vertex>{3, 4}));
}

TEST(Density, M2OfCliques) {
  for (int r = 3; r <= 12; ++r) EXPECT_EQ(max_2_density(clique(r)), Rational(r + 1, 2)) << r;
  EXPECT_EQ(max_2_density(clique(4)), Rational(5, 2));
  EXPECT_EQ(max_2_density(clique(5)), Rational(3));
  EXPECT_THROW(max_2_density(path(2)), DomainError);
}

TEST(Density, BipartitionDensityOfStarJoin) {
  EXPECT_EQ(max_bipartition_density(join(star(3), star(4))), Rational(4, 5));
  EXPECT_EQ(max_density(star(4)), Rational(4, 5));
  EXPECT_EQ(max_density(clique(4)), Rational(3, 2));
  auto rep = densities(clique(4));
  ASSERT_TRUE(rep.m2 && rep.m_bip2);
  EXPECT_EQ(*rep.m_bip2, Rational(1, 2));
}

TEST(Density, M1AgainstSubsetOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = random_graph(rng.uniform_int(2, 9), 0.5, rng);
    Rational best(0);
    for (std::uint32_t s = 1; s < (1U << g.n()); ++s) {
      int e = 0;
      for (const auto& ed : g.edges()) e += (s >> ed.u & 1U) && (s >> ed.v & 1U);
      best = std::max(best, Rational(e, std::popcount(s)));
    }
    EXPECT_EQ(max_density(g), best);
  }
}

TEST(Canonical, InvariantUnderRelabelling) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = random_graph(rng.uniform_int(3, 12), 0.45, rng);
    std::vector<int> p(g.n());
    std::iota(p.begin(), p.end(), 0);
    rng.shuffle(p);
    Graph h = relabel(g, p);
    auto a = canonical_form(g), b = canonical_form(h);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(relabel(g, a.labelling), relabel(h, b.labelling));
  }
  EXPECT_FALSE(isomorphic(path(4), star(3)));
  EXPECT_TRUE(isomorphic(cycle(5), relabel(cycle(5), {2, 4, 1, 3, 0})));
}

TEST(Io, RoundTrips) {
  Graph g = r7();
  std::istringstream is(to_edge_list(g));
  EXPECT_EQ(from_edge_list(is), g);
  EXPECT_EQ(graph_from_json(to_json(g)), g);
  std::istringstream bad("3 2\n0 1\n");
  EXPECT_THROW(from_edge_list(bad), ParameterError);
}

}  // namespace
}  // namespace rainbow
