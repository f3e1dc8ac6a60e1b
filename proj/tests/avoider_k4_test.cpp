#include <gtest/gtest.h>

#include "rainbow/avoider_k4.hpp"
#include <cmath>
#include <set>

#include "rainbow/constructions.hpp"

namespace rainbow {
namespace {

// Naive scan over all 4-sets.
int rainbow_k4_naive(const Graph& g, const EdgeColouring& psi) {
  int count = 0;
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b)
      for (int c = b + 1; c < g.n(); ++c)
        for (int d = c + 1; d < g.n(); ++d) {
          std::vector<int> cs;
          bool clique4 = true;
          int vs[4] = {a, b, c, d};
          for (int i = 0; i < 4 && clique4; ++i)
            for (int j = i + 1; j < 4; ++j) {
              int id = g.edge_id(vs[i], vs[j]);
              if (id < 0) {
                clique4 = false;
                break;
              }
              cs.push_back(psi[id]);
            }
          if (!clique4) continue;
          std::sort(cs.begin(), cs.end());
          if (std::adjacent_find(cs.begin(), cs.end()) == cs.end()) ++count;
        }
  return count;
}

TEST(Classify, PerfectMatching) {
  auto cs = classify_components(Graph(6, {{0, 1}, {2, 3}, {4, 5}}));
  ASSERT_EQ(cs.size(), 3u);
  for (const auto& c : cs) EXPECT_EQ(c.kind, ComponentKind::K2);
}

TEST(Classify, TriangleIsUnsupported) {
  try {
    classify_components(Graph(5, {{1, 2}, {2, 4}, {1, 4}}));
    FAIL();
  } catch (const StructureUnsupported& e) {
    EXPECT_EQ(e.vertices(), (std::vector<Vertex>{1, 2, 4}));
  }
  EXPECT_THROW(classify_components(path(5)), StructureUnsupported);
  EXPECT_THROW(classify_components(cycle(4)), StructureUnsupported);
}

TEST(Classify, PathsAndStars) {
  auto p4 = classify_components(Graph(4, {{2, 0}, {0, 3}, {3, 1}}));
  ASSERT_EQ(p4.size(), 1u);
  EXPECT_EQ(p4[0].kind, ComponentKind::P4);
  EXPECT_EQ(p4[0].embedding, (std::vector<Vertex>{1, 3, 0, 2}));
  auto s = classify_components(Graph(5, {{4, 1}, {4, 0}, {4, 3}}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].kind, ComponentKind::K13);
  EXPECT_EQ(s[0].embedding, (std::vector<Vertex>{4, 0, 1, 3}));
  EXPECT_EQ(s[1].kind, ComponentKind::K1);
  auto p3 = classify_components(Graph(3, {{0, 2}, {2, 1}}));
  EXPECT_EQ(p3[0].kind, ComponentKind::P3);
  EXPECT_EQ(p3[0].embedding, (std::vector<Vertex>{0, 2, 1}));
}

TEST(Inside, Colours) {
  EXPECT_EQ(colour_inside({ComponentKind::P4, {5, 6, 7, 8}}),
            (ColourTriples{{5, 6, 1}, {6, 7, 2}, {7, 8, 3}}));
  EXPECT_EQ(colour_inside({ComponentKind::K2, {3, 9}}), (ColourTriples{{3, 9, 1}}));
  EXPECT_TRUE(colour_inside({ComponentKind::K1, {3}}).empty());
}

int colour_of(const ColourTriples& ts, int a, int b) {
  for (const auto& t : ts)
    if (t[0] == a && t[1] == b) return t[2];
  return -1;
}

TEST(CrossTable, StarStarClasses) {
  ComponentType l{ComponentKind::K13, {0, 1, 2, 3}}, r{ComponentKind::K13, {4, 5, 6, 7}};
  auto ts = cross_table(l, r, {100, 16});
  enum { y, x1, x2, x3, yp, x1p, x2p, x3p };
  int c4 = colour_of(ts, x1, x2p);
  EXPECT_EQ(colour_of(ts, y, yp), c4);
  EXPECT_EQ(colour_of(ts, x2, x3p), c4);
  EXPECT_EQ(colour_of(ts, x3, x1p), c4);
  EXPECT_EQ(colour_of(ts, y, x2p), colour_of(ts, x3, yp));
  EXPECT_EQ(colour_of(ts, x1, yp), colour_of(ts, y, x3p));
  EXPECT_EQ(colour_of(ts, x2, yp), colour_of(ts, y, x1p));
  std::set<int> distinct;
  for (const auto& t : ts) distinct.insert(t[2]);
  EXPECT_EQ(distinct.size(), 16u - 3 - 1 - 1 - 1);
}

TEST(CrossTable, PathPathClass) {
  ComponentType l{ComponentKind::P4, {0, 1, 2, 3}}, r{ComponentKind::P4, {4, 5, 6, 7}};
  auto ts = cross_table(l, r, {10, 16});
  int c = colour_of(ts, 0, 6);
  EXPECT_EQ(colour_of(ts, 1, 7), c);
  EXPECT_EQ(colour_of(ts, 2, 4), c);
  EXPECT_EQ(colour_of(ts, 3, 5), c);
  for (const auto& t : ts) {
    EXPECT_GE(t[2], 10);
    EXPECT_LT(t[2], 26);
  }
}

TEST(CrossTable, PaletteTooSmall) {
  ComponentType l{ComponentKind::P4, {0, 1, 2, 3}}, r{ComponentKind::K2, {4, 5}};
  EXPECT_THROW(cross_table(l, r, {4, 7}), ParameterError);
}

ComponentType canonical_component(ComponentKind k, int offset) {
  switch (k) {
    case ComponentKind::K1: return {k, {offset}};
    case ComponentKind::K2: return {k, {offset, offset + 1}};
    case ComponentKind::P3: return {k, {offset, offset + 1, offset + 2}};
    default: return {k, {offset, offset + 1, offset + 2, offset + 3}};
  }
}

// Every (L, R) kind pair: K_{L,R} with inside and cross colours is proper and
// has no rainbow K4.
TEST(CrossTable, AllKindPairsExhaustive) {
  const ComponentKind kinds[] = {ComponentKind::K1, ComponentKind::K2, ComponentKind::P3,
                                 ComponentKind::K13, ComponentKind::P4};
  for (auto lk : kinds)
    for (auto rk : kinds) {
      auto l = canonical_component(lk, 0);
      int nl = static_cast<int>(l.embedding.size());
      auto r = canonical_component(rk, nl);
      ColourTriples all = colour_inside(l);
      for (const auto& t : colour_inside(r)) all.push_back(t);
      for (const auto& t : cross_table(l, r, {4, 16})) all.push_back(t);
      std::vector<Edge> es;
      for (const auto& t : all) es.push_back({t[0], t[1]});
      Graph g(nl + static_cast<int>(r.embedding.size()), es);
      ASSERT_EQ(static_cast<std::size_t>(g.m()), all.size());
      auto psi = EdgeColouring::from_triples(g, all);
      EXPECT_TRUE(psi.total());
      EXPECT_TRUE(is_proper(g, psi)) << to_string(lk) << "," << to_string(rk);
      EXPECT_EQ(rainbow_k4_naive(g, psi), 0) << to_string(lk) << "," << to_string(rk);
    }
}

PerturbedInstance hand_instance(int n, std::vector<Edge> random) {
  PerturbedInstance inst;
  inst.seed_spec = "bipartite";
  inst.n = n;
  inst.seed = seed_graph("bipartite", n);
  inst.random = Graph(n, std::move(random));
  return inst;
}

TEST(AvoidK4, NoRandomEdges) {
  auto inst = hand_instance(12, {});
  auto psi = avoid_k4(inst);
  EXPECT_EQ(psi.num_colours(), 36);
  EXPECT_TRUE(is_proper(inst.union_graph(), psi));
}

TEST(AvoidK4, TwoMatchingEdges) {
  auto inst = hand_instance(8, {{0, 1}, {4, 5}});
  Graph g = inst.union_graph();
  auto psi = avoid_k4(inst);
  EXPECT_TRUE(is_proper(g, psi));
  std::set<int> c4;
  for (int a : {0, 1})
    for (int b : {4, 5}) c4.insert(psi[g.edge_id(a, b)]);
  // Restriction of the path table leaves the four cross edges distinct; the
  // K4 repeats inside colour 1 instead.
  EXPECT_EQ(c4.size(), 4u);
  EXPECT_EQ(psi[g.edge_id(0, 1)], psi[g.edge_id(4, 5)]);
  EXPECT_EQ(cliques(g, 4).size(), 1u);
  EXPECT_EQ(rainbow_k4_naive(g, psi), 0);
}

TEST(AvoidK4, CrossRandomEdgesAreAbsorbed) {
  auto inst = hand_instance(8, {{0, 5}, {0, 1}, {5, 6}});
  auto psi = avoid_k4(inst);
  EXPECT_TRUE(is_proper(inst.union_graph(), psi));
  EXPECT_TRUE(psi.total());
}

TEST(AvoidK4, NonBipartiteSeedRejected) {
  auto inst = hand_instance(6, {});
  inst.seed = clique(6);
  EXPECT_THROW(avoid_k4(inst), DomainError);
}

TEST(AvoidK4, SampledInstances) {
  int ok = 0;
  for (int n : {20, 50, 200}) {
    for (int t = 0; t < 30; ++t) {
      double p = 0.3 * std::pow(n, -1.25) * (n == 20 ? 8 : 1);
      auto inst = sample_perturbed("bipartite", n, p, derive_seed(5, t, n));
      EdgeColouring psi;
      try {
        psi = avoid_k4(inst);
      } catch (const StructureUnsupported&) {
        continue;
      }
      ++ok;
      Graph g = inst.union_graph();
      ASSERT_TRUE(is_proper(g, psi));
      ASSERT_TRUE(psi.total());
      auto [u, w] = complete_bipartition(inst.seed);
      std::vector<char> in_u(n, 0);
      for (Vertex v : u) in_u[v] = 1;
      // Each K4 is a seed C4 plus one edge inside each side.
      int expected = 0, rainbow = 0;
      for (const auto& e : inst.random.edges())
        for (const auto& f : inst.random.edges()) {
          if (!(in_u[e.u] && in_u[e.v] && !in_u[f.u] && !in_u[f.v])) continue;
          ++expected;
          if (is_rainbow_clique(g, psi, {e.u, e.v, f.u, f.v})) ++rainbow;
        }
      EXPECT_EQ(static_cast<int>(cliques(g, 4).size()), expected);
      EXPECT_EQ(rainbow, 0);
      if (n <= 20) {
        EXPECT_EQ(rainbow_k4_naive(g, psi), 0);
      }
    }
  }
  EXPECT_GT(ok, 60);
}

}  // namespace
}  // namespace rainbow
