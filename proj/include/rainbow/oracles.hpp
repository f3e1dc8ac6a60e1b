#pragma once

// Deliberately naive reference implementations. They share no code with the
// algorithms they check beyond the Graph type, and are used by the test
// suite and by verify-all.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/rational.hpp"

namespace rainbow::oracle {

// Distinct images (vertex set + edge set) of all injective maps V(H) -> V(G)
// that preserve edges, found by trying every tuple.
inline std::set<std::vector<int>> copies(const Graph& g, const Graph& h) {
  std::set<std::vector<int>> out;
  int k = h.n();
  std::vector<int> img(k);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      for (const auto& e : h.edges())
        if (!g.adjacent(img[e.u], img[e.v])) return;
      std::vector<int> key(img);
      std::sort(key.begin(), key.end());
      key.push_back(-1);
      std::vector<int> es;
      for (const auto& e : h.edges()) {
        Edge f = make_edge(img[e.u], img[e.v]);
        es.push_back(f.u * g.n() + f.v);
      }
      std::sort(es.begin(), es.end());
      key.insert(key.end(), es.begin(), es.end());
      out.insert(key);
      return;
    }
    for (int v = 0; v < g.n(); ++v) {
      if (std::find(img.begin(), img.begin() + i, v) != img.begin() + i) continue;
      img[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::array<int, 3>> triangles(const Graph& g) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b)
      for (int c = b + 1; c < g.n(); ++c)
        if (g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(b, c)) out.push_back({a, b, c});
  return out;
}

// Does every partition of E(G) into matchings (= every proper colouring up
// to renaming colours) contain a rainbow copy of H? Each copy is given as
// its edge list in terms of G's edge ids. Exponential; meant for e(G) <= 10.
inline bool arrows_by_matching_partitions(const Graph& g,
                                          const std::vector<std::vector<int>>& copy_edges) {
  int m = g.m();
  std::vector<int> cls(m, -1);
  bool all_have_rainbow = true;
  std::function<void(int, int)> rec = [&](int i, int classes) {
    if (!all_have_rainbow) return;
    if (i == m) {
      bool rainbow_found = false;
      for (const auto& cp : copy_edges) {
        std::vector<int> cs;
        for (int id : cp) cs.push_back(cls[id]);
        std::sort(cs.begin(), cs.end());
        if (std::adjacent_find(cs.begin(), cs.end()) == cs.end()) {
          rainbow_found = true;
          break;
        }
      }
      if (!rainbow_found) all_have_rainbow = false;
      return;
    }
    const Edge& e = g.edge(i);
    for (int c = 0; c <= classes; ++c) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        if (cls[j] != c) continue;
        const Edge& f = g.edge(j);
        if (f.u == e.u || f.u == e.v || f.v == e.u || f.v == e.v) ok = false;
      }
      if (!ok) continue;
      cls[i] = c;
      rec(i + 1, std::max(classes, c + 1));
      cls[i] = -1;
    }
  };
  rec(0, 0);
  return all_have_rainbow;
}

struct InducedMin {
  Rational value;
  std::vector<int> vertices;
};

// min over vertex subsets S with e(G[S]) >= 1 of |S| - x e(G[S]), by Gray
// code walk over all 2^n subsets. Practical up to about 32 vertices.
inline InducedMin induced_min(const Graph& g, const Rational& x) {
  int n = g.n();
  if (n > 40) throw ParameterError("induced_min oracle limited to 40 vertices");
  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= std::uint64_t{1} << e.v;
    adj[e.v] |= std::uint64_t{1} << e.u;
  }
  // Compare |S| * den - num * e in integers.
  std::int64_t num = x.num(), den = x.den();
  std::uint64_t s = 0, best_s = 0;
  std::int64_t vs = 0, es = 0;
  bool have = false;
  std::int64_t best_v = 0, best_e = 0;
  std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    int bit = std::countr_zero(i);
    std::uint64_t b = std::uint64_t{1} << bit;
    if (s & b) {
      s &= ~b;
      --vs;
      es -= std::popcount(adj[bit] & s);
    } else {
      es += std::popcount(adj[bit] & s);
      s |= b;
      ++vs;
    }
    if (es == 0) continue;
    if (!have || vs * den - num * es < best_v * den - num * best_e) {
      have = true;
      best_v = vs;
      best_e = es;
      best_s = s;
    }
  }
  InducedMin r{Rational(0), {}};
  if (!have) throw DomainError("graph has no edges");
  r.value = Rational(best_v) - x * Rational(best_e);
  for (int v = 0; v < n; ++v)
    if (best_s >> v & 1U) r.vertices.push_back(v);
  return r;
}

// (min gamma, max steps among sequences with that gamma) over all ways of
// building h from one of its K4s (or K5s, with k5_base) by adding K4 copies
// that share an edge with the current graph. Plain recursion over edge sets.
struct SequenceCost {
  int gamma = -1;
  int steps = -1;
};

inline SequenceCost stretched_cost(const Graph& h, bool k5_base) {
  using EdgeSet = std::set<std::pair<int, int>>;
  std::vector<std::vector<int>> quads;
  std::vector<std::vector<int>> bases;
  int n = h.n();
  auto complete = [&](const std::vector<int>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (!h.adjacent(vs[i], vs[j])) return false;
    return true;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (complete({a, b, c, d})) quads.push_back({a, b, c, d});
          if (k5_base)
            for (int e = d + 1; e < n; ++e)
              if (complete({a, b, c, d, e})) bases.push_back({a, b, c, d, e});
        }
  if (!k5_base) bases = quads;
  EdgeSet full;
  for (const auto& e : h.edges()) full.insert({e.u, e.v});
  std::map<EdgeSet, SequenceCost> memo;
  std::function<SequenceCost(const EdgeSet&)> go = [&](const EdgeSet& s) -> SequenceCost {
    if (s == full) return {0, 0};
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::set<int> verts;
    for (const auto& [u, v] : s) {
      verts.insert(u);
      verts.insert(v);
    }
    SequenceCost best;
    for (const auto& q : quads) {
      int shared = 0, cost = 0;
      EdgeSet next = s;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          std::pair<int, int> e{q[i], q[j]};
          if (s.count(e)) {
            ++shared;
          } else {
            if (verts.count(q[i]) && verts.count(q[j])) ++cost;
            next.insert(e);
          }
        }
      if (shared == 0 || shared == 6) continue;
      auto sub = go(next);
      if (sub.gamma < 0) continue;
      SequenceCost c{sub.gamma + cost, sub.steps + 1};
      if (best.gamma < 0 || c.gamma < best.gamma || (c.gamma == best.gamma && c.steps > best.steps)) best = c;
    }
    memo[s] = best;
    return best;
  };
  SequenceCost best;
  for (const auto& b : bases) {
    EdgeSet s;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) s.insert({b[i], b[j]});
    auto c = go(s);
    if (c.gamma < 0) continue;
    if (best.gamma < 0 || c.gamma < best.gamma || (c.gamma == best.gamma && c.steps > best.steps)) best = c;
  }
  return best;
}

}  // namespace rainbow::oracle
