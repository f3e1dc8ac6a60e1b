#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/avoider_k4.hpp"
#include "rainbow/colouring.hpp"
#include "rainbow/copies.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/sampling.hpp"

namespace rainbow {

// Edges lying in at least one triangle.
inline Graph triangle_union(const Graph& g) {
  std::vector<char> keep(g.m(), 0);
  for (const auto& t : triangles(g)) {
    keep[g.edge_id(t[0], t[1])] = 1;
    keep[g.edge_id(t[0], t[2])] = 1;
    keep[g.edge_id(t[1], t[2])] = 1;
  }
  std::vector<Edge> es;
  for (int id = 0; id < g.m(); ++id)
    if (keep[id]) es.push_back(g.edge(id));
  return Graph(g.n(), std::move(es));
}

struct MatchingQuadruple {
  std::array<std::vector<Edge>, 4> m;
  std::string route;  // "case-I", "case-II", "search" or "direct-search"
};

// Step of a growth sequence: the triangle added and its type 'a'..'e'.
struct GrowthStep {
  std::array<Vertex, 3> triangle;
  char type = 'a';
};

struct GrowthSequence {
  std::array<Vertex, 3> start;
  std::vector<GrowthStep> steps;

  int count(char type) const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                          [&](const GrowthStep& s) { return s.type == type; }));
  }
  // Steps before this index include every non-(a) step.
  int prefix_length() const {
    int k = 0;
    for (int i = 0; i < static_cast<int>(steps.size()); ++i)
      if (steps[i].type != 'a') k = i + 1;
    return k;
  }
};

// Checks that g is connected and every edge lies in a triangle.
inline void require_triangle_component(const Graph& g) {
  if (g.m() == 0) throw DomainError("component has no edges");
  if (components(g).size() != 1) throw DomainError("component is not connected");
  if (triangle_union(g).m() != g.m()) throw DomainError("component has an edge in no triangle");
}

// Growth sequence from a start triangle. Each step adds the triangle with
// fewest new vertices, then fewest new edges, then lexicographically least.
inline GrowthSequence growth_sequence(const Graph& f, std::array<Vertex, 3> start) {
  auto tris = triangles(f);
  std::vector<char> in_v(f.n(), 0), in_e(f.m(), 0);
  auto add = [&](const std::array<Vertex, 3>& t) {
    for (Vertex v : t) in_v[v] = 1;
    in_e[f.edge_id(t[0], t[1])] = in_e[f.edge_id(t[0], t[2])] = in_e[f.edge_id(t[1], t[2])] = 1;
  };
  GrowthSequence seq{start, {}};
  add(start);
  int covered = 3;
  while (covered < f.m()) {
    int best = -1, best_nv = 4, best_ne = 4;
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      const auto& t = tris[i];
      int nv = !in_v[t[0]] + !in_v[t[1]] + !in_v[t[2]];
      if (nv == 3) continue;
      int ne = !in_e[f.edge_id(t[0], t[1])] + !in_e[f.edge_id(t[0], t[2])] + !in_e[f.edge_id(t[1], t[2])];
      if (ne == 0) continue;
      if (nv < best_nv || (nv == best_nv && ne < best_ne)) {
        best = i;
        best_nv = nv;
        best_ne = ne;
      }
    }
    if (best < 0) throw DomainError("component is not a connected union of triangles");
    const auto& t = tris[best];
    char type;
    if (best_nv == 2) {
      type = 'a';
    } else if (best_nv == 1) {
      std::vector<Vertex> old;
      for (Vertex v : t)
        if (in_v[v]) old.push_back(v);
      type = in_e[f.edge_id(old[0], old[1])] ? 'b' : 'c';
    } else {
      type = best_ne == 1 ? 'd' : 'e';
    }
    covered += best_ne;
    seq.steps.push_back({t, type});
    add(t);
  }
  return seq;
}

// Condition (1) and (2) of the matching lemma over all triangles of g.
// Returns a description of the first violation, or nothing.
inline std::optional<std::string> matching_violation(const Graph& g, const MatchingQuadruple& q) {
  std::vector<int> label(g.m(), -1);
  for (int i = 0; i < 4; ++i) {
    std::vector<char> touched(g.n(), 0);
    for (const auto& e : q.m[i]) {
      int id = g.edge_id(e.u, e.v);
      if (id < 0) return "M" + std::to_string(i) + " uses a non-edge";
      if (label[id] >= 0) return "matchings share an edge";
      label[id] = i;
      if (touched[e.u] || touched[e.v]) return "M" + std::to_string(i) + " is not a matching";
      touched[e.u] = touched[e.v] = 1;
    }
  }
  std::vector<char> m0(g.n(), 0);
  for (const auto& e : q.m[0]) m0[e.u] = m0[e.v] = 1;
  for (int i = 1; i < 4; ++i)
    for (const auto& e : q.m[i])
      if (m0[e.u] || m0[e.v]) return "M0 meets M" + std::to_string(i);
  for (const auto& t : triangles(g)) {
    int ids[3] = {g.edge_id(t[0], t[1]), g.edge_id(t[0], t[2]), g.edge_id(t[1], t[2])};
    bool has0 = false;
    unsigned others = 0;
    for (int id : ids) {
      if (label[id] == 0) has0 = true;
      if (label[id] > 0) others |= 1u << label[id];
    }
    if (!has0 && std::popcount(others) < 2)
      return "triangle " + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
             std::to_string(t[2]) + " is not covered";
  }
  return std::nullopt;
}

namespace detail {

// Labels each edge with -1 (unused) or 0..3 so that the labels form a valid
// quadruple for the triangles of g. Labels 1..3 are interchangeable, so a new
// one is only opened as max+1.
class MatchingSearch {
 public:
  MatchingSearch(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {
    for (const auto& t : triangles(g_))
      tris_.push_back({g_.edge_id(t[0], t[1]), g_.edge_id(t[0], t[2]), g_.edge_id(t[1], t[2])});
    through_.assign(g_.m(), {});
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i)
      for (int id : tris_[i]) through_[id].push_back(i);
    order_.resize(g_.m());
    for (int i = 0; i < g_.m(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return through_[a].size() > through_[b].size(); });
    label_.assign(g_.m(), kUnset);
    // vertex use: bit i set when some edge at v is labelled i
    use_.assign(g_.n(), 0);
  }

  // 1 found, 0 exhausted, -1 budget.
  int run() { return rec(0, 0); }
  std::uint64_t nodes() const { return nodes_; }

  MatchingQuadruple result() const {
    MatchingQuadruple q;
    for (int id = 0; id < g_.m(); ++id)
      if (label_[id] >= 0) q.m[label_[id]].push_back(g_.edge(id));
    return q;
  }

 private:
  static constexpr int kUnset = -2;

  bool allowed(int id, int lab) const {
    if (lab < 0) return true;
    const Edge& e = g_.edge(id);
    unsigned bit = 1u << lab;
    if ((use_[e.u] & bit) || (use_[e.v] & bit)) return false;
    unsigned m0 = 1u, rest = 0b1110u;
    if (lab == 0) return !((use_[e.u] | use_[e.v]) & rest);
    return !((use_[e.u] | use_[e.v]) & m0);
  }

  // Still satisfiable: an M0 edge, two distinct other labels, or an edge
  // left to decide.
  bool triangle_ok(int t) const {
    unsigned others = 0;
    for (int id : tris_[t]) {
      if (label_[id] == kUnset || label_[id] == 0) return true;
      if (label_[id] > 0) others |= 1u << label_[id];
    }
    return std::popcount(others) >= 2;
  }

  int rec(std::size_t depth, int max_label) {
    if (depth == order_.size()) return 1;
    int id = order_[depth];
    const Edge& e = g_.edge(id);
    int top = std::min(3, max_label + 1);
    std::vector<int> choices{0};
    for (int lab = 1; lab <= top; ++lab) choices.push_back(lab);
    choices.push_back(-1);
    for (int lab : choices) {
      if (!allowed(id, lab)) continue;
      if (++nodes_ > budget_) return -1;
      label_[id] = lab;
      if (lab >= 0) {
        use_[e.u] |= 1u << lab;
        use_[e.v] |= 1u << lab;
      }
      bool ok = true;
      for (int t : through_[id])
        if (!triangle_ok(t)) {
          ok = false;
          break;
        }
      int res = ok ? rec(depth + 1, std::max(max_label, lab)) : 0;
      if (res == 1) return 1;
      if (lab >= 0) {
        use_[e.u] &= ~(1u << lab);
        use_[e.v] &= ~(1u << lab);
      }
      label_[id] = kUnset;
      if (res == -1) return -1;
    }
    return 0;
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<std::vector<int>> through_;
  std::vector<int> order_;
  std::vector<int> label_;
  std::vector<unsigned> use_;
  std::uint64_t nodes_ = 0;
};

inline std::optional<MatchingQuadruple> search_matchings(const Graph& g, std::uint64_t budget,
                                                         bool& budget_hit) {
  MatchingSearch s(g, budget);
  int r = s.run();
  if (r == -1) budget_hit = true;
  if (r != 1) return std::nullopt;
  return s.result();
}

}  // namespace detail

inline constexpr int kDirectSearchVertices = 30;
inline constexpr std::uint64_t kMatchingSearchBudget = 10'000'000;

// Matchings for one connected union of triangles, in the component's labels.
inline MatchingQuadruple find_matchings(const Graph& f) {
  require_triangle_component(f);
  bool budget_hit = false;
  if (f.n() > kDirectSearchVertices) {
    auto q = detail::search_matchings(f, kMatchingSearchBudget, budget_hit);
    if (!q) throw SearchExhausted(budget_hit ? "matching search hit its node budget"
                                             : "no matching quadruple exists");
    q->route = "direct-search";
    return *q;
  }

  // The start triangle leaving the shortest non-(a) prefix.
  std::optional<GrowthSequence> best;
  int best_len = 0;
  for (const auto& t : triangles(f)) {
    auto seq = growth_sequence(f, t);
    int len = seq.prefix_length();
    if (!best || len < best_len) {
      best = std::move(seq);
      best_len = len;
    }
  }
  const auto& seq = *best;
  std::vector<Edge> tail;
  for (int i = best_len; i < static_cast<int>(seq.steps.size()); ++i) {
    const auto& t = seq.steps[i].triangle;
    // The two new vertices of an (a) step are the ones outside the prefix
    // graph at that time; x is the old vertex.
    std::vector<char> seen(f.n(), 0);
    for (Vertex v : seq.start) seen[v] = 1;
    for (int j = 0; j < i; ++j)
      for (Vertex v : seq.steps[j].triangle) seen[v] = 1;
    std::vector<Vertex> fresh;
    for (Vertex v : t)
      if (!seen[v]) fresh.push_back(v);
    tail.push_back(make_edge(fresh[0], fresh[1]));
  }

  MatchingQuadruple q;
  if (best_len == 0) {
    q.m[0].push_back(make_edge(seq.start[0], seq.start[1]));
    q.route = "case-I";
  } else if (best_len == 1 && seq.steps[0].type == 'b') {
    const auto& t = seq.steps[0].triangle;
    std::vector<Vertex> shared;
    for (Vertex v : t)
      if (std::find(seq.start.begin(), seq.start.end(), v) != seq.start.end()) shared.push_back(v);
    q.m[0].push_back(make_edge(shared[0], shared[1]));
    q.route = "case-II";
  } else {
    std::vector<Vertex> vs(seq.start.begin(), seq.start.end());
    for (int j = 0; j < best_len; ++j) vs.insert(vs.end(), seq.steps[j].triangle.begin(), seq.steps[j].triangle.end());
    std::vector<int> ids;
    auto add_tri = [&](const std::array<Vertex, 3>& t) {
      ids.push_back(f.edge_id(t[0], t[1]));
      ids.push_back(f.edge_id(t[0], t[2]));
      ids.push_back(f.edge_id(t[1], t[2]));
    };
    add_tri(seq.start);
    for (int j = 0; j < best_len; ++j) add_tri(seq.steps[j].triangle);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto sub = edge_subgraph(f, ids);
    auto found = detail::search_matchings(sub.graph, kMatchingSearchBudget, budget_hit);
    if (found) {
      for (int i = 0; i < 4; ++i)
        for (const auto& e : found->m[i])
          q.m[i].push_back(make_edge(sub.to_parent[e.u], sub.to_parent[e.v]));
      q.route = "search";
    } else {
      auto whole = detail::search_matchings(f, kMatchingSearchBudget, budget_hit);
      if (!whole) throw SearchExhausted(budget_hit ? "matching search hit its node budget"
                                                   : "no matching quadruple exists");
      whole->route = "direct-search";
      return *whole;
    }
  }
  q.m[0].insert(q.m[0].end(), tail.begin(), tail.end());
  for (auto& m : q.m) std::sort(m.begin(), m.end());
  return q;
}

struct K6Result {
  EdgeColouring colouring;
  MatchingQuadruple matchings;  // in instance labels
  int components = 0;
};

inline constexpr int kRed = 1, kBlue = 2, kGreen = 3;

// Proper colouring of seed ∪ random with no rainbow K6.
inline K6Result avoid_k6_detailed(const PerturbedInstance& inst) {
  auto [a, b] = complete_bipartition(inst.seed);
  for_each_clique(inst.random, 4, [&](const std::vector<Vertex>& k) -> bool {
    throw StructureUnsupported("random graph contains a K4", k);
  });
  K6Result out;
  Graph tri = triangle_union(inst.random);
  for (const auto& c : components(tri)) {
    if (c.graph.m() == 0) continue;
    ++out.components;
    MatchingQuadruple q;
    try {
      q = find_matchings(c.graph);
    } catch (const SearchExhausted& e) {
      // Only components far denser than the lemma's regime get here.
      throw StructureUnsupported("triangle component on " + std::to_string(c.graph.n()) + " vertices and " +
                                     std::to_string(c.graph.m()) + " edges: " + e.what(),
                                 c.to_parent);
    }
    for (int i = 0; i < 4; ++i)
      for (const auto& e : q.m[i])
        out.matchings.m[i].push_back(make_edge(c.to_parent[e.u], c.to_parent[e.v]));
  }
  for (auto& m : out.matchings.m) std::sort(m.begin(), m.end());

  Graph gamma = inst.union_graph();
  EdgeColouring psi(gamma.m());
  auto colour = [&](Vertex x, Vertex y, int c) { psi.set(gamma.edge_id(x, y), c); };
  const int solid[4] = {kRed, kRed, kBlue, kGreen};
  for (int i = 0; i < 4; ++i)
    for (const auto& e : out.matchings.m[i]) colour(e.u, e.v, solid[i]);

  std::vector<char> in_a(inst.n, 0);
  for (Vertex v : a) in_a[v] = 1;
  auto side = [&](const Edge& e) { return in_a[e.u] == in_a[e.v] ? int(in_a[e.u]) : -1; };
  int next = kGreen + 1;
  for (const auto& xy : out.matchings.m[0])
    for (const auto& zw : out.matchings.m[2]) {
      int s = side(xy), t = side(zw);
      if (s < 0 || t < 0 || s == t) continue;
      colour(xy.u, zw.u, next);
      colour(xy.v, zw.v, next);
      colour(xy.u, zw.v, next + 1);
      colour(xy.v, zw.u, next + 1);
      next += 2;
    }
  for (int id = 0; id < gamma.m(); ++id)
    if (!psi.coloured(id)) psi.set(id, next++);
  out.colouring = std::move(psi);
  return out;
}

inline EdgeColouring avoid_k6(const PerturbedInstance& inst) { return avoid_k6_detailed(inst).colouring; }

// Rainbow K6 copies of seed ∪ random, found as pairs of triangles of the
// random graph on opposite sides. Exhaustive when the random graph is
// K4-free, since each side of a K6 then holds exactly three vertices.
inline int rainbow_k6_by_triangle_pairs(const PerturbedInstance& inst, const EdgeColouring& psi) {
  auto [a, b] = complete_bipartition(inst.seed);
  Graph gamma = inst.union_graph();
  std::vector<char> in_a(inst.n, 0);
  for (Vertex v : a) in_a[v] = 1;
  std::vector<std::array<Vertex, 3>> ta, tb;
  for (const auto& t : triangles(inst.random)) {
    int s = in_a[t[0]] + in_a[t[1]] + in_a[t[2]];
    if (s == 3) ta.push_back(t);
    if (s == 0) tb.push_back(t);
  }
  int count = 0;
  for (const auto& s : ta)
    for (const auto& t : tb)
      if (is_rainbow_clique(gamma, psi, {s[0], s[1], s[2], t[0], t[1], t[2]})) ++count;
  return count;
}

}  // namespace rainbow
