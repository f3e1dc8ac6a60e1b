#pragma once

#include <array>
#include <string>
#include <vector>

#include "rainbow/colouring.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/sampling.hpp"

namespace rainbow {

enum class ComponentKind { K1, K2, P3, K13, P4 };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::K1: return "K1";
    case ComponentKind::K2: return "K2";
    case ComponentKind::P3: return "P3";
    case ComponentKind::K13: return "K13";
    case ComponentKind::P4: return "P4";
  }
  return "?";
}

// embedding is in path order for paths (from the smaller end vertex) and
// centre first for K13.
struct ComponentType {
  ComponentKind kind = ComponentKind::K1;
  std::vector<Vertex> embedding;
};

using ColourTriples = std::vector<std::array<int, 3>>;

namespace detail {

inline std::vector<Vertex> path_order(const Subgraph& c) {
  const Graph& g = c.graph;
  Vertex start = -1;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) == 1 && (start < 0 || c.to_parent[v] < c.to_parent[start])) start = v;
  std::vector<Vertex> out{c.to_parent[start]};
  Vertex prev = -1, cur = start;
  while (static_cast<int>(out.size()) < g.n()) {
    Vertex next = -1;
    for (Vertex w : g.neighbours(cur))
      if (w != prev) next = w;
    prev = cur;
    cur = next;
    out.push_back(c.to_parent[cur]);
  }
  return out;
}

}  // namespace detail

// Classifies every component (isolated vertices included) of the graph.
inline std::vector<ComponentType> classify_components(const Graph& g) {
  std::vector<ComponentType> out;
  for (const auto& c : components(g)) {
    int v = c.graph.n(), e = c.graph.m();
    if (v == 1) {
      out.push_back({ComponentKind::K1, c.to_parent});
    } else if (v == 2) {
      out.push_back({ComponentKind::K2, c.to_parent});
    } else if (v == 3 && e == 2) {
      out.push_back({ComponentKind::P3, detail::path_order(c)});
    } else if (v == 4 && e == 3) {
      if (c.graph.max_degree() == 3) {
        ComponentType t{ComponentKind::K13, {}};
        for (Vertex x = 0; x < 4; ++x)
          if (c.graph.degree(x) == 3) t.embedding.push_back(c.to_parent[x]);
        for (Vertex x = 0; x < 4; ++x)
          if (c.graph.degree(x) == 1) t.embedding.push_back(c.to_parent[x]);
        out.push_back(std::move(t));
      } else {
        out.push_back({ComponentKind::P4, detail::path_order(c)});
      }
    } else {
      throw StructureUnsupported("component with " + std::to_string(v) + " vertices and " +
                                     std::to_string(e) + " edges is not K1, K2, P3, K13 or P4",
                                 c.to_parent);
    }
  }
  return out;
}

// Inside colours 1..3; P4 uses 2 on the middle edge.
inline ColourTriples colour_inside(const ComponentType& c) {
  const auto& x = c.embedding;
  switch (c.kind) {
    case ComponentKind::K1: return {};
    case ComponentKind::K2: return {{x[0], x[1], 1}};
    case ComponentKind::P3: return {{x[0], x[1], 1}, {x[1], x[2], 2}};
    case ComponentKind::K13: return {{x[0], x[1], 1}, {x[0], x[2], 2}, {x[0], x[3], 3}};
    case ComponentKind::P4: return {{x[0], x[1], 1}, {x[1], x[2], 2}, {x[2], x[3], 3}};
  }
  return {};
}

struct ColourBlock {
  int first = 0;
  int size = 0;
};

namespace detail {

// Local labels: K13 as (y, x1, x2, x3); P4 as (x1, x2, x3, x4). Entries are
// shared colour classes; -1 means a colour of its own.
using CrossTable = std::array<std::array<int, 4>, 4>;

inline constexpr CrossTable kStarStar{{
    {4, 7, 5, 6},
    {6, -1, 4, -1},
    {7, -1, -1, 4},
    {5, 4, -1, -1},
}};

inline constexpr CrossTable kStarPath{{
    {4, 6, 7, 5},
    {-1, -1, 6, 7},
    {-1, 4, 5, -1},
    {6, 7, -1, -1},
}};

inline constexpr CrossTable kPathPath{{
    {-1, 5, 4, -1},
    {6, -1, 5, 4},
    {4, 6, -1, 5},
    {-1, 4, 6, -1},
}};

enum class Container { Star, Path };

// P3 always sits in P4 as x1 x2 x3. K1 and K2 sit in K13 (as y / y x1) when
// the other side is a K13, otherwise in P4 (as x1 / x1 x2).
inline Container container_for(ComponentKind self, ComponentKind other) {
  if (self == ComponentKind::K13) return Container::Star;
  if (self == ComponentKind::P4 || self == ComponentKind::P3) return Container::Path;
  return other == ComponentKind::K13 ? Container::Star : Container::Path;
}

inline int table_entry(Container l, Container r, int i, int j) {
  if (l == Container::Star && r == Container::Star) return kStarStar[i][j];
  if (l == Container::Star && r == Container::Path) return kStarPath[i][j];
  if (l == Container::Path && r == Container::Star) return kStarPath[j][i];
  return kPathPath[i][j];
}

}  // namespace detail

// Colours all cross edges between L and R from the palette block: edges of a
// shared table class get one colour, every other edge a colour of its own.
// Colours are handed out in row-major order of first use.
inline ColourTriples cross_table(const ComponentType& l, const ComponentType& r,
                                 ColourBlock palette) {
  int need = static_cast<int>(l.embedding.size() * r.embedding.size());
  if (palette.size < need)
    throw ParameterError("palette of " + std::to_string(palette.size) + " colours, need " +
                         std::to_string(need));
  auto lc = detail::container_for(l.kind, r.kind);
  auto rc = detail::container_for(r.kind, l.kind);
  std::array<int, 8> class_colour;
  class_colour.fill(-1);
  int next = palette.first;
  ColourTriples out;
  for (std::size_t i = 0; i < l.embedding.size(); ++i)
    for (std::size_t j = 0; j < r.embedding.size(); ++j) {
      int cls = detail::table_entry(lc, rc, static_cast<int>(i), static_cast<int>(j));
      int colour;
      if (cls < 0) {
        colour = next++;
      } else {
        if (class_colour[cls] < 0) class_colour[cls] = next++;
        colour = class_colour[cls];
      }
      out.push_back({l.embedding[i], r.embedding[j], colour});
    }
  return out;
}

// Parts of a complete bipartite seed, the part holding vertex 0 first.
inline std::pair<std::vector<Vertex>, std::vector<Vertex>> complete_bipartition(const Graph& seed) {
  std::vector<int> side(seed.n(), -1);
  std::vector<Vertex> parts[2];
  for (Vertex s = 0; s < seed.n(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : seed.neighbours(v)) {
        if (side[w] < 0) {
          side[w] = 1 - side[v];
          stack.push_back(w);
        } else if (side[w] == side[v]) {
          throw DomainError("seed is not bipartite");
        }
      }
    }
  }
  for (Vertex v = 0; v < seed.n(); ++v) parts[side[v]].push_back(v);
  if (static_cast<long long>(parts[0].size() * parts[1].size()) != seed.m() || parts[1].empty())
    throw DomainError("seed is not a complete bipartite graph");
  return {parts[0], parts[1]};
}

// Colouring of seed ∪ random with no rainbow K4. Cross random edges are seed
// pairs already and are coloured with the seed.
inline EdgeColouring avoid_k4(const PerturbedInstance& inst) {
  auto [u, w] = complete_bipartition(inst.seed);
  Graph gamma = inst.union_graph();
  std::vector<char> in_u(inst.n, 0);
  for (Vertex v : u) in_u[v] = 1;
  std::vector<Edge> side_edges;
  for (const auto& e : inst.random.edges())
    if (in_u[e.u] == in_u[e.v]) side_edges.push_back(e);
  Graph sides(inst.n, std::move(side_edges));
  std::vector<ComponentType> left, right;
  for (auto& c : classify_components(sides)) (in_u[c.embedding[0]] ? left : right).push_back(std::move(c));

  EdgeColouring psi(gamma.m());
  auto apply = [&](const ColourTriples& ts) {
    for (const auto& t : ts) psi.set(gamma.edge_id(t[0], t[1]), t[2]);
  };
  for (const auto& c : left) apply(colour_inside(c));
  for (const auto& c : right) apply(colour_inside(c));
  int next = 4;
  for (const auto& l : left)
    for (const auto& r : right) {
      int size = static_cast<int>(l.embedding.size() * r.embedding.size());
      apply(cross_table(l, r, {next, size}));
      next += size;
    }
  return psi;
}

}  // namespace rainbow
