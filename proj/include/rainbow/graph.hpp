#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rainbow/errors.hpp"

namespace rainbow {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Immutable simple graph on vertices 0..n-1. Adjacency is kept twice: as
// dense bitset rows (for fast intersections) and as sorted CSR lists that
// also carry edge ids. Edge ids index the lexicographically sorted edge list.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : Graph(n, {}) {}

  Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw ParameterError("negative vertex count");
    for (auto& e : edges) {
      if (e.u == e.v) throw ParameterError("self-loop at vertex " + std::to_string(e.u));
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
        throw ParameterError("edge endpoint out of range");
      e = make_edge(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    words_ = (n_ + 63) / 64;
    rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
      rows_[static_cast<std::size_t>(e.u) * words_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
      rows_[static_cast<std::size_t>(e.v) * words_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    nbrs_.resize(2 * edges_.size());
    eids_.resize(2 * edges_.size());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u,v), so each list receives its entries in
    // increasing order except for the "back" entries; sort afterwards.
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
      const auto& e = edges_[id];
      nbrs_[fill[e.u]] = e.v;
      eids_[fill[e.u]++] = id;
      nbrs_[fill[e.v]] = e.u;
      eids_[fill[e.v]++] = id;
    }
    for (int v = 0; v < n_; ++v) {
      int lo = offsets_[v], hi = offsets_[v + 1];
      std::vector<std::pair<Vertex, int>> tmp;
      tmp.reserve(hi - lo);
      for (int i = lo; i < hi; ++i) tmp.emplace_back(nbrs_[i], eids_[i]);
      std::sort(tmp.begin(), tmp.end());
      for (int i = lo; i < hi; ++i) {
        nbrs_[i] = tmp[i - lo].first;
        eids_[i] = tmp[i - lo].second;
      }
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }

  bool adjacent(Vertex a, Vertex b) const {
    return (rows_[static_cast<std::size_t>(a) * words_ + b / 64] >> (b % 64)) & 1U;
  }

  // Id of edge {a,b}, or -1 when absent.
  int edge_id(Vertex a, Vertex b) const {
    if (a == b || !adjacent(a, b)) return -1;
    auto nb = neighbours(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    return eids_[offsets_[a] + static_cast<int>(it - nb.begin())];
  }
  int edge_id(const Edge& e) const { return edge_id(e.u, e.v); }

  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbours(Vertex v) const {
    return {nbrs_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }
  // Edge ids parallel to neighbours(v).
  std::span<const int> incident_edges(Vertex v) const {
    return {eids_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  int words() const { return words_; }
  const std::uint64_t* row(Vertex v) const {
    return rows_.data() + static_cast<std::size_t>(v) * words_;
  }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> rows_;
  std::vector<int> offsets_{0};
  std::vector<Vertex> nbrs_;
  std::vector<int> eids_;
};

// A subgraph together with the map from its vertices back to the parent.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_parent;
};

inline Subgraph induced_subgraph(const Graph& g, std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::vector<int> local(g.n(), -1);
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) local[vertices[i]] = i;
  std::vector<Edge> es;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    for (Vertex w : g.neighbours(vertices[i])) {
      if (local[w] > i) es.push_back({i, local[w]});
    }
  }
  return {Graph(static_cast<int>(vertices.size()), std::move(es)), std::move(vertices)};
}

// Subgraph spanned by the given edge ids; its vertices are the endpoints.
inline Subgraph edge_subgraph(const Graph& g, const std::vector<int>& edge_ids) {
  std::vector<Vertex> vs;
  for (int id : edge_ids) {
    vs.push_back(g.edge(id).u);
    vs.push_back(g.edge(id).v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::vector<Edge> es;
  es.reserve(edge_ids.size());
  for (int id : edge_ids) {
    auto a = std::lower_bound(vs.begin(), vs.end(), g.edge(id).u) - vs.begin();
    auto b = std::lower_bound(vs.begin(), vs.end(), g.edge(id).v) - vs.begin();
    es.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  return {Graph(static_cast<int>(vs.size()), std::move(es)), std::move(vs)};
}

// perm[old] = new label.
inline Graph relabel(const Graph& g, const std::vector<Vertex>& perm) {
  std::vector<Edge> es;
  es.reserve(g.m());
  for (const auto& e : g.edges()) es.push_back(make_edge(perm[e.u], perm[e.v]));
  return Graph(g.n(), std::move(es));
}

inline Graph edge_union(const Graph& a, const Graph& b) {
  if (a.n() != b.n()) throw ParameterError("edge_union of graphs with different vertex counts");
  std::vector<Edge> es = a.edges();
  es.insert(es.end(), b.edges().begin(), b.edges().end());
  return Graph(a.n(), std::move(es));
}

// Connected components, each listed by ascending smallest vertex.
inline std::vector<Subgraph> components(const Graph& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<Subgraph> out;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    int c = static_cast<int>(out.size());
    std::vector<Vertex> members;
    comp[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (Vertex w : g.neighbours(v)) {
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    out.push_back(induced_subgraph(g, std::move(members)));
  }
  return out;
}

// Intersection of the neighbourhoods of X, minus X itself.
inline std::vector<Vertex> common_neighbourhood(const Graph& g, const std::vector<Vertex>& xs) {
  std::vector<Vertex> out;
  if (xs.empty()) {
    out.resize(g.n());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  std::vector<std::uint64_t> acc(g.row(xs[0]), g.row(xs[0]) + g.words());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const auto* r = g.row(xs[i]);
    for (int w = 0; w < g.words(); ++w) acc[w] &= r[w];
  }
  for (Vertex x : xs) acc[x / 64] &= ~(std::uint64_t{1} << (x % 64));
  for (int w = 0; w < g.words(); ++w) {
    for (std::uint64_t bits = acc[w]; bits; bits &= bits - 1) {
      out.push_back(w * 64 + std::countr_zero(bits));
    }
  }
  return out;
}

}  // namespace rainbow
