#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "rainbow/copies.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/random.hpp"

namespace rainbow {

// Colours indexed by the companion graph's edge ids; kUncoloured marks edges
// outside the domain.
class EdgeColouring {
 public:
  static constexpr int kUncoloured = -1;

  EdgeColouring() = default;
  explicit EdgeColouring(int num_edges) : c_(num_edges, kUncoloured) {}
  explicit EdgeColouring(std::vector<int> colours) : c_(std::move(colours)) {}

  int size() const { return static_cast<int>(c_.size()); }
  int operator[](int id) const { return c_[id]; }
  void set(int id, int colour) { c_[id] = colour; }
  void clear(int id) { c_[id] = kUncoloured; }
  bool coloured(int id) const { return c_[id] != kUncoloured; }
  const std::vector<int>& values() const { return c_; }

  bool total() const {
    return std::none_of(c_.begin(), c_.end(), [](int c) { return c == kUncoloured; });
  }
  int max_colour() const {
    int m = kUncoloured;
    for (int c : c_) m = std::max(m, c);
    return m;
  }
  int num_colours() const {
    std::vector<int> v;
    for (int c : c_)
      if (c != kUncoloured) v.push_back(c);
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
  }

  // From (u, v, colour) triples; a non-edge is a domain error.
  static EdgeColouring from_triples(const Graph& g, const std::vector<std::array<int, 3>>& ts) {
    EdgeColouring psi(g.m());
    for (const auto& t : ts) {
      if (t[0] < 0 || t[1] < 0 || t[0] >= g.n() || t[1] >= g.n())
        throw DomainError("colouring references a vertex outside the graph");
      int id = g.edge_id(t[0], t[1]);
      if (id < 0)
        throw DomainError("colouring references non-edge " + std::to_string(t[0]) + "-" +
                          std::to_string(t[1]));
      if (t[2] < 0) throw DomainError("colours must be non-negative");
      psi.set(id, t[2]);
    }
    return psi;
  }

  std::vector<std::array<int, 3>> triples(const Graph& g) const {
    std::vector<std::array<int, 3>> out;
    for (int id = 0; id < size(); ++id)
      if (coloured(id)) out.push_back({g.edge(id).u, g.edge(id).v, c_[id]});
    return out;
  }

  friend bool operator==(const EdgeColouring&, const EdgeColouring&) = default;

 private:
  std::vector<int> c_;
};

inline void check_companion(const Graph& g, const EdgeColouring& psi) {
  if (psi.size() != g.m())
    throw DomainError("colouring has " + std::to_string(psi.size()) + " slots but graph has " +
                      std::to_string(g.m()) + " edges");
}

inline bool is_proper(const Graph& g, const EdgeColouring& psi) {
  check_companion(g, psi);
  int top = psi.max_colour();
  if (top < 4 * g.m() + 64) {
    // Stamp each colour with the last vertex that saw it.
    std::vector<int> stamp(top + 1, -1);
    for (Vertex v = 0; v < g.n(); ++v)
      for (int id : g.incident_edges(v)) {
        int c = psi[id];
        if (c == EdgeColouring::kUncoloured) continue;
        if (stamp[c] == v) return false;
        stamp[c] = v;
      }
    return true;
  }
  std::vector<int> seen;
  for (Vertex v = 0; v < g.n(); ++v) {
    seen.clear();
    for (int id : g.incident_edges(v))
      if (psi.coloured(id)) seen.push_back(psi[id]);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  return true;
}

// True when the coloured edges among ids carry pairwise distinct colours.
inline bool distinct_colours(const EdgeColouring& psi, const std::vector<int>& ids) {
  std::vector<int> cs;
  cs.reserve(ids.size());
  for (int id : ids)
    if (psi.coloured(id)) cs.push_back(psi[id]);
  std::sort(cs.begin(), cs.end());
  return std::adjacent_find(cs.begin(), cs.end()) == cs.end();
}

inline std::vector<int> clique_edge_ids(const Graph& g, const std::vector<Vertex>& vs) {
  std::vector<int> ids;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) ids.push_back(g.edge_id(vs[i], vs[j]));
  return ids;
}

inline bool is_rainbow_clique(const Graph& g, const EdgeColouring& psi,
                              const std::vector<Vertex>& vs) {
  return distinct_colours(psi, clique_edge_ids(g, vs));
}

// Rainbow k-cliques, enumerated with pruning on partial cliques. Uncoloured
// edges never clash.
template <class F>
void for_each_rainbow_clique(const Graph& g, const EdgeColouring& psi, int k, F&& f) {
  check_companion(g, psi);
  std::vector<int> cols;
  auto accept = [&](const std::vector<Vertex>& cur, Vertex w) {
    if (cur.empty()) return true;
    cols.clear();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      int c = psi[g.edge_id(cur[i], w)];
      if (c != EdgeColouring::kUncoloured) cols.push_back(c);
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        int d = psi[g.edge_id(cur[i], cur[j])];
        if (d != EdgeColouring::kUncoloured) cols.push_back(d);
      }
    }
    std::sort(cols.begin(), cols.end());
    return std::adjacent_find(cols.begin(), cols.end()) == cols.end();
  };
  for_each_clique(g, k, std::forward<F>(f), accept);
}

inline std::vector<Embedding> rainbow_copies(const Graph& g, const EdgeColouring& psi,
                                             const Graph& h) {
  check_companion(g, psi);
  std::vector<Embedding> out;
  if (is_clique_graph(h)) {
    for_each_rainbow_clique(g, psi, h.n(), [&](const std::vector<Vertex>& c) { out.push_back(c); });
    return out;
  }
  for (auto& emb : enumerate_copies(g, h))
    if (distinct_colours(psi, image_edge_ids(g, h, emb))) out.push_back(std::move(emb));
  return out;
}

// Colours on the edges of G[K] (coloured edges only).
inline std::vector<int> pattern_colours(const Graph& g, const EdgeColouring& psi,
                                        const std::vector<Vertex>& k) {
  std::vector<int> cs;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      int id = g.edge_id(k[i], k[j]);
      if (id >= 0 && psi.coloured(id)) cs.push_back(psi[id]);
    }
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return cs;
}

inline std::vector<int> attachment_colours(const Graph& g, const EdgeColouring& psi, Vertex x,
                                           const std::vector<Vertex>& k) {
  std::vector<int> cs;
  for (Vertex v : k) {
    int id = g.edge_id(x, v);
    if (id >= 0 && psi.coloured(id)) cs.push_back(psi[id]);
  }
  return cs;
}

// Members x of the common neighbourhood of K whose edges to K avoid the
// colours of G[K].
inline std::vector<Vertex> interest_set(const Graph& g, const EdgeColouring& psi,
                                        const std::vector<Vertex>& k) {
  check_companion(g, psi);
  auto inside = pattern_colours(g, psi, k);
  std::vector<Vertex> out;
  for (Vertex x : common_neighbourhood(g, k)) {
    bool ok = true;
    for (int c : attachment_colours(g, psi, x, k))
      if (std::binary_search(inside.begin(), inside.end(), c)) ok = false;
    if (ok) out.push_back(x);
  }
  return out;
}

// Greedy compatible subset of the interest set in ascending vertex order:
// x joins when its attachment colours are disjoint from those already used.
inline std::vector<Vertex> compatible_set(const Graph& g, const EdgeColouring& psi,
                                          const std::vector<Vertex>& k) {
  std::unordered_set<int> used;
  std::vector<Vertex> out;
  for (Vertex x : interest_set(g, psi, k)) {
    auto cs = attachment_colours(g, psi, x, k);
    if (std::any_of(cs.begin(), cs.end(), [&](int c) { return used.count(c) > 0; })) continue;
    used.insert(cs.begin(), cs.end());
    out.push_back(x);
  }
  return out;
}

// Random proper colouring: edges in random order; each takes a fresh colour
// with probability fresh_bias, otherwise a uniformly random used colour that
// is free at both endpoints (fresh if there is none).
inline EdgeColouring random_proper_colouring(const Graph& g, Rng& rng, double fresh_bias) {
  if (!(fresh_bias >= 0.0 && fresh_bias <= 1.0))
    throw ParameterError("fresh_bias must lie in [0,1]");
  EdgeColouring psi(g.m());
  std::vector<int> order(g.m());
  for (int i = 0; i < g.m(); ++i) order[i] = i;
  rng.shuffle(order);
  std::unordered_set<std::uint64_t> at;  // (vertex, colour) pairs in use
  auto key = [](Vertex v, int c) {
    return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(c);
  };
  auto free_at = [&](const Edge& e, int c) { return !at.count(key(e.u, c)) && !at.count(key(e.v, c)); };
  int next_colour = 0;
  std::vector<int> candidates;
  for (int id : order) {
    const Edge& e = g.edge(id);
    int colour = -1;
    if (next_colour > 0 && !rng.bernoulli(fresh_bias)) {
      // Rejection sampling is uniform over the free colours; after a few
      // misses switch to the explicit list, which is uniform as well.
      for (int attempt = 0; attempt < 8 && colour < 0; ++attempt) {
        int c = static_cast<int>(rng.below(next_colour));
        if (free_at(e, c)) colour = c;
      }
      if (colour < 0) {
        candidates.clear();
        for (int c = 0; c < next_colour; ++c)
          if (free_at(e, c)) candidates.push_back(c);
        if (!candidates.empty()) colour = candidates[rng.below(candidates.size())];
      }
    }
    if (colour < 0) colour = next_colour++;
    psi.set(id, colour);
    at.insert(key(e.u, colour));
    at.insert(key(e.v, colour));
  }
  return psi;
}

}  // namespace rainbow
