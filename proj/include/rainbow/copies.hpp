#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <type_traits>
#include <utility>
#include <algorithm>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

// embedding[h] = image of pattern vertex h.
using Embedding = std::vector<Vertex>;

namespace detail {

template <class F, class... Args>
bool invoke_continue(F& f, Args&&... args) {
  if constexpr (std::is_same_v<std::invoke_result_t<F&, Args...>, bool>) {
    return f(std::forward<Args>(args)...);
  } else {
    f(std::forward<Args>(args)...);
    return true;
  }
}

struct AcceptAll {
  bool operator()(const std::vector<Vertex>&, Vertex) const { return true; }
};

template <class F, class Accept>
bool clique_rec(const Graph& g, int k, std::vector<Vertex>& cur, const std::vector<Vertex>& cand,
                F& f, Accept& accept) {
  if (static_cast<int>(cur.size()) == k) {
    return invoke_continue(f, static_cast<const std::vector<Vertex>&>(cur));
  }
  int need = k - static_cast<int>(cur.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (static_cast<int>(cand.size() - i) < need) break;
    Vertex w = cand[i];
    if (!accept(static_cast<const std::vector<Vertex>&>(cur), w)) continue;
    std::vector<Vertex> next;
    if (need > 1) {
      next.reserve(cand.size() - i);
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        if (g.adjacent(w, cand[j])) next.push_back(cand[j]);
    }
    cur.push_back(w);
    bool go = clique_rec(g, k, cur, next, f, accept);
    cur.pop_back();
    if (!go) return false;
  }
  return true;
}

}  // namespace detail

// Calls f(clique) for every k-clique, vertices ascending, in lexicographic
// order. accept(partial, w) may veto extending a partial clique by w. If f
// returns bool, false stops the enumeration.
template <class F, class Accept = detail::AcceptAll>
void for_each_clique(const Graph& g, int k, F&& f, Accept accept = {}) {
  if (k < 1) return;
  std::vector<Vertex> cur;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!accept(static_cast<const std::vector<Vertex>&>(cur), v)) continue;
    std::vector<Vertex> cand;
    for (Vertex w : g.neighbours(v))
      if (w > v) cand.push_back(w);
    cur.push_back(v);
    bool go = detail::clique_rec(g, k, cur, cand, f, accept);
    cur.pop_back();
    if (!go) return;
  }
}

inline std::vector<std::vector<Vertex>> cliques(const Graph& g, int k) {
  std::vector<std::vector<Vertex>> out;
  for_each_clique(g, k, [&](const std::vector<Vertex>& c) { out.push_back(c); });
  return out;
}

inline std::vector<std::array<Vertex, 3>> triangles(const Graph& g) {
  std::vector<std::array<Vertex, 3>> out;
  for_each_clique(g, 3, [&](const std::vector<Vertex>& c) { out.push_back({c[0], c[1], c[2]}); });
  return out;
}

inline bool is_clique_graph(const Graph& h) {
  return static_cast<long long>(h.m()) == static_cast<long long>(h.n()) * (h.n() - 1) / 2;
}

namespace detail {

// Order pattern vertices so that each has as many earlier neighbours as
// possible; ties go to higher degree, then lower id.
inline std::vector<Vertex> embedding_order(const Graph& h) {
  std::vector<Vertex> order;
  std::vector<int> placed_nbrs(h.n(), 0);
  std::vector<char> used(h.n(), 0);
  for (int step = 0; step < h.n(); ++step) {
    Vertex best = -1;
    for (Vertex v = 0; v < h.n(); ++v) {
      if (used[v]) continue;
      if (best < 0 || placed_nbrs[v] > placed_nbrs[best] ||
          (placed_nbrs[v] == placed_nbrs[best] && h.degree(v) > h.degree(best)))
        best = v;
    }
    used[best] = 1;
    order.push_back(best);
    for (Vertex w : h.neighbours(best)) ++placed_nbrs[w];
  }
  return order;
}

template <class F>
bool embed_rec(const Graph& g, const Graph& h, const std::vector<Vertex>& order,
               const std::vector<std::vector<Vertex>>& back, std::size_t depth, Embedding& emb,
               std::vector<char>& used, F& f) {
  if (depth == order.size()) return invoke_continue(f, static_cast<const Embedding&>(emb));
  Vertex hv = order[depth];
  const auto& earlier = back[depth];
  auto try_vertex = [&](Vertex gv) -> bool {
    if (used[gv] || g.degree(gv) < h.degree(hv)) return true;
    for (std::size_t i = 1; i < earlier.size(); ++i)
      if (!g.adjacent(gv, emb[earlier[i]])) return true;
    emb[hv] = gv;
    used[gv] = 1;
    bool go = embed_rec(g, h, order, back, depth + 1, emb, used, f);
    used[gv] = 0;
    emb[hv] = -1;
    return go;
  };
  if (!earlier.empty()) {
    for (Vertex gv : g.neighbours(emb[earlier[0]]))
      if (!try_vertex(gv)) return false;
  } else {
    for (Vertex gv = 0; gv < g.n(); ++gv)
      if (!try_vertex(gv)) return false;
  }
  return true;
}

}  // namespace detail

// Every injective homomorphism of H into G (not deduplicated).
template <class F>
void for_each_embedding(const Graph& g, const Graph& h, F&& f) {
  if (h.n() > g.n()) return;
  auto order = detail::embedding_order(h);
  std::vector<int> pos(h.n());
  for (int i = 0; i < h.n(); ++i) pos[order[i]] = i;
  std::vector<std::vector<Vertex>> back(h.n());
  for (int i = 0; i < h.n(); ++i)
    for (Vertex w : h.neighbours(order[i]))
      if (pos[w] < i) back[i].push_back(w);
  Embedding emb(h.n(), -1);
  std::vector<char> used(g.n(), 0);
  detail::embed_rec(g, h, order, back, 0, emb, used, f);
}

// Edge ids of G covered by the image of H under emb.
inline std::vector<int> image_edge_ids(const Graph& g, const Graph& h, const Embedding& emb) {
  std::vector<int> ids;
  ids.reserve(h.m());
  for (const auto& e : h.edges()) ids.push_back(g.edge_id(emb[e.u], emb[e.v]));
  return ids;
}

// All copies of H in G, one embedding per distinct image (vertex set plus
// edge set), i.e. deduplicated up to automorphisms of H. Cliques use the
// ordered clique enumerator, so their embeddings list vertices ascending.
inline std::vector<Embedding> enumerate_copies(const Graph& g, const Graph& h) {
  std::vector<Embedding> out;
  if (h.n() > g.n()) return out;
  if (is_clique_graph(h)) {
    for_each_clique(g, h.n(), [&](const std::vector<Vertex>& c) { out.push_back(c); });
    return out;
  }
  std::set<std::vector<int>> seen;
  for_each_embedding(g, h, [&](const Embedding& emb) {
    std::vector<int> key(emb.begin(), emb.end());
    std::sort(key.begin(), key.end());
    auto ids = image_edge_ids(g, h, emb);
    std::sort(ids.begin(), ids.end());
    key.push_back(-1);
    key.insert(key.end(), ids.begin(), ids.end());
    if (seen.insert(std::move(key)).second) out.push_back(emb);
  });
  return out;
}

inline bool contains_copy(const Graph& g, const Graph& h) {
  bool found = false;
  if (is_clique_graph(h)) {
    for_each_clique(g, h.n(), [&](const std::vector<Vertex>&) {
      found = true;
      return false;
    });
  } else {
    for_each_embedding(g, h, [&](const Embedding&) {
      found = true;
      return false;
    });
  }
  return found;
}

// |Aut(H)| by counting bijective self-embeddings.
inline std::uint64_t count_automorphisms(const Graph& h) {
  std::uint64_t count = 0;
  for_each_embedding(h, h, [&](const Embedding&) { ++count; });
  return count;
}

}  // namespace rainbow
