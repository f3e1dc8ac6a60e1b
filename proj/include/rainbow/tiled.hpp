#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rainbow/arrows.hpp"
#include "rainbow/canonical.hpp"
#include "rainbow/colouring.hpp"
#include "rainbow/copies.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/random.hpp"

namespace rainbow {

// K4-components: classes of K4 copies under "share an edge", each as the
// union of its copies, plus the edges lying in no K4.
struct K4Decomposition {
  std::vector<Subgraph> parts;
  std::vector<int> leftover;  // edge ids of the input graph
};

inline K4Decomposition k4_components(const Graph& g) {
  auto k4s = cliques(g, 4);
  std::vector<int> parent(k4s.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<int> owner(g.m(), -1);
  for (int i = 0; i < static_cast<int>(k4s.size()); ++i)
    for (int id : clique_edge_ids(g, k4s[i])) {
      if (owner[id] < 0) {
        owner[id] = i;
      } else {
        int a = find(owner[id]), b = find(i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  K4Decomposition out;
  std::map<int, std::vector<int>> by_root;
  for (int id = 0; id < g.m(); ++id) {
    if (owner[id] < 0) out.leftover.push_back(id);
    else by_root[find(owner[id])].push_back(id);
  }
  for (auto& [root, ids] : by_root) out.parts.push_back(edge_subgraph(g, ids));
  return out;
}

inline int phi(const Graph& h) { return 8 - 5 * h.n() + 2 * h.m(); }

inline bool is_k4_tiled(const Graph& h) {
  if (h.m() == 0) return false;
  for (Vertex v = 0; v < h.n(); ++v)
    if (h.degree(v) == 0) return false;
  auto d = k4_components(h);
  return d.leftover.empty() && d.parts.size() == 1;
}

enum class StepKind { Standard, Vertex, Edge };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Standard: return "standard";
    case StepKind::Vertex: return "vertex";
    case StepKind::Edge: return "edge";
  }
  return "?";
}

// Labels follow the step definitions: standard adds x, y onto the edge zw;
// a vertex-step adds x onto y, z, w; an edge-step completes x, y, z, w, and a
// 1-edge-step names its new edge xy. `added_between_existing` lists the new
// edges whose ends were both present before the step.
struct GenStep {
  StepKind kind = StepKind::Standard;
  std::array<Vertex, 4> v{};  // x, y, z, w
  std::vector<Edge> added_between_existing;

  Vertex x() const { return v[0]; }
  Vertex y() const { return v[1]; }
  Vertex z() const { return v[2]; }
  Vertex w() const { return v[3]; }
  int missing() const { return static_cast<int>(added_between_existing.size()); }
};

struct GeneratingSequence {
  std::vector<Vertex> base;  // 4 or 5 vertices
  std::vector<GenStep> steps;
  int alpha = 0, beta = 0, gamma = 0;

  bool k5_base() const { return base.size() == 5; }
  int base_vertices() const { return static_cast<int>(base.size()); }
  int base_edges() const { return k5_base() ? 10 : 6; }
};

inline void recount(GeneratingSequence& s) {
  s.alpha = s.beta = s.gamma = 0;
  for (const auto& st : s.steps) {
    if (st.kind == StepKind::Standard) ++s.alpha;
    if (st.kind == StepKind::Vertex) ++s.beta;
    s.gamma += st.missing();
  }
}

// Replays a sequence, checking each step against its definition, and returns
// the generated graph on n vertices.
inline Graph replay(const GeneratingSequence& s, int n) {
  std::vector<char> present(n, 0);
  std::vector<Edge> es;
  auto has = [&](Vertex a, Vertex b) {
    auto e = make_edge(a, b);
    return std::find(es.begin(), es.end(), e) != es.end();
  };
  auto add = [&](Vertex a, Vertex b) {
    if (!has(a, b)) es.push_back(make_edge(a, b));
  };
  for (std::size_t i = 0; i < s.base.size(); ++i) {
    present[s.base[i]] = 1;
    for (std::size_t j = i + 1; j < s.base.size(); ++j) add(s.base[i], s.base[j]);
  }
  for (const auto& st : s.steps) {
    int fresh = 0, spanned = 0;
    for (Vertex a : st.v) fresh += !present[a];
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) spanned += has(st.v[i], st.v[j]);
    int want = st.kind == StepKind::Standard ? 2 : st.kind == StepKind::Vertex ? 1 : 0;
    if (fresh != want || spanned == 0 || spanned == 6)
      throw DomainError("sequence step does not match its kind");
    for (Vertex a : st.v) present[a] = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) add(st.v[i], st.v[j]);
  }
  return Graph(n, std::move(es));
}

namespace detail {

struct EdgeMask {
  std::uint64_t lo = 0, hi = 0;

  void set(int i) { (i < 64 ? lo : hi) |= std::uint64_t{1} << (i & 63); }
  bool test(int i) const { return ((i < 64 ? lo : hi) >> (i & 63)) & 1; }
  bool intersects(const EdgeMask& o) const { return (lo & o.lo) || (hi & o.hi); }
  bool contains(const EdgeMask& o) const { return (o.lo & ~lo) == 0 && (o.hi & ~hi) == 0; }
  EdgeMask operator|(const EdgeMask& o) const { return {lo | o.lo, hi | o.hi}; }
  friend bool operator==(const EdgeMask&, const EdgeMask&) = default;
};

struct EdgeMaskHash {
  std::size_t operator()(const EdgeMask& m) const {
    return static_cast<std::size_t>(m.lo * 0x9e3779b97f4a7c15ULL ^ (m.hi + 0x632be59bd9b4e019ULL));
  }
};

// Minimises added-between-existing edges, then maximises the number of
// steps, over all ways of growing the edge set by K4 copies of h.
class StretchedSearch {
 public:
  explicit StretchedSearch(const Graph& h) : h_(h) {
    for (const auto& q : cliques(h_, 4)) {
      Quad t;
      t.vs = {q[0], q[1], q[2], q[3]};
      for (Vertex v : q) t.vmask |= 1u << v;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          int id = h_.edge_id(q[i], q[j]);
          t.emask.set(id);
          t.ids[t.count++] = id;
        }
      quads_.push_back(t);
    }
    for (int id = 0; id < h_.m(); ++id) full_.set(id);
  }

  struct Result {
    int gamma = 0, steps = 0;
    std::vector<Vertex> base;
    std::vector<int> order;  // indices into quads()
  };

  Result solve(const std::vector<std::vector<Vertex>>& bases) {
    Result best;
    bool have = false;
    for (const auto& b : bases) {
      EdgeMask s;
      unsigned vm = 0;
      for (std::size_t i = 0; i < b.size(); ++i) {
        vm |= 1u << b[i];
        for (std::size_t j = i + 1; j < b.size(); ++j) s.set(h_.edge_id(b[i], b[j]));
      }
      Value v = value(s, vm);
      if (v.gamma >= kInf) continue;
      if (!have || v.gamma < best.gamma || (v.gamma == best.gamma && v.steps > best.steps)) {
        have = true;
        best.gamma = v.gamma;
        best.steps = v.steps;
        best.base = b;
        best.order.clear();
        for (EdgeMask cur = s; !(cur == full_);) {
          int q = memo_.at(cur).next;
          best.order.push_back(q);
          cur = cur | quads_[q].emask;
          vm |= quads_[q].vmask;
        }
      }
    }
    if (!have) throw DomainError("graph cannot be generated from the given bases");
    return best;
  }

  struct Quad {
    std::array<Vertex, 4> vs{};
    unsigned vmask = 0;
    EdgeMask emask;
    std::array<int, 6> ids{};
    int count = 0;
  };
  const std::vector<Quad>& quads() const { return quads_; }

 private:
  static constexpr int kInf = 1 << 20;
  static constexpr std::size_t kMaxStates = 4'000'000;
  struct Value {
    int gamma = kInf, steps = 0, next = -1;
  };

  Value value(const EdgeMask& s, unsigned vm) {
    if (s == full_) return {0, 0, -1};
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    Value best;
    for (int q = 0; q < static_cast<int>(quads_.size()); ++q) {
      const Quad& t = quads_[q];
      if (!s.intersects(t.emask) || s.contains(t.emask)) continue;
      int cost = 0;
      for (int k = 0; k < 6; ++k) {
        int id = t.ids[k];
        const Edge& e = h_.edge(id);
        if (!s.test(id) && ((vm >> e.u) & 1) && ((vm >> e.v) & 1)) ++cost;
      }
      Value sub = value(s | t.emask, vm | t.vmask);
      if (sub.gamma >= kInf) continue;
      int g = sub.gamma + cost, st = sub.steps + 1;
      if (g < best.gamma || (g == best.gamma && st > best.steps)) best = {g, st, q};
    }
    if (memo_.size() >= kMaxStates) throw SearchExhausted("stretched sequence search hit its state budget");
    memo_.emplace(s, best);
    return best;
  }

  const Graph& h_;
  std::vector<Quad> quads_;
  EdgeMask full_;
  std::unordered_map<EdgeMask, Value, EdgeMaskHash> memo_;
};

inline GeneratingSequence build_sequence(const Graph& h, const StretchedSearch& search,
                                         const StretchedSearch::Result& r) {
  GeneratingSequence seq;
  seq.base = r.base;
  std::vector<char> present(h.n(), 0);
  std::vector<char> have(h.m(), 0);
  for (std::size_t i = 0; i < r.base.size(); ++i) {
    present[r.base[i]] = 1;
    for (std::size_t j = i + 1; j < r.base.size(); ++j) have[h.edge_id(r.base[i], r.base[j])] = 1;
  }
  for (int qi : r.order) {
    const auto& q = search.quads()[qi];
    std::vector<Vertex> fresh, old;
    for (Vertex v : q.vs) (present[v] ? old : fresh).push_back(v);
    GenStep st;
    std::vector<Edge> added;
    for (int k = 0; k < 6; ++k) {
      int id = q.ids[k];
      if (have[id]) continue;
      const Edge& e = h.edge(id);
      if (present[e.u] && present[e.v]) added.push_back(e);
    }
    st.added_between_existing = added;
    if (fresh.size() == 2) {
      st.kind = StepKind::Standard;
      st.v = {fresh[0], fresh[1], old[0], old[1]};
    } else if (fresh.size() == 1) {
      st.kind = StepKind::Vertex;
      st.v = {fresh[0], old[0], old[1], old[2]};
    } else {
      st.kind = StepKind::Edge;
      if (added.size() == 1) {
        std::vector<Vertex> rest;
        for (Vertex v : q.vs)
          if (v != added[0].u && v != added[0].v) rest.push_back(v);
        st.v = {added[0].u, added[0].v, rest[0], rest[1]};
      } else {
        st.v = q.vs;
      }
    }
    for (Vertex v : q.vs) present[v] = 1;
    for (int k = 0; k < 6; ++k) have[q.ids[k]] = 1;
    seq.steps.push_back(std::move(st));
  }
  recount(seq);
  return seq;
}

inline GeneratingSequence solve_stretched(const Graph& h, bool k4_base_only) {
  StretchedSearch search(h);
  auto k5s = k4_base_only ? std::vector<std::vector<Vertex>>{} : cliques(h, 5);
  auto bases = k5s.empty() ? cliques(h, 4) : k5s;
  auto r = search.solve(bases);
  return build_sequence(h, search, r);
}

inline GeneratingSequence map_sequence(const GeneratingSequence& s, const std::vector<Vertex>& to) {
  GeneratingSequence out = s;
  for (auto& v : out.base) v = to[v];
  for (auto& st : out.steps) {
    for (auto& v : st.v) v = to[v];
    for (auto& e : st.added_between_existing) e = make_edge(to[e.u], to[e.v]);
  }
  return out;
}

}  // namespace detail

inline constexpr int kMaxTiledVertices = 24;
// Dense graphs blow up the search; past this size only phi <= 7 is accepted.
inline constexpr int kMaxDenseTiledVertices = 14;

// Auto starts from a K5 whenever the graph contains one.
enum class BaseChoice { Auto, K4 };

// Stretched generating sequence: minimising the edges added between existing
// vertices and then maximising the number of steps. Solved on the canonical
// relabelling and cached per isomorphism class, so isomorphic inputs get
// matching sequences.
inline GeneratingSequence find_stretched_sequence(const Graph& h, BaseChoice base = BaseChoice::Auto) {
  if (h.n() > kMaxTiledVertices) throw DomainError("stretched sequences need at most 24 vertices");
  if (h.n() > kMaxDenseTiledVertices && phi(h) > 7)
    throw DomainError("stretched sequences above 14 vertices need phi <= 7");
  if (!is_k4_tiled(h)) throw DomainError("graph is not K4-tiled");
  auto cf = canonical_form(h);
  Graph canon = relabel(h, cf.labelling);
  using Key = std::tuple<int, int, std::vector<std::uint64_t>>;
  static std::mutex mu;
  static std::map<Key, GeneratingSequence> cache;
  Key key{h.n(), static_cast<int>(base), cf.code};
  GeneratingSequence in_canon;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) in_canon = it->second;
  }
  if (in_canon.base.empty()) {
    in_canon = detail::solve_stretched(canon, base == BaseChoice::K4);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, in_canon);
  }
  std::vector<Vertex> back(h.n());
  for (Vertex v = 0; v < h.n(); ++v) back[cf.labelling[v]] = v;
  return detail::map_sequence(in_canon, back);
}

struct TiledSample {
  Graph graph;
  GeneratingSequence sequence;
};

// Random K4-tiled graph grown by random steps from K4 (sometimes K5), keeping
// at most max_vertices vertices and phi at most max_phi.
inline TiledSample random_tiled_graph(Rng& rng, int max_vertices = 12, int max_phi = 7) {
  if (max_vertices < 4 || max_vertices > kMaxTiledVertices)
    throw ParameterError("max_vertices must lie in [4,24]");
  if (max_phi < 0) throw ParameterError("max_phi must be non-negative");
  GeneratingSequence seq;
  bool k5 = max_phi >= 3 && max_vertices >= 5 && rng.bernoulli(0.15);
  int v = k5 ? 5 : 4;
  for (int i = 0; i < v; ++i) seq.base.push_back(i);
  std::vector<std::vector<char>> adj(max_vertices, std::vector<char>(max_vertices, 0));
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) adj[i][j] = i != j;
  int cur_phi = k5 ? 3 : 0;
  auto pick_distinct = [&](int k) {
    std::vector<Vertex> all(v);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    all.resize(k);
    return all;
  };
  int target = rng.uniform_int(0, 10);
  for (int made = 0, attempts = 0; made < target && attempts < 60; ++attempts) {
    double roll = rng.uniform01();
    GenStep st;
    if (roll < 0.5) {
      if (v + 2 > max_vertices) continue;
      std::vector<Edge> es;
      for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b)
          if (adj[a][b]) es.push_back({a, b});
      Edge e = es[rng.below(es.size())];
      st.kind = StepKind::Standard;
      st.v = {v, v + 1, e.u, e.v};
      v += 2;
    } else if (roll < 0.85) {
      if (v + 1 > max_vertices) continue;
      auto t = pick_distinct(3);
      std::sort(t.begin(), t.end());
      std::vector<Edge> missing;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (!adj[t[i]][t[j]]) missing.push_back({t[i], t[j]});
      int inc = 1 + 2 * static_cast<int>(missing.size());
      if (missing.size() == 3 || cur_phi + inc > max_phi) continue;
      st.kind = StepKind::Vertex;
      st.v = {v, t[0], t[1], t[2]};
      st.added_between_existing = missing;
      cur_phi += inc;
      v += 1;
    } else {
      auto q = pick_distinct(4);
      std::sort(q.begin(), q.end());
      std::vector<Edge> missing;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (!adj[q[i]][q[j]]) missing.push_back({q[i], q[j]});
      int inc = 2 * static_cast<int>(missing.size());
      if (missing.empty() || missing.size() == 6 || cur_phi + inc > max_phi) continue;
      st.kind = StepKind::Edge;
      st.added_between_existing = missing;
      if (missing.size() == 1) {
        std::vector<Vertex> rest;
        for (Vertex a : q)
          if (a != missing[0].u && a != missing[0].v) rest.push_back(a);
        st.v = {missing[0].u, missing[0].v, rest[0], rest[1]};
      } else {
        st.v = {q[0], q[1], q[2], q[3]};
      }
      cur_phi += inc;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) adj[st.v[i]][st.v[j]] = 1;
    seq.steps.push_back(std::move(st));
    ++made;
  }
  recount(seq);
  return {replay(seq, v), std::move(seq)};
}

}  // namespace rainbow
