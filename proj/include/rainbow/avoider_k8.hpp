#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "rainbow/avoider_k4.hpp"
#include "rainbow/colouring.hpp"
#include "rainbow/sampling.hpp"
#include "rainbow/tiled.hpp"
#include "rainbow/tiled_colouring.hpp"

namespace rainbow {

inline constexpr int kRedColour = 0;

// Parts with phi >= 3 that meet, grouped; the root has the largest phi
// (lowest part index on ties).
struct Assembly {
  std::vector<int> parts;
  int root = -1;
};

struct K8Structure {
  K4Decomposition decomposition;
  std::vector<int> phis;
  std::vector<Assembly> assemblies;
  std::optional<std::string> violation;  // first failed structural claim
  std::vector<int> violation_vertices;
  bool out_of_regime = false;
};

inline std::vector<Vertex> shared_vertices(const Subgraph& a, const Subgraph& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.to_parent.begin(), a.to_parent.end(), b.to_parent.begin(), b.to_parent.end(),
                        std::back_inserter(out));
  return out;
}

inline K8Structure analyse_k8_structure(const Graph& r) {
  K8Structure s;
  s.decomposition = k4_components(r);
  const auto& parts = s.decomposition.parts;
  int k = static_cast<int>(parts.size());
  for (const auto& p : parts) s.phis.push_back(phi(p.graph));
  for (int i = 0; i < k; ++i)
    if (s.phis[i] > 7 || parts[i].graph.n() > kMaxTiledVertices) {
      s.out_of_regime = true;
      s.violation = "K4-component with phi " + std::to_string(s.phis[i]) + " on " +
                    std::to_string(parts[i].graph.n()) + " vertices";
      s.violation_vertices = parts[i].to_parent;
      return s;
    }
  std::vector<int> heavy;
  for (int i = 0; i < k; ++i)
    if (s.phis[i] >= 3) heavy.push_back(i);
  std::map<int, std::vector<int>> adj;
  for (std::size_t a = 0; a < heavy.size(); ++a)
    for (std::size_t b = a + 1; b < heavy.size(); ++b) {
      auto sh = shared_vertices(parts[heavy[a]], parts[heavy[b]]);
      if (sh.empty()) continue;
      if (sh.size() > 1) {
        s.violation = "two K4-components with phi >= 3 share " + std::to_string(sh.size()) + " vertices";
        s.violation_vertices = sh;
        return s;
      }
      adj[heavy[a]].push_back(heavy[b]);
      adj[heavy[b]].push_back(heavy[a]);
    }
  std::map<int, int> seen;
  for (int start : heavy) {
    if (seen.count(start)) continue;
    Assembly as;
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      as.parts.push_back(v);
      for (int w : adj[v])
        if (!seen.count(w)) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(as.parts.begin(), as.parts.end());
    as.root = as.parts[0];
    for (int p : as.parts)
      if (s.phis[p] > s.phis[as.root]) as.root = p;
    s.assemblies.push_back(std::move(as));
  }
  for (const auto& as : s.assemblies) {
    int inner = 0;
    for (int p : as.parts) inner += static_cast<int>(adj[p].size());
    std::vector<int> vs;
    for (int p : as.parts) vs.insert(vs.end(), parts[p].to_parent.begin(), parts[p].to_parent.end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (inner / 2 != static_cast<int>(as.parts.size()) - 1) {
      s.violation = "meet graph of K4-components with phi >= 3 has a cycle";
      s.violation_vertices = vs;
      return s;
    }
    for (int p : as.parts)
      if (p != as.root && s.phis[p] > 5) {
        s.violation = "non-root K4-component with phi " + std::to_string(s.phis[p]);
        s.violation_vertices = vs;
        return s;
      }
  }
  return s;
}

namespace detail {

// Copies a part's colouring into the parent colouring on a private palette.
inline void paste(const Graph& g, const Subgraph& part, const EdgeColouring& local, EdgeColouring& out,
                  int& next_colour) {
  std::map<int, int> remap;
  for (int e = 0; e < part.graph.m(); ++e) {
    int c = local[e];
    auto it = remap.find(c);
    if (it == remap.end()) it = remap.emplace(c, next_colour++).first;
    const Edge& le = part.graph.edge(e);
    out.set(g.edge_id(part.to_parent[le.u], part.to_parent[le.v]), it->second);
  }
}

inline Edge to_parent(const Subgraph& part, Vertex a, Vertex b) {
  return make_edge(part.to_parent[a], part.to_parent[b]);
}

}  // namespace detail

struct TreeColouringReport {
  std::vector<Edge> red_edges;
  std::vector<CoverCertificate> certificates;  // per part, in the parent's labels
};

// Colours the parts of one assembly (given by index into parts) into out.
// Parts get private palettes from next_colour; certificate edges are then
// recoloured red: all of the root's, and for each other part one triangle
// edge avoiding the vertex it shares with its parent in the meet tree.
inline TreeColouringReport colour_component_tree(const Graph& g, const std::vector<Subgraph>& parts,
                                                 const Assembly& as, EdgeColouring& out, int& next_colour) {
  TreeColouringReport rep;
  std::map<int, int> parent;
  std::map<int, Vertex> attach;
  std::queue<int> q;
  q.push(as.root);
  parent[as.root] = -1;
  std::vector<int> order;
  while (!q.empty()) {
    int p = q.front();
    q.pop();
    order.push_back(p);
    for (int o : as.parts) {
      if (parent.count(o)) continue;
      auto sh = shared_vertices(parts[p], parts[o]);
      if (sh.empty()) continue;
      if (sh.size() > 1) throw StructureUnsupported("parts share more than one vertex", sh);
      parent[o] = p;
      attach[o] = sh[0];
      q.push(o);
    }
  }
  if (order.size() != as.parts.size())
    throw StructureUnsupported("assembly is not connected", {});
  for (int p : order) {
    const auto& part = parts[p];
    auto tc = colour_tiled(part.graph);
    detail::paste(g, part, tc.colouring, out, next_colour);
    CoverCertificate cert = tc.certificate;
    for (auto& v : cert.triangle) v = part.to_parent[v];
    for (auto& e : cert.matching) e = detail::to_parent(part, e.u, e.v);
    std::sort(cert.triangle.begin(), cert.triangle.end());
    rep.certificates.push_back(cert);
    if (cert.kind == CertificateKind::NoRainbow) continue;
    const auto& t = cert.triangle;
    if (p == as.root) {
      if (cert.kind == CertificateKind::Triangle) rep.red_edges.push_back(make_edge(t[0], t[1]));
      else rep.red_edges.insert(rep.red_edges.end(), cert.matching.begin(), cert.matching.end());
      continue;
    }
    if (cert.kind != CertificateKind::Triangle)
      throw StructureUnsupported("non-root part without a triangle certificate", part.to_parent);
    Vertex u = attach[p];
    const std::array<Edge, 3> options{make_edge(t[0], t[1]), make_edge(t[0], t[2]), make_edge(t[1], t[2])};
    for (const auto& e : options)
      if (e.u != u && e.v != u) {
        rep.red_edges.push_back(e);
        break;
      }
  }
  for (const auto& e : rep.red_edges) out.set(g.edge_id(e), kRedColour);
  return rep;
}

struct K8Result {
  EdgeColouring colouring;  // on R, or on seed ∪ R for the perturbed version
  K8Structure structure;
  std::vector<Edge> red_edges;
};

// Proper colouring of R in which every rainbow K4 uses the red colour 0.
// Throws OutOfRegime / StructureUnsupported when the structural claims fail.
inline K8Result avoid_k8(const Graph& r) {
  K8Result res;
  res.structure = analyse_k8_structure(r);
  const auto& st = res.structure;
  if (st.violation) {
    if (st.out_of_regime) throw OutOfRegime(*st.violation, st.violation_vertices);
    throw StructureUnsupported(*st.violation, st.violation_vertices);
  }
  const auto& parts = st.decomposition.parts;
  EdgeColouring psi(r.m());
  int next = kRedColour + 1;
  std::vector<int> assembly_of(parts.size(), -1);
  for (int a = 0; a < static_cast<int>(st.assemblies.size()); ++a)
    for (int p : st.assemblies[a].parts) assembly_of[p] = a;
  for (int p = 0; p < static_cast<int>(parts.size()); ++p) {
    int a = assembly_of[p];
    if (a < 0) {
      auto tc = colour_tiled(parts[p].graph);
      detail::paste(r, parts[p], tc.colouring, psi, next);
    } else if (st.assemblies[a].parts.front() == p) {
      auto rep = colour_component_tree(r, parts, st.assemblies[a], psi, next);
      res.red_edges.insert(res.red_edges.end(), rep.red_edges.begin(), rep.red_edges.end());
    }
  }
  for (int e : st.decomposition.leftover) psi.set(e, next++);
  res.colouring = std::move(psi);
  return res;
}

// Colours R by avoid_k8 and gives every other edge of seed ∪ R its own colour.
inline K8Result avoid_k8_perturbed(const PerturbedInstance& inst) {
  K8Result res = avoid_k8(inst.random);
  Graph u = inst.union_graph();
  EdgeColouring psi(u.m());
  int next = std::max(res.colouring.max_colour(), kRedColour) + 1;
  for (int e = 0; e < u.m(); ++e) {
    int id = inst.random.edge_id(u.edge(e));
    psi.set(e, id >= 0 ? res.colouring[id] : next++);
  }
  res.colouring = std::move(psi);
  return res;
}

inline bool every_rainbow_k4_has(const Graph& g, const EdgeColouring& psi, int colour) {
  bool ok = true;
  for_each_rainbow_clique(g, psi, 4, [&](const std::vector<Vertex>& q) {
    auto cs = pattern_colours(g, psi, q);
    if (!std::binary_search(cs.begin(), cs.end(), colour)) ok = false;
  });
  return ok;
}

// Rainbow K8 count in the union of a complete bipartite seed and R: every
// clique splits into cliques inside the two sides, so rainbow cliques of each
// side are paired by size and the combined vertex set is checked.
inline long long rainbow_k8_in_union(const PerturbedInstance& inst, const EdgeColouring& psi_union,
                                     long long pair_budget = 50'000'000) {
  Graph u = inst.union_graph();
  check_companion(u, psi_union);
  auto [left, right] = complete_bipartition(inst.seed);
  auto side_cliques = [&](const std::vector<Vertex>& side) {
    auto sub = induced_subgraph(u, side);
    EdgeColouring local(sub.graph.m());
    for (int e = 0; e < sub.graph.m(); ++e)
      local.set(e, psi_union[u.edge_id(detail::to_parent(sub, sub.graph.edge(e).u, sub.graph.edge(e).v))]);
    std::vector<std::vector<std::vector<Vertex>>> by_size(9);
    by_size[0].push_back({});
    for (Vertex v : side) by_size[1].push_back({v});
    for (int k = 2; k <= 8; ++k)
      for_each_rainbow_clique(sub.graph, local, k, [&](const std::vector<Vertex>& c) {
        std::vector<Vertex> g;
        for (Vertex v : c) g.push_back(sub.to_parent[v]);
        by_size[k].push_back(std::move(g));
      });
    return by_size;
  };
  auto a = side_cliques(left), b = side_cliques(right);
  long long found = 0, pairs = 0;
  for (int k = 0; k <= 8; ++k)
    for (const auto& x : a[k])
      for (const auto& y : b[8 - k]) {
        if (++pairs > pair_budget) throw SearchExhausted("rainbow K8 scan exceeded its pair budget");
        std::vector<Vertex> all = x;
        all.insert(all.end(), y.begin(), y.end());
        std::sort(all.begin(), all.end());
        bool clique = true;
        for (std::size_t i = 0; i < all.size() && clique; ++i)
          for (std::size_t j = i + 1; j < all.size() && clique; ++j) clique = u.adjacent(all[i], all[j]);
        if (clique && is_rainbow_clique(u, psi_union, all)) ++found;
      }
  return found;
}

}  // namespace rainbow
