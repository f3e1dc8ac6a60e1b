#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

struct CanonicalForm {
  // Row i holds the canonical neighbours of canonical vertex i as bits.
  std::vector<std::uint64_t> code;
  // labelling[v] = canonical label of vertex v.
  std::vector<Vertex> labelling;
};

namespace detail {

using Partition = std::vector<std::vector<Vertex>>;

// Equitable refinement: split cells by neighbour counts into every cell
// until stable. Sub-cells are ordered by signature, so the result does not
// depend on vertex names.
inline void refine(const Graph& g, Partition& p) {
  std::vector<int> cell_of(g.n());
  for (bool changed = true; changed;) {
    changed = false;
    for (int c = 0; c < static_cast<int>(p.size()); ++c)
      for (Vertex v : p[c]) cell_of[v] = c;
    Partition next;
    for (const auto& cell : p) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      std::map<std::vector<int>, std::vector<Vertex>> groups;
      for (Vertex v : cell) {
        std::vector<int> sig(p.size(), 0);
        for (Vertex w : g.neighbours(v)) ++sig[cell_of[w]];
        groups[sig].push_back(v);
      }
      if (groups.size() > 1) changed = true;
      for (auto& [sig, vs] : groups) next.push_back(std::move(vs));
    }
    p = std::move(next);
  }
}

inline std::vector<std::uint64_t> code_of(const Graph& g, const Partition& p) {
  std::vector<Vertex> lab(g.n());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) lab[p[i][0]] = i;
  std::vector<std::uint64_t> code(g.n(), 0);
  for (const auto& e : g.edges()) {
    code[lab[e.u]] |= std::uint64_t{1} << lab[e.v];
    code[lab[e.v]] |= std::uint64_t{1} << lab[e.u];
  }
  return code;
}

inline void canon_search(const Graph& g, Partition p, CanonicalForm& best, bool& have) {
  refine(g, p);
  auto it = std::find_if(p.begin(), p.end(), [](const auto& c) { return c.size() > 1; });
  if (it == p.end()) {
    auto code = code_of(g, p);
    if (!have || code < best.code) {
      have = true;
      best.code = std::move(code);
      best.labelling.assign(g.n(), 0);
      for (int i = 0; i < static_cast<int>(p.size()); ++i) best.labelling[p[i][0]] = i;
    }
    return;
  }
  auto idx = it - p.begin();
  for (Vertex v : p[idx]) {
    Partition q;
    q.insert(q.end(), p.begin(), p.begin() + idx);
    q.push_back({v});
    std::vector<Vertex> rest;
    for (Vertex w : p[idx])
      if (w != v) rest.push_back(w);
    q.push_back(std::move(rest));
    q.insert(q.end(), p.begin() + idx + 1, p.end());
    canon_search(g, std::move(q), best, have);
  }
}

}  // namespace detail

// Canonical labelling by refinement and individualization, exploring every
// leaf of the search tree (no automorphism pruning). Meant for pattern-sized
// graphs; limited to 64 vertices by the code layout.
inline CanonicalForm canonical_form(const Graph& g) {
  if (g.n() > 64) throw ParameterError("canonical_form supports at most 64 vertices");
  CanonicalForm best;
  if (g.n() == 0) return best;
  std::vector<Vertex> all(g.n());
  for (int i = 0; i < g.n(); ++i) all[i] = i;
  bool have = false;
  detail::canon_search(g, {all}, best, have);
  return best;
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return a.n() == b.n() && a.m() == b.m() && canonical_form(a).code == canonical_form(b).code;
}

}  // namespace rainbow
