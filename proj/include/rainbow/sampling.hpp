#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "rainbow/constructions.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/random.hpp"

namespace rainbow {

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0,1]");
}

// G(n,p) by geometric skipping over the lexicographic pair index.
inline Graph sample_gnp(int n, double p, Rng& rng) {
  check_probability(p);
  if (n < 0) throw ParameterError("n must be non-negative");
  std::vector<Edge> es;
  if (n < 2 || p == 0.0) return Graph(n);
  if (p == 1.0) return clique(n);
  const double lq = std::log1p(-p);
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  long long idx = -1;
  int u = 0;
  long long row_start = 0;  // index of pair (u, u+1)
  for (;;) {
    double r = 1.0 - rng.uniform01();  // in (0,1]
    idx += 1 + static_cast<long long>(std::floor(std::log(r) / lq));
    if (idx >= total || idx < 0) break;
    while (idx >= row_start + (n - 1 - u)) {
      row_start += n - 1 - u;
      ++u;
    }
    es.push_back({u, static_cast<Vertex>(u + 1 + (idx - row_start))});
  }
  return Graph(n, std::move(es));
}

// Random edges of an instance sampled independently per pair. With
// all_pairs=false the seed's own pairs are excluded.
struct PerturbedInstance {
  std::string seed_spec;
  Graph seed;
  Graph random;
  int n = 0;
  double p = 0.0;
  std::uint64_t rng_seed = 0;
  bool all_pairs = false;

  Graph union_graph() const { return edge_union(seed, random); }
};

// "bipartite" is the balanced complete bipartite graph K_{n/2 floor, n/2 ceil};
// "empty" is the empty graph; anything else goes through parse_graph_spec
// and must have n vertices.
inline Graph seed_graph(const std::string& spec, int n) {
  if (spec == "bipartite") return complete_bipartite(std::max(1, n / 2), std::max(1, n - n / 2));
  if (spec == "empty") return empty_graph(n);
  Graph g = parse_graph_spec(spec);
  if (g.n() != n) throw ParameterError("seed '" + spec + "' has " + std::to_string(g.n()) + " vertices, expected " + std::to_string(n));
  return g;
}

inline Graph drop_edges_of(const Graph& g, const Graph& seed) {
  std::vector<Edge> keep;
  for (const auto& e : g.edges())
    if (!seed.adjacent(e.u, e.v)) keep.push_back(e);
  return Graph(g.n(), std::move(keep));
}

inline PerturbedInstance sample_perturbed(const std::string& seed_spec, int n, double p,
                                          std::uint64_t rng_seed, bool all_pairs = false) {
  if (n < 2) throw ParameterError("perturbed instances need n >= 2");
  PerturbedInstance inst{seed_spec, seed_graph(seed_spec, n), Graph(n), n, p, rng_seed, all_pairs};
  Rng rng(rng_seed);
  Graph r = sample_gnp(n, p, rng);
  // Dropping seed pairs from G(n,p) leaves independent p-coins on the others.
  inst.random = all_pairs ? std::move(r) : drop_edges_of(r, inst.seed);
  return inst;
}

// Uniform in [0,1) attached to a pair; thresholding it at p couples samples
// across different p for the same (seed, trial).
inline double pair_uniform(std::uint64_t seed, Vertex u, Vertex v) {
  std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  return static_cast<double>(mix64(seed ^ mix64(key)) >> 11) * 0x1.0p-53;
}

inline Graph sample_gnp_coupled(int n, double p, std::uint64_t seed) {
  check_probability(p);
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (pair_uniform(seed, u, v) < p) es.push_back({u, v});
  return Graph(n, std::move(es));
}

}  // namespace rainbow
