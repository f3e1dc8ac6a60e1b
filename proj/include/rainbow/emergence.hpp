#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include "rainbow/arrows.hpp"
#include "rainbow/avoider_k4.hpp"
#include "rainbow/avoider_k6.hpp"
#include "rainbow/avoider_k8.hpp"
#include "rainbow/copies.hpp"
#include "rainbow/density.hpp"
#include "rainbow/parallel.hpp"
#include "rainbow/sampling.hpp"

namespace rainbow {

// ---- automorphisms ----

namespace detail {

// Is there an automorphism agreeing with the partial map img (-1 = free)?
inline bool extend_automorphism(const Graph& h, std::vector<int>& img, std::vector<char>& used, int v) {
  int n = h.n();
  while (v < n && img[v] >= 0) ++v;
  if (v == n) return true;
  for (int w = 0; w < n; ++w) {
    if (used[w] || h.degree(w) != h.degree(v)) continue;
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      if (img[u] >= 0 && h.adjacent(u, v) != h.adjacent(img[u], w)) ok = false;
    if (!ok) continue;
    img[v] = w;
    used[w] = 1;
    if (extend_automorphism(h, img, used, v + 1)) {
      img[v] = -1;
      used[w] = 0;
      return true;
    }
    img[v] = -1;
    used[w] = 0;
  }
  return false;
}

}  // namespace detail

// |Aut(H)| as the product of orbit sizes along the point-stabiliser chain.
inline std::uint64_t automorphism_count(const Graph& h) {
  int n = h.n();
  if (n > 20) throw ParameterError("automorphism_count limited to 20 vertices");
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) {
    std::uint64_t orbit = 0;
    for (int w = k; w < n; ++w) {
      std::vector<int> img(n, -1);
      std::vector<char> used(n, 0);
      for (int i = 0; i < k; ++i) img[i] = i, used[i] = 1;
      if (used[w] || h.degree(w) != h.degree(k)) continue;
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) ok = h.adjacent(i, k) == h.adjacent(i, w);
      if (!ok) continue;
      img[k] = w;
      used[w] = 1;
      if (detail::extend_automorphism(h, img, used, 0)) ++orbit;
    }
    total *= orbit;
  }
  return total;
}

// ---- Janson ----

struct JansonEstimate {
  double lambda = 0;
  double delta_upper = 0;  // half the ordered sum over overlapping pairs
  double nonexistence_bound = 1;
  bool delta_exact = false;
};

inline constexpr int kJansonMaxVertices = 12;
inline constexpr int kJansonExactVertices = 8;

inline long double falling(long double n, int k) {
  long double r = 1;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

namespace detail {

// counts[s][c]: partial injections A -> V(H) with |A| = s whose image keeps c
// of the edges of H; the rest of V(H) goes outside the fixed copy.
inline std::vector<std::vector<std::uint64_t>> overlap_profile(const Graph& h) {
  int v = h.n(), e = h.m();
  std::vector<std::vector<std::uint64_t>> counts(v + 1, std::vector<std::uint64_t>(e + 1, 0));
  std::vector<int> img(v, -1);
  std::vector<char> used(v, 0);
  auto rec = [&](auto&& self, int a, int s, int c) -> void {
    if (a == v) {
      ++counts[s][c];
      return;
    }
    self(self, a + 1, s, c);
    for (int w = 0; w < v; ++w) {
      if (used[w]) continue;
      int add = 0;
      for (int b = 0; b < a; ++b)
        if (img[b] >= 0 && h.adjacent(a, b) && h.adjacent(w, img[b])) ++add;
      img[a] = w;
      used[w] = 1;
      self(self, a + 1, s + 1, c + add);
      img[a] = -1;
      used[w] = 0;
    }
  };
  rec(rec, 0, 0, 0);
  return counts;
}

// Most edges induced by s vertices of H.
inline std::vector<int> max_induced_edges(const Graph& h) {
  std::vector<int> best(h.n() + 1, 0);
  auto ec = subset_edge_counts(h);
  for (std::uint32_t s = 0; s < ec.size(); ++s) {
    int k = std::popcount(s);
    best[k] = std::max<int>(best[k], ec[s]);
  }
  return best;
}

}  // namespace detail

// lambda = C(n,v) v!/|Aut| p^e. Delta is the Janson overlap term (pairs of
// distinct copies sharing an edge, each unordered pair once): exact for
// v(H) <= 8; above that, pairs are bounded by placements of the shared
// vertices with the densest possible overlap.
inline JansonEstimate janson_bound(const Graph& h, long long n, double p) {
  check_probability(p);
  if (h.m() == 0) throw DomainError("janson_bound needs a graph with an edge");
  if (h.n() > kJansonMaxVertices) throw ParameterError("janson_bound limited to 12 vertices");
  if (n < 0) throw ParameterError("n must be non-negative");
  const int v = h.n(), e = h.m();
  JansonEstimate est;
  if (n < v || p == 0.0) {
    est.delta_exact = v <= kJansonExactVertices;
    return est;
  }
  const long double aut = static_cast<long double>(automorphism_count(h));
  const long double copies = falling(n, v) / aut;
  const long double lp = std::log(static_cast<long double>(p));
  auto pw = [&](int k) { return std::exp(k * lp); };
  est.lambda = static_cast<double>(copies * pw(e));
  long double partners = 0;  // sum over H_j overlapping a fixed copy
  if (v <= kJansonExactVertices) {
    auto counts = detail::overlap_profile(h);
    for (int s = 2; s <= v; ++s)
      for (int c = 1; c <= e; ++c) {
        long double k = static_cast<long double>(counts[s][c]);
        if (s == v && c == e) k -= aut;  // H_j = H_i itself
        if (k <= 0) continue;
        partners += k / aut * falling(n - v, v - s) * pw(2 * e - c);
      }
    est.delta_exact = true;
  } else {
    auto best = detail::max_induced_edges(h);
    for (int s = 2; s <= v; ++s) {
      if (best[s] == 0) continue;
      long double choose = 1;
      for (int i = 0; i < s; ++i) choose = choose * (v - i) / (i + 1);
      partners += choose * falling(v, s) * falling(n - v, v - s) * pw(2 * e - best[s]);
    }
  }
  est.delta_upper = static_cast<double>(copies * partners / 2);
  // lambda^2 / (lambda + 2 Delta) written so that Delta = 0 gives lambda exactly.
  double exponent = est.lambda / (1.0 + 2.0 * est.delta_upper / est.lambda);
  est.nonexistence_bound = std::exp(-exponent);
  return est;
}

// ---- density conditions ----

// n^{v(J)} p^{e(J)} = omega(1) (Constant) or omega(n) (Linear) for every
// induced J with an edge, at p = omega(n^{-x}); this needs
// min_J v(J) - x e(J) >= 0, respectively >= 1.
enum class Margin { Constant, Linear };
enum class DensityMethod { Auto, SubsetScan, MinCut, Degeneracy };

inline const char* to_string(Margin m) { return m == Margin::Constant ? "omega(1)" : "omega(n)"; }
inline const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::Auto: return "auto";
    case DensityMethod::SubsetScan: return "subset-scan";
    case DensityMethod::MinCut: return "min-cut";
    case DensityMethod::Degeneracy: return "degeneracy";
  }
  return "?";
}

struct DensityConditionReport {
  Rational x;
  Margin margin = Margin::Constant;
  DensityMethod method = DensityMethod::Auto;
  std::optional<Rational> minimum;  // exact, unless the degeneracy route was taken
  std::vector<Vertex> minimizer;
  std::optional<Rational> lower_bound;  // certified
  int degeneracy = 0;
  std::vector<Vertex> peeling_order;
  bool holds = false;
};

inline constexpr int kMinCutMaxEdges = 4000;
// Above this Auto prefers a degeneracy certificate when one exists.
inline constexpr int kMinCutAutoEdges = 500;

namespace detail {

struct MinResult {
  Rational value;
  std::vector<Vertex> vertices;
};

inline MinResult min_by_subsets(const Graph& h, const Rational& x) {
  require_small(h, kMaxSubsetVertices, "density_condition");
  auto ec = subset_edge_counts(h);
  std::int64_t num = x.num(), den = x.den();
  std::int64_t best = 0;
  std::uint32_t arg = 0;
  for (std::uint32_t s = 1; s < ec.size(); ++s) {
    if (ec[s] == 0) continue;
    std::int64_t val = den * std::popcount(s) - num * ec[s];
    if (arg == 0 || val < best) best = val, arg = s;
  }
  MinResult r{Rational(best, den), {}};
  for (int v = 0; v < h.n(); ++v)
    if (arg >> v & 1U) r.vertices.push_back(v);
  return r;
}

// max over vertex sets S containing a forced edge of num e(S) - den |S| is a
// maximum-weight closure: edge nodes (weight num) need both endpoint nodes
// (weight -den). One cut per forced edge.
inline MinResult min_by_cuts(const Graph& h, const Rational& x) {
  using namespace boost;
  using Traits = adjacency_list_traits<vecS, vecS, directedS>;
  using Net = adjacency_list<
      vecS, vecS, directedS,
      property<vertex_name_t, std::string,
               property<vertex_index_t, long,
                        property<vertex_color_t, default_color_type,
                                 property<vertex_distance_t, long, property<vertex_predecessor_t, Traits::edge_descriptor>>>>>,
      property<edge_capacity_t, long long,
               property<edge_residual_capacity_t, long long, property<edge_reverse_t, Traits::edge_descriptor>>>>;
  if (h.m() > kMinCutMaxEdges) throw ParameterError("min-cut density check limited to 4000 edges");
  const long long num = x.num(), den = x.den();
  const long long inf = num * (h.m() + 1) + den * (h.n() + 1);
  const int m = h.m(), n = h.n();
  Net net(2 + m + n);
  auto cap = get(edge_capacity, net);
  auto rev = get(edge_reverse, net);
  auto add = [&](int a, int b, long long c) {
    auto e1 = add_edge(a, b, net).first;
    auto e2 = add_edge(b, a, net).first;
    cap[e1] = c;
    cap[e2] = 0;
    rev[e1] = e2;
    rev[e2] = e1;
    return e1;
  };
  const int s = 0, t = 1;
  std::vector<Traits::edge_descriptor> from_source;
  for (int i = 0; i < m; ++i) {
    from_source.push_back(add(s, 2 + i, num));
    add(2 + i, 2 + m + h.edge(i).u, inf);
    add(2 + i, 2 + m + h.edge(i).v, inf);
  }
  for (int v = 0; v < n; ++v) add(2 + m + v, t, den);
  auto solve = [&] {
    long long flow = boykov_kolmogorov_max_flow(net, s, t);
    long long value = num * m - flow;  // num e(S) - den |S| at the optimum
    auto colour = get(vertex_color, net);
    MinResult r{Rational(-value, den), {}};
    for (int v = 0; v < n; ++v)  // black = source side of the cut
      if (colour[2 + m + v] == black_color) r.vertices.push_back(v);
    return r;
  };
  // A negative unconstrained minimum is attained by a set spanning edges.
  auto free_min = solve();
  if (free_min.value < Rational(0)) return free_min;
  std::optional<MinResult> best;
  for (int forced = 0; forced < m; ++forced) {
    cap[from_source[forced]] = inf;
    auto r = solve();
    cap[from_source[forced]] = num;
    if (!best || r.value < best->value) best = std::move(r);
  }
  return *best;
}

}  // namespace detail

// Degeneracy ordering: repeatedly remove a vertex of minimum degree.
inline std::pair<int, std::vector<Vertex>> degeneracy_order(const Graph& h) {
  int n = h.n();
  std::vector<int> deg(n);
  std::vector<char> gone(n, 0);
  for (int v = 0; v < n; ++v) deg[v] = h.degree(v);
  std::vector<Vertex> order;
  int k = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!gone[v] && (best < 0 || deg[v] < deg[best])) best = v;
    k = std::max(k, deg[best]);
    gone[best] = 1;
    order.push_back(best);
    for (Vertex w : h.neighbours(best))
      if (!gone[w]) --deg[w];
  }
  return {k, order};
}

inline DensityConditionReport density_condition(const Graph& h, const Rational& x, Margin margin,
                                                DensityMethod method = DensityMethod::Auto) {
  if (h.m() == 0) throw DomainError("density_condition needs a graph with an edge");
  if (x < Rational(0)) throw ParameterError("exponent must be non-negative");
  DensityConditionReport r;
  r.x = x;
  r.margin = margin;
  std::tie(r.degeneracy, r.peeling_order) = degeneracy_order(h);
  if (method == DensityMethod::Auto) {
    if (h.n() <= detail::kMaxSubsetVertices) method = DensityMethod::SubsetScan;
    else if (h.m() <= kMinCutAutoEdges) method = DensityMethod::MinCut;
    else if (x * Rational(r.degeneracy) <= Rational(1) || h.m() > kMinCutMaxEdges) method = DensityMethod::Degeneracy;
    else method = DensityMethod::MinCut;
  }
  r.method = method;
  const Rational need = margin == Margin::Constant ? Rational(0) : Rational(1);
  if (method == DensityMethod::Degeneracy) {
    // Every induced J keeps a vertex of degree <= k; deleting it changes
    // v - x e by x d - 1 <= x k - 1, so x k <= 1 gives v(J) - x e(J) >= 1 by
    // induction from a single vertex.
    if (x * Rational(r.degeneracy) <= Rational(1)) {
      r.lower_bound = Rational(1);
      r.holds = true;
    }  // otherwise inconclusive: nothing certified, holds stays false
    return r;
  }
  auto best = method == DensityMethod::SubsetScan ? detail::min_by_subsets(h, x) : detail::min_by_cuts(h, x);
  r.minimum = best.value;
  r.minimizer = std::move(best.vertices);
  r.lower_bound = best.value;
  r.holds = !(best.value < need);
  return r;
}

// ---- structural claims for the K8 regime ----

struct StructureReport {
  int components = 0;
  std::vector<int> phis;
  std::vector<std::string> violations;
};

// Every K4-component has phi <= 7; two components with phi >= 3 share at most
// one vertex; components with phi >= 3 meeting pairwise form a forest.
inline StructureReport verify_structure(const Graph& g) {
  StructureReport rep;
  auto dec = k4_components(g);
  rep.components = static_cast<int>(dec.parts.size());
  for (const auto& p : dec.parts) rep.phis.push_back(phi(p.graph));
  std::vector<int> heavy;
  for (int i = 0; i < rep.components; ++i) {
    if (rep.phis[i] > 7)
      rep.violations.push_back("component " + std::to_string(i) + " has phi " + std::to_string(rep.phis[i]));
    if (rep.phis[i] >= 3) heavy.push_back(i);
  }
  // Union-find over the meet graph; a repeated union closes a cycle.
  std::vector<int> root(rep.components);
  for (int i = 0; i < rep.components; ++i) root[i] = i;
  auto find = [&](int a) {
    while (root[a] != a) a = root[a] = root[root[a]];
    return a;
  };
  for (std::size_t a = 0; a < heavy.size(); ++a)
    for (std::size_t b = a + 1; b < heavy.size(); ++b) {
      auto sh = shared_vertices(dec.parts[heavy[a]], dec.parts[heavy[b]]);
      if (sh.empty()) continue;
      std::string pair = "components " + std::to_string(heavy[a]) + " and " + std::to_string(heavy[b]);
      if (sh.size() > 1) rep.violations.push_back(pair + " share " + std::to_string(sh.size()) + " vertices");
      int ra = find(heavy[a]), rb = find(heavy[b]);
      if (ra == rb) rep.violations.push_back(pair + " close a cycle of components with phi >= 3");
      else root[ra] = rb;
    }
  return rep;
}

// ---- p expressions ----

// A literal probability or c*n^-a/b (also n^-a, c*n^-0.7, ...).
struct ProbabilityExpr {
  std::string text;
  double c = 1.0;
  double exponent = 0.0;
  bool literal = true;

  double at(long long n) const {
    double p = literal ? c : c * std::pow(static_cast<double>(n), exponent);
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p = " + text + " leaves [0,1] at n = " + std::to_string(n));
    return p;
  }
};

inline ProbabilityExpr parse_probability(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  ProbabilityExpr e;
  e.text = s;
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw ParameterError("cannot parse '" + t + "' in p = " + raw);
    return v;
  };
  auto npos = s.find("n^");
  if (npos == std::string::npos) {
    e.c = number(s);
    return e;
  }
  e.literal = false;
  std::string coef = s.substr(0, npos);
  if (!coef.empty()) {
    if (coef.back() != '*') throw ParameterError("expected '*' before n in p = " + raw);
    coef.pop_back();
    e.c = number(coef);
  }
  std::string ex = s.substr(npos + 2);
  if (!ex.empty() && ex.front() == '(' && ex.back() == ')') ex = ex.substr(1, ex.size() - 2);
  auto slash = ex.find('/');
  e.exponent = slash == std::string::npos ? number(ex) : number(ex.substr(0, slash)) / number(ex.substr(slash + 1));
  return e;
}

// ---- threshold scans ----

enum class ScanMode { AvoiderSuccess, Containment, DeciderOnTiny };

inline const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::AvoiderSuccess: return "avoider-success-rate";
    case ScanMode::Containment: return "containment-rate";
    case ScanMode::DeciderOnTiny: return "decider-on-tiny";
  }
  return "?";
}

inline ScanMode parse_scan_mode(const std::string& s) {
  for (auto m : {ScanMode::AvoiderSuccess, ScanMode::Containment, ScanMode::DeciderOnTiny})
    if (s == to_string(m)) return m;
  throw ParameterError("unknown scan mode '" + s + "'");
}

struct ScanConfig {
  int ell = 4;
  std::vector<int> ns;
  std::vector<ProbabilityExpr> ps;
  int trials = 100;
  ScanMode mode = ScanMode::AvoiderSuccess;
  std::uint64_t seed = 1;
  int threads = 1;
  bool record_time = true;
  long long decider_budget = 20'000'000;
};

struct ScanRow {
  int n = 0;
  double p = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0, ci_low = 0, ci_high = 0;
  ScanMode mode = ScanMode::AvoiderSuccess;
  long long elapsed_ms = 0;
};

// Wilson score interval at 95%.
inline std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  double n = trials, ph = successes / n, z2 = z * z;
  double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
  double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// One trial on the coupled random graph for (seed, trial): the same pair
// coins are thresholded at every p of the grid.
inline bool scan_trial(const ScanConfig& cfg, int n, double p, std::uint64_t trial_seed) {
  Graph r = sample_gnp_coupled(n, p, trial_seed);
  switch (cfg.mode) {
    case ScanMode::Containment: {
      int k = (cfg.ell + 1) / 2;
      bool found = false;
      for_each_clique(r, k, [&](const std::vector<Vertex>&) {
        found = true;
        return false;
      });
      return found;
    }
    case ScanMode::DeciderOnTiny: {
      Graph seed = seed_graph("bipartite", n);
      auto v = decide_arrows(edge_union(seed, r), clique(cfg.ell), cfg.decider_budget);
      if (v.outcome == ArrowsOutcome::Unknown) throw SearchExhausted("decide_arrows hit its budget in a scan");
      return v.outcome == ArrowsOutcome::Arrows;
    }
    case ScanMode::AvoiderSuccess: break;
  }
  PerturbedInstance inst{"bipartite", seed_graph("bipartite", n), Graph(n), n, p, trial_seed, cfg.ell != 4};
  inst.random = cfg.ell == 4 ? drop_edges_of(r, inst.seed) : r;
  Graph g = inst.union_graph();
  try {
    if (cfg.ell == 4) {
      auto psi = avoid_k4(inst);
      if (!is_proper(g, psi)) return false;
      for (const auto& q : cliques(g, 4))
        if (is_rainbow_clique(g, psi, q)) return false;
      return true;
    }
    if (cfg.ell == 6) {
      auto res = avoid_k6_detailed(inst);
      return is_proper(g, res.colouring) && rainbow_k6_by_triangle_pairs(inst, res.colouring) == 0;
    }
    if (cfg.ell == 8) {
      auto res = avoid_k8_perturbed(inst);
      EdgeColouring on_r(inst.random.m());
      for (int e = 0; e < inst.random.m(); ++e) on_r.set(e, res.colouring[g.edge_id(inst.random.edge(e))]);
      return is_proper(g, res.colouring) && every_rainbow_k4_has(inst.random, on_r, kRedColour) &&
             rainbow_k8_in_union(inst, res.colouring) == 0;
    }
  } catch (const StructureUnsupported&) {
    return false;
  } catch (const OutOfRegime&) {
    return false;
  } catch (const SearchExhausted&) {
    return false;
  }
  throw ParameterError("avoider scans support ell in {4, 6, 8}");
}

inline std::vector<ScanRow> threshold_scan(const ScanConfig& cfg) {
  if (cfg.trials <= 0) throw ParameterError("trials must be positive");
  if (cfg.ns.empty() || cfg.ps.empty()) throw ParameterError("scan needs at least one n and one p");
  if (cfg.ell < 2) throw ParameterError("ell must be at least 2");
  if (cfg.mode == ScanMode::AvoiderSuccess && cfg.ell != 4 && cfg.ell != 6 && cfg.ell != 8)
    throw ParameterError("avoider scans support ell in {4, 6, 8}");
  if (cfg.mode == ScanMode::DeciderOnTiny)
    for (int n : cfg.ns)
      if (n > 10) throw ParameterError("decider-on-tiny needs n <= 10");
  std::vector<ScanRow> rows;
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    int n = cfg.ns[ni];
    for (const auto& pe : cfg.ps) {
      auto start = std::chrono::steady_clock::now();
      double p = pe.at(n);
      auto ok = parallel_map(cfg.trials, cfg.threads, [&](std::size_t t) {
        return scan_trial(cfg, n, p, derive_seed(cfg.seed, t, static_cast<std::uint64_t>(n)));
      });
      ScanRow row;
      row.n = n;
      row.p = p;
      row.trials = cfg.trials;
      row.successes = static_cast<int>(std::count(ok.begin(), ok.end(), true));
      row.rate = static_cast<double>(row.successes) / cfg.trials;
      std::tie(row.ci_low, row.ci_high) = wilson_interval(row.successes, cfg.trials);
      row.mode = cfg.mode;
      if (cfg.record_time)
        row.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "n,p,trials,successes,rate,ci_low,ci_high,mode,elapsed_ms\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.n << ',' << r.p << ',' << r.trials << ',' << r.successes << ',' << r.rate << ',' << r.ci_low << ','
       << r.ci_high << ',' << to_string(r.mode) << ',' << r.elapsed_ms << '\n';
  return os.str();
}

}  // namespace rainbow
