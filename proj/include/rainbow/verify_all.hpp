#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rainbow/arrows.hpp"
#include "rainbow/avoider_k4.hpp"
#include "rainbow/avoider_k6.hpp"
#include "rainbow/avoider_k8.hpp"
#include "rainbow/constructions.hpp"
#include "rainbow/density.hpp"
#include "rainbow/emergence.hpp"
#include "rainbow/lemma_lab.hpp"
#include "rainbow/oracles.hpp"
#include "rainbow/parallel.hpp"
#include "rainbow/tiled_colouring.hpp"

namespace rainbow::verify {

using json = nlohmann::json;

enum class Budget { Quick, Full };

inline Budget parse_budget(const std::string& s) {
  if (s == "quick") return Budget::Quick;
  if (s == "full") return Budget::Full;
  throw ParameterError("budget must be quick or full");
}

inline const char* to_string(Budget b) { return b == Budget::Quick ? "quick" : "full"; }

struct Settings {
  std::uint64_t seed = 42;
  Budget budget = Budget::Quick;
  int threads = 1;
  std::string archive_dir = "counterexamples";
};

// Instance counts per budget. Full matches the acceptance thresholds.
struct Counts {
  int k4_per_cell, k6_per_n, tiled_corpus, tiled_resolve, k8_per_n;
  long long lemma_trials;
};

inline Counts counts_for(Budget b) {
  if (b == Budget::Full) return {63, 100, 10000, 500, 100, 10000};
  return {8, 10, 1000, 100, 20, 300};
}

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  json detail;
};

inline json to_json(const Criterion& c) {
  return {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
}

namespace detail {

inline bool has_rainbow_clique(const Graph& g, const EdgeColouring& psi, int k) {
  bool found = false;
  for_each_clique(g, k, [&](const std::vector<Vertex>& q) -> bool {
    found = is_rainbow_clique(g, psi, q);
    return !found;
  });
  return found;
}

// Groups out-of-regime messages by the claim that failed.
inline std::string regime_reason(const std::string& what) {
  if (what.find("share") != std::string::npos) return "phi>=3 components share 2+ vertices";
  if (what.find("cycle") != std::string::npos) return "meet graph has a cycle";
  if (what.find("vertices") != std::string::npos && what.find("phi") != std::string::npos) {
    // "K4-component with phi P on V vertices"
    std::istringstream is(what.substr(what.find("phi") + 3));
    int ph = 0;
    is >> ph;
    return ph > 7 ? "phi>7" : "component larger than 24 vertices";
  }
  return what;
}

}  // namespace detail

inline Criterion certificate_suite() {
  Criterion c{1, "certificate suite", true, json::object()};
  const long long budget = 2'000'000'000LL;
  struct Case {
    std::string name;
    Graph g, h;
    ArrowsOutcome want;
  };
  std::vector<Case> cases{{"K3,K3", clique(3), clique(3), ArrowsOutcome::Arrows},
                          {"K4,K4", clique(4), clique(4), ArrowsOutcome::Witness},
                          {"HatK(3,4),K4", hat_k(3, 4), clique(4), ArrowsOutcome::Arrows},
                          {"K5,K4", clique(5), clique(4), ArrowsOutcome::Witness}};
  for (const auto& cs : cases) {
    auto v = decide_arrows(cs.g, cs.h, budget);
    json d{{"outcome", to_string(v.outcome)}, {"nodes", v.nodes}};
    bool ok = v.outcome == cs.want;
    if (v.witness) {
      bool proper = is_proper(cs.g, *v.witness);
      bool clean = !detail::has_rainbow_clique(cs.g, *v.witness, cs.h.n());
      d["witness_proper"] = proper;
      d["witness_rainbow_free"] = clean;
      d["witness_colours"] = v.witness->num_colours();
      ok = ok && proper && clean;
      if (cs.name == "K5,K4") ok = ok && v.witness->num_colours() == 5;
    }
    d["pass"] = ok;
    c.pass = c.pass && ok;
    c.detail[cs.name] = d;
  }
  return c;
}

inline Criterion avoid_k4_suite(const Settings& s) {
  Criterion c{2, "avoid_k4", true, json::object()};
  const auto counts = counts_for(s.budget);
  struct Job {
    int n;
    double coef;
    int t;
  };
  std::vector<Job> jobs;
  for (int n : {50, 100, 200, 400})
    for (double coef : {0.3, 0.7})
      for (int t = 0; t < counts.k4_per_cell; ++t) jobs.push_back({n, coef, t});
  // 0 validated, 1 unsupported, 2 invalid output
  auto results = parallel_map(jobs.size(), s.threads, [&](std::size_t i) {
    const auto& j = jobs[i];
    double p = j.coef * std::pow(j.n, -1.25);
    auto inst = sample_perturbed("bipartite", j.n, p, derive_seed(s.seed, i, 4));
    EdgeColouring psi;
    try {
      psi = avoid_k4(inst);
    } catch (const StructureUnsupported&) {
      return 1;
    }
    Graph g = inst.union_graph();
    if (!psi.total() || !is_proper(g, psi) || detail::has_rainbow_clique(g, psi, 4)) return 2;
    return 0;
  });
  int validated = 0, unsupported = 0, bad = 0;
  for (int r : results) (r == 0 ? validated : r == 1 ? unsupported : bad)++;
  int total = static_cast<int>(results.size());
  double rate = total ? static_cast<double>(validated) / total : 0.0;
  c.detail = {{"instances", total}, {"validated", validated}, {"unsupported", unsupported},
              {"invalid_outputs", bad}, {"classification_rate", rate}};
  c.pass = bad == 0 && rate >= 0.95 && (s.budget == Budget::Quick || total >= 500);
  return c;
}

inline Criterion avoid_k6_suite(const Settings& s) {
  Criterion c{3, "avoid_k6", true, json::object()};
  const auto counts = counts_for(s.budget);
  std::vector<int> ns;
  for (int n : {100, 200, 300})
    for (int t = 0; t < counts.k6_per_n; ++t) ns.push_back(n);
  struct Out {
    int status = 0;  // 0 ok, 1 unsupported, 2 invalid
    int components = 0;
  };
  auto results = parallel_map(ns.size(), s.threads, [&](std::size_t i) {
    int n = ns[i];
    auto inst = sample_perturbed("bipartite", n, std::pow(n, -0.7), derive_seed(s.seed, i, 6), true);
    Out o;
    K6Result r;
    try {
      r = avoid_k6_detailed(inst);
    } catch (const StructureUnsupported&) {
      o.status = 1;
      return o;
    }
    // Both matching conditions, component by component.
    Graph tri = triangle_union(inst.random);
    for (const auto& comp : components(tri)) {
      if (comp.graph.m() == 0) continue;
      ++o.components;
      std::vector<int> local(n, -1);
      for (int v = 0; v < comp.graph.n(); ++v) local[comp.to_parent[v]] = v;
      MatchingQuadruple q;
      for (int k = 0; k < 4; ++k)
        for (const auto& e : r.matchings.m[k])
          if (local[e.u] >= 0 && local[e.v] >= 0) q.m[k].push_back(make_edge(local[e.u], local[e.v]));
      if (matching_violation(comp.graph, q)) o.status = 2;
    }
    Graph g = inst.union_graph();
    if (!r.colouring.total() || !is_proper(g, r.colouring) || rainbow_k6_by_triangle_pairs(inst, r.colouring) != 0)
      o.status = 2;
    return o;
  });
  int validated = 0, unsupported = 0, bad = 0, comps = 0;
  for (const auto& o : results) {
    (o.status == 0 ? validated : o.status == 1 ? unsupported : bad)++;
    comps += o.components;
  }
  c.detail = {{"instances", static_cast<int>(results.size())}, {"validated", validated},
              {"unsupported", unsupported}, {"invalid_outputs", bad}, {"triangle_components", comps}};
  c.pass = bad == 0 && (s.budget == Budget::Quick || static_cast<int>(results.size()) >= 300);
  return c;
}

inline Criterion tiled_suite(const Settings& s) {
  Criterion c{4, "tiled corpus", true, json::object()};
  const auto counts = counts_for(s.budget);
  struct Out {
    int phi = 0;
    int kind = 0;
    bool generated_identity = true, resolved_identity = true, class_ok = true, sound = true, proper = true;
    bool resolved = false;
  };
  const int resolve_every = std::max(1, counts.tiled_corpus / counts.tiled_resolve);
  auto results = parallel_map(static_cast<std::size_t>(counts.tiled_corpus), s.threads, [&](std::size_t i) {
    Rng rng(derive_seed(s.seed, i, 8));
    auto sample = random_tiled_graph(rng, 12);
    const Graph& h = sample.graph;
    Out o;
    o.phi = phi(h);
    const auto& gen = sample.sequence;
    // A K5 base contributes 3 on top of 2 gamma + beta.
    o.generated_identity = o.phi == (gen.k5_base() ? 3 : 0) + 2 * gen.gamma + gen.beta;
    if (static_cast<int>(i) % resolve_every == 0) {
      o.resolved = true;
      auto seq = find_stretched_sequence(h, BaseChoice::K4);
      Graph back = replay(seq, h.n());
      o.resolved_identity = !seq.k5_base() && o.phi == 2 * seq.gamma + seq.beta && back.edges() == h.edges();
    }
    auto tc = colour_tiled(h);
    o.kind = strength(tc.certificate);
    o.proper = tc.colouring.total() && is_proper(h, tc.colouring);
    o.class_ok = o.kind <= required_strength(o.phi);
    // Soundness by scanning every K4 of h.
    o.sound = certificate_covers(h, tc.colouring, tc.certificate);
    if (tc.certificate.kind == CertificateKind::NoRainbow) o.sound = o.sound && rainbow_k4s(h, tc.colouring).empty();
    return o;
  });
  int resolved = 0, bad_gen = 0, bad_resolved = 0, bad_class = 0, unsound = 0, improper = 0;
  std::array<int, 8> by_phi{};
  std::array<int, 3> by_kind{};
  for (const auto& o : results) {
    resolved += o.resolved;
    bad_gen += !o.generated_identity;
    bad_resolved += !o.resolved_identity;
    bad_class += !o.class_ok;
    unsound += !o.sound;
    improper += !o.proper;
    if (o.phi >= 0 && o.phi < 8) ++by_phi[o.phi];
    ++by_kind[o.kind];
  }
  c.detail = {{"graphs", counts.tiled_corpus},
              {"resolved", resolved},
              {"phi_identity_failures_generated", bad_gen},
              {"phi_identity_failures_resolved", bad_resolved},
              {"certificate_class_failures", bad_class},
              {"unsound_certificates", unsound},
              {"improper_colourings", improper},
              {"phi_histogram", by_phi},
              {"certificate_kinds", {{"no-rainbow", by_kind[0]}, {"triangle", by_kind[1]}, {"matching", by_kind[2]}}}};
  c.pass = bad_gen + bad_resolved + bad_class + unsound + improper == 0 &&
           (s.budget == Budget::Quick || (counts.tiled_corpus >= 10000 && resolved >= 500));
  return c;
}

inline Criterion avoid_k8_suite(const Settings& s) {
  Criterion c{5, "avoid_k8", true, json::object()};
  const auto counts = counts_for(s.budget);
  std::vector<int> ns;
  for (int n : {80, 120})
    for (int t = 0; t < counts.k8_per_n; ++t) ns.push_back(n);
  struct Out {
    int status = 0;  // 0 ok, 1 out of regime, 2 invalid
    std::string reason;
    int red = 0;
  };
  auto results = parallel_map(ns.size(), s.threads, [&](std::size_t i) {
    int n = ns[i];
    auto inst = sample_perturbed("bipartite", n, std::pow(n, -0.45), derive_seed(s.seed, i, 10), true);
    Out o;
    K8Result r;
    try {
      r = avoid_k8_perturbed(inst);
    } catch (const OutOfRegime& e) {
      o.status = 1;
      o.reason = e.what();
      return o;
    } catch (const StructureUnsupported& e) {
      o.status = 1;
      o.reason = e.what();
      return o;
    }
    o.red = static_cast<int>(r.red_edges.size());
    Graph u = inst.union_graph();
    EdgeColouring on_r(inst.random.m());
    for (int e = 0; e < inst.random.m(); ++e) on_r.set(e, r.colouring[u.edge_id(inst.random.edge(e))]);
    bool ok = !r.structure.violation && r.colouring.total() && is_proper(u, r.colouring) &&
              every_rainbow_k4_has(inst.random, on_r, kRedColour) && rainbow_k8_in_union(inst, r.colouring) == 0;
    for (int ph : r.structure.phis) ok = ok && ph <= 7;
    if (!ok) o.status = 2;
    return o;
  });
  int validated = 0, out = 0, bad = 0, red = 0;
  std::map<std::string, int> reasons;
  for (const auto& o : results) {
    (o.status == 0 ? validated : o.status == 1 ? out : bad)++;
    red += o.red;
    if (o.status == 1) ++reasons[detail::regime_reason(o.reason)];
  }
  int total = static_cast<int>(results.size());
  double rate = total ? static_cast<double>(out) / total : 0.0;
  c.detail = {{"instances", total}, {"validated", validated}, {"out_of_regime", out},
              {"out_of_regime_rate", rate}, {"out_of_regime_reasons", reasons},
              {"invalid_outputs", bad}, {"red_edges", red}};
  c.pass = bad == 0 && rate < 0.05 && (s.budget == Budget::Quick || total >= 200);
  return c;
}

inline Criterion lemma_suite(const Settings& s) {
  Criterion c{6, "lemma_lab", true, json::object()};
  const auto counts = counts_for(s.budget);
  for (const auto& name : lab::lemma_names()) {
    auto rep = lab::falsify(name, counts.lemma_trials, s.seed, s.threads, s.archive_dir);
    c.detail[name] = {{"trials", rep.trials},
                      {"passed", rep.passed},
                      {"precondition_failures", rep.precondition_failures},
                      {"counterexamples", rep.counterexamples},
                      {"archived", rep.archived}};
    c.pass = c.pass && rep.ok() && rep.counterexamples == 0;
  }
  return c;
}

inline Criterion density_suite() {
  Criterion c{7, "density and janson", true, json::object()};
  struct Case {
    std::string name;
    Graph h;
    Rational x;
    Margin margin;
  };
  std::vector<Case> cases{
      {"K3", clique(3), Rational(1), Margin::Constant},
      {"K1,4", star(4), Rational(1), Margin::Linear},
      {"R7", r7(), Rational(2, 3), Margin::Constant},
      {"T10", t_graph(10), Rational(2, 3), Margin::Linear},
      {"HatK(3,4)", hat_k(3, 4), Rational(7, 15), Margin::Constant},
      {"2HatK(3,4)", disjoint_union({hat_k(3, 4), hat_k(3, 4)}), Rational(7, 15), Margin::Constant},
      {"KDelta(5,5)", k_delta(5, 5), Rational(7, 15), Margin::Linear},
  };
  json dens = json::object();
  for (const auto& cs : cases) {
    auto rep = density_condition(cs.h, cs.x, cs.margin);
    auto want = oracle::induced_min(cs.h, cs.x);
    bool ok = rep.minimum && *rep.minimum == want.value && rep.holds;
    dens[cs.name] = {{"x", cs.x.str()},
                     {"method", to_string(rep.method)},
                     {"minimum", rep.minimum ? rep.minimum->str() : "none"},
                     {"oracle", want.value.str()},
                     {"holds", rep.holds},
                     {"pass", ok}};
    c.pass = c.pass && ok;
  }
  // The full KDelta only admits the degeneracy route.
  auto big = density_condition(k_delta(25, 49), Rational(7, 15), Margin::Linear, DensityMethod::Degeneracy);
  dens["KDelta(25,49)"] = {{"method", "degeneracy"}, {"degeneracy", big.degeneracy}, {"holds", big.holds}};
  c.pass = c.pass && big.holds && big.degeneracy == 2;
  c.detail["density"] = dens;

  double worst = 0;
  for (long long n : {2LL, 10LL, 100LL, 1000LL, 10000LL})
    for (double p : {1e-6, 1e-4, 1e-2, 0.3, 1.0}) {
      auto est = janson_bound(clique(2), n, p);
      double want = std::exp(-(n * (n - 1) / 2.0) * p);
      if (want == 0) continue;
      worst = std::max(worst, std::abs(est.nonexistence_bound - want) / want);
      c.pass = c.pass && est.delta_upper == 0;
    }
  c.detail["janson_k2_max_relative_error"] = worst;
  c.pass = c.pass && worst <= 1e-12;

  json m2 = json::object();
  for (int r = 3; r <= 12; ++r) {
    auto got = max_2_density(clique(r));
    m2[std::to_string(r)] = got.str();
    c.pass = c.pass && got == Rational(r + 1, 2);
  }
  c.detail["m2_cliques"] = m2;
  return c;
}

struct Report {
  std::vector<Criterion> criteria;
  bool pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

// Criteria 1-7; the determinism check compares whole runs and lives outside.
inline Report verify_all(const Settings& s) {
  Report r;
  r.criteria.push_back(certificate_suite());
  r.criteria.push_back(avoid_k4_suite(s));
  r.criteria.push_back(avoid_k6_suite(s));
  r.criteria.push_back(tiled_suite(s));
  r.criteria.push_back(avoid_k8_suite(s));
  r.criteria.push_back(lemma_suite(s));
  r.criteria.push_back(density_suite());
  return r;
}

inline json to_json(const Report& r, const Settings& s) {
  json cs = json::array();
  for (const auto& c : r.criteria) cs.push_back(to_json(c));
  return {{"seed", s.seed}, {"budget", to_string(s.budget)}, {"criteria", cs}, {"pass", r.pass()}};
}

}  // namespace rainbow::verify
