#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rainbow/io.hpp"
#include "rainbow/verify_all.hpp"

#ifndef RAINBOW_LAB_VERSION
#define RAINBOW_LAB_VERSION "0.0.0"
#endif

namespace {

using namespace rainbow;
using json = nlohmann::json;
namespace fs = std::filesystem;

enum Exit { kPass = 0, kViolation = 1, kOutOfRegime = 2, kUsage = 3 };

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything a run needs to be replayed, written next to its outputs.
struct Manifest {
  Manifest(std::string cmd, json cfg, std::uint64_t s) : command(std::move(cmd)), config(std::move(cfg)), seed(s) {}

  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::string started = now_utc();
  std::vector<std::string> outputs;

  void write(const std::string& beside, const std::string& summary) const {
    json j{{"command", command},         {"config", config},   {"seed", seed},
           {"version", RAINBOW_LAB_VERSION}, {"started", started}, {"finished", now_utc()},
           {"outputs", outputs},         {"summary", summary}};
    std::ofstream(beside + ".manifest.json") << j.dump(2) << '\n';
  }
};

void write_file(const std::string& path, const std::string& text) {
  if (auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << text;
}

// A file path if one exists, else a graph spec such as K4 or HatK(3,4).
Graph graph_arg(const std::string& s) {
  if (fs::exists(s)) return load_graph(s);
  return parse_graph_spec(s);
}

int emit(const json& j, const std::string& path, Manifest& m, const std::string& summary) {
  std::cout << j.dump(2) << '\n';
  if (!path.empty()) {
    write_file(path, j.dump(2) + "\n");
    m.outputs.push_back(path);
    m.write(path, summary);
  }
  return 0;
}

struct Common {
  int n = 100;
  std::string p = "0.01";
  std::uint64_t seed = 1;
  std::string seed_graph = "bipartite";
  std::string emit;
};

void add_instance_flags(CLI::App* sub, Common& c) {
  sub->add_option("--n", c.n, "number of vertices")->check(CLI::PositiveNumber);
  sub->add_option("--p", c.p, "edge probability: literal or c*n^-a/b");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--seed-graph", c.seed_graph, "dense seed graph: bipartite, empty or a graph spec");
  sub->add_option("--emit", c.emit, "write the instance and colouring as JSON");
}

json instance_json(const PerturbedInstance& inst) {
  return {{"n", inst.n}, {"p", inst.p}, {"seed", inst.rng_seed}, {"seed_graph", inst.seed_spec},
          {"random_edges", to_json(inst.random)["edges"]}};
}

template <class Run>
int run_avoider(const std::string& name, const Common& c, bool all_pairs, Run run) {
  Manifest m{name, {{"n", c.n}, {"p", c.p}, {"seed_graph", c.seed_graph}}, c.seed};
  double p = parse_probability(c.p).at(c.n);
  auto inst = sample_perturbed(c.seed_graph, c.n, p, c.seed, all_pairs);
  json out{{"command", name}, {"instance", {{"n", c.n}, {"p", p}, {"seed", c.seed}}}};
  try {
    auto [colouring, checks] = run(inst);
    Graph u = inst.union_graph();
    bool ok = true;
    for (auto& [k, v] : checks.items())
      if (v.is_boolean()) ok = ok && v.template get<bool>();
    out["checks"] = checks;
    out["colours"] = colouring.num_colours();
    out["status"] = ok ? "pass" : "violation";
    if (!c.emit.empty()) {
      json full = out;
      full["instance"] = instance_json(inst);
      full["colouring"] = to_json(u, colouring);
      write_file(c.emit, full.dump(2) + "\n");
      m.outputs.push_back(c.emit);
      m.write(c.emit, out["status"]);
    }
    std::cout << out.dump(2) << '\n';
    return ok ? kPass : kViolation;
  } catch (const StructureUnsupported& e) {
    out["status"] = "unsupported";
    out["reason"] = e.what();
    out["vertices"] = e.vertices();
  } catch (const OutOfRegime& e) {
    out["status"] = "out-of-regime";
    out["reason"] = e.what();
    out["vertices"] = e.vertices();
  }
  std::cout << out.dump(2) << '\n';
  return kOutOfRegime;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rainbow_lab: rainbow clique colourings in randomly perturbed graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", RAINBOW_LAB_VERSION);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: RAINBOW_LAB_THREADS or all cores)");

  std::function<int()> action;

  // construct
  auto* construct = app.add_subcommand("construct", "build a named graph and print it as JSON");
  std::string c_spec, c_format = "json", c_emit;
  construct->add_option("spec", c_spec, "e.g. K4, HatK(3,4), KDelta(5,5), Join(K3;S4)")->required();
  construct->add_option("--format", c_format, "json or edges")->check(CLI::IsMember({"json", "edges"}));
  construct->add_option("--emit", c_emit, "also write to this file");
  construct->callback([&] {
    action = [&] {
      Graph g = parse_graph_spec(c_spec);
      std::string text = c_format == "json" ? to_json(g).dump() + "\n" : to_edge_list(g);
      std::cout << text;
      if (!c_emit.empty()) {
        write_file(c_emit, text);
        Manifest m{"construct", {{"spec", c_spec}, {"format", c_format}}, 0};
        m.outputs.push_back(c_emit);
        m.write(c_emit, "ok");
      }
      return kPass;
    };
  });

  // decide
  auto* decide = app.add_subcommand("decide", "decide whether every proper colouring has a rainbow copy");
  std::string d_graph, d_target, d_emit;
  long long d_budget = 200'000'000;
  decide->add_option("--graph", d_graph, "host graph: file or spec")->required();
  decide->add_option("--target", d_target, "pattern graph: file or spec")->required();
  decide->add_option("--budget", d_budget, "search node budget")->check(CLI::PositiveNumber);
  decide->add_option("--emit", d_emit, "write the verdict as JSON");
  decide->callback([&] {
    action = [&] {
      Graph g = graph_arg(d_graph), h = graph_arg(d_target);
      auto v = decide_arrows(g, h, d_budget);
      Manifest m{"decide", {{"graph", d_graph}, {"target", d_target}, {"budget", d_budget}}, 0};
      emit(to_json(g, v), d_emit, m, to_string(v.outcome));
      return v.outcome == ArrowsOutcome::Unknown ? kOutOfRegime : kPass;
    };
  });

  // avoiders
  Common k4c, k6c, k8c;
  auto* ak4 = app.add_subcommand("avoid-k4", "colour bipartite seed + G(n,p) with no rainbow K4");
  add_instance_flags(ak4, k4c);
  ak4->callback([&] {
    action = [&] {
      return run_avoider("avoid-k4", k4c, false, [](const PerturbedInstance& inst) {
        auto psi = avoid_k4(inst);
        Graph u = inst.union_graph();
        json checks{{"proper", is_proper(u, psi)},
                    {"rainbow_k4_free", !verify::detail::has_rainbow_clique(u, psi, 4)},
                    {"components", static_cast<int>(classify_components(drop_edges_of(u, inst.seed)).size())}};
        return std::pair{psi, checks};
      });
    };
  });
  auto* ak6 = app.add_subcommand("avoid-k6", "colour bipartite seed + G(n,p) with no rainbow K6");
  add_instance_flags(ak6, k6c);
  ak6->callback([&] {
    action = [&] {
      return run_avoider("avoid-k6", k6c, true, [](const PerturbedInstance& inst) {
        auto r = avoid_k6_detailed(inst);
        Graph u = inst.union_graph();
        auto bad = matching_violation(triangle_union(inst.random), r.matchings);
        json checks{{"proper", is_proper(u, r.colouring)},
                    {"matching_conditions", !bad},
                    {"rainbow_k6_free", rainbow_k6_by_triangle_pairs(inst, r.colouring) == 0},
                    {"triangle_components", r.components}};
        return std::pair{r.colouring, checks};
      });
    };
  });
  auto* ak8 = app.add_subcommand("avoid-k8", "colour bipartite seed + G(n,p) with no rainbow K8");
  add_instance_flags(ak8, k8c);
  ak8->callback([&] {
    action = [&] {
      return run_avoider("avoid-k8", k8c, true, [](const PerturbedInstance& inst) {
        auto r = avoid_k8_perturbed(inst);
        Graph u = inst.union_graph();
        EdgeColouring on_r(inst.random.m());
        for (int e = 0; e < inst.random.m(); ++e) on_r.set(e, r.colouring[u.edge_id(inst.random.edge(e))]);
        json checks{{"proper", is_proper(u, r.colouring)},
                    {"rainbow_k4_have_red", every_rainbow_k4_has(inst.random, on_r, kRedColour)},
                    {"rainbow_k8_free", rainbow_k8_in_union(inst, r.colouring) == 0},
                    {"phis", r.structure.phis},
                    {"red_edges", static_cast<int>(r.red_edges.size())}};
        return std::pair{r.colouring, checks};
      });
    };
  });

  // tiled analyze
  auto* tiled = app.add_subcommand("tiled", "K4-tiled decomposition tools");
  auto* analyze = tiled->add_subcommand("analyze", "decompose into K4-components and colour each");
  tiled->require_subcommand(1);
  std::string t_graph, t_emit;
  analyze->add_option("graph", t_graph, "graph file or spec")->required();
  analyze->add_option("--emit", t_emit, "write the analysis as JSON");
  analyze->callback([&] {
    action = [&] {
      Graph g = graph_arg(t_graph);
      auto dec = k4_components(g);
      json parts = json::array();
      int code = kPass;
      for (const auto& part : dec.parts) {
        json pj{{"vertices", part.to_parent}, {"phi", phi(part.graph)}};
        try {
          auto tc = colour_tiled(part.graph);
          const auto& cert = tc.certificate;
          json cj{{"kind", to_string(cert.kind)}};
          if (cert.kind == CertificateKind::Triangle) {
            json tri = json::array();
            for (Vertex v : cert.triangle) tri.push_back(part.to_parent[v]);
            cj["triangle"] = tri;
          }
          if (cert.kind == CertificateKind::Matching) {
            json mm = json::array();
            for (const auto& e : cert.matching) mm.push_back({part.to_parent[e.u], part.to_parent[e.v]});
            cj["matching"] = mm;
          }
          pj["certificate"] = cj;
          pj["method"] = tc.method;
          pj["sound"] = certificate_covers(part.graph, tc.colouring, cert);
          if (!pj["sound"].get<bool>()) code = kViolation;
        } catch (const OutOfRegime& e) {
          pj["certificate"] = nullptr;
          pj["reason"] = e.what();
          if (code == kPass) code = kOutOfRegime;
        }
        parts.push_back(pj);
      }
      auto st = verify_structure(g);
      json out{{"components", parts}, {"leftover_edges", dec.leftover.size()}, {"structure_violations", st.violations}};
      Manifest m{"tiled analyze", {{"graph", t_graph}}, 0};
      emit(out, t_emit, m, code == kPass ? "pass" : "see components");
      return code;
    };
  });

  // certify
  auto* certify = app.add_subcommand("certify", "falsification runs of an extraction lemma");
  std::string l_name, l_archive = "counterexamples";
  long long l_trials = 10000;
  std::uint64_t l_seed = 1;
  std::string l_emit;
  certify->add_option("lemma", l_name, "one of: rainbow-k4 rainbow-k5 disjoint-triangles rainbow-k6 surviving-triangle rainbow-k7")
      ->required();
  certify->add_option("--trials", l_trials, "number of random trials")->check(CLI::NonNegativeNumber);
  certify->add_option("--seed", l_seed, "master seed");
  certify->add_option("--archive", l_archive, "directory for counterexamples");
  certify->add_option("--emit", l_emit, "write the report as JSON");
  certify->callback([&] {
    action = [&] {
      auto rep = lab::falsify(l_name, l_trials, l_seed, resolve_threads(threads), l_archive);
      json out{{"lemma", rep.lemma}, {"trials", rep.trials}, {"passed", rep.passed},
               {"precondition_failures", rep.precondition_failures}, {"counterexamples", rep.counterexamples},
               {"archived", rep.archived}, {"status", rep.ok() ? "pass" : "fail"}};
      Manifest m{"certify", {{"lemma", l_name}, {"trials", l_trials}, {"archive", l_archive}}, l_seed};
      emit(out, l_emit, m, out["status"]);
      return rep.ok() ? kPass : kViolation;
    };
  });

  // janson
  auto* janson = app.add_subcommand("janson", "Janson estimate for containing a copy of H in G(n,p)");
  std::string j_graph, j_p = "0.1";
  long long j_n = 100;
  janson->add_option("--graph", j_graph, "pattern graph: file or spec")->required();
  janson->add_option("--n", j_n, "number of vertices")->check(CLI::PositiveNumber);
  janson->add_option("--p", j_p, "edge probability: literal or c*n^-a/b");
  janson->callback([&] {
    action = [&] {
      Graph h = graph_arg(j_graph);
      double p = parse_probability(j_p).at(j_n);
      auto est = janson_bound(h, j_n, p);
      json out{{"graph", j_graph},          {"n", j_n},
               {"p", p},                    {"aut", automorphism_count(h)},
               {"lambda", est.lambda},      {"delta", est.delta_upper},
               {"delta_exact", est.delta_exact}, {"nonexistence_bound", est.nonexistence_bound}};
      std::cout << out.dump(2) << '\n';
      return kPass;
    };
  });

  // density
  auto* density = app.add_subcommand("density", "check n^{v(J)} p^{e(J)} growth for p = n^-x over induced J");
  std::string s_graph, s_exp, s_margin = "constant", s_method = "auto";
  density->add_option("--graph", s_graph, "graph: file or spec")->required();
  density->add_option("--exponent", s_exp, "x in p = n^-x, as a fraction")->required();
  density->add_option("--margin", s_margin, "constant (omega(1)) or linear (omega(n))")
      ->check(CLI::IsMember({"constant", "linear"}));
  density->add_option("--method", s_method, "auto, subset-scan, min-cut or degeneracy")
      ->check(CLI::IsMember({"auto", "subset-scan", "min-cut", "degeneracy"}));
  density->callback([&] {
    action = [&] {
      Graph h = graph_arg(s_graph);
      Rational x = Rational::parse(s_exp);
      Margin margin = s_margin == "linear" ? Margin::Linear : Margin::Constant;
      DensityMethod method = s_method == "subset-scan" ? DensityMethod::SubsetScan
                             : s_method == "min-cut"   ? DensityMethod::MinCut
                             : s_method == "degeneracy" ? DensityMethod::Degeneracy
                                                        : DensityMethod::Auto;
      auto r = density_condition(h, x, margin, method);
      json out{{"graph", s_graph},
               {"exponent", x.str()},
               {"margin", to_string(r.margin)},
               {"method", to_string(r.method)},
               {"minimum", r.minimum ? json(r.minimum->str()) : json(nullptr)},
               {"minimizer", r.minimizer},
               {"lower_bound", r.lower_bound ? json(r.lower_bound->str()) : json(nullptr)},
               {"degeneracy", r.degeneracy},
               {"holds", r.holds},
               {"status", r.holds ? "pass" : "fail"}};
      std::cout << out.dump(2) << '\n';
      return r.holds ? kPass : kViolation;
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "Monte Carlo threshold scan, CSV output");
  ScanConfig sc;
  std::string sc_ns = "100", sc_ps = "n^-0.7", sc_mode = "avoider-success-rate", sc_out, sc_config;
  bool sc_time = false;
  scan->add_option("--config", sc_config, "JSON file with the same keys as the flags");
  scan->add_option("--ell", sc.ell, "clique size (3..8)");
  scan->add_option("--n", sc_ns, "comma-separated vertex counts");
  scan->add_option("--p", sc_ps, "comma-separated p expressions");
  scan->add_option("--trials", sc.trials, "trials per grid point")->check(CLI::PositiveNumber);
  scan->add_option("--mode", sc_mode, "avoider-success-rate, containment-rate or decider-on-tiny");
  scan->add_option("--seed", sc.seed, "master seed");
  scan->add_flag("--time", sc_time, "fill the elapsed_ms column (breaks byte-identical output)");
  scan->add_option("--emit", sc_out, "write the CSV here instead of stdout");
  scan->callback([&] {
    action = [&] {
      if (!sc_config.empty()) {
        std::ifstream in(sc_config);
        if (!in) throw ParameterError("cannot open " + sc_config);
        json cfg;
        try {
          cfg = json::parse(in);
        } catch (const json::exception& e) {
          throw ParameterError(std::string("config: ") + e.what());
        }
        auto list = [](const json& v) {
          std::string s;
          for (const auto& x : v) s += (s.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
          return s;
        };
        if (cfg.contains("ell")) sc.ell = cfg["ell"];
        if (cfg.contains("n")) sc_ns = cfg["n"].is_array() ? list(cfg["n"]) : cfg["n"].dump();
        if (cfg.contains("p")) sc_ps = cfg["p"].is_array() ? list(cfg["p"]) : cfg["p"].get<std::string>();
        if (cfg.contains("trials")) sc.trials = cfg["trials"];
        if (cfg.contains("mode")) sc_mode = cfg["mode"];
        if (cfg.contains("seed")) sc.seed = cfg["seed"];
      }
      sc.ns.clear();
      sc.ps.clear();
      for (const auto& s : split_list(sc_ns)) {
        try {
          sc.ns.push_back(std::stoi(s));
        } catch (const std::exception&) {
          throw ParameterError("bad n value '" + s + "'");
        }
      }
      for (const auto& s : split_list(sc_ps)) sc.ps.push_back(parse_probability(s));
      sc.mode = parse_scan_mode(sc_mode);
      sc.threads = resolve_threads(threads);
      sc.record_time = sc_time;
      std::string csv = scan_csv(threshold_scan(sc));
      if (sc_out.empty()) {
        std::cout << csv;
      } else {
        write_file(sc_out, csv);
        Manifest m{"scan",
                   {{"ell", sc.ell}, {"n", sc_ns}, {"p", sc_ps}, {"trials", sc.trials}, {"mode", sc_mode}},
                   sc.seed};
        m.outputs.push_back(sc_out);
        m.write(sc_out, "ok");
      }
      return kPass;
    };
  });

  // verify-all
  auto* va = app.add_subcommand("verify-all", "run every acceptance check and print a JSON report");
  verify::Settings vs;
  std::string v_budget = "quick", v_out;
  va->add_option("--seed", vs.seed, "master seed");
  va->add_option("--budget", v_budget, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  va->add_option("--archive", vs.archive_dir, "directory for lemma counterexamples");
  va->add_option("--emit", v_out, "write the report here as well");
  va->callback([&] {
    action = [&] {
      vs.budget = verify::parse_budget(v_budget);
      vs.threads = resolve_threads(threads);
      auto report = verify::verify_all(vs);
      json out = verify::to_json(report, vs);
      for (const auto& c : report.criteria)
        std::cerr << (c.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << '\n';
      Manifest m{"verify-all", {{"budget", v_budget}, {"archive", vs.archive_dir}}, vs.seed};
      emit(out, v_out, m, report.pass() ? "pass" : "fail");
      return report.pass() ? kPass : kViolation;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kOutOfRegime;
  } catch (const StructureUnsupported& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kOutOfRegime;
  } catch (const OutOfRegime& e) {
    std::cerr << "out of regime: " << e.what() << '\n';
    return kOutOfRegime;
  } catch (const SearchExhausted& e) {
    std::cerr << "search exhausted: " << e.what() << '\n';
    return kOutOfRegime;
  }
}
