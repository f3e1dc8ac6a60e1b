#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rainbow/arrows.hpp"
#include "rainbow/colouring.hpp"
#include "rainbow/graph.hpp"

namespace rainbow {

using json = nlohmann::json;

// Edge-list text: "n m" then m lines "u v".
inline std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  os << g.n() << ' ' << g.m() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

inline Graph from_edge_list(std::istream& is) {
  int n = 0, m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) throw ParameterError("edge list: bad header");
  std::vector<Edge> es;
  es.reserve(m);
  for (int i = 0; i < m; ++i) {
    int u, v;
    if (!(is >> u >> v)) throw ParameterError("edge list: expected " + std::to_string(m) + " edges");
    es.push_back({u, v});
  }
  return Graph(n, std::move(es));
}

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.n()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<Edge> es;
    for (const auto& e : j.at("edges")) es.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return Graph(n, std::move(es));
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("graph json: ") + ex.what());
  }
}

// Reads JSON ({n, edges}) or edge-list text, chosen by the first character.
inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return graph_from_json(json::parse(text));
    } catch (const json::parse_error& ex) {
      throw ParameterError(std::string("graph json: ") + ex.what());
    }
  }
  std::istringstream is(text);
  return from_edge_list(is);
}

inline json to_json(const Graph& g, const EdgeColouring& psi) {
  json edges = json::array();
  for (const auto& t : psi.triples(g)) edges.push_back({t[0], t[1], t[2]});
  return {{"edges", edges}};
}

inline EdgeColouring colouring_from_json(const Graph& g, const json& j) {
  std::vector<std::array<int, 3>> ts;
  try {
    for (const auto& e : j.at("edges"))
      ts.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("colouring json: ") + ex.what());
  }
  return EdgeColouring::from_triples(g, ts);
}

inline json to_json(const Graph& g, const ArrowsVerdict& v) {
  json j = {{"outcome", to_string(v.outcome)}, {"nodes", v.nodes}};
  j["witness"] = v.witness ? to_json(g, *v.witness) : json(nullptr);
  return j;
}

}  // namespace rainbow
