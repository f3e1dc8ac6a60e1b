#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"

// Named graphs with fixed vertex labellings. Tables elsewhere refer to these
// indices, so the labellings are part of the interface:
//   clique(r)                 0..r-1
//   complete_bipartite(a,b)   side A = 0..a-1, side B = a..a+b-1
//   path(k)                   k vertices 0-1-...-(k-1)
//   star(k)                   centre 0, leaves 1..k
//   cycle(k)                  0-1-...-(k-1)-0
//   join(L,R)                 L keeps its labels, R is shifted by v(L)
//   hat_k(a,b)                clique 0..a-1, independent set a..a+b-1
//   r7()                      u1,u2,u3 = 0,1,2 and w1..w4 = 3..6
//   t_graph(k)                x = 0, v_i = i for i = 1..2k
//   k_delta(s,t)              centre 0, leaves 1..s; the j-th (0-based) apex on
//                             skeleton edge {0,i} is s + 1 + (i-1)t + j
//   disjoint_union(gs)        blocks in order
namespace rainbow {

inline Graph empty_graph(int n) { return Graph(n); }

inline Graph clique(int r) {
  if (r < 1) throw ParameterError("clique needs r >= 1");
  std::vector<Edge> es;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) es.push_back({a, b});
  return Graph(r, std::move(es));
}

inline Graph complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw ParameterError("complete_bipartite needs a, b >= 1");
  std::vector<Edge> es;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < b; ++y) es.push_back({x, a + y});
  return Graph(a + b, std::move(es));
}

inline Graph path(int k) {
  if (k < 1) throw ParameterError("path needs k >= 1 vertices");
  std::vector<Edge> es;
  for (int i = 0; i + 1 < k; ++i) es.push_back({i, i + 1});
  return Graph(k, std::move(es));
}

inline Graph star(int k) {
  if (k < 1) throw ParameterError("star needs k >= 1 leaves");
  std::vector<Edge> es;
  for (int i = 1; i <= k; ++i) es.push_back({0, i});
  return Graph(k + 1, std::move(es));
}

inline Graph cycle(int k) {
  if (k < 3) throw ParameterError("cycle needs k >= 3");
  std::vector<Edge> es;
  for (int i = 0; i < k; ++i) es.push_back(make_edge(i, (i + 1) % k));
  return Graph(k, std::move(es));
}

inline Graph join(const Graph& l, const Graph& r) {
  std::vector<Edge> es = l.edges();
  int s = l.n();
  for (const auto& e : r.edges()) es.push_back({e.u + s, e.v + s});
  for (int a = 0; a < l.n(); ++a)
    for (int b = 0; b < r.n(); ++b) es.push_back({a, s + b});
  return Graph(l.n() + r.n(), std::move(es));
}

inline Graph hat_k(int a, int b) {
  if (a < 1 || b < 1) throw ParameterError("hat_k needs a, b >= 1");
  return join(clique(a), empty_graph(b));
}

inline Graph r7() {
  // u1 u2 u3 w1 w2 w3 w4
  enum { u1, u2, u3, w1, w2, w3, w4 };
  return Graph(7, {{u1, u2}, {u2, u3}, {u1, w1}, {u1, w2}, {u2, w1},
                   {u2, w2}, {u2, w3}, {u2, w4}, {u3, w3}, {u3, w4}});
}

inline Graph t_graph(int k) {
  if (k < 1) throw ParameterError("T(k) needs k >= 1");
  std::vector<Edge> es;
  for (int i = 1; i <= 2 * k; ++i) es.push_back({0, i});
  for (int i = 1; i <= k; ++i) es.push_back({2 * i - 1, 2 * i});
  return Graph(2 * k + 1, std::move(es));
}

inline int k_delta_apex(int s, int t, int leaf, int j) { return s + 1 + (leaf - 1) * t + j; }

inline Graph k_delta(int s, int t) {
  if (s < 1 || t < 0) throw ParameterError("KDelta needs s >= 1, t >= 0");
  std::vector<Edge> es;
  for (int i = 1; i <= s; ++i) {
    es.push_back({0, i});
    for (int j = 0; j < t; ++j) {
      int a = k_delta_apex(s, t, i, j);
      es.push_back({0, a});
      es.push_back({i, a});
    }
  }
  return Graph(1 + s + s * t, std::move(es));
}

inline Graph disjoint_union(const std::vector<Graph>& parts) {
  std::vector<Edge> es;
  int off = 0;
  for (const auto& g : parts) {
    for (const auto& e : g.edges()) es.push_back({e.u + off, e.v + off});
    off += g.n();
  }
  return Graph(off, std::move(es));
}

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string s) {
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) src_ += c;
  }

  Graph parse_all() {
    Graph g = parse();
    if (pos_ != src_.size()) fail("trailing characters");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParameterError("bad graph spec '" + src_ + "': " + why);
  }
  bool eat(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoi(src_.substr(start, pos_ - start));
  }
  std::string word() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string w = src_.substr(start, pos_ - start);
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
  }
  std::vector<int> int_args() {
    std::vector<int> v;
    if (!eat('(')) fail("expected '('");
    do v.push_back(number());
    while (eat(','));
    if (!eat(')')) fail("expected ')'");
    return v;
  }
  std::vector<Graph> graph_args() {
    std::vector<Graph> v;
    if (!eat('(')) fail("expected '('");
    do v.push_back(parse());
    while (eat(';'));
    if (!eat(')')) fail("expected ')'");
    return v;
  }
  std::vector<int> inline_or_paren_ints() {
    if (pos_ < src_.size() && src_[pos_] == '(') return int_args();
    std::vector<int> v{number()};
    while (eat(',')) v.push_back(number());
    return v;
  }

  Graph parse() {
    std::string w = word();
    if (w == "k") {
      auto v = inline_or_paren_ints();
      if (v.size() == 1) return clique(v[0]);
      if (v.size() == 2) return complete_bipartite(v[0], v[1]);
      fail("K takes one or two numbers");
    }
    if (w == "p") return path(inline_or_paren_ints().at(0));
    if (w == "s") return star(inline_or_paren_ints().at(0));
    if (w == "c") return cycle(inline_or_paren_ints().at(0));
    if (w == "e") return empty_graph(inline_or_paren_ints().at(0));
    if (w == "t") return t_graph(inline_or_paren_ints().at(0));
    if (w == "r") {
      if (number() != 7) fail("only R7 is defined");
      return r7();
    }
    if (w == "hatk") {
      if (pos_ < src_.size() && src_[pos_] == '(') {
        auto v = int_args();
        if (v.size() != 2) fail("HatK takes two numbers");
        return hat_k(v[0], v[1]);
      }
      // hatk34 shorthand: two single digits.
      int d = number();
      if (d < 10 || d > 99) fail("HatK shorthand expects two digits");
      return hat_k(d / 10, d % 10);
    }
    if (w == "kdelta") {
      auto v = int_args();
      if (v.size() != 2) fail("KDelta takes two numbers");
      return k_delta(v[0], v[1]);
    }
    if (w == "join") {
      auto gs = graph_args();
      if (gs.size() != 2) fail("Join takes two graphs separated by ';'");
      return join(gs[0], gs[1]);
    }
    if (w == "union") return disjoint_union(graph_args());
    fail("unknown graph name '" + w + "'");
  }

  std::string src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Grammar: K<r> | K<a>,<b> | P<k> | S<k> | C<k> | E<n> | R7 | T<k> |
// HatK(a,b) | hatk<a><b> | KDelta(s,t) | Join(A;B) | Union(A;B;...).
// Names are case-insensitive; numbers may also be given in parentheses.
inline Graph parse_graph_spec(const std::string& spec) {
  return detail::SpecParser(spec).parse_all();
}

}  // namespace rainbow
