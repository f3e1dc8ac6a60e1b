#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "rainbow/colouring.hpp"
#include "rainbow/constructions.hpp"
#include "rainbow/parallel.hpp"
#include "rainbow/random.hpp"

// Extractors for the rainbow cliques promised by the 1-statement arguments,
// run against fixed host graphs with known labellings, plus a randomized
// falsification harness.
namespace rainbow::lab {

enum class Status { Ok, PreconditionFailed, Counterexample };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::PreconditionFailed: return "precondition_failed";
    case Status::Counterexample: return "counterexample";
  }
  return "?";
}

struct Extraction {
  Status status = Status::Ok;
  std::vector<Vertex> vertices;  // the clique (or two triangles, see below)
  std::string detail;
};

inline Extraction fail(Status s, std::string why) { return {s, {}, std::move(why)}; }

// Host graphs.
//   k4:        join(star(3), star(4)); L = 0..3 (centre 0), R = 4..8 (centre 4)
//   k5:        join(K3, star(4)); x1..x3 = 0..2, y = 3, z1..z4 = 4..7
//   triangles: R7 on 0..6 and T10 on 7..27 (x = 7, v_i = 7 + i)
//   k6:        join(31 R7 copies at 7k.., T10 at 217..237)
//   k7:        join(4 HatK(3,4) copies at 7k.., KDelta(25,49) at 28..)
inline constexpr int kR7Copies = 31;
inline constexpr int kT10Offset = 7 * kR7Copies;
inline constexpr int kHatCopies = 4;
inline constexpr int kFOffset = 7 * kHatCopies;
inline constexpr int kSkeleton = 25;
inline constexpr int kApexes = 49;

inline const Graph& host_k4() {
  static const Graph g = join(star(3), star(4));
  return g;
}
inline const Graph& host_k5() {
  static const Graph g = join(clique(3), star(4));
  return g;
}
inline const Graph& host_triangles() {
  static const Graph g = disjoint_union({r7(), t_graph(10)});
  return g;
}
inline const Graph& host_k6() {
  static const Graph g = join(disjoint_union(std::vector<Graph>(kR7Copies, r7())), t_graph(10));
  return g;
}
inline const Graph& host_f() {
  static const Graph g = k_delta(kSkeleton, kApexes);
  return g;
}
inline const Graph& host_k7() {
  static const Graph g = join(disjoint_union(std::vector<Graph>(kHatCopies, hat_k(3, 4))), host_f());
  return g;
}

inline std::optional<std::string> check_proper_total(const Graph& g, const EdgeColouring& psi) {
  if (psi.size() != g.m()) return "colouring does not match the host graph";
  if (!psi.total()) return "colouring is partial";
  if (!is_proper(g, psi)) return "colouring is not proper";
  return std::nullopt;
}

// Confirms the returned vertex set spans a rainbow K_k.
inline Extraction validated(const Graph& g, const EdgeColouring& psi, std::vector<Vertex> vs, int k,
                            const std::string& what) {
  std::sort(vs.begin(), vs.end());
  if (static_cast<int>(vs.size()) != k || std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    return fail(Status::Counterexample, what + ": wrong number of vertices");
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!g.adjacent(vs[i], vs[j])) return fail(Status::Counterexample, what + ": not a clique");
  if (!is_rainbow_clique(g, psi, vs)) return fail(Status::Counterexample, what + ": clique is not rainbow");
  return {Status::Ok, std::move(vs), what};
}

inline int colour(const Graph& g, const EdgeColouring& psi, Vertex a, Vertex b) { return psi[g.edge_id(a, b)]; }

// Some edge e of the K14 side has a colour missing from the K13 side; then
// one of the three K4s {centre, leaf, e} is rainbow.
inline Extraction extract_rainbow_k4(const EdgeColouring& psi) {
  const Graph& g = host_k4();
  if (auto bad = check_proper_total(g, psi)) return fail(Status::PreconditionFailed, *bad);
  std::vector<int> left;
  for (int l = 1; l <= 3; ++l) left.push_back(colour(g, psi, 0, l));
  for (int r = 5; r <= 8; ++r) {
    int c = colour(g, psi, 4, r);
    if (std::find(left.begin(), left.end(), c) != left.end()) continue;
    for (int l = 1; l <= 3; ++l)
      if (is_rainbow_clique(g, psi, {0, l, 4, r})) return validated(g, psi, {0, l, 4, r}, 4, "edge 4-" + std::to_string(r));
    return fail(Status::Counterexample, "no leaf completes a rainbow K4 with edge 4-" + std::to_string(r));
  }
  return fail(Status::Counterexample, "every K14 colour appears on the K13 side");
}

// Precondition: the triangle plus all its edges to y, z1..z4 is rainbow.
inline Extraction extract_rainbow_k5(const EdgeColouring& psi) {
  const Graph& g = host_k5();
  if (auto bad = check_proper_total(g, psi)) return fail(Status::PreconditionFailed, *bad);
  std::vector<int> hat;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 8; ++b) hat.push_back(colour(g, psi, a, b));
  std::sort(hat.begin(), hat.end());
  if (std::adjacent_find(hat.begin(), hat.end()) != hat.end())
    return fail(Status::PreconditionFailed, "the triangle-to-star part is not rainbow");
  std::array<int, 3> tri{colour(g, psi, 0, 1), colour(g, psi, 0, 2), colour(g, psi, 1, 2)};
  for (int t = 4; t < 8; ++t) {
    int c = colour(g, psi, 3, t);
    if (std::find(tri.begin(), tri.end(), c) == tri.end())
      return validated(g, psi, {0, 1, 2, 3, t}, 5, "z" + std::to_string(t - 3));
  }
  return fail(Status::Counterexample, "all four star edges reuse triangle colours");
}

// Colour-disjoint triangles Q1 in T10 and Q2 in R7 of the disjoint union,
// following the case analysis on the colours around u2 and x. Labels are
// those of host_triangles with an offset for each block, so the same routine
// serves every R7 copy of the K6 host. Returns Q1's vertices then Q2's.
inline Extraction disjoint_colour_triangles(const Graph& g, const EdgeColouring& psi, int r_off, int t_off) {
  enum { u1, u2, u3, w1, w2, w3, w4 };
  auto R = [&](int a, int b) { return colour(g, psi, r_off + a, r_off + b); };
  const Vertex x = t_off;
  auto v = [&](int i) { return t_off + i; };
  std::array<int, 6> six{R(u1, u2), R(u2, w1), R(u2, w2), R(u2, w3), R(u2, w4), R(u2, u3)};
  auto in_six = [&](int c) { return std::find(six.begin(), six.end(), c) != six.end(); };
  // The four R7 triangles with their colour sets.
  struct Tri {
    std::array<Vertex, 3> vs;
    std::array<int, 3> cols;
  };
  const std::array<Tri, 4> rtri{{
      {{u1, u2, w1}, {six[0], six[1], R(u1, w1)}},
      {{u1, u2, w2}, {six[0], six[2], R(u1, w2)}},
      {{u2, u3, w3}, {six[5], six[3], R(u3, w3)}},
      {{u2, u3, w4}, {six[5], six[4], R(u3, w4)}},
  }};
  // Triangles of T10 whose x-edges avoid the six colours; at most six of the
  // ten are excluded.
  std::vector<int> good;
  for (int i = 1; i <= 10 && good.size() < 4; ++i)
    if (!in_six(colour(g, psi, x, v(2 * i - 1))) && !in_six(colour(g, psi, x, v(2 * i)))) good.push_back(i);
  if (good.size() < 4) return fail(Status::Counterexample, "fewer than four T10 triangles avoid the colours at u2");
  auto tcols = [&](int i) {
    return std::array<int, 3>{colour(g, psi, x, v(2 * i - 1)), colour(g, psi, x, v(2 * i)),
                              colour(g, psi, v(2 * i - 1), v(2 * i))};
  };
  auto disjoint = [](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    for (int c : a)
      if (std::find(b.begin(), b.end(), c) != b.end()) return false;
    return true;
  };
  auto answer = [&](int i, const Tri& q2) {
    std::vector<Vertex> out{x, v(2 * i - 1), v(2 * i)};
    for (Vertex a : q2.vs) out.push_back(r_off + a);
    if (!disjoint(tcols(i), q2.cols))
      return fail(Status::Counterexample, "selected triangles share a colour");
    return Extraction{Status::Ok, out, "T10 triangle " + std::to_string(i)};
  };
  auto gamma = [&](int i) { return colour(g, psi, v(2 * i - 1), v(2 * i)); };

  // Two of the four triangles share the colour gamma on their far edges.
  for (std::size_t a = 0; a < good.size(); ++a)
    for (std::size_t b = a + 1; b < good.size(); ++b) {
      if (gamma(good[a]) != gamma(good[b])) continue;
      int gm = gamma(good[a]);
      // gamma misses {1,2,3} (use the u1 side) or misses {4,5,6} (u3 side);
      // on that side it differs from one of the two third-edge colours.
      bool low = gm != six[0] && gm != six[1] && gm != six[2];
      const Tri& first = low ? rtri[0] : rtri[2];
      const Tri& second = low ? rtri[1] : rtri[3];
      const Tri& q2 = gm != first.cols[2] ? first : second;
      for (int i : {good[a], good[b]})
        if (disjoint(tcols(i), q2.cols)) return answer(i, q2);
      return fail(Status::Counterexample, "equal far colours but neither triangle fits");
    }
  // Far colours distinct: some R7 triangle's two colours at u2 meet at most
  // one far colour, and its third colour excludes at most two triangles.
  for (const auto& q2 : rtri) {
    int hits = 0;
    for (int i : good) hits += gamma(i) == q2.cols[0] || gamma(i) == q2.cols[1];
    if (hits > 1) continue;
    for (int i : good)
      if (disjoint(tcols(i), q2.cols)) return answer(i, q2);
    return fail(Status::Counterexample, "no T10 triangle avoids the chosen R7 triangle");
  }
  return fail(Status::Counterexample, "every R7 triangle meets two far colours");
}

inline Extraction disjoint_colour_triangles(const EdgeColouring& psi) {
  const Graph& g = host_triangles();
  if (auto bad = check_proper_total(g, psi)) return fail(Status::PreconditionFailed, *bad);
  return disjoint_colour_triangles(g, psi, 0, 7);
}

// Cross edges between the two sides are pairwise distinctly coloured and
// avoid every colour used inside the left side.
inline std::optional<std::string> check_compatible(const Graph& g, const EdgeColouring& psi, int left_size) {
  std::vector<int> left, cross;
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.v < left_size) left.push_back(psi[e]);
    else if (ed.u < left_size) cross.push_back(psi[e]);
  }
  std::sort(left.begin(), left.end());
  std::sort(cross.begin(), cross.end());
  if (std::adjacent_find(cross.begin(), cross.end()) != cross.end()) return "cross edges are not rainbow";
  for (int c : cross)
    if (std::binary_search(left.begin(), left.end(), c)) return "a cross edge reuses a left-side colour";
  return std::nullopt;
}

// 31 R7 copies against T10: some T10 triangle Q is paired with four copies;
// one of those four copies' triangles sees no colour of Q on its cross edges.
inline Extraction extract_rainbow_k6(const EdgeColouring& psi) {
  const Graph& g = host_k6();
  if (auto bad = check_proper_total(g, psi)) return fail(Status::PreconditionFailed, *bad);
  if (auto bad = check_compatible(g, psi, kT10Offset)) return fail(Status::PreconditionFailed, *bad);
  std::vector<std::vector<std::vector<Vertex>>> by_q(11);
  for (int k = 0; k < kR7Copies; ++k) {
    auto r = disjoint_colour_triangles(g, psi, 7 * k, kT10Offset);
    if (r.status != Status::Ok) return fail(r.status, "copy " + std::to_string(k) + ": " + r.detail);
    int q = (r.vertices[2] - kT10Offset) / 2;
    by_q[q].push_back({r.vertices[3], r.vertices[4], r.vertices[5]});
  }
  for (int q = 1; q <= 10; ++q) {
    if (by_q[q].size() < 4) continue;
    std::array<Vertex, 3> qv{kT10Offset, kT10Offset + 2 * q - 1, kT10Offset + 2 * q};
    std::array<int, 3> qc{colour(g, psi, qv[0], qv[1]), colour(g, psi, qv[0], qv[2]), colour(g, psi, qv[1], qv[2])};
    for (int i = 0; i < 4; ++i) {
      bool clash = false;
      for (Vertex a : by_q[q][i])
        for (Vertex b : qv) clash |= std::find(qc.begin(), qc.end(), colour(g, psi, a, b)) != qc.end();
      if (clash) continue;
      std::vector<Vertex> vs = by_q[q][i];
      vs.insert(vs.end(), qv.begin(), qv.end());
      return validated(g, psi, vs, 6, "T10 triangle " + std::to_string(q) + ", copy slot " + std::to_string(i));
    }
    return fail(Status::Counterexample, "all four cross blocks clash with the T10 triangle");
  }
  return fail(Status::Counterexample, "no T10 triangle is paired with four R7 copies");
}

// Rainbow K4 {a,b,c,d_t} inside HatK(3,4) with triangle at off..off+2.
inline std::optional<std::vector<Vertex>> rainbow_k4_in_hat(const Graph& g, const EdgeColouring& psi, int off) {
  for (int t = 3; t < 7; ++t) {
    std::vector<Vertex> vs{off, off + 1, off + 2, off + t};
    if (is_rainbow_clique(g, psi, vs)) return vs;
  }
  return std::nullopt;
}

// A triangle of KDelta(s,t) avoiding every edge of the given matchings: a
// skeleton edge survives and one of its t triangles avoids all matchings.
// Needs at most s-1 matchings and t > 2(s-1); anything else is a domain error.
inline Extraction surviving_triangle(int s, int t, const std::vector<std::vector<Edge>>& matchings) {
  if (static_cast<int>(matchings.size()) > s - 1 || t <= 2 * (s - 1))
    throw DomainError("too many matchings for KDelta(" + std::to_string(s) + "," + std::to_string(t) + ")");
  std::optional<Graph> other;
  if (s != kSkeleton || t != kApexes) other = k_delta(s, t);
  const Graph& f = other ? *other : host_f();
  std::vector<char> removed(f.m(), 0);
  for (const auto& m : matchings) {
    std::vector<char> seen(f.n(), 0);
    for (const auto& e : m) {
      int id = f.edge_id(e);
      if (id < 0) throw DomainError("matching uses a non-edge");
      if (seen[e.u] || seen[e.v]) throw DomainError("edge set is not a matching");
      seen[e.u] = seen[e.v] = 1;
      removed[id] = 1;
    }
  }
  auto kept = [&](Vertex a, Vertex b) { return !removed[f.edge_id(a, b)]; };
  for (int i = 1; i <= s; ++i) {
    if (!kept(0, i)) continue;
    for (int j = 0; j < t; ++j) {
      int a = k_delta_apex(s, t, i, j);
      if (kept(0, a) && kept(i, a)) return {Status::Ok, {0, i, a}, "skeleton edge 0-" + std::to_string(i)};
    }
    return fail(Status::Counterexample, "all triangles on a surviving skeleton edge were hit");
  }
  return fail(Status::Counterexample, "every skeleton edge was removed");
}

// Four disjoint rainbow K4s from the HatK(3,4) copies, a triangle of F whose
// colours avoid them, then a copy whose cross edges avoid that triangle.
inline Extraction extract_rainbow_k7(const EdgeColouring& psi) {
  const Graph& g = host_k7();
  if (auto bad = check_proper_total(g, psi)) return fail(Status::PreconditionFailed, *bad);
  if (auto bad = check_compatible(g, psi, kFOffset)) return fail(Status::PreconditionFailed, *bad);
  std::vector<std::vector<Vertex>> xs;
  std::unordered_set<int> used;
  for (int k = 0; k < kHatCopies; ++k) {
    auto q = rainbow_k4_in_hat(g, psi, 7 * k);
    if (!q) return fail(Status::Counterexample, "HatK(3,4) copy " + std::to_string(k) + " has no rainbow K4");
    for (int id : clique_edge_ids(g, *q)) used.insert(psi[id]);
    xs.push_back(*q);
  }
  // Colour classes meeting the K4s, as matchings of F in F's own labels.
  std::map<int, std::vector<Edge>> classes;
  const Graph& f = host_f();
  for (const auto& e : f.edges()) {
    int c = colour(g, psi, e.u + kFOffset, e.v + kFOffset);
    if (used.count(c)) classes[c].push_back(e);
  }
  std::vector<std::vector<Edge>> matchings;
  for (auto& [c, es] : classes) matchings.push_back(std::move(es));
  auto tri = surviving_triangle(kSkeleton, kApexes, matchings);
  if (tri.status != Status::Ok) return fail(Status::Counterexample, "F: " + tri.detail);
  std::vector<Vertex> tv;
  for (Vertex a : tri.vertices) tv.push_back(a + kFOffset);
  std::array<int, 3> tc{colour(g, psi, tv[0], tv[1]), colour(g, psi, tv[0], tv[2]), colour(g, psi, tv[1], tv[2])};
  for (int i = 0; i < kHatCopies; ++i) {
    bool clash = false;
    for (Vertex a : xs[i])
      for (Vertex b : tv) clash |= std::find(tc.begin(), tc.end(), colour(g, psi, a, b)) != tc.end();
    if (clash) continue;
    std::vector<Vertex> vs = xs[i];
    vs.insert(vs.end(), tv.begin(), tv.end());
    return validated(g, psi, vs, 7, "copy " + std::to_string(i) + " with " + tri.detail);
  }
  return fail(Status::Counterexample, "all four K4s clash with the surviving triangle");
}

// ---- random inputs satisfying each precondition ----

namespace detail {

// Builds a proper colouring edge by edge, reusing colours when allowed.
class Builder {
 public:
  explicit Builder(const Graph& g) : g_(g), psi_(g.m()) {}

  bool free(int e, int c) const {
    const Edge& ed = g_.edge(e);
    return !at_.count(key(ed.u, c)) && !at_.count(key(ed.v, c));
  }
  void set(int e, int c) {
    psi_.set(e, c);
    const Edge& ed = g_.edge(e);
    at_.insert(key(ed.u, c));
    at_.insert(key(ed.v, c));
    if (c >= next_) next_ = c + 1;
    if (seen_.insert(c).second) used_.push_back(c);
  }
  int fresh() const { return next_; }
  // For colours that never appear again.
  void set_untracked(int e, int c) {
    psi_.set(e, c);
    if (c >= next_) next_ = c + 1;
  }
  int operator[](int e) const { return psi_[e]; }
  const std::vector<int>& used() const { return used_; }
  // A random colour from pool that is free at e and accepted by ok; a few
  // attempts, then give up.
  template <class Ok>
  std::optional<int> pick(int e, const std::vector<int>& pool, Rng& rng, Ok&& ok, int attempts = 6) const {
    if (pool.empty()) return std::nullopt;
    for (int i = 0; i < attempts; ++i) {
      int c = pool[rng.below(pool.size())];
      if (free(e, c) && ok(c)) return c;
    }
    return std::nullopt;
  }
  EdgeColouring take() { return std::move(psi_); }

 private:
  static std::uint64_t key(Vertex v, int c) {
    return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(c);
  }
  const Graph& g_;
  EdgeColouring psi_;
  std::unordered_set<std::uint64_t> at_;
  std::unordered_set<int> seen_;
  std::vector<int> used_;
  int next_ = 0;
};

inline std::vector<int> shuffled_edges(const Graph&, Rng& rng, const std::vector<int>& ids) {
  std::vector<int> out = ids;
  rng.shuffle(out);
  return out;
}

// Colours the listed edges: with probability reuse try a used colour.
inline void colour_some(Builder& b, const Graph& g, const std::vector<int>& ids, Rng& rng, double reuse) {
  for (int e : shuffled_edges(g, rng, ids)) {
    std::optional<int> c;
    if (rng.bernoulli(reuse)) c = b.pick(e, b.used(), rng, [](int) { return true; });
    b.set(e, c ? *c : b.fresh());
  }
}

// Left side and right side share one palette; cross edges are pairwise
// distinct, avoid the left colours, and try to reuse right-side colours.
inline EdgeColouring compatible_colouring(const Graph& g, int left_size, Rng& rng) {
  Builder b(g);
  std::vector<int> inside, cross;
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    (ed.u < left_size && ed.v >= left_size ? cross : inside).push_back(e);
  }
  colour_some(b, g, inside, rng, 0.3 + 0.6 * rng.uniform01());
  std::unordered_set<int> left;
  for (int e : inside)
    if (g.edge(e).v < left_size) left.insert(b[e]);
  std::vector<int> right_pool;
  for (int e : inside)
    if (g.edge(e).u >= left_size && !left.count(b[e])) right_pool.push_back(b[e]);
  std::sort(right_pool.begin(), right_pool.end());
  right_pool.erase(std::unique(right_pool.begin(), right_pool.end()), right_pool.end());
  // Each right-side colour lands on a few random cross edges where it is
  // free; the remaining cross edges get colours of their own.
  rng.shuffle(right_pool);
  double reuse = rng.uniform01();
  const int right_size = g.n() - left_size;
  for (int c : right_pool) {
    if (!rng.bernoulli(reuse)) continue;
    for (int attempt = 0; attempt < 4; ++attempt) {
      int e = g.edge_id(static_cast<Vertex>(rng.below(left_size)), left_size + static_cast<Vertex>(rng.below(right_size)));
      if (b[e] == EdgeColouring::kUncoloured && b.free(e, c)) {
        b.set(e, c);
        break;
      }
    }
  }
  int next = b.fresh();
  for (int e : cross)
    if (b[e] == EdgeColouring::kUncoloured) b.set_untracked(e, next++);
  return b.take();
}

}  // namespace detail

inline EdgeColouring sample_k4_input(Rng& rng) {
  return random_proper_colouring(host_k4(), rng, 0.6 * rng.uniform01());
}

inline EdgeColouring sample_k5_input(Rng& rng) {
  const Graph& g = host_k5();
  detail::Builder b(g);
  std::vector<int> hat, star_edges;
  for (int e = 0; e < g.m(); ++e) (g.edge(e).u < 3 ? hat : star_edges).push_back(e);
  // Distinct labels on the hat part, in random order.
  std::vector<int> labels(hat.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
  rng.shuffle(labels);
  for (std::size_t i = 0; i < hat.size(); ++i) b.set(hat[i], labels[i]);
  std::vector<int> tri;
  for (int e : hat)
    if (g.edge(e).v < 3) tri.push_back(b[e]);
  double lean = rng.uniform01();
  for (int e : detail::shuffled_edges(g, rng, star_edges)) {
    std::optional<int> c;
    if (rng.bernoulli(lean)) c = b.pick(e, tri, rng, [](int) { return true; }, 12);
    if (!c && rng.bernoulli(0.5)) c = b.pick(e, b.used(), rng, [](int) { return true; });
    b.set(e, c ? *c : b.fresh());
  }
  return b.take();
}

inline EdgeColouring sample_triangles_input(Rng& rng) {
  return random_proper_colouring(host_triangles(), rng, 0.4 * rng.uniform01());
}

inline EdgeColouring sample_k6_input(Rng& rng) { return detail::compatible_colouring(host_k6(), kT10Offset, rng); }

inline EdgeColouring sample_k7_input(Rng& rng) { return detail::compatible_colouring(host_k7(), kFOffset, rng); }

// Up to 24 matchings of KDelta(25,49); about half the batches aim at a
// single skeleton edge, hitting two of its triangles per matching.
inline std::vector<std::vector<Edge>> sample_matchings(Rng& rng) {
  const Graph& f = host_f();
  int count = rng.uniform_int(0, kSkeleton - 1);
  std::vector<std::vector<Edge>> out;
  if (rng.bernoulli(0.5)) {
    int target = rng.uniform_int(1, kSkeleton);
    std::vector<int> others;
    for (int i = 1; i <= kSkeleton; ++i)
      if (i != target) others.push_back(i);
    rng.shuffle(others);
    std::vector<int> apex(kApexes);
    for (int j = 0; j < kApexes; ++j) apex[j] = k_delta_apex(kSkeleton, kApexes, target, j);
    rng.shuffle(apex);
    for (int k = 0; k < count; ++k) {
      std::vector<Edge> m;
      // One edge at the centre and one at the target leaf, on different
      // apexes, plus the skeleton edge of another leaf when the centre is
      // left free.
      if (rng.bernoulli(0.3)) {
        m.push_back(make_edge(0, others[k]));
      } else {
        m.push_back(make_edge(0, apex[(2 * k) % kApexes]));
      }
      m.push_back(make_edge(target, apex[(2 * k + 1) % kApexes]));
      out.push_back(std::move(m));
    }
    return out;
  }
  std::vector<int> ids(f.m());
  for (int e = 0; e < f.m(); ++e) ids[e] = e;
  for (int k = 0; k < count; ++k) {
    rng.shuffle(ids);
    std::vector<char> seen(f.n(), 0);
    std::vector<Edge> m;
    double keep = rng.uniform01();
    for (int e : ids) {
      const Edge& ed = f.edge(e);
      if (seen[ed.u] || seen[ed.v] || !rng.bernoulli(keep)) continue;
      seen[ed.u] = seen[ed.v] = 1;
      m.push_back(ed);
    }
    out.push_back(std::move(m));
  }
  return out;
}

// ---- falsification harness ----

inline const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names{"rainbow-k4", "rainbow-k5", "disjoint-triangles",
                                              "rainbow-k6", "surviving-triangle", "rainbow-k7"};
  return names;
}

struct TrialRecord {
  Status status = Status::Ok;
  std::string detail;
  nlohmann::json input;  // filled only for failures
};

inline nlohmann::json colouring_json(const Graph& g, const EdgeColouring& psi) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : psi.triples(g)) a.push_back({t[0], t[1], t[2]});
  return a;
}

inline TrialRecord run_trial(const std::string& lemma, Rng& rng) {
  auto record = [&](const Extraction& x, const Graph& g, const EdgeColouring& psi) {
    TrialRecord r{x.status, x.detail, nullptr};
    if (x.status != Status::Ok) r.input = colouring_json(g, psi);
    return r;
  };
  if (lemma == "rainbow-k4") {
    auto psi = sample_k4_input(rng);
    return record(extract_rainbow_k4(psi), host_k4(), psi);
  }
  if (lemma == "rainbow-k5") {
    auto psi = sample_k5_input(rng);
    return record(extract_rainbow_k5(psi), host_k5(), psi);
  }
  if (lemma == "disjoint-triangles") {
    auto psi = sample_triangles_input(rng);
    return record(disjoint_colour_triangles(psi), host_triangles(), psi);
  }
  if (lemma == "rainbow-k6") {
    auto psi = sample_k6_input(rng);
    return record(extract_rainbow_k6(psi), host_k6(), psi);
  }
  if (lemma == "rainbow-k7") {
    auto psi = sample_k7_input(rng);
    return record(extract_rainbow_k7(psi), host_k7(), psi);
  }
  if (lemma == "surviving-triangle") {
    auto ms = sample_matchings(rng);
    auto x = surviving_triangle(kSkeleton, kApexes, ms);
    TrialRecord r{x.status, x.detail, nullptr};
    if (x.status != Status::Ok) {
      r.input = nlohmann::json::array();
      for (const auto& m : ms) {
        nlohmann::json mj = nlohmann::json::array();
        for (const auto& e : m) mj.push_back({e.u, e.v});
        r.input.push_back(mj);
      }
    }
    return r;
  }
  throw ParameterError("unknown lemma '" + lemma + "'");
}

inline std::string archive_failure(const std::string& dir, const std::string& lemma, std::uint64_t seed,
                                   std::size_t trial, const TrialRecord& r) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + lemma + "-seed" + std::to_string(seed) + "-trial" + std::to_string(trial) + ".json";
  nlohmann::json j{{"lemma", lemma}, {"seed", seed},     {"trial", trial},
                   {"status", to_string(r.status)}, {"detail", r.detail}, {"input", r.input}};
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << j.dump(2) << '\n';
  return path;
}

struct FalsificationReport {
  std::string lemma;
  long long trials = 0;
  long long passed = 0;
  long long precondition_failures = 0;
  long long counterexamples = 0;
  std::vector<std::string> archived;

  bool ok() const { return passed == trials; }
};

// Runs independent trials (trial i uses stream i of the master seed) and
// writes every failing input to archive_dir as JSON.
inline FalsificationReport falsify(const std::string& lemma, long long trials, std::uint64_t seed, int threads,
                                   const std::string& archive_dir) {
  if (trials < 0) throw ParameterError("trials must be non-negative");
  std::uint64_t tag = std::hash<std::string>{}(lemma) & 0xffffffffULL;
  auto records = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i, tag));
    return run_trial(lemma, rng);
  });
  FalsificationReport rep;
  rep.lemma = lemma;
  rep.trials = trials;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.status == Status::Ok) {
      ++rep.passed;
      continue;
    }
    (r.status == Status::PreconditionFailed ? rep.precondition_failures : rep.counterexamples)++;
    if (!archive_dir.empty()) rep.archived.push_back(archive_failure(archive_dir, lemma, seed, i, r));
  }
  return rep;
}

}  // namespace rainbow::lab
