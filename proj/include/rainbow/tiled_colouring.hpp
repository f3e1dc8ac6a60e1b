#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/arrows.hpp"
#include "rainbow/colouring.hpp"
#include "rainbow/tiled.hpp"

namespace rainbow {

enum class CertificateKind { NoRainbow, Triangle, Matching };

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::NoRainbow: return "no_rainbow";
    case CertificateKind::Triangle: return "triangle";
    case CertificateKind::Matching: return "matching";
  }
  return "?";
}

struct CoverCertificate {
  CertificateKind kind = CertificateKind::NoRainbow;
  std::array<Vertex, 3> triangle{};
  std::vector<Edge> matching;
};

// 0 for phi <= 2, 1 for 3..5, 2 for 6..7.
inline int required_strength(int phi_value) {
  if (phi_value <= 2) return 0;
  if (phi_value <= 5) return 1;
  return 2;
}

inline int strength(const CoverCertificate& c) { return static_cast<int>(c.kind); }

inline std::vector<std::vector<Vertex>> rainbow_k4s(const Graph& h, const EdgeColouring& psi) {
  std::vector<std::vector<Vertex>> out;
  for_each_rainbow_clique(h, psi, 4, [&](const std::vector<Vertex>& c) { out.push_back(c); });
  return out;
}

// True when every rainbow K4 is absent / contains the triangle / meets the
// matching, and the named triangle or matching exists in h.
inline bool certificate_covers(const Graph& h, const EdgeColouring& psi, const CoverCertificate& c) {
  auto rb = rainbow_k4s(h, psi);
  switch (c.kind) {
    case CertificateKind::NoRainbow: return rb.empty();
    case CertificateKind::Triangle: {
      const auto& t = c.triangle;
      if (!h.adjacent(t[0], t[1]) || !h.adjacent(t[0], t[2]) || !h.adjacent(t[1], t[2])) return false;
      for (const auto& q : rb)
        for (Vertex a : t)
          if (std::find(q.begin(), q.end(), a) == q.end()) return false;
      return true;
    }
    case CertificateKind::Matching: {
      if (c.matching.empty() || c.matching.size() > 3) return false;
      std::vector<char> used(h.n(), 0);
      for (const auto& e : c.matching) {
        if (!h.adjacent(e.u, e.v) || used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = 1;
      }
      for (const auto& q : rb) {
        bool hit = false;
        for (const auto& e : c.matching)
          hit |= std::find(q.begin(), q.end(), e.u) != q.end() &&
                 std::find(q.begin(), q.end(), e.v) != q.end();
        if (!hit) return false;
      }
      return true;
    }
  }
  return false;
}

// Strongest certificate for psi: none, else the least triangle common to all
// rainbow K4s, else the first matching of at most 3 edges (by edge ids)
// meeting all of them.
inline std::optional<CoverCertificate> best_certificate(const Graph& h, const EdgeColouring& psi) {
  auto rb = rainbow_k4s(h, psi);
  CoverCertificate c;
  if (rb.empty()) return c;
  std::vector<Vertex> common = rb[0];
  for (const auto& q : rb) {
    std::vector<Vertex> keep;
    std::set_intersection(common.begin(), common.end(), q.begin(), q.end(), std::back_inserter(keep));
    common = std::move(keep);
  }
  if (common.size() >= 3) {
    c.kind = CertificateKind::Triangle;
    c.triangle = {common[0], common[1], common[2]};
    return c;
  }
  std::vector<int> cand;
  for (const auto& q : rb)
    for (int id : clique_edge_ids(h, q)) cand.push_back(id);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<std::vector<char>> hits(cand.size(), std::vector<char>(rb.size(), 0));
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const Edge& e = h.edge(cand[i]);
    for (std::size_t r = 0; r < rb.size(); ++r)
      hits[i][r] = std::find(rb[r].begin(), rb[r].end(), e.u) != rb[r].end() &&
                   std::find(rb[r].begin(), rb[r].end(), e.v) != rb[r].end();
  }
  auto disjoint = [&](int a, int b) {
    const Edge &x = h.edge(cand[a]), &y = h.edge(cand[b]);
    return x.u != y.u && x.u != y.v && x.v != y.u && x.v != y.v;
  };
  auto covers = [&](const std::vector<int>& pick) {
    for (std::size_t r = 0; r < rb.size(); ++r) {
      bool hit = false;
      for (int i : pick) hit |= hits[i][r] != 0;
      if (!hit) return false;
    }
    return true;
  };
  int k = static_cast<int>(cand.size());
  std::vector<int> pick;
  for (int size = 1; size <= 3; ++size) {
    // Lexicographic scan over index tuples a < b < c.
    for (int a = 0; a < k; ++a) {
      if (size == 1) {
        if (covers({a})) pick = {a};
      } else {
        for (int b = a + 1; b < k && pick.empty(); ++b) {
          if (!disjoint(a, b)) continue;
          if (size == 2) {
            if (covers({a, b})) pick = {a, b};
            continue;
          }
          for (int d = b + 1; d < k && pick.empty(); ++d)
            if (disjoint(a, d) && disjoint(b, d) && covers({a, b, d})) pick = {a, b, d};
        }
      }
      if (!pick.empty()) break;
    }
    if (!pick.empty()) break;
  }
  if (pick.empty()) return std::nullopt;
  c.kind = CertificateKind::Matching;
  for (int i : pick) c.matching.push_back(h.edge(cand[i]));
  return c;
}

// Options for the partial colouring procedure. reserve_edge_steps keeps the
// far edge zw of every 1-edge-step uncoloured until that step;
// suppress_reserved additionally skips vertex-steps onto triangles holding
// such a pair.
struct PartialOptions {
  bool colour_edge_steps = true;
  bool reserve_edge_steps = false;
  bool suppress_reserved = false;
  bool track_saturation = false;
};

struct PartialColouringState {
  EdgeColouring colouring;
  std::vector<std::array<Vertex, 3>> problematic;
  std::vector<int> uncovered_steps;  // steps whose new K4s were left without a repeat
  bool saturation_ok = true;
  int max_saturation_excess = 0;  // max over steps of saturation(T) - k(T) - 1
};

namespace detail {

class PartialColourer {
 public:
  PartialColourer(const Graph& h, const GeneratingSequence& seq, const PartialOptions& opt)
      : h_(h), seq_(seq), opt_(opt), present_(h.n(), 0), have_(h.m(), 0) {
    st_.colouring = EdgeColouring(h.m());
    if (opt_.reserve_edge_steps)
      for (const auto& s : seq_.steps)
        if (s.kind == StepKind::Edge && s.missing() == 1) reserved_.push_back(id(s.z(), s.w()));
  }

  PartialColouringState run() {
    colour_base();
    for (std::size_t i = 0; i < seq_.steps.size(); ++i) {
      const auto& s = seq_.steps[i];
      switch (s.kind) {
        case StepKind::Standard: standard(s); break;
        case StepKind::Vertex: vertex(s, static_cast<int>(i)); break;
        case StepKind::Edge: edge(s, static_cast<int>(i)); break;
      }
      if (opt_.track_saturation) check_saturation();
    }
    return std::move(st_);
  }

 private:
  int id(Vertex a, Vertex b) const { return h_.edge_id(a, b); }
  bool on(Vertex a, Vertex b) const {
    int e = id(a, b);
    return e >= 0 && have_[e];
  }
  bool has_colour(Vertex v, int c) const {
    for (int e : h_.incident_edges(v))
      if (have_[e] && st_.colouring[e] == c) return true;
    return false;
  }
  bool reserved(int e) const { return std::find(reserved_.begin(), reserved_.end(), e) != reserved_.end(); }
  void paint(int e, int c) { st_.colouring.set(e, c); }
  void add_vertices(const std::array<Vertex, 4>& vs) {
    for (Vertex a : vs) present_[a] = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        int e = id(vs[i], vs[j]);
        have_[e] = 1;
      }
  }

  void colour_base() {
    const auto& b = seq_.base;
    for (Vertex a : b) present_[a] = 1;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) have_[id(b[i], b[j])] = 1;
    if (seq_.k5_base()) {
      // Cyclic one-factorisation: {b_i, b_j} gets colour (i + j) mod 5.
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) paint(id(b[i], b[j]), (i + j) % 5);
      next_ = 5;
      return;
    }
    const std::array<std::array<int, 4>, 3> matchings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    for (const auto& m : matchings) {
      int e1 = id(b[m[0]], b[m[1]]), e2 = id(b[m[2]], b[m[3]]);
      if (reserved(e1) || reserved(e2)) continue;
      paint(e1, next_);
      paint(e2, next_);
      ++next_;
      return;
    }
  }

  void standard(const GenStep& s) {
    add_vertices(s.v);
    int a1 = id(s.x(), s.z()), a2 = id(s.y(), s.w());
    if (reserved(a1) || reserved(a2)) {
      a1 = id(s.x(), s.w());
      a2 = id(s.y(), s.z());
    }
    paint(a1, next_);
    paint(a2, next_);
    ++next_;
  }

  // 3(i): reuse the colour of a triangle edge on the opposite edge at x.
  bool reuse_colour(Vertex x, const std::array<Vertex, 3>& t) {
    for (int i = 0; i < 3; ++i) {
      Vertex a = t[(i + 1) % 3], b = t[(i + 2) % 3], o = t[i];
      int e = id(a, b);
      if (!on(a, b) || !st_.colouring.coloured(e)) continue;
      int c = st_.colouring[e];
      int xo = id(x, o);
      if (reserved(xo) || has_colour(o, c) || has_colour(x, c)) continue;
      paint(xo, c);
      return true;
    }
    return false;
  }

  // Colours an uncoloured edge ab of the triangle, taken from allowed, and
  // the edge xo opposite to it with a new colour.
  bool fresh_pair(Vertex x, const std::array<Vertex, 3>& t, const std::vector<int>& allowed) {
    for (int i = 0; i < 3; ++i) {
      Vertex a = t[(i + 1) % 3], b = t[(i + 2) % 3], o = t[i];
      int e = id(a, b), xo = id(x, o);
      if (std::find(allowed.begin(), allowed.end(), e) == allowed.end()) continue;
      if (st_.colouring.coloured(e) || reserved(e) || reserved(xo)) continue;
      paint(e, next_);
      paint(xo, next_);
      ++next_;
      return true;
    }
    return false;
  }

  void vertex(const GenStep& s, int index) {
    std::array<Vertex, 3> t{s.y(), s.z(), s.w()};
    std::sort(t.begin(), t.end());
    std::vector<int> missing;
    for (const auto& e : s.added_between_existing) missing.push_back(id(e.u, e.v));
    bool suppressed = false;
    if (opt_.suppress_reserved)
      for (int r : reserved_) {
        const Edge& e = h_.edge(r);
        bool in_t = std::find(t.begin(), t.end(), e.u) != t.end() &&
                    std::find(t.begin(), t.end(), e.v) != t.end();
        suppressed |= in_t;
      }
    // k(T) and saturation are measured before the new edges land.
    if (missing.empty()) ++attachments_[key(t)];
    add_vertices(s.v);
    if (suppressed) {
      st_.uncovered_steps.push_back(index);
      return;
    }
    bool ok = false;
    if (!missing.empty()) ok = fresh_pair(s.x(), t, missing);
    if (!ok) ok = reuse_colour(s.x(), t);
    if (!ok) {
      std::vector<int> all{id(t[1], t[2]), id(t[0], t[2]), id(t[0], t[1])};
      ok = fresh_pair(s.x(), t, all);
    }
    if (!ok) {
      st_.problematic.push_back(t);
      st_.uncovered_steps.push_back(index);
    }
  }

  void edge(const GenStep& s, int index) {
    add_vertices(s.v);
    if (opt_.colour_edge_steps && s.missing() == 1) {
      int xy = id(s.x(), s.y()), zw = id(s.z(), s.w());
      int fresh_k4s = 0;
      for (Vertex a : common_present(s.x(), s.y()))
        for (Vertex b : common_present(s.x(), s.y()))
          if (a < b && on(a, b)) ++fresh_k4s;
      if (fresh_k4s == 1 && !st_.colouring.coloured(zw)) {
        paint(xy, next_);
        paint(zw, next_);
        ++next_;
        return;
      }
    }
    st_.uncovered_steps.push_back(index);
  }

  std::vector<Vertex> common_present(Vertex a, Vertex b) const {
    std::vector<Vertex> out;
    for (Vertex c = 0; c < h_.n(); ++c)
      if (c != a && c != b && present_[c] && on(a, c) && on(b, c)) out.push_back(c);
    return out;
  }

  static int key(const std::array<Vertex, 3>& t) { return (t[0] * 64 + t[1]) * 64 + t[2]; }

  int saturation(const std::array<Vertex, 3>& t) const {
    std::vector<int> cols;
    for (int i = 0; i < 3; ++i) {
      Vertex a = t[(i + 1) % 3], b = t[(i + 2) % 3], o = t[i];
      int e = id(a, b);
      if (st_.colouring.coloured(e) && has_colour(o, st_.colouring[e])) cols.push_back(st_.colouring[e]);
    }
    std::sort(cols.begin(), cols.end());
    return static_cast<int>(std::unique(cols.begin(), cols.end()) - cols.begin());
  }

  void check_saturation() {
    for (Vertex a = 0; a < h_.n(); ++a)
      for (Vertex b = a + 1; b < h_.n(); ++b) {
        if (!on(a, b)) continue;
        for (Vertex c = b + 1; c < h_.n(); ++c) {
          if (!on(a, c) || !on(b, c)) continue;
          std::array<Vertex, 3> t{a, b, c};
          auto it = attachments_.find(key(t));
          int k = it == attachments_.end() ? 0 : it->second;
          int excess = saturation(t) - k - 1;
          st_.max_saturation_excess = std::max(st_.max_saturation_excess, excess);
          if (excess > 0) st_.saturation_ok = false;
        }
      }
  }

  const Graph& h_;
  const GeneratingSequence& seq_;
  PartialOptions opt_;
  PartialColouringState st_;
  std::vector<char> present_, have_;
  std::vector<int> reserved_;
  std::map<int, int> attachments_;
  int next_ = 0;
};

}  // namespace detail

// Replays the sequence with the partial colouring procedure; h must be the
// graph the sequence generates.
inline PartialColouringState partial_colouring(const Graph& h, const GeneratingSequence& seq,
                                               const PartialOptions& opt = {}) {
  return detail::PartialColourer(h, seq, opt).run();
}

// Gives every uncoloured edge its own colour above those in use.
inline EdgeColouring fill_fresh(const EdgeColouring& partial) {
  EdgeColouring out = partial;
  int next = partial.max_colour() + 1;
  for (int e = 0; e < out.size(); ++e)
    if (!out.coloured(e)) out.set(e, next++);
  return out;
}

struct TiledColouring {
  EdgeColouring colouring;
  CoverCertificate certificate;
  std::string method;  // which variant or fallback produced it
  int phi = 0;
};

inline constexpr std::uint64_t kTiledSearchBudget = 200'000;

// A proper colouring of a K4-tiled graph with a certificate no weaker than its
// phi class: the partial colouring procedure under several variants, then an
// exact search for the certificate shapes in order.
inline TiledColouring colour_tiled(const Graph& h) {
  int ph = phi(h);
  if (ph > 7) throw OutOfRegime("phi(H) = " + std::to_string(ph) + " exceeds 7");
  if (h.n() > kMaxTiledVertices) throw OutOfRegime("K4-tiled graph with more than 24 vertices");
  int need = required_strength(ph);
  auto seq = find_stretched_sequence(h);

  TiledColouring out;
  out.phi = ph;
  const std::array<std::pair<const char*, PartialOptions>, 4> variants{{
      {"plain", {true, false, false, false}},
      {"reserve", {true, true, false, false}},
      {"reserve_suppress", {true, true, true, false}},
      {"no_edge_steps", {false, false, false, false}},
  }};
  std::optional<TiledColouring> best;
  for (const auto& [name, opt] : variants) {
    auto st = partial_colouring(h, seq, opt);
    auto psi = fill_fresh(st.colouring);
    if (!is_proper(h, psi)) continue;
    auto cert = best_certificate(h, psi);
    if (!cert || strength(*cert) > need) continue;
    if (!best || strength(*cert) < strength(best->certificate))
      best = TiledColouring{psi, *cert, name, ph};
    if (strength(*cert) == 0) break;
  }
  if (best) return *best;

  auto k4s = cliques(h, 4);
  auto try_avoid = [&](const std::vector<std::vector<Vertex>>& qs) -> std::optional<EdgeColouring> {
    std::vector<std::vector<int>> copies;
    for (const auto& q : qs) copies.push_back(clique_edge_ids(h, q));
    auto r = find_colouring_avoiding(h, std::move(copies), kTiledSearchBudget);
    if (r.status == SearchStatus::Found) return r.colouring;
    return std::nullopt;
  };
  auto finish = [&](const EdgeColouring& psi, const char* name) -> std::optional<TiledColouring> {
    auto cert = best_certificate(h, psi);
    if (!cert || strength(*cert) > need) return std::nullopt;
    return TiledColouring{psi, *cert, name, ph};
  };
  if (auto psi = try_avoid(k4s))
    if (auto r = finish(*psi, "search")) return *r;
  if (need >= 1)
    for (const auto& t : triangles(h)) {
      std::vector<std::vector<Vertex>> qs;
      for (const auto& q : k4s)
        if (!std::includes(q.begin(), q.end(), t.begin(), t.end())) qs.push_back(q);
      if (auto psi = try_avoid(qs))
        if (auto r = finish(*psi, "search_triangle")) return *r;
    }
  if (need >= 2)
    for (int a = 0; a < h.m(); ++a)
      for (int b = a; b < h.m(); ++b) {
        const Edge &ea = h.edge(a), &eb = h.edge(b);
        if (b != a && (ea.u == eb.u || ea.u == eb.v || ea.v == eb.u || ea.v == eb.v)) continue;
        std::vector<std::vector<Vertex>> qs;
        for (const auto& q : k4s) {
          auto in = [&](const Edge& e) {
            return std::binary_search(q.begin(), q.end(), e.u) && std::binary_search(q.begin(), q.end(), e.v);
          };
          if (!in(ea) && !in(eb)) qs.push_back(q);
        }
        if (auto psi = try_avoid(qs))
          if (auto r = finish(*psi, "search_matching")) return *r;
      }
  throw SearchExhausted("no colouring of the K4-tiled graph meets its phi class");
}

}  // namespace rainbow
