#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/rational.hpp"

namespace rainbow {

struct DensityReport {
  Rational m1;
  std::optional<Rational> m2;      // needs e(H) >= 2
  std::optional<Rational> m_bip2;  // needs v(H) <= 16
};

namespace detail {

inline constexpr int kMaxSubsetVertices = 24;

// e(H[S]) for every subset S of V(H), via the lowest set bit recurrence.
inline std::vector<std::uint16_t> subset_edge_counts(const Graph& h) {
  int n = h.n();
  std::vector<std::uint32_t> nb(n, 0);
  for (const auto& e : h.edges()) {
    nb[e.u] |= 1U << e.v;
    nb[e.v] |= 1U << e.u;
  }
  std::vector<std::uint16_t> ec(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s < (1U << n); ++s) {
    int v = std::countr_zero(s);
    std::uint32_t rest = s & (s - 1);
    ec[s] = static_cast<std::uint16_t>(ec[rest] + std::popcount(nb[v] & rest));
  }
  return ec;
}

inline void require_small(const Graph& h, int limit, const char* what) {
  if (h.n() > limit)
    throw ParameterError(std::string(what) + ": exhaustive scan limited to " +
                         std::to_string(limit) + " vertices");
}

}  // namespace detail

// max e(J)/v(J) over non-empty subgraphs J.
inline Rational max_density(const Graph& h) {
  if (h.n() == 0) throw DomainError("max_density of the empty graph");
  detail::require_small(h, detail::kMaxSubsetVertices, "max_density");
  auto ec = detail::subset_edge_counts(h);
  std::int64_t be = 0, bv = 1;
  for (std::uint32_t s = 1; s < ec.size(); ++s) {
    std::int64_t e = ec[s], v = std::popcount(s);
    if (e * bv > be * v) be = e, bv = v;
  }
  return Rational(be, bv);
}

// max (e(J)-1)/(v(J)-2) over subgraphs with e(J) >= 2.
inline Rational max_2_density(const Graph& h) {
  if (h.m() < 2) throw DomainError("m2 needs at least two edges");
  detail::require_small(h, detail::kMaxSubsetVertices, "max_2_density");
  auto ec = detail::subset_edge_counts(h);
  std::int64_t bn = -1, bd = 1;
  for (std::uint32_t s = 1; s < ec.size(); ++s) {
    std::int64_t e = ec[s], v = std::popcount(s);
    if (e < 2) continue;
    if (bn < 0 || (e - 1) * bd > bn * (v - 2)) bn = e - 1, bd = v - 2;
  }
  return Rational(bn, bd);
}

// min over bipartitions V1 u V2 of max(m1(H[V1]), m1(H[V2])), with m1 of an
// empty or edgeless side equal to 0.
inline Rational max_bipartition_density(const Graph& h) {
  detail::require_small(h, 16, "max_bipartition_density");
  int n = h.n();
  if (n == 0) return Rational(0);
  auto ec = detail::subset_edge_counts(h);
  // best[S] = m1(H[S]) as a fraction (num, den).
  std::vector<std::pair<std::uint16_t, std::uint8_t>> best(ec.size(), {0, 1});
  for (std::uint32_t s = 1; s < ec.size(); ++s) {
    auto cur = std::make_pair(ec[s], static_cast<std::uint8_t>(std::popcount(s)));
    for (std::uint32_t t = s; t; t &= t - 1) {
      auto sub = best[s & ~(t & -t)];
      if (static_cast<int>(sub.first) * cur.second > static_cast<int>(cur.first) * sub.second)
        cur = sub;
    }
    best[s] = cur;
  }
  std::uint32_t full = (1U << n) - 1;
  std::pair<int, int> answer{-1, 1};
  for (std::uint32_t s = 1; s <= full; s += 2) {  // vertex 0 always in V1
    auto a = best[s], b = best[full & ~s];
    auto hi = (static_cast<int>(a.first) * b.second >= static_cast<int>(b.first) * a.second)
                  ? std::make_pair(static_cast<int>(a.first), static_cast<int>(a.second))
                  : std::make_pair(static_cast<int>(b.first), static_cast<int>(b.second));
    if (answer.first < 0 || hi.first * answer.second < answer.first * hi.second) answer = hi;
  }
  return Rational(answer.first, answer.second);
}

inline DensityReport densities(const Graph& h) {
  DensityReport r{max_density(h), std::nullopt, std::nullopt};
  if (h.m() >= 2) r.m2 = max_2_density(h);
  if (h.n() <= 16) r.m_bip2 = max_bipartition_density(h);
  return r;
}

}  // namespace rainbow
