#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "rainbow/colouring.hpp"
#include "rainbow/copies.hpp"

namespace rainbow {

enum class SearchStatus { Found, Exhausted, BudgetHit };

struct AvoidingSearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<EdgeColouring> colouring;
  std::uint64_t nodes = 0;
};

namespace detail {

// Backtracking for a proper colouring of G in which none of the given edge
// sets ("copies") is rainbow.
//
// Completeness rests on colour-permutation invariance: whether a colouring is
// proper and copy-rainbow-free depends only on which edges share colours, so
// every colouring is equivalent to one whose colours first appear in
// increasing order along the fixed edge order. Offering only colours
// 0..max_used+1 at each edge therefore loses nothing.
class AvoidingSearch {
 public:
  AvoidingSearch(const Graph& g, std::vector<std::vector<int>> copies,
                 std::vector<int> fixed_order, std::uint64_t budget)
      : g_(g), copies_(std::move(copies)), order_(std::move(fixed_order)), budget_(budget) {
    int m = g_.m();
    through_.assign(m, {});
    for (int c = 0; c < static_cast<int>(copies_.size()); ++c)
      for (int id : copies_[c]) through_[id].push_back(c);
    if (order_.empty()) {
      order_.resize(m);
      for (int i = 0; i < m; ++i) order_[i] = i;
      std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
        return through_[a].size() > through_[b].size();
      });
    }
    max_colours_ = m + 1;
    used_.assign(static_cast<std::size_t>(g_.n()) * max_colours_, 0);
    psi_ = EdgeColouring(m);
    uncoloured_.resize(copies_.size());
    for (std::size_t c = 0; c < copies_.size(); ++c)
      uncoloured_[c] = static_cast<int>(copies_[c].size());
  }

  AvoidingSearchResult run() {
    AvoidingSearchResult r;
    // An empty copy (pattern without edges) can never be non-rainbow.
    for (const auto& c : copies_)
      if (c.empty()) {
        r.status = SearchStatus::Exhausted;
        return r;
      }
    for (const auto& c : copies_)
      if (c.size() == 1) {
        r.status = SearchStatus::Exhausted;
        return r;
      }
    int outcome = rec(0, -1);
    r.nodes = nodes_;
    if (outcome == 1) {
      r.status = SearchStatus::Found;
      r.colouring = psi_;
    } else {
      r.status = outcome == 0 ? SearchStatus::Exhausted : SearchStatus::BudgetHit;
    }
    return r;
  }

 private:
  bool used(Vertex v, int c) const { return used_[static_cast<std::size_t>(v) * max_colours_ + c]; }
  void mark(Vertex v, int c, char on) { used_[static_cast<std::size_t>(v) * max_colours_ + c] = on; }

  // False if some copy through edge id is rainbow or can no longer be
  // prevented from becoming rainbow.
  bool consistent(int id) {
    for (int c : through_[id]) {
      const auto& cp = copies_[c];
      if (uncoloured_[c] > 1) continue;
      if (!distinct_colours(psi_, cp)) continue;
      if (uncoloured_[c] == 0) return false;
      int free_edge = -1;
      for (int e : cp)
        if (!psi_.coloured(e)) free_edge = e;
      const Edge& f = g_.edge(free_edge);
      bool rescue = false;
      for (int e : cp) {
        if (e == free_edge) continue;
        int col = psi_[e];
        if (!used(f.u, col) && !used(f.v, col)) {
          rescue = true;
          break;
        }
      }
      if (!rescue) return false;
    }
    return true;
  }

  // 1 = found, 0 = exhausted, -1 = budget hit.
  int rec(std::size_t depth, int max_used) {
    if (depth == order_.size()) return 1;
    int id = order_[depth];
    const Edge& e = g_.edge(id);
    for (int c = 0; c <= max_used + 1; ++c) {
      if (used(e.u, c) || used(e.v, c)) continue;
      if (++nodes_ > budget_) return -1;
      psi_.set(id, c);
      mark(e.u, c, 1);
      mark(e.v, c, 1);
      for (int cp : through_[id]) --uncoloured_[cp];
      int res = consistent(id) ? rec(depth + 1, std::max(max_used, c)) : 0;
      for (int cp : through_[id]) ++uncoloured_[cp];
      mark(e.u, c, 0);
      mark(e.v, c, 0);
      if (res != 0) {
        if (res == -1) psi_.clear(id);
        return res;
      }
      psi_.clear(id);
    }
    return 0;
  }

  const Graph& g_;
  std::vector<std::vector<int>> copies_;
  std::vector<int> order_;
  std::uint64_t budget_;
  std::vector<std::vector<int>> through_;
  int max_colours_ = 0;
  std::vector<char> used_;
  EdgeColouring psi_;
  std::vector<int> uncoloured_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Searches for a proper colouring of G under which no listed edge set is
// rainbow. Edges are tried in descending order of the number of sets through
// them (ties by edge id) unless an explicit order is given.
inline AvoidingSearchResult find_colouring_avoiding(const Graph& g,
                                                    std::vector<std::vector<int>> copies,
                                                    std::uint64_t node_budget,
                                                    std::vector<int> order = {}) {
  if (node_budget == 0) throw ParameterError("node budget must be positive");
  return detail::AvoidingSearch(g, std::move(copies), std::move(order), node_budget).run();
}

enum class ArrowsOutcome { Arrows, Witness, Unknown };

inline const char* to_string(ArrowsOutcome o) {
  switch (o) {
    case ArrowsOutcome::Arrows: return "arrows";
    case ArrowsOutcome::Witness: return "witness";
    case ArrowsOutcome::Unknown: return "unknown";
  }
  return "?";
}

struct ArrowsVerdict {
  ArrowsOutcome outcome = ArrowsOutcome::Unknown;
  std::optional<EdgeColouring> witness;
  std::uint64_t nodes = 0;
};

// Decides whether every proper colouring of G has a rainbow copy of H.
// The search is single-threaded, so the witness (when any) is the first in
// the fixed search order and hence deterministic.
inline ArrowsVerdict decide_arrows(const Graph& g, const Graph& h, long long node_budget) {
  if (node_budget <= 0) throw ParameterError("node budget must be positive");
  std::vector<std::vector<int>> copies;
  for (const auto& emb : enumerate_copies(g, h)) copies.push_back(image_edge_ids(g, h, emb));
  auto r = find_colouring_avoiding(g, std::move(copies), static_cast<std::uint64_t>(node_budget));
  ArrowsVerdict v;
  v.nodes = r.nodes;
  switch (r.status) {
    case SearchStatus::Found:
      v.outcome = ArrowsOutcome::Witness;
      v.witness = std::move(r.colouring);
      break;
    case SearchStatus::Exhausted: v.outcome = ArrowsOutcome::Arrows; break;
    case SearchStatus::BudgetHit: v.outcome = ArrowsOutcome::Unknown; break;
  }
  return v;
}

}  // namespace rainbow
