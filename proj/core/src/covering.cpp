#include "mdim/covering.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace mdim {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<BoundedValue>> dist, bool validate)
    : dist_(std::move(dist)) {
  const std::size_t n = dist_.size();
  for (const auto& row : dist_) {
    if (row.size() != n) throw std::invalid_argument("distance table is not square");
  }
  if (!validate) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i][i].hi != 0 || dist_[i][i].lo != 0) throw std::invalid_argument("distance table has nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (dist_[i][j] != dist_[j][i]) throw std::invalid_argument("distance table is not symmetric");
      if (dist_[i][j].lo < 0) throw std::invalid_argument("negative distance");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist_[i][k].lo > dist_[i][j].hi + dist_[j][k].hi) {
          throw std::invalid_argument("distance table violates the triangle inequality");
        }
      }
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_exact(const std::vector<std::vector<Rational>>& dist, bool validate) {
  std::vector<std::vector<BoundedValue>> table;
  table.reserve(dist.size());
  for (const auto& row : dist) {
    std::vector<BoundedValue> out;
    out.reserve(row.size());
    for (const auto& d : row) out.emplace_back(d);
    table.push_back(std::move(out));
  }
  return FiniteMetricSpace(std::move(table), validate);
}

namespace {

using Mask = std::uint32_t;

Mask bit(std::size_t i) { return Mask{1} << i; }

std::vector<Mask> adjacency(const FiniteMetricSpace& s, const Rational& eps, bool certain) {
  const std::size_t n = s.size();
  std::vector<Mask> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool close = certain ? s.certainly_close(i, j, eps) : s.possibly_close(i, j, eps);
      if (close) {
        adj[i] |= bit(j);
        adj[j] |= bit(i);
      }
    }
  }
  return adj;
}

void bron_kerbosch(const std::vector<Mask>& adj, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  Mask px = p | x;
  int best_u = std::countr_zero(px);
  int best_deg = -1;
  for (Mask it = px; it != 0; it &= it - 1) {
    const int u = std::countr_zero(it);
    const int deg = std::popcount(p & adj[static_cast<std::size_t>(u)]);
    if (deg > best_deg) {
      best_deg = deg;
      best_u = u;
    }
  }
  for (Mask it = p & ~adj[static_cast<std::size_t>(best_u)]; it != 0; it &= it - 1) {
    const int v = std::countr_zero(it);
    const Mask vb = bit(static_cast<std::size_t>(v));
    const Mask nv = adj[static_cast<std::size_t>(v)];
    bron_kerbosch(adj, r | vb, p & nv, x & nv, out);
    p &= ~vb;
    x |= vb;
  }
}

// Points of `set` that are pairwise non-adjacent, greedily in id order.
int greedy_independent_count(const std::vector<Mask>& adj, Mask set) {
  int count = 0;
  while (set != 0) {
    const int v = std::countr_zero(set);
    ++count;
    set &= ~(bit(static_cast<std::size_t>(v)) | adj[static_cast<std::size_t>(v)]);
  }
  return count;
}

class CliqueCoverSearch {
 public:
  CliqueCoverSearch(std::vector<Mask> adj, std::size_t n) : adj_(std::move(adj)), n_(n) {
    if (n_ > 0) bron_kerbosch(adj_, 0, full(), 0, cliques_);
    std::sort(cliques_.begin(), cliques_.end());
    by_vertex_.resize(n_);
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
      for (Mask it = cliques_[c]; it != 0; it &= it - 1) {
        by_vertex_[static_cast<std::size_t>(std::countr_zero(it))].push_back(c);
      }
    }
  }

  // Minimum clique cover; returns the chosen cliques.
  std::vector<Mask> solve(std::vector<Mask> initial) {
    best_ = std::move(initial);
    std::vector<Mask> chosen;
    search(full(), chosen);
    return best_;
  }

 private:
  [[nodiscard]] Mask full() const { return n_ == 32 ? ~Mask{0} : (bit(n_) - 1); }

  void search(Mask uncovered, std::vector<Mask>& chosen) {
    if (uncovered == 0) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    const auto lb = static_cast<std::size_t>(greedy_independent_count(adj_, uncovered));
    if (chosen.size() + lb >= best_.size()) return;

    // branch on the uncovered vertex with the fewest distinct options
    std::size_t pick = 0;
    std::size_t pick_options = SIZE_MAX;
    for (Mask it = uncovered; it != 0; it &= it - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(it));
      if (by_vertex_[v].size() < pick_options) {
        pick_options = by_vertex_[v].size();
        pick = v;
      }
    }
    std::vector<Mask> options;
    for (std::size_t c : by_vertex_[pick]) options.push_back(cliques_[c] & uncovered);
    std::sort(options.begin(), options.end(), [](Mask a, Mask b) {
      const int pa = std::popcount(a);
      const int pb = std::popcount(b);
      return pa != pb ? pa > pb : a < b;
    });
    options.erase(std::unique(options.begin(), options.end()), options.end());
    for (Mask option : options) {
      chosen.push_back(option);
      search(uncovered & ~option, chosen);
      chosen.pop_back();
    }
  }

  std::vector<Mask> adj_;
  std::size_t n_;
  std::vector<Mask> cliques_;
  std::vector<std::vector<std::size_t>> by_vertex_;
  std::vector<Mask> best_;
};

std::vector<Mask> greedy_clique_masks(const std::vector<Mask>& adj, std::size_t n) {
  std::vector<Mask> parts;
  Mask uncovered = n == 32 ? ~Mask{0} : (bit(n) - 1);
  while (uncovered != 0) {
    const auto seed = static_cast<std::size_t>(std::countr_zero(uncovered));
    Mask part = bit(seed);
    Mask cand = uncovered & adj[seed];
    while (cand != 0) {
      int best = -1;
      int best_gain = -1;
      for (Mask it = cand; it != 0; it &= it - 1) {
        const int v = std::countr_zero(it);
        const int gain = std::popcount(cand & adj[static_cast<std::size_t>(v)]);
        if (gain > best_gain) {
          best_gain = gain;
          best = v;
        }
      }
      part |= bit(static_cast<std::size_t>(best));
      cand &= adj[static_cast<std::size_t>(best)];
    }
    parts.push_back(part);
    uncovered &= ~part;
  }
  return parts;
}

std::vector<std::vector<std::size_t>> to_partition(const std::vector<Mask>& cliques, std::size_t n) {
  std::vector<std::vector<std::size_t>> parts(cliques.size());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < cliques.size(); ++c) {
      if (cliques[c] & bit(p)) {
        parts[c].push_back(p);
        break;
      }
    }
  }
  std::erase_if(parts, [](const auto& part) { return part.empty(); });
  return parts;
}

// Maximum set pairwise non-adjacent in `adj` (adjacent = possibly close).
void max_independent(const std::vector<Mask>& adj, Mask current, Mask candidates, Mask& best) {
  if (candidates == 0) {
    if (std::popcount(current) > std::popcount(best) ||
        (std::popcount(current) == std::popcount(best) && current < best)) {
      best = current;
    }
    return;
  }
  if (std::popcount(current) + std::popcount(candidates) < std::popcount(best)) return;
  const int v = std::countr_zero(candidates);
  const Mask vb = bit(static_cast<std::size_t>(v));
  max_independent(adj, current | vb, candidates & ~vb & ~adj[static_cast<std::size_t>(v)], best);
  max_independent(adj, current, candidates & ~vb, best);
}

// Dynamic bitset helpers for spaces beyond the 32-point mask solvers.
class Bits {
 public:
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  [[nodiscard]] bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  [[nodiscard]] std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return SIZE_MAX;
  }
  [[nodiscard]] std::size_t and_count(const Bits& other) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
    return c;
  }
  Bits& operator&=(const Bits& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t it = words_[w]; it != 0; it &= it - 1) f(w * 64 + static_cast<std::size_t>(std::countr_zero(it)));
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace

CoverResult cover_number_exact(const FiniteMetricSpace& space, const Rational& eps, std::size_t cap) {
  if (eps <= 0) throw std::invalid_argument("covering threshold must be positive");
  const std::size_t n = space.size();
  if (n > cap || n > 32) {
    throw CapExceeded("exact covering search supports at most " + std::to_string(std::min<std::size_t>(cap, 32)) +
                      " points, got " + std::to_string(n));
  }
  CoverResult result;
  result.exact = true;
  if (n == 0) return result;

  const auto certain = adjacency(space, eps, true);
  CliqueCoverSearch upper_search(certain, n);
  const auto upper_cliques = upper_search.solve(greedy_clique_masks(certain, n));
  result.cover_certificate = to_partition(upper_cliques, n);
  result.upper = result.cover_certificate.size();

  const auto possible = adjacency(space, eps, false);
  if (possible == certain) {
    result.lower = result.upper;
  } else {
    CliqueCoverSearch lower_search(possible, n);
    result.lower = lower_search.solve(greedy_clique_masks(possible, n)).size();
  }
  result.exact = result.lower == result.upper;
  result.separated_certificate = separated_lower_bound(space, eps, cap).separated_certificate;
  return result;
}

CoverResult cover_number_greedy(const FiniteMetricSpace& space, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("covering threshold must be positive");
  const std::size_t n = space.size();
  CoverResult result;
  if (n == 0) {
    result.exact = true;
    return result;
  }
  std::vector<Bits> adj(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (space.certainly_close(i, j, eps)) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }
  }
  Bits uncovered(n);
  for (std::size_t i = 0; i < n; ++i) uncovered.set(i);
  while (!uncovered.none()) {
    const std::size_t seed = uncovered.first();
    std::vector<std::size_t> part{seed};
    uncovered.reset(seed);
    Bits cand = uncovered;
    cand &= adj[seed];
    while (!cand.none()) {
      std::size_t best = SIZE_MAX;
      std::size_t best_gain = 0;
      cand.for_each([&](std::size_t v) {
        const std::size_t gain = cand.and_count(adj[v]);
        if (best == SIZE_MAX || gain > best_gain) {
          best = v;
          best_gain = gain;
        }
      });
      part.push_back(best);
      uncovered.reset(best);
      cand &= adj[best];
    }
    std::sort(part.begin(), part.end());
    result.cover_certificate.push_back(std::move(part));
  }
  result.upper = result.cover_certificate.size();
  result.lower = 1;
  result.exact = result.upper == 1;
  return result;
}

CoverResult separated_lower_bound(const FiniteMetricSpace& space, const Rational& eps, std::size_t maximum_cap) {
  if (eps <= 0) throw std::invalid_argument("covering threshold must be positive");
  const std::size_t n = space.size();
  CoverResult result;
  result.upper = n;
  if (n == 0) {
    result.exact = true;
    return result;
  }
  if (n <= maximum_cap && n <= 32) {
    const auto possible = adjacency(space, eps, false);
    Mask best = 0;
    max_independent(possible, 0, n == 32 ? ~Mask{0} : (bit(n) - 1), best);
    for (Mask it = best; it != 0; it &= it - 1) {
      result.separated_certificate.push_back(static_cast<std::size_t>(std::countr_zero(it)));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const bool separated = std::all_of(result.separated_certificate.begin(), result.separated_certificate.end(),
                                         [&](std::size_t j) { return !space.possibly_close(i, j, eps); });
      if (separated) result.separated_certificate.push_back(i);
    }
  }
  result.lower = result.separated_certificate.size();
  result.exact = result.lower == result.upper;
  return result;
}

CoverResult cover_bounds(const FiniteMetricSpace& space, const Rational& eps, std::size_t cap) {
  if (space.size() <= cap && space.size() <= 32) return cover_number_exact(space, eps, cap);
  CoverResult upper = cover_number_greedy(space, eps);
  CoverResult lower = separated_lower_bound(space, eps, 0);
  upper.lower = lower.lower;
  upper.separated_certificate = std::move(lower.separated_certificate);
  upper.exact = upper.lower == upper.upper;
  return upper;
}

CoverResult product_cover_bounds(std::span<const CoverResult> factors) {
  CoverResult result;
  result.lower = 1;
  result.upper = 1;
  result.exact = true;
  for (const auto& f : factors) {
    result.lower *= f.lower;
    result.upper *= f.upper;
    result.exact = result.exact && f.exact;
  }
  return result;
}

bool certificates_valid(const FiniteMetricSpace& space, const Rational& eps, const CoverResult& result) {
  const std::size_t n = space.size();
  if (!result.cover_certificate.empty() || result.upper == 0) {
    std::vector<bool> seen(n, false);
    for (const auto& part : result.cover_certificate) {
      for (std::size_t i : part) {
        if (i >= n) return false;
        seen[i] = true;
        for (std::size_t j : part) {
          if (i != j && !space.certainly_close(i, j, eps)) return false;
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
    if (result.upper != result.cover_certificate.size()) return false;
  }
  for (std::size_t i : result.separated_certificate) {
    for (std::size_t j : result.separated_certificate) {
      if (i != j && space.possibly_close(i, j, eps)) return false;
    }
  }
  return result.separated_certificate.size() <= result.lower;
}

}  // namespace mdim
