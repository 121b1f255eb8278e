#pragma once

// Covering numbers #(E, d, eps) of finite metric spaces: the minimum number of
// parts of diameter strictly below eps needed to cover E (0 for E empty).
// Distances may be intervals; every certificate stays sound under that
// uncertainty (a pair counts as "< eps" only if hi < eps and as ">= eps" only
// if lo >= eps).

#include <cstddef>
#include <span>
#include <vector>

#include "mdim/rational.hpp"

namespace mdim {

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  /// Full square table. Validates zero diagonal, symmetry and the triangle
  /// inequality (lo(i,k) <= hi(i,j) + hi(j,k)) unless `validate` is false.
  explicit FiniteMetricSpace(std::vector<std::vector<BoundedValue>> dist, bool validate = true);

  static FiniteMetricSpace from_exact(const std::vector<std::vector<Rational>>& dist, bool validate = true);

  /// Builds the table from a point list and a distance callable returning
  /// either a Rational or a BoundedValue.
  template <class Point, class DistFn>
  static FiniteMetricSpace from_points(const std::vector<Point>& points, DistFn&& dist, bool validate = false) {
    const std::size_t n = points.size();
    std::vector<std::vector<BoundedValue>> table(n, std::vector<BoundedValue>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        BoundedValue d(dist(points[i], points[j]));
        table[j][i] = d;
        table[i][j] = std::move(d);
      }
    }
    return FiniteMetricSpace(std::move(table), validate);
  }

  [[nodiscard]] std::size_t size() const { return dist_.size(); }
  [[nodiscard]] const BoundedValue& dist(std::size_t i, std::size_t j) const { return dist_[i][j]; }

  [[nodiscard]] bool certainly_close(std::size_t i, std::size_t j, const Rational& eps) const {
    return dist_[i][j].hi < eps;
  }
  [[nodiscard]] bool possibly_close(std::size_t i, std::size_t j, const Rational& eps) const {
    return dist_[i][j].lo < eps;
  }

 private:
  std::vector<std::vector<BoundedValue>> dist_;
};

struct CoverResult {
  BigInt lower = 0;
  BigInt upper = 0;
  bool exact = false;
  /// Partition into parts of certified diameter < eps (backs `upper`).
  std::vector<std::vector<std::size_t>> cover_certificate;
  /// Points pairwise certified >= eps apart (backs `lower`).
  std::vector<std::size_t> separated_certificate;
};

inline constexpr std::size_t kExactCoverCap = 24;

/// Branch-and-bound over covers by maximal cliques of the "< eps" graph,
/// pruned by separated-set bounds. Exact when every distance is decided
/// relative to eps; otherwise lower/upper bracket the true value.
/// Throws CapExceeded above `cap` points.
CoverResult cover_number_exact(const FiniteMetricSpace& space, const Rational& eps,
                               std::size_t cap = kExactCoverCap);

/// Deterministic greedy clique cover: a sound upper bound with certificate.
CoverResult cover_number_greedy(const FiniteMetricSpace& space, const Rational& eps);

/// Size of an eps-separated subset: maximum when size() <= `maximum_cap`,
/// greedy in id order otherwise.
CoverResult separated_lower_bound(const FiniteMetricSpace& space, const Rational& eps,
                                  std::size_t maximum_cap = kExactCoverCap);

/// Exact when the space fits under `cap`, otherwise greedy upper and
/// separated lower bounds combined.
CoverResult cover_bounds(const FiniteMetricSpace& space, const Rational& eps, std::size_t cap = kExactCoverCap);

/// Bounds for a max-metric product: lower = prod lower_i, upper = prod upper_i.
/// Certificates are dropped.
CoverResult product_cover_bounds(std::span<const CoverResult> factors);

/// Re-checks both certificates of `result` against the space.
bool certificates_valid(const FiniteMetricSpace& space, const Rational& eps, const CoverResult& result);

}  // namespace mdim
