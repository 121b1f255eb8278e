#pragma once

// Coordinatewise factor maps between full shifts, finite-scale conditional
// slope brackets for the coordinate projection, and a checker for the
// expansion hypothesis |x - y|_inf <= d_{N_n}(psi_n(x), psi_n(y)).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdim/estimators.hpp"
#include "mdim/shift_space.hpp"

namespace mdim {

/// Projection of the alphabet [0,1]^a onto its first b coordinates, applied
/// at every index.
struct ProjectionFactor {
  unsigned a = 2;
  unsigned b = 1;

  ProjectionFactor() = default;
  ProjectionFactor(unsigned domain_dim, unsigned target_dim);
};

LatticeWord apply_factor(const ProjectionFactor& factor, const LatticeWord& x);

struct SlopeBracket {
  Dyadic eps;
  unsigned N = 1;
  unsigned tail = 0;
  BigInt count_lower;  ///< free-coordinate cover count on [0, N-1]
  BigInt count_upper;  ///< free-coordinate cover count on [-m, N+m-1] at mesh eps/6
  BoundedValue lower;  ///< outward enclosure of log(count_lower) / (N log(1/eps))
  BoundedValue upper;  ///< outward enclosure of log(count_upper) / (N log(1/eps))
};

/// Bracket for sup_y log #(pi^-1(y), d_N, eps) / (N log(1/eps)) of the
/// projection. Requires eps = 2^-k with k >= 1 and q >= k + 1.
SlopeBracket fiber_cover_bracket(const ProjectionFactor& factor, unsigned N, const Dyadic& eps, unsigned q);

/// Brackets for every (N, eps) as a profile table carrying (a, b).
ProfileTable bracket_table(const ProjectionFactor& factor, std::span<const unsigned> Ns,
                           std::span<const Dyadic> epss, unsigned q);

/// A point of [0,1]^M given as M/a alphabet symbols.
using CubePoint = std::vector<DyadicVec>;
/// A point of a product of shifts; the metric is the sum of the component D's.
using ProductPoint = std::vector<LatticeWord>;

struct EmbeddingSample {
  unsigned N = 1;  ///< horizon N_n
  unsigned M = 1;  ///< number of scalar cube coordinates
  unsigned tail = 0;
  std::function<ProductPoint(const CubePoint&)> psi;
  std::vector<std::pair<CubePoint, CubePoint>> pairs;
};

/// d_N on product points: max over j of the summed component enclosures.
BoundedValue product_metric_dN(const ProductPoint& x, const ProductPoint& y, unsigned N, unsigned m);

struct HypothesisLevel {
  unsigned N = 1;
  unsigned M = 1;
  Rational ratio;  ///< M / N
  std::size_t pairs_checked = 0;
  bool pass = true;
  std::optional<std::pair<CubePoint, CubePoint>> witness;
  Dyadic witness_distance;
  BoundedValue witness_dN;
};

struct HypothesisReport {
  std::vector<HypothesisLevel> levels;
  /// "constant", "non-increasing", "non-decreasing" or "mixed"
  std::string ratio_trend;
  bool pass = true;
};

/// Checks |x - y|_inf <= d_N(psi x, psi y).lo on every supplied pair.
HypothesisReport hypothesis_check(std::span<const EmbeddingSample> family);

/// psi_n(x_0..x_{n-1}) = the zero-fill word carrying x on [0, n-1]; M = a n.
EmbeddingSample full_shift_embedding(unsigned a, unsigned n, unsigned tail = 4);

/// psi'(x) = (psi(x), p) for a fixed point p of the second factor.
EmbeddingSample with_fixed_point(EmbeddingSample base, LatticeWord fixed_point);

}  // namespace mdim
