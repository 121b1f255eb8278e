#pragma once

// Grid-interpolated maps f: [0,1]^n -> R^m, outer approximations of their
// fibers by grid cells, certified l-inf neighborhood measures and the two
// cube waist checks: some fiber has mu(f^-1(t) +_inf r) >= (r/2)^m and
// #(f^-1(t), l-inf, r) >= 8^-n r^-(n-m).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mdim/geometry.hpp"

namespace mdim {

using TargetPoint = std::vector<Rational>;

class GridMap {
 public:
  /// `values` holds (2^q+1)^n target vectors of dimension m, nodes in
  /// lexicographic order (first coordinate most significant).
  GridMap(unsigned n, unsigned m, unsigned q, std::vector<TargetPoint> values);

  static GridMap from_function(unsigned n, unsigned m, unsigned q,
                               const std::function<TargetPoint(const DyadicVec&)>& fn);

  [[nodiscard]] unsigned n() const { return n_; }
  [[nodiscard]] unsigned m() const { return m_; }
  [[nodiscard]] unsigned q() const { return q_; }
  [[nodiscard]] std::uint64_t side() const { return std::uint64_t{1} << q_; }
  [[nodiscard]] std::uint64_t node_count() const { return values_.size(); }
  [[nodiscard]] std::uint64_t cell_count() const { return cell_lo_.size(); }
  [[nodiscard]] const std::vector<TargetPoint>& values() const { return values_; }

  [[nodiscard]] std::uint64_t node_index(const std::vector<std::uint64_t>& idx) const;
  [[nodiscard]] std::vector<std::uint64_t> cell_coords(std::uint64_t cell) const;
  [[nodiscard]] DyadicVec node_point(std::uint64_t node) const;
  [[nodiscard]] DyadicVec cell_center(std::uint64_t cell) const;

  /// Per-coordinate min/max of the corner values of a cell (the exact range
  /// of the multilinear interpolant on that cell).
  [[nodiscard]] const TargetPoint& cell_min(std::uint64_t cell) const { return cell_lo_[cell]; }
  [[nodiscard]] const TargetPoint& cell_max(std::uint64_t cell) const { return cell_hi_[cell]; }
  [[nodiscard]] const TargetPoint& center_value(std::uint64_t cell) const { return center_[cell]; }
  [[nodiscard]] const std::vector<double>& cell_min_approx() const { return cell_lo_d_; }
  [[nodiscard]] const std::vector<double>& cell_max_approx() const { return cell_hi_d_; }

 private:
  void index_cells();

  unsigned n_ = 1;
  unsigned m_ = 1;
  unsigned q_ = 0;
  std::vector<TargetPoint> values_;
  std::vector<TargetPoint> cell_lo_;
  std::vector<TargetPoint> cell_hi_;
  std::vector<TargetPoint> center_;
  std::vector<double> cell_lo_d_;  // cell * m + j
  std::vector<double> cell_hi_d_;
};

/// Multilinear interpolant at x in [0,1]^n, exact.
TargetPoint eval_map(const GridMap& f, const DyadicVec& x);

struct FiberApprox {
  unsigned n = 1;
  unsigned q = 0;
  TargetPoint t;
  std::vector<std::uint64_t> cells;  ///< ascending cell ids (lexicographic lower corners)
  std::vector<bool> certified;       ///< cell provably meets the fiber
  std::vector<DyadicVec> exact_points;  ///< nodes and cell centers mapped exactly to t
  bool outer = true;
};

/// Cells whose corner range contains t in every coordinate.
FiberApprox fiber_cells(const GridMap& f, const TargetPoint& t);

/// [mu(certified part +_inf r), mu(cells +_inf r)] intersected with the cube.
BoundedValue neighborhood_measure(const FiberApprox& fa, const Dyadic& r);

struct WaistRCheck {
  Dyadic r;
  BoundedValue measure;
  Rational bound;        ///< (r/2)^m
  Rational ratio_upper;  ///< measure.hi / bound
  bool pass = false;     ///< measure.hi >= bound
  bool certified = false;  ///< measure.lo >= bound
};

struct WaistCandidate {
  TargetPoint t;
  Rational min_ratio;        ///< min over r of mu_upper / (r/2)^m
  Rational min_ratio_lower;  ///< same with mu_lower
};

struct WaistMeasureReport {
  TargetPoint best_t;
  Rational best_ratio;
  std::vector<WaistRCheck> per_r;
  bool pass = false;
  /// "pass" or "grid-resolution refutation candidate"
  std::string label;
  std::size_t fiber_cells = 0;
  std::vector<WaistCandidate> candidates;  ///< in candidate order
};

/// Candidate targets: node images, cell-center images and the image-space
/// grid of spacing 2^-q inside the image bounding box (when small), sorted
/// lexicographically without duplicates.
std::vector<TargetPoint> waist_candidates(const GridMap& f);

/// Searches the candidates in parallel (`threads` = 0 means hardware
/// concurrency). Winner by (ratio, certified ratio, distance to the middle of
/// the image box, lexicographic t).
WaistMeasureReport waist_check_measure(const GridMap& f, const std::vector<Dyadic>& rs, unsigned threads = 0);

struct WaistCoverCheck {
  Dyadic r;
  std::size_t separated = 0;  ///< certified lower bound on #(f^-1(t), l-inf, r)
  Rational bound;             ///< 8^-n r^-(n-m)
  bool pass = false;
  /// Boxes [lo, hi] each containing a fiber point, pairwise >= r apart.
  std::vector<std::pair<DyadicVec, DyadicVec>> witness;
};

struct WaistCoverReport {
  TargetPoint t;
  std::vector<WaistCoverCheck> per_r;
  bool pass = false;
};

WaistCoverReport waist_check_cover(const GridMap& f, const std::vector<Dyadic>& rs, const TargetPoint& t);
/// Uses the best t of the measure search.
WaistCoverReport waist_check_cover(const GridMap& f, const std::vector<Dyadic>& rs, unsigned threads = 0);

/// Bundled maps.
GridMap projection_map(unsigned n, unsigned m, unsigned q);
GridMap identity_map(unsigned n, unsigned q);
GridMap constant_map(unsigned n, unsigned m, unsigned q, const TargetPoint& value);
/// f(x, y) = (x - 1/2)^2 - (y - 1/2)^2
GridMap saddle_map(unsigned q);

/// "projection_2_1", "identity_2", "constant_3_1", "saddle", ...
GridMap builtin_map(const std::string& name, unsigned q);
std::vector<std::string> builtin_map_names();

}  // namespace mdim
