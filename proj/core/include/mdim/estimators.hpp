#pragma once

// Finite-scale profiles S(N, eps) = log #(X, d_N, eps) with certified
// brackets, Fekete-style rate bounds, conditional (delta-ball preimage)
// profiles and subadditivity checks. Nothing here is ever reported as a
// limit: every output is a finite-scale bracket.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mdim/covering.hpp"
#include "mdim/shift_space.hpp"

namespace mdim {

struct ProjectionFactor;

struct ProfileRow {
  unsigned N = 1;
  Dyadic eps;
  /// Certified covering-count bracket, when the row came from a count.
  std::optional<BigInt> count_lower;
  std::optional<BigInt> count_upper;
  /// [log_lower, log_upper] on the 2^-40 grid (natural log).
  BoundedValue log_count;
  /// log_count / (N log(1/eps)); absent when eps >= 1.
  std::optional<BoundedValue> normalized;
};

struct ProfileTable {
  std::string system_id;
  std::vector<ProfileRow> rows;  ///< sorted by (N, eps)
  std::vector<std::string> caveats;
  /// Domain/target alphabet dimensions for factor-map tables.
  std::optional<std::pair<unsigned, unsigned>> factor_dims;
};

/// Row from a certified count bracket [lower, upper] (lower >= 1).
ProfileRow make_count_row(unsigned N, const Dyadic& eps, const BigInt& lower, const BigInt& upper);
/// Row from log values directly (synthetic or externally computed sequences).
ProfileRow make_log_row(unsigned N, const Dyadic& eps, BoundedValue log_count);

/// Certified enclosure of N * log(1/eps) for 0 < eps < 1.
BoundedValue scale_denominator(unsigned N, const Dyadic& eps);

/// Full shift on [0,1]^a sampled on the grid {k/2^q}: words supported on
/// [0, N-1] with zero fill. Declares product structure.
struct FullShiftSystem {
  unsigned a = 1;
  unsigned q = 2;
};

struct SingletonSystem {};

/// Arbitrary finite sample: words for each horizon N, covered by enumeration
/// under the certified d_N intervals.
struct WordSampleSystem {
  std::string id;
  std::function<std::vector<LatticeWord>(unsigned N)> sampler;
  std::size_t cap = 4096;
};

using ShiftSystem = std::variant<FullShiftSystem, SingletonSystem, WordSampleSystem>;

std::string system_id(const ShiftSystem& system);

/// Per (N, eps): certified [log_lower, log_upper] of the covering number.
/// Product systems use closed forms; samples are enumerated. Throws
/// std::invalid_argument when 2^-q > eps/2 for a product system and
/// CapExceeded when a sample is too large.
ProfileTable profile_S(const ShiftSystem& system, std::span<const unsigned> Ns, std::span<const Dyadic> epss);

struct RateEstimate {
  Dyadic eps;
  unsigned tail = 0;
  /// min_N log_upper(N)/N: an upper bound on the limit when the profiled
  /// sequence is subadditive.
  Rational rate_upper;
  /// max_N log_lower(N) / (N + 2m + C); depends on window structure.
  Rational rate_lower;
  std::optional<BoundedValue> normalized;  ///< [lower, upper] / log(1/eps)
  bool certified = false;                  ///< rate_lower <= rate_upper
  bool structure_dependent = true;
};

/// Window-control overhead C in the rate_lower denominator (block rounding).
inline constexpr unsigned kWindowOverhead = 2;

/// Requires at least two distinct N for `eps`; throws std::invalid_argument otherwise.
RateEstimate rate_estimate(const ProfileTable& table, const Dyadic& eps);

/// Bounds on sup_y log #(pi^-1(B_delta(y, d'_N)), d_N, eps) for the coordinate
/// projection on the grid-sampled full shift, sup restricted to images of
/// grid words. Closed form over the free coordinates and the delta-box.
ProfileTable conditional_profile(const ProjectionFactor& factor, unsigned q, const Dyadic& delta,
                                 std::span<const unsigned> Ns, std::span<const Dyadic> epss);

/// The same quantity by brute force for any map on any finite sample:
/// lower from certainly-inside preimages, upper from possibly-inside ones.
ProfileTable conditional_profile_enumerated(const std::function<std::vector<LatticeWord>(unsigned N)>& domain,
                                            const std::function<LatticeWord(const LatticeWord&)>& map,
                                            const Dyadic& delta, std::span<const unsigned> Ns,
                                            std::span<const Dyadic> epss, std::size_t cap = 4096);

struct SubadditivityEntry {
  unsigned N = 1;
  BoundedValue value;
};

struct SubadditivityViolation {
  unsigned N1 = 0;
  unsigned N2 = 0;
  Rational lhs;  ///< lower end of a_{N1+N2}
  Rational rhs;  ///< upper ends of a_{N1} + a_{N2} plus slack
};

/// Every pair N1 <= N2 with all three values present and
/// a_{N1+N2}.lo > a_{N1}.hi + a_{N2}.hi + slack.
std::vector<SubadditivityViolation> check_subadditivity(std::span<const SubadditivityEntry> seq,
                                                        const Rational& slack = 0);

/// Log-count column of `table` at `eps` as a subadditivity sequence.
std::vector<SubadditivityEntry> log_sequence(const ProfileTable& table, const Dyadic& eps);

}  // namespace mdim
