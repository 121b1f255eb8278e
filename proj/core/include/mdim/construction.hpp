#pragma once

// Inductive construction of a minimal subshift of ([0,1]^a)^Z with prescribed
// block ratio: levels (N_n, M_n, p_n, q_n, K_n), waypoint sequences covering
// every ordered pair of a net of K_n, cube embeddings psi_n and recurrence
// evidence.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mdim/block_system.hpp"
#include "mdim/factor_maps.hpp"

namespace mdim {

/// Largest block length N_n (and total waypoint symbol count) a level may have.
inline constexpr std::uint64_t kMaxLevelSlots = std::uint64_t{1} << 22;

struct Level {
  unsigned n = 1;
  std::uint64_t N = 1;  ///< block length N_n
  std::uint64_t M = 1;  ///< free symbol slots M_n
  /// Slot layout of K_n: free slots range over [0,1]^a, the others are fixed.
  std::vector<bool> free_slot;
  Block fixed;  ///< value of each fixed slot (zeros at free slots)
  /// Transition to level n+1; absent on the deepest level.
  unsigned p = 0;
  unsigned q = 0;
  Rational r;
  std::uint64_t net_side = 0;    ///< s: net values (2j-1)/(2s) per free coordinate
  std::vector<Block> waypoints;  ///< w_1..w_q, blocks of K_n

  [[nodiscard]] BlockSet block_set(unsigned a) const;
};

struct Construction {
  unsigned a = 1;
  Rational s_target;
  std::vector<Level> levels;  ///< levels[i].n == i + 1
  Rational achieved_ratio;    ///< a M_d / N_d at the deepest level

  [[nodiscard]] const Level& level(unsigned n) const;
};

/// Smallest power of two s with 1/(2s) < 1/n.
std::uint64_t net_side(unsigned n);

/// Net values per free coordinate of K_n at tolerance 1/n.
std::vector<Dyadic> net_values(unsigned n);

/// de Bruijn sequence of order 2 over {0..k-1} (cyclic, length k^2), with its
/// first symbol appended so consecutive pairs visit every ordered pair once.
std::vector<std::uint64_t> pair_circuit(std::uint64_t k);

/// Block of K_n whose free slots carry `free` (M_n symbols) in order.
Block fill_block(const Level& level, const std::vector<DyadicVec>& free);

/// Waypoints for K_n; throws CapExceeded above `cap` net points and
/// std::logic_error if the exhaustive density re-check fails.
std::vector<Block> build_waypoints(const Level& level, unsigned a, std::uint64_t cap = std::uint64_t{1} << 12);

/// Sets prev.{q, p, r, waypoints, net_side} and returns level n+1.
Level build_level(Level& prev, unsigned a, const Rational& r_target);

/// Levels 1..depth targeting a M_d / N_d >= s_target.
Construction build_construction(unsigned a, const Rational& s_target, unsigned depth);

/// min_k max(|u - w_k|, |v - w_{k+1}|) over consecutive waypoint pairs.
Dyadic waypoint_distance(const Level& level, const Block& u, const Block& v);

/// Default blocks delta_1..delta_depth.
std::vector<Block> default_blocks(const Construction& c);

/// Periodic word [delta_d, B, delta_d] on [-N_d, 2 N_d - 1] where B is the
/// level-n block carrying x in the first position of every enclosing level.
LatticeWord psi_n(const Construction& c, unsigned n, const std::vector<DyadicVec>& x, unsigned depth);

struct ExpansivityReport {
  unsigned n = 1;
  std::uint64_t N = 1;
  unsigned tail = 0;
  std::size_t pairs_checked = 0;
  bool exhaustive = false;
  bool pass = true;
  std::optional<std::pair<CubePoint, CubePoint>> witness;
  Dyadic witness_distance;
  BoundedValue witness_dN;
};

/// Checks |x - y|_inf <= d_{N_n}(psi x, psi y).lo on every pair.
ExpansivityReport verify_expansivity(const Construction& c, unsigned n,
                                     const std::vector<std::pair<CubePoint, CubePoint>>& pairs, unsigned tail = 6);

/// All pairs of points of ([0,1]^a)^{M_n} on the 2^-q grid when there are at
/// most `max_pairs`; otherwise `max_pairs` pairs drawn with `seed`.
std::vector<std::pair<CubePoint, CubePoint>> quantized_pairs(const Construction& c, unsigned n, unsigned q,
                                                             std::size_t max_pairs, std::uint64_t seed,
                                                             bool* exhaustive = nullptr);

/// Random quantized point of ([0,1]^a)^{M_n}.
CubePoint random_cube_point(const Construction& c, unsigned n, unsigned q, std::mt19937_64& rng);

/// psi_n as an embedding sample for hypothesis_check.
EmbeddingSample construction_embedding(const Construction& c, unsigned n, unsigned depth, unsigned tail = 6);

struct SyndeticReport {
  unsigned n = 1;
  unsigned depth = 1;
  std::size_t patterns = 0;   ///< ordered net pairs
  std::size_t missing = 0;    ///< patterns never found in the depth word
  std::uint64_t worst_gap = 0;
  std::uint64_t gap_bound = 0;  ///< 2 N_{n+1}
  Rational error;               ///< net error + pattern match error
  Rational error_bound;         ///< 1/n
  bool pass = false;
};

/// Scans one period of psi_n(default) at `depth` for every consecutive
/// waypoint pair of level n and reports the largest cyclic gap between
/// occurrences.
SyndeticReport syndetic_check(const Construction& c, unsigned n, unsigned depth);

}  // namespace mdim
