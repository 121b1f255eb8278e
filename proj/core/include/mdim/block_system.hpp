#pragma once

// Block systems X(K): sequences that, for some phase l, split into
// consecutive length-N blocks x|[l + kN, l + (k+1)N - 1] all drawn from K.

#include <cstdint>
#include <optional>
#include <vector>

#include "mdim/covering.hpp"
#include "mdim/shift_space.hpp"

namespace mdim {

using Block = std::vector<DyadicVec>;

class BlockSet {
 public:
  enum class Kind { kExplicit, kBox };

  /// Finite list of length-N blocks over [0,1]^a.
  static BlockSet explicit_set(unsigned a, unsigned N, std::vector<Block> blocks);
  /// Product of per-slot sub-cubes prod_i [lo_i, hi_i] (coordinatewise).
  static BlockSet box(unsigned a, unsigned N, Block lo, Block hi);
  /// ([0,1]^a)^N as a box.
  static BlockSet full(unsigned a, unsigned N);

  [[nodiscard]] unsigned alphabet_dim() const { return a_; }
  [[nodiscard]] unsigned block_length() const { return N_; }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] const Block& lo() const { return lo_; }
  [[nodiscard]] const Block& hi() const { return hi_; }

  [[nodiscard]] bool contains(const Block& block) const;

  /// Upper bound on #(K, l-inf, eps): exact or greedy cover for explicit sets,
  /// prod (floor(len / eps) + 1) over slots and coordinates for boxes.
  [[nodiscard]] BigInt cover_upper(const Rational& eps) const;

  /// Blocks used to build direct-cover samples: all blocks of an explicit set,
  /// the low, high and middle corners of a box.
  [[nodiscard]] std::vector<Block> sample_blocks() const;

 private:
  BlockSet(unsigned a, unsigned N, Kind kind) : a_(a), N_(N), kind_(kind) {}
  void check_block(const Block& block) const;

  unsigned a_ = 1;
  unsigned N_ = 1;
  Kind kind_ = Kind::kExplicit;
  std::vector<Block> blocks_;
  Block lo_;
  Block hi_;
};

/// Accepting phase l in [0, N-1] for a periodic word, or nullopt. `horizon`
/// must be a multiple of lcm(period, N); 0 selects that lcm. Throws on
/// non-periodic words.
std::optional<unsigned> block_membership(const LatticeWord& x, const BlockSet& K, std::uint64_t horizon = 0);

/// N * C^(ceil((L + 2m) / N) + 2) with m the tail horizon of eps.
BigInt lemma51_bound(const BigInt& cover_count, unsigned N, unsigned L, const Rational& eps);

struct BlockCoverReport {
  unsigned N = 1;
  unsigned L = 1;
  Dyadic eps;
  unsigned tail = 0;
  BigInt cover_count_K;  ///< upper bound on #(K, l-inf, eps/9)
  unsigned exponent = 0;
  BigInt formula;
  std::optional<BigInt> direct;  ///< greedy cover of the periodic sample under d_L
  std::size_t sample_size = 0;
  bool dominated = true;  ///< direct <= formula (vacuous without a direct value)
};

/// Formula bound plus, when `direct` is set, a greedy cover of the periodic
/// words built from one or two sample blocks at every phase.
BlockCoverReport block_cover_upper(const BlockSet& K, unsigned L, const Dyadic& eps, bool direct = true,
                                   std::size_t cap = 4096);

}  // namespace mdim
