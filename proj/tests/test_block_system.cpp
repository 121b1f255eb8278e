#include <doctest.h>

#include <algorithm>
#include <random>

#include "mdim/block_system.hpp"

using namespace mdim;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

Block blk(std::initializer_list<const char*> vals) {
  Block b;
  for (const char* v : vals) b.emplace_back(std::vector<Dyadic>{dy(v)});
  return b;
}

LatticeWord word(std::initializer_list<const char*> vals) { return LatticeWord::periodic(1, 0, blk(vals)); }

/// Phase scan written out directly: blocks at l + kN for k covering one full
/// common period.
bool brute_member(const LatticeWord& x, const std::vector<Block>& K, unsigned N) {
  const std::size_t P = x.period();
  for (unsigned l = 0; l < N; ++l) {
    bool ok = true;
    for (std::size_t k = 0; k < P && ok; ++k) {
      Block b;
      for (unsigned i = 0; i < N; ++i) b.push_back(x.at(static_cast<std::int64_t>(l + k * N + i)));
      ok = std::find(K.begin(), K.end(), b) != K.end();
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("membership examples") {
  BlockSet K = BlockSet::explicit_set(1, 2, {blk({"0", "0"}), blk({"1", "1"})});
  auto yes = block_membership(word({"0", "0", "1", "1"}), K);
  REQUIRE(yes);
  CHECK(*yes == 0);
  CHECK_FALSE(block_membership(word({"0", "1"}), K));
  auto shifted = block_membership(word({"1", "0", "0", "1"}), K);
  REQUIRE(shifted);
  CHECK(*shifted == 1);

  BlockSet full = BlockSet::full(1, 3);
  CHECK(block_membership(word({"1/4", "1", "0", "3/4", "1/2"}), full));
  CHECK_THROWS(block_membership(LatticeWord::zero_fill(1, 0, blk({"0"})), K));
  CHECK_THROWS(block_membership(word({"0", "0"}), K, 3));
}

TEST_CASE("membership agrees with a direct phase scan") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> bit(0, 1);
  const char* vals[] = {"0", "1"};
  for (int trial = 0; trial < 300; ++trial) {
    unsigned N = 2 + trial % 2;
    std::vector<Block> blocks;
    for (int b = 0; b < 3; ++b) {
      Block x;
      for (unsigned i = 0; i < N; ++i) x.emplace_back(std::vector<Dyadic>{dy(vals[bit(rng)])});
      blocks.push_back(x);
    }
    BlockSet K = BlockSet::explicit_set(1, N, blocks);
    std::vector<DyadicVec> syms;
    unsigned len = 1 + static_cast<unsigned>(trial % 7);
    for (unsigned i = 0; i < len; ++i) syms.emplace_back(std::vector<Dyadic>{dy(vals[bit(rng)])});
    LatticeWord x = LatticeWord::periodic(1, 0, syms);
    auto phase = block_membership(x, K);
    CHECK(phase.has_value() == brute_member(x, K.blocks(), N));
    if (phase) {
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(len); ++k) {
        Block b = window(x, *phase + k * N, *phase + (k + 1) * N - 1);
        CHECK(K.contains(b));
      }
    }
  }
}

TEST_CASE("block cover bound arithmetic") {
  CHECK(lemma51_bound(3, 2, 10, Rational(1, 2)) == 118098);
  CHECK(lemma51_bound(1, 2, 10, Rational(1, 2)) == 2);
  CHECK(lemma51_bound(1, 5, 7, Rational(1, 8)) == 5);
  CHECK(lemma51_bound(2, 2, 4, Rational(1, 2)) == 256);
  // m = 3 at eps = 1/2: exponent ceil((L + 6)/2) + 2
  CHECK(lemma51_bound(3, 2, 2, Rational(1, 2)) == 2 * ipow(3, 6));
  CHECK(lemma51_bound(3, 2, 4, Rational(1, 2)) == 2 * ipow(3, 7));
  CHECK(lemma51_bound(3, 3, 4, Rational(1, 2)) == 3 * ipow(3, 6));
}

TEST_CASE("block cover examples") {
  BlockSet two = BlockSet::explicit_set(1, 2, {blk({"0", "0"}), blk({"1", "1"})});
  BlockCoverReport r = block_cover_upper(two, 4, dy("1/2"));
  CHECK(r.cover_count_K == 2);
  CHECK(r.tail == 3);
  CHECK(r.exponent == 7);
  CHECK(r.formula == 256);
  REQUIRE(r.direct);
  CHECK(*r.direct <= 256);
  CHECK(r.dominated);

  BlockSet single = BlockSet::explicit_set(1, 3, {blk({"1/2", "1/2", "1/2"})});
  BlockCoverReport s = block_cover_upper(single, 4, dy("1/2"));
  CHECK(s.formula == 3);
  CHECK(*s.direct == 1);

  BlockSet orbit = BlockSet::explicit_set(1, 3, {blk({"1/2", "0", "1"})});
  BlockCoverReport o = block_cover_upper(orbit, 4, dy("1/2"));
  CHECK(o.formula == 3);
  CHECK(*o.direct <= 3);

  BlockSet full = BlockSet::full(1, 2);
  CHECK(full.cover_upper(Rational(1, 18)) == 19 * 19);
  BlockCoverReport f = block_cover_upper(full, 4, dy("1/2"));
  CHECK(f.cover_count_K == 361);
  CHECK(f.dominated);
}

TEST_CASE("block set validation") {
  CHECK_THROWS(BlockSet::explicit_set(1, 2, {blk({"0"})}));
  CHECK_THROWS(BlockSet::box(1, 1, blk({"1/2"}), blk({"1/4"})));
  CHECK_THROWS(BlockSet::explicit_set(1, 1, {blk({"3/2"})}));
  BlockSet b = BlockSet::box(1, 2, blk({"0", "1/4"}), blk({"1/2", "1/4"}));
  CHECK(b.contains(blk({"1/8", "1/4"})));
  CHECK_FALSE(b.contains(blk({"1/8", "1/2"})));
  CHECK(b.sample_blocks().size() == 3);
}
