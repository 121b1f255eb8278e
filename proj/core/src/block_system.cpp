#include "mdim/block_system.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mdim {

void BlockSet::check_block(const Block& block) const {
  if (block.size() != N_) {
    throw std::invalid_argument("block of length " + std::to_string(block.size()) + ", expected " +
                                std::to_string(N_));
  }
  for (const auto& s : block) {
    if (s.dim() != a_) throw std::invalid_argument("block symbol of wrong dimension");
    if (!s.in_unit_cube()) throw std::invalid_argument("block symbol outside [0,1]^a");
  }
}

BlockSet BlockSet::explicit_set(unsigned a, unsigned N, std::vector<Block> blocks) {
  if (a == 0 || N == 0) throw std::invalid_argument("block set needs a, N >= 1");
  BlockSet K(a, N, Kind::kExplicit);
  for (const auto& b : blocks) K.check_block(b);
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  K.blocks_ = std::move(blocks);
  return K;
}

BlockSet BlockSet::box(unsigned a, unsigned N, Block lo, Block hi) {
  if (a == 0 || N == 0) throw std::invalid_argument("block set needs a, N >= 1");
  BlockSet K(a, N, Kind::kBox);
  K.check_block(lo);
  K.check_block(hi);
  for (unsigned i = 0; i < N; ++i) {
    for (unsigned c = 0; c < a; ++c) {
      if (lo[i][c] > hi[i][c] || lo[i][c] < Dyadic(0) || hi[i][c] > Dyadic(1)) {
        throw std::invalid_argument("box slot is not a sub-cube of [0,1]^a");
      }
    }
  }
  K.lo_ = std::move(lo);
  K.hi_ = std::move(hi);
  return K;
}

BlockSet BlockSet::full(unsigned a, unsigned N) {
  return box(a, N, Block(N, DyadicVec::zeros(a)), Block(N, DyadicVec(std::vector<Dyadic>(a, Dyadic(1)))));
}

bool BlockSet::contains(const Block& block) const {
  if (block.size() != N_) return false;
  if (kind_ == Kind::kExplicit) return std::binary_search(blocks_.begin(), blocks_.end(), block);
  for (unsigned i = 0; i < N_; ++i) {
    if (block[i].dim() != a_) return false;
    for (unsigned c = 0; c < a_; ++c) {
      if (block[i][c] < lo_[i][c] || block[i][c] > hi_[i][c]) return false;
    }
  }
  return true;
}

BigInt BlockSet::cover_upper(const Rational& eps) const {
  if (kind_ == Kind::kExplicit) {
    if (blocks_.empty()) return 0;
    const auto space = FiniteMetricSpace::from_points(
        blocks_, [](const Block& x, const Block& y) { return linf_dist(x, y).to_rational(); });
    return cover_bounds(space, eps).upper;
  }
  BigInt out = 1;
  for (unsigned i = 0; i < N_; ++i) {
    for (unsigned c = 0; c < a_; ++c) out *= interval_cover_count((hi_[i][c] - lo_[i][c]).to_rational(), eps);
  }
  return out;
}

std::vector<Block> BlockSet::sample_blocks() const {
  if (kind_ == Kind::kExplicit) return blocks_;
  Block mid(N_);
  for (unsigned i = 0; i < N_; ++i) {
    std::vector<Dyadic> c(a_);
    for (unsigned k = 0; k < a_; ++k) c[k] = (lo_[i][k] + hi_[i][k]).halved(1);
    mid[i] = DyadicVec(std::move(c));
  }
  std::vector<Block> out{lo_, hi_, mid};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<unsigned> block_membership(const LatticeWord& x, const BlockSet& K, std::uint64_t horizon) {
  if (x.extension() != Extension::kPeriodic) {
    throw std::invalid_argument("block membership is only decidable for periodic words");
  }
  if (x.alphabet_dim() != K.alphabet_dim()) throw std::invalid_argument("word and block set dimensions differ");
  const std::uint64_t N = K.block_length();
  const std::uint64_t cycle = std::lcm<std::uint64_t>(x.period(), N);
  if (horizon == 0) horizon = cycle;
  if (horizon % cycle != 0) {
    throw std::invalid_argument("horizon must be a multiple of lcm(period, N) = " + std::to_string(cycle));
  }
  for (std::uint64_t phase = 0; phase < N; ++phase) {
    bool ok = true;
    for (std::uint64_t start = phase; start < phase + horizon && ok; start += N) {
      const auto s = static_cast<std::int64_t>(start);
      ok = K.contains(window(x, s, s + static_cast<std::int64_t>(N) - 1));
    }
    if (ok) return static_cast<unsigned>(phase);
  }
  return std::nullopt;
}

BigInt lemma51_bound(const BigInt& cover_count, unsigned N, unsigned L, const Rational& eps) {
  if (N == 0) throw std::invalid_argument("block length must be >= 1");
  const unsigned m = tail_horizon(eps);
  const unsigned exponent = (L + 2 * m + N - 1) / N + 2;
  return BigInt(N) * ipow(cover_count, exponent);
}

BlockCoverReport block_cover_upper(const BlockSet& K, unsigned L, const Dyadic& eps, bool direct,
                                   std::size_t cap) {
  if (L == 0) throw std::invalid_argument("horizon L must be >= 1");
  BlockCoverReport rep;
  rep.N = K.block_length();
  rep.L = L;
  rep.eps = eps;
  const Rational e = eps.to_rational();
  rep.tail = tail_horizon(e);
  rep.exponent = (L + 2 * rep.tail + rep.N - 1) / rep.N + 2;
  rep.cover_count_K = K.cover_upper(e / 9);
  rep.formula = lemma51_bound(rep.cover_count_K, rep.N, L, e);
  if (!direct) return rep;

  const auto blocks = K.sample_blocks();
  std::vector<LatticeWord> sample;
  const auto add = [&](const std::vector<const Block*>& seq) {
    Block symbols;
    for (const Block* b : seq) symbols.insert(symbols.end(), b->begin(), b->end());
    for (unsigned phase = 0; phase < rep.N; ++phase) {
      sample.push_back(LatticeWord::periodic(K.alphabet_dim(), phase, symbols));
      if (sample.size() > cap) throw CapExceeded("block-system sample exceeds cap");
    }
  };
  for (const auto& b : blocks) add({&b});
  for (const auto& b1 : blocks) {
    for (const auto& b2 : blocks) {
      if (&b1 != &b2) add({&b1, &b2});
    }
  }
  rep.sample_size = sample.size();
  if (!sample.empty()) {
    const auto space = FiniteMetricSpace::from_points(
        sample, [&](const LatticeWord& x, const LatticeWord& y) { return metric_dN(x, y, L, rep.tail); });
    rep.direct = cover_number_greedy(space, e).upper;
  } else {
    rep.direct = BigInt(0);
  }
  rep.dominated = *rep.direct <= rep.formula;
  return rep;
}

}  // namespace mdim
