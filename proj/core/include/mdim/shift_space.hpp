#pragma once

// Points of the full shift ([0,1]^a)^Z stored as finite windows with a
// declared extension rule, plus the metric D(x, y) = sum_n 2^-|n| |x_n - y_n|_inf
// and its Bowen version d_N, both returned as certified intervals.

#include <cstdint>
#include <vector>

#include "mdim/geometry.hpp"

namespace mdim {

enum class Extension { kZero, kPeriodic };

const char* to_string(Extension ext);
Extension parse_extension(std::string_view text);

class LatticeWord {
 public:
  LatticeWord() = default;
  /// Symbols cover [lo, lo + symbols.size() - 1]. Throws on empty storage or
  /// mixed symbol dimensions.
  LatticeWord(std::size_t a, std::int64_t lo, std::vector<DyadicVec> symbols, Extension ext);

  /// The zero-fill word carrying `symbols` on [lo, lo + size - 1].
  static LatticeWord zero_fill(std::size_t a, std::int64_t lo, std::vector<DyadicVec> symbols) {
    return {a, lo, std::move(symbols), Extension::kZero};
  }
  /// The periodic word whose period is exactly `symbols`, placed at [lo, ...].
  static LatticeWord periodic(std::size_t a, std::int64_t lo, std::vector<DyadicVec> symbols) {
    return {a, lo, std::move(symbols), Extension::kPeriodic};
  }

  [[nodiscard]] std::size_t alphabet_dim() const { return a_; }
  [[nodiscard]] std::int64_t lo() const { return lo_; }
  [[nodiscard]] std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(symbols_.size()) - 1; }
  [[nodiscard]] Extension extension() const { return ext_; }
  [[nodiscard]] const std::vector<DyadicVec>& symbols() const { return symbols_; }
  /// Period of a periodic word (storage length).
  [[nodiscard]] std::size_t period() const { return symbols_.size(); }

  /// x_n with the extension rule applied outside the stored window.
  [[nodiscard]] const DyadicVec& at(std::int64_t n) const;

  friend bool operator==(const LatticeWord&, const LatticeWord&) = default;

 private:
  std::size_t a_ = 0;
  std::int64_t lo_ = 0;
  std::vector<DyadicVec> symbols_;
  Extension ext_ = Extension::kZero;
  DyadicVec zero_;
};

/// sigma^k: the symbol at index n of the result is x_{n+k}.
LatticeWord shift(const LatticeWord& x, std::int64_t k);

/// (x_l, ..., x_m) with the extension rule applied; requires l <= m.
std::vector<DyadicVec> window(const LatticeWord& x, std::int64_t l, std::int64_t m);

/// Smallest m >= 0 with 2^(1-m) <= eps/2, i.e. the two-sided tail
/// sum_{|n|>m} 2^-|n| is at most eps/2.
unsigned tail_horizon(const Rational& eps);

/// Total weight sum_{|n| > m} 2^-|n| = 2^(1-m).
Dyadic tail_weight(unsigned m);

/// Certified enclosure of D(x, y). The partial sum over |n| <= m is exact;
/// the tail contributes at most 2^(1-m) because coordinates lie in [0,1].
/// When both words are zero-fill the whole sum is finite and a point is returned;
/// identical words give [0, 0].
BoundedValue metric_D(const LatticeWord& x, const LatticeWord& y, unsigned m);

/// Certified enclosure of d_N(x, y) = max_{0<=j<N} D(sigma^j x, sigma^j y),
/// as the interval-max of the per-shift enclosures.
BoundedValue metric_dN(const LatticeWord& x, const LatticeWord& y, unsigned N, unsigned m);

/// Per-shift enclosures D(sigma^j x, sigma^j y) for j = 0..N-1.
std::vector<BoundedValue> metric_D_orbit(const LatticeWord& x, const LatticeWord& y, unsigned N,
                                         unsigned m);

/// sum_{n in [0, N-1]} 2^-|n - j| maximized over j in [0, N-1]: the factor by
/// which d_N can exceed the windowed l-infinity distance of two zero-fill words
/// supported on [0, N-1].
Dyadic window_weight_factor(unsigned N);

}  // namespace mdim
