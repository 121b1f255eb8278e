#pragma once

// Dyadic coordinates k/2^q, points of the alphabet cube [0,1]^a and the
// l-infinity metric between them.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mdim/rational.hpp"

namespace mdim {

/// Exact dyadic rational num / 2^exp, always stored in lowest terms
/// (num odd or exp == 0), so equality of representations is equality of values.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt num, unsigned exp);
  Dyadic(long long integer) : num_(integer) {}  // NOLINT(google-explicit-constructor)

  /// Exact conversion; throws if the denominator is not a power of two.
  static Dyadic from_rational(const Rational& value);
  /// Accepts "num/den" with den a power of two, "num/2^k" and plain integers.
  static Dyadic parse(std::string_view text);

  [[nodiscard]] const BigInt& num() const { return num_; }
  [[nodiscard]] unsigned exp() const { return exp_; }

  [[nodiscard]] Rational to_rational() const;
  [[nodiscard]] double to_double() const;
  /// "3/8", "0", "1", "-5/4".
  [[nodiscard]] std::string to_string() const;

  /// Numerator of this value when written over 2^q (requires q >= exp()).
  [[nodiscard]] BigInt numerator_at(unsigned q) const;

  /// value * 2^-k
  [[nodiscard]] Dyadic halved(unsigned k) const;
  [[nodiscard]] Dyadic abs() const;
  [[nodiscard]] bool is_negative() const { return num_ < 0; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return {BigInt(-num_), exp_}; }
  Dyadic& operator+=(const Dyadic& other) { return *this = *this + other; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  BigInt num_ = 0;
  unsigned exp_ = 0;
};

/// A point of [0,1]^a (or a difference of such points).
class DyadicVec {
 public:
  DyadicVec() = default;
  explicit DyadicVec(std::vector<Dyadic> coords) : coords_(std::move(coords)) {}
  static DyadicVec zeros(std::size_t dim) { return DyadicVec(std::vector<Dyadic>(dim)); }

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] const Dyadic& operator[](std::size_t i) const { return coords_[i]; }
  Dyadic& operator[](std::size_t i) { return coords_[i]; }
  [[nodiscard]] const std::vector<Dyadic>& coords() const { return coords_; }

  /// Smallest q such that every coordinate is an integer multiple of 2^-q.
  [[nodiscard]] unsigned common_exponent() const;
  [[nodiscard]] bool in_unit_cube() const;

  friend bool operator==(const DyadicVec&, const DyadicVec&) = default;
  friend auto operator<=>(const DyadicVec& a, const DyadicVec& b) { return a.coords_ <=> b.coords_; }

 private:
  std::vector<Dyadic> coords_;
};

/// max_i |u_i - v_i|; throws std::invalid_argument on dimension mismatch.
Dyadic linf_dist(const DyadicVec& u, const DyadicVec& v);

/// l-infinity distance between two equal-length tuples of alphabet points.
Dyadic linf_dist(const std::vector<DyadicVec>& u, const std::vector<DyadicVec>& v);

/// The grid {0, 2^-q, ..., 1}^dim.
struct QGrid {
  unsigned dim = 1;
  unsigned q = 0;

  [[nodiscard]] BigInt point_count() const;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

/// Every grid point exactly once, lexicographic in the numerators
/// (first coordinate most significant). Throws CapExceeded above `cap` points.
std::vector<DyadicVec> enumerate_grid(const QGrid& grid, std::uint64_t cap = kDefaultEnumerationCap);

/// Visits grid points in the same order without materializing them.
void for_each_grid_point(const QGrid& grid, const std::function<void(const DyadicVec&)>& visit,
                         std::uint64_t cap = kDefaultEnumerationCap);

/// Minimum number of subsets of diameter strictly below eps covering the
/// 1-D grid {0, 2^-q, ..., 1}. Consecutive runs of ceil(eps * 2^q) points
/// are optimal.
std::uint64_t axis_cover_count(unsigned q, const Rational& eps);

/// Number of points of a run of `count` consecutive grid points (spacing 2^-q)
/// that one part of diameter < eps can hold.
std::uint64_t run_capacity(unsigned q, const Rational& eps);

/// Minimum cover (equivalently maximum eps-separated subset) of a run of
/// `count` consecutive grid points with spacing 2^-q.
std::uint64_t run_cover_count(std::uint64_t count, unsigned q, const Rational& eps);

/// Covering number of the continuum interval [0, length] by sets of
/// diameter < eps: floor(length / eps) + 1.
BigInt interval_cover_count(const Rational& length, const Rational& eps);

}  // namespace mdim
