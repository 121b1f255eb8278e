#pragma once

// Exact integer/rational aliases, interval values and outward-rounded
// logarithms shared by every module.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an enumeration or exact search would exceed its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "p/q" or "p/2^k" (optionally signed) into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

Rational pow2(int exponent);
BigInt ipow(const BigInt& base, std::uint64_t exponent);

/// Closed interval [lo, hi] of exact rationals. Used for certified truncations
/// of infinite sums and for outward-rounded transcendental values.
struct BoundedValue {
  Rational lo;
  Rational hi;

  BoundedValue() = default;
  explicit BoundedValue(Rational point) : lo(point), hi(std::move(point)) {}
  BoundedValue(Rational lower, Rational upper);

  [[nodiscard]] bool is_point() const { return lo == hi; }
  [[nodiscard]] bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  [[nodiscard]] Rational width() const { return hi - lo; }

  friend BoundedValue operator+(const BoundedValue& a, const BoundedValue& b) {
    return {a.lo + b.lo, a.hi + b.hi};
  }
  friend bool operator==(const BoundedValue& a, const BoundedValue& b) = default;
};

/// Interval-wise maximum: [max lo, max hi].
BoundedValue interval_max(const BoundedValue& a, const BoundedValue& b);

std::string to_string(const BoundedValue& value);

/// Denominator exponent of the grid used for outward rounding of logarithms.
inline constexpr int kLogGridBits = 40;

/// Rounds down / up onto the 2^-kLogGridBits grid.
Rational round_down_to_grid(const Rational& x);
Rational round_up_to_grid(const Rational& x);

/// Certified enclosure of log(value) for value >= 1, on the 2^-40 grid.
/// Exact [0, 0] for value == 1.
BoundedValue log_bounds(const BigInt& value);

/// Certified enclosure of log(x) for a positive rational.
BoundedValue log_bounds(const Rational& x);

/// Certified enclosure of numerator / denominator where both are intervals
/// and the denominator is strictly positive. Result is rounded outward.
BoundedValue divide_outward(const BoundedValue& numerator, const BoundedValue& denominator);

double to_double(const Rational& x);

}  // namespace mdim
