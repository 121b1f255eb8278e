#include "mdim/rational.hpp"

#include <algorithm>
#include <cctype>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace mdim {

namespace {

using Float = boost::multiprecision::cpp_bin_float_50;

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(text));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  Rational value;
  if (slash == std::string_view::npos) {
    value = Rational(parse_integer(text, whole));
  } else {
    const BigInt num = parse_integer(text.substr(0, slash), whole);
    std::string_view den_text = text.substr(slash + 1);
    BigInt den;
    if (const auto caret = den_text.find('^'); caret != std::string_view::npos) {
      if (den_text.substr(0, caret) != "2") {
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
      }
      const BigInt k = parse_integer(den_text.substr(caret + 1), whole);
      if (k > 4096) throw std::invalid_argument("exponent too large in '" + std::string(whole) + "'");
      den = BigInt(1) << k.convert_to<unsigned>();
    } else {
      den = parse_integer(den_text, whole);
    }
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt floor(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& value) { return -floor(Rational(-value)); }

Rational pow2(int exponent) {
  if (exponent >= 0) return Rational(BigInt(1) << exponent);
  return Rational(BigInt(1), BigInt(1) << -exponent);
}

BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

BoundedValue::BoundedValue(Rational lower, Rational upper) : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo > hi) throw std::invalid_argument("BoundedValue requires lo <= hi");
}

BoundedValue interval_max(const BoundedValue& a, const BoundedValue& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::string to_string(const BoundedValue& value) {
  return "[" + to_string(value.lo) + ", " + to_string(value.hi) + "]";
}

Rational round_down_to_grid(const Rational& x) {
  static const Rational scale = pow2(kLogGridBits);
  return Rational(floor(x * scale), BigInt(1) << kLogGridBits);
}

Rational round_up_to_grid(const Rational& x) {
  static const Rational scale = pow2(kLogGridBits);
  return Rational(ceil(x * scale), BigInt(1) << kLogGridBits);
}

BoundedValue log_bounds(const BigInt& value) {
  if (value < 1) throw std::domain_error("log_bounds requires value >= 1");
  if (value == 1) return BoundedValue(Rational(0));
  const Float v = boost::multiprecision::log(Float(value));
  const Float scaled = boost::multiprecision::ldexp(v, kLogGridBits);
  const BigInt n = boost::multiprecision::floor(scaled).convert_to<BigInt>();
  const BigInt den = BigInt(1) << kLogGridBits;
  // 50 significant digits leave an error far below one grid unit; widen by
  // one unit below and two above.
  Rational lo(n - 1, den);
  if (lo < 0) lo = 0;
  return {lo, Rational(n + 2, den)};
}

BoundedValue log_bounds(const Rational& x) {
  if (x <= 0) throw std::domain_error("log_bounds requires a positive argument");
  const BoundedValue num = log_bounds(BigInt(numerator(x)));
  const BoundedValue den = log_bounds(BigInt(denominator(x)));
  return {num.lo - den.hi, num.hi - den.lo};
}

BoundedValue divide_outward(const BoundedValue& numerator, const BoundedValue& denominator) {
  if (denominator.lo <= 0) throw std::domain_error("divide_outward requires a positive denominator");
  const Rational a = numerator.lo / denominator.lo;
  const Rational b = numerator.lo / denominator.hi;
  const Rational c = numerator.hi / denominator.lo;
  const Rational d = numerator.hi / denominator.hi;
  return {round_down_to_grid(std::min(a, b)), round_up_to_grid(std::max(c, d))};
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace mdim
