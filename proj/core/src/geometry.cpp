#include "mdim/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdim {

namespace {

unsigned trailing_zeros(const BigInt& value) {
  if (value == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::lsb(boost::multiprecision::abs(value)));
}

}  // namespace

Dyadic::Dyadic(BigInt num, unsigned exp) : num_(std::move(num)), exp_(exp) { normalize(); }

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const unsigned shift = std::min(trailing_zeros(num_), exp_);
  if (shift > 0) {
    num_ >>= shift;  // exact: the low bits are zero
    exp_ -= shift;
  }
}

Dyadic Dyadic::from_rational(const Rational& value) {
  const BigInt den = denominator(value);
  if (den == 0 || (den & (den - 1)) != 0) {
    throw std::invalid_argument("not a dyadic rational: " + mdim::to_string(value));
  }
  return {BigInt(numerator(value)), static_cast<unsigned>(boost::multiprecision::msb(den))};
}

Dyadic Dyadic::parse(std::string_view text) { return from_rational(parse_rational(text)); }

Rational Dyadic::to_rational() const { return Rational(num_, BigInt(1) << exp_); }

double Dyadic::to_double() const { return to_rational().convert_to<double>(); }

std::string Dyadic::to_string() const { return mdim::to_string(to_rational()); }

BigInt Dyadic::numerator_at(unsigned q) const {
  if (q < exp_) throw std::invalid_argument("numerator_at: resolution below the value's exponent");
  return num_ << (q - exp_);
}

Dyadic Dyadic::halved(unsigned k) const { return {num_, exp_ + k}; }

Dyadic Dyadic::abs() const { return {boost::multiprecision::abs(num_), exp_}; }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const unsigned e = std::max(a.exp_, b.exp_);
  return {(a.num_ << (e - a.exp_)) + (b.num_ << (e - b.exp_)), e};
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  const unsigned e = std::max(a.exp_, b.exp_);
  return {(a.num_ << (e - a.exp_)) - (b.num_ << (e - b.exp_)), e};
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return {a.num_ * b.num_, a.exp_ + b.exp_}; }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (a.exp_ == b.exp_) {
    if (a.num_ < b.num_) return std::strong_ordering::less;
    if (a.num_ > b.num_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  const unsigned e = std::max(a.exp_, b.exp_);
  const BigInt x = a.num_ << (e - a.exp_);
  const BigInt y = b.num_ << (e - b.exp_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

unsigned DyadicVec::common_exponent() const {
  unsigned q = 0;
  for (const auto& c : coords_) q = std::max(q, c.exp());
  return q;
}

bool DyadicVec::in_unit_cube() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](const Dyadic& c) { return Dyadic(0) <= c && c <= Dyadic(1); });
}

Dyadic linf_dist(const DyadicVec& u, const DyadicVec& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("linf_dist: dimension mismatch (" + std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()) + ")");
  }
  Dyadic best(0);
  for (std::size_t i = 0; i < u.dim(); ++i) {
    Dyadic d = (u[i] - v[i]).abs();
    if (d > best) best = std::move(d);
  }
  return best;
}

Dyadic linf_dist(const std::vector<DyadicVec>& u, const std::vector<DyadicVec>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("linf_dist: tuple length mismatch");
  Dyadic best(0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Dyadic d = linf_dist(u[i], v[i]);
    if (d > best) best = std::move(d);
  }
  return best;
}

BigInt QGrid::point_count() const { return ipow((BigInt(1) << q) + 1, dim); }

void for_each_grid_point(const QGrid& grid, const std::function<void(const DyadicVec&)>& visit,
                         std::uint64_t cap) {
  if (grid.point_count() > cap) {
    throw CapExceeded("grid enumeration cap exceeded: (2^" + std::to_string(grid.q) + "+1)^" +
                      std::to_string(grid.dim) + " points > " + std::to_string(cap));
  }
  const std::uint64_t side = (std::uint64_t{1} << grid.q) + 1;
  std::vector<std::uint64_t> idx(grid.dim, 0);
  DyadicVec point = DyadicVec::zeros(grid.dim);
  while (true) {
    for (std::size_t i = 0; i < grid.dim; ++i) point[i] = Dyadic(BigInt(idx[i]), grid.q);
    visit(point);
    std::size_t pos = grid.dim;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < side) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (grid.dim == 0) return;
  }
}

std::vector<DyadicVec> enumerate_grid(const QGrid& grid, std::uint64_t cap) {
  std::vector<DyadicVec> out;
  for_each_grid_point(grid, [&](const DyadicVec& p) { out.push_back(p); }, cap);
  return out;
}

std::uint64_t run_capacity(unsigned q, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("covering threshold must be positive");
  // points j..j+k-1 span (k-1)/2^q, which is < eps iff k < eps*2^q + 1
  const BigInt k = ceil(eps * pow2(static_cast<int>(q)));
  return k.convert_to<std::uint64_t>();
}

std::uint64_t run_cover_count(std::uint64_t count, unsigned q, const Rational& eps) {
  if (count == 0) return 0;
  const std::uint64_t k = run_capacity(q, eps);
  return (count + k - 1) / k;
}

std::uint64_t axis_cover_count(unsigned q, const Rational& eps) {
  return run_cover_count((std::uint64_t{1} << q) + 1, q, eps);
}

BigInt interval_cover_count(const Rational& length, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("covering threshold must be positive");
  if (length < 0) throw std::invalid_argument("negative interval length");
  return floor(length / eps) + 1;
}

}  // namespace mdim
