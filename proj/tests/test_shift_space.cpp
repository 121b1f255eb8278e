#include <doctest.h>

#include <random>

#include "mdim/shift_space.hpp"

using namespace mdim;

namespace {

DyadicVec s1(const char* v) { return DyadicVec({Dyadic::parse(v)}); }

LatticeWord random_word(std::mt19937_64& rng, unsigned a, unsigned len, bool periodic) {
  std::uniform_int_distribution<long long> pick(0, 8);
  std::vector<DyadicVec> syms;
  for (unsigned i = 0; i < len; ++i) {
    std::vector<Dyadic> c;
    for (unsigned j = 0; j < a; ++j) c.emplace_back(BigInt(pick(rng)), 3);
    syms.emplace_back(c);
  }
  std::int64_t lo = std::uniform_int_distribution<int>(-3, 3)(rng);
  return periodic ? LatticeWord::periodic(a, lo, syms) : LatticeWord::zero_fill(a, lo, syms);
}

}  // namespace

TEST_CASE("tail horizon") {
  CHECK(tail_horizon(Rational(1, 2)) == 3);
  CHECK(tail_horizon(Rational(1, 4)) == 4);
  CHECK(tail_horizon(Rational(4)) == 0);
  for (int k = 1; k < 12; ++k) {
    Rational eps = pow2(-k);
    unsigned m = tail_horizon(eps);
    CHECK(pow2(1 - static_cast<int>(m)) <= eps / 2);
    if (m > 0) CHECK(pow2(2 - static_cast<int>(m)) > eps / 2);
  }
  CHECK(tail_weight(3) == Dyadic::parse("1/4"));
}

TEST_CASE("metric_D examples") {
  LatticeWord zero = LatticeWord::zero_fill(1, 0, {s1("0")});
  CHECK(metric_D(zero, zero, 5) == BoundedValue(Rational(0)));
  LatticeWord spike = LatticeWord::zero_fill(1, 0, {s1("1")});
  for (unsigned m : {0U, 1U, 4U}) CHECK(metric_D(spike, zero, m) == BoundedValue(Rational(1)));

  LatticeWord quarter = LatticeWord::periodic(1, 0, {s1("1/4")});
  BoundedValue d = metric_D(quarter, zero, 10);
  CHECK(d.contains(Rational(3, 4)));
  CHECK(d.width() <= Rational(3, 512));
}

TEST_CASE("metric_dN examples") {
  LatticeWord zero = LatticeWord::zero_fill(1, 0, {s1("0")});
  LatticeWord spike = LatticeWord::zero_fill(1, 0, {s1("1")});
  CHECK(metric_dN(spike, zero, 1, 4) == metric_D(spike, zero, 4));
  CHECK(metric_dN(spike, zero, 2, 4) == BoundedValue(Rational(1)));
  auto orbit = metric_D_orbit(spike, zero, 3, 4);
  REQUIRE(orbit.size() == 3);
  CHECK(orbit[1] == BoundedValue(Rational(1, 2)));
  CHECK(orbit[2] == BoundedValue(Rational(1, 4)));
}

TEST_CASE("metric properties on random words") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    bool periodic = trial % 2 == 1;
    LatticeWord x = random_word(rng, 2, 4, periodic);
    LatticeWord y = random_word(rng, 2, 4, periodic);
    LatticeWord z = random_word(rng, 2, 4, periodic);
    unsigned m = 6;
    BoundedValue dxy = metric_D(x, y, m), dyx = metric_D(y, x, m);
    CHECK(dxy == dyx);
    CHECK(dxy.lo <= dxy.hi);
    CHECK(dxy.lo >= linf_dist(x.at(0), y.at(0)).to_rational());
    CHECK(metric_D(x, z, m).lo <= dxy.hi + metric_D(y, z, m).hi);
    CHECK(metric_D(x, x, m).lo == 0);
    for (unsigned N = 1; N < 5; ++N) {
      BoundedValue a = metric_dN(x, y, N, m), b = metric_dN(x, y, N + 1, m);
      CHECK(a.lo <= b.lo);
      CHECK(a.hi <= b.hi);
    }
    BoundedValue coarse = metric_D(x, y, 3), fine = metric_D(x, y, 8);
    CHECK(coarse.lo <= fine.hi);
    CHECK(fine.lo <= coarse.hi);
  }
}

TEST_CASE("shift and window") {
  std::mt19937_64 rng(3);
  LatticeWord x = random_word(rng, 1, 5, false);
  CHECK(shift(x, 0) == x);
  CHECK(shift(shift(x, 1), -1) == x);
  for (std::int64_t n = -8; n < 8; ++n) CHECK(shift(x, 1).at(n) == x.at(n + 1));

  auto far = window(x, 40, 45);
  for (const auto& v : far) CHECK(v == DyadicVec::zeros(1));
  CHECK(window(x, x.lo(), x.hi()) == x.symbols());

  LatticeWord p = random_word(rng, 2, 3, true);
  CHECK(window(p, 0, 5) == window(p, 3, 8));
  CHECK(window(p, -7, -2) == window(p, -4, 1));
  CHECK_THROWS(window(p, 2, 1));
}

TEST_CASE("word validation") {
  CHECK_THROWS(LatticeWord(1, 0, {}, Extension::kZero));
  CHECK_THROWS(LatticeWord(2, 0, {s1("0")}, Extension::kZero));
  CHECK(parse_extension("periodic") == Extension::kPeriodic);
  CHECK(std::string(to_string(Extension::kZero)) == "zero");
}

TEST_CASE("window weight factor") {
  CHECK(window_weight_factor(1) == Dyadic(1));
  CHECK(window_weight_factor(2) == Dyadic::parse("3/2"));
  CHECK(window_weight_factor(3) == Dyadic(2));
}
