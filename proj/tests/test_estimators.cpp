#include <doctest.h>

#include <cmath>

#include "mdim/estimators.hpp"
#include "mdim/factor_maps.hpp"
#include "oracles.hpp"

using namespace mdim;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

bool encloses_log(const BoundedValue& b, double v) {
  return to_double(b.lo) <= std::log(v) + 1e-12 && to_double(b.hi) >= std::log(v) - 1e-12;
}

/// Every zero-fill word on [0, N-1] over the 2^-q grid in [0,1]^a.
std::vector<LatticeWord> all_words(unsigned a, unsigned q, unsigned N) {
  auto symbols = enumerate_grid({a, q});
  std::vector<LatticeWord> out;
  std::vector<std::size_t> idx(N, 0);
  while (true) {
    std::vector<DyadicVec> w;
    for (auto i : idx) w.push_back(symbols[i]);
    out.push_back(LatticeWord::zero_fill(a, 0, w));
    std::size_t k = 0;
    while (k < N && ++idx[k] == symbols.size()) idx[k++] = 0;
    if (k == N) break;
  }
  return out;
}

}  // namespace

TEST_CASE("full shift profile") {
  std::vector<unsigned> Ns{1};
  std::vector<Dyadic> eps{dy("1/2")};
  ProfileTable t = profile_S(FullShiftSystem{1, 2}, Ns, eps);
  REQUIRE(t.rows.size() == 1);
  CHECK(*t.rows[0].count_lower == 3);
  CHECK(*t.rows[0].count_upper == 3);
  CHECK(encloses_log(t.rows[0].log_count, 3));

  ProfileTable t2 = profile_S(FullShiftSystem{2, 2}, Ns, eps);
  CHECK(*t2.rows[0].count_lower == 9);
  CHECK(encloses_log(t2.rows[0].log_count, 9));
  CHECK_THROWS_AS(profile_S(FullShiftSystem{1, 1}, Ns, eps), std::invalid_argument);
}

TEST_CASE("full shift profile matches enumeration of the grid sample") {
  for (unsigned N : {1U, 2U}) {
    std::vector<unsigned> Ns{N};
    std::vector<Dyadic> eps{dy("1/2")};
    ProfileTable closed = profile_S(FullShiftSystem{1, 2}, Ns, eps);
    WordSampleSystem sample{"grid", [](unsigned n) { return all_words(1, 2, n); }, 4096};
    ProfileTable brute = profile_S(sample, Ns, eps);
    const auto& c = closed.rows[0];
    const auto& b = brute.rows[0];
    CHECK(*c.count_lower <= *b.count_upper);
    CHECK(*b.count_lower <= *c.count_upper);
  }
}

TEST_CASE("full shift normalized lower is at least a") {
  std::vector<unsigned> Ns{1, 2, 3, 5};
  for (unsigned a : {1U, 2U, 3U}) {
    for (int k = 1; k <= 4; ++k) {
      std::vector<Dyadic> eps{Dyadic(1, static_cast<unsigned>(k))};
      ProfileTable t = profile_S(FullShiftSystem{a, static_cast<unsigned>(k + 1)}, Ns, eps);
      for (const auto& row : t.rows) {
        REQUIRE(row.normalized);
        CHECK(row.normalized->lo >= a);
        CHECK(row.log_count.lo <= row.log_count.hi);
      }
    }
  }
}

TEST_CASE("singleton profile") {
  std::vector<unsigned> Ns{1, 2, 7};
  std::vector<Dyadic> eps{dy("1/2"), dy("1/16")};
  ProfileTable t = profile_S(SingletonSystem{}, Ns, eps);
  for (const auto& row : t.rows) CHECK(row.log_count == BoundedValue(Rational(0)));
}

TEST_CASE("rate estimate") {
  Dyadic e = dy("1/2");
  ProfileTable t;
  t.rows.push_back(make_count_row(1, e, 3, 3));
  t.rows.push_back(make_count_row(2, e, 9, 9));
  RateEstimate r = rate_estimate(t, e);
  CHECK(std::abs(to_double(r.rate_upper) - std::log(3.0)) < 1e-9);
  CHECK(r.rate_upper >= log_bounds(BigInt(3)).hi - pow2(-39));
  CHECK(r.rate_lower <= r.rate_upper);
  CHECK(r.certified);

  ProfileTable syn;
  syn.rows.push_back(make_log_row(1, e, BoundedValue(Rational(2))));
  syn.rows.push_back(make_log_row(2, e, BoundedValue(Rational(3))));
  syn.rows.push_back(make_log_row(4, e, BoundedValue(Rational(5))));
  CHECK(rate_estimate(syn, e).rate_upper == Rational(5, 4));

  ProfileTable zero;
  zero.rows.push_back(make_log_row(1, e, BoundedValue(Rational(0))));
  zero.rows.push_back(make_log_row(3, e, BoundedValue(Rational(0))));
  CHECK(rate_estimate(zero, e).rate_upper == 0);

  ProfileTable one;
  one.rows.push_back(make_count_row(1, e, 3, 3));
  CHECK_THROWS_AS(rate_estimate(one, e), std::invalid_argument);
}

TEST_CASE("subadditivity checker") {
  std::vector<SubadditivityEntry> bad{{1, BoundedValue(Rational(0))}, {2, BoundedValue(Rational(1))},
                                      {3, BoundedValue(Rational(2))}};
  auto v = check_subadditivity(bad);
  REQUIRE(v.size() == 2);
  CHECK(v[0].N1 == 1);
  CHECK(v[0].N2 == 1);
  CHECK(v[1].N1 == 1);
  CHECK(v[1].N2 == 2);
  CHECK(v[1].lhs == 2);
  CHECK(v[1].rhs == 1);

  std::vector<SubadditivityEntry> good{{1, BoundedValue(Rational(2))}, {2, BoundedValue(Rational(3))},
                                       {3, BoundedValue(Rational(4))}, {4, BoundedValue(Rational(5))}};
  CHECK(check_subadditivity(good).empty());
  CHECK(check_subadditivity(bad, Rational(1)).empty());
}

TEST_CASE("conditional profile of the projection") {
  ProjectionFactor p(2, 1);
  std::vector<unsigned> Ns{1};
  std::vector<Dyadic> eps{dy("1/2")};
  ProfileTable small = conditional_profile(p, 2, dy("1/16"), Ns, eps);
  CHECK(small.rows[0].log_count.lo >= log_bounds(BigInt(3)).lo);
  CHECK(small.factor_dims == std::pair{2U, 1U});

  ProfileTable whole = conditional_profile(p, 2, dy("2"), Ns, eps);
  ProfileTable full = profile_S(FullShiftSystem{2, 2}, Ns, eps);
  CHECK(whole.rows[0].count_lower == full.rows[0].count_lower);
  CHECK(whole.rows[0].count_upper == full.rows[0].count_upper);

  ProjectionFactor id(1, 1);
  ProfileTable ident = conditional_profile(id, 2, dy("1/8"), Ns, eps);
  CHECK(ident.rows[0].log_count == BoundedValue(Rational(0)));
}

TEST_CASE("closed-form conditional profile overlaps brute force") {
  ProjectionFactor p(2, 1);
  std::vector<Dyadic> eps{dy("1/2")};
  for (const char* delta : {"1/4", "1/2", "2"}) {
    for (unsigned N : {1U, 2U}) {
      std::vector<unsigned> Ns{N};
      ProfileTable closed = conditional_profile(p, 2, dy(delta), Ns, eps);
      ProfileTable brute = conditional_profile_enumerated(
          [](unsigned n) { return all_words(2, 2, n); },
          [&](const LatticeWord& w) { return apply_factor(p, w); }, dy(delta), Ns, eps);
      const auto& c = closed.rows[0];
      const auto& b = brute.rows[0];
      CAPTURE(delta);
      CAPTURE(N);
      CHECK(*c.count_lower <= *b.count_upper);
      CHECK(*b.count_lower <= *c.count_upper);
    }
  }
}

TEST_CASE("conditional profiles are subadditive") {
  ProjectionFactor p(2, 1);
  std::vector<unsigned> Ns;
  for (unsigned N = 1; N <= 12; ++N) Ns.push_back(N);
  for (const char* e : {"1/4", "1/8"}) {
    std::vector<Dyadic> eps{dy(e)};
    ProfileTable t = conditional_profile(p, 4, dy("1/8"), Ns, eps);
    CHECK(check_subadditivity(log_sequence(t, eps[0])).empty());
  }
}
