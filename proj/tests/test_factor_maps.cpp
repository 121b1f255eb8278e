#include <doctest.h>

#include <cmath>
#include <random>

#include "mdim/factor_maps.hpp"
#include "oracles.hpp"

using namespace mdim;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

DyadicVec sym(std::initializer_list<const char*> c) {
  std::vector<Dyadic> v;
  for (const char* s : c) v.push_back(dy(s));
  return DyadicVec(v);
}

CubePoint random_point(std::mt19937_64& rng, unsigned a, unsigned n, unsigned q) {
  std::uniform_int_distribution<long long> pick(0, 1LL << q);
  CubePoint x;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Dyadic> c;
    for (unsigned j = 0; j < a; ++j) c.emplace_back(BigInt(pick(rng)), q);
    x.emplace_back(c);
  }
  return x;
}

double closed_upper(unsigned free_dim, unsigned N, unsigned k, unsigned m) {
  return free_dim * (1.0 + 2.0 * m / N) * std::log(std::ceil(6.0 * std::pow(2.0, k))) / (k * std::log(2.0));
}

}  // namespace

TEST_CASE("projection factor") {
  CHECK_THROWS(ProjectionFactor(1, 2));
  CHECK_THROWS(ProjectionFactor(2, 0));
  ProjectionFactor p(2, 1);
  LatticeWord x = LatticeWord::zero_fill(2, 0, {sym({"1/2", "3/4"})});
  CHECK(apply_factor(p, x).at(0) == sym({"1/2"}));

  ProjectionFactor id(2, 2);
  CHECK(apply_factor(id, x) == x);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    LatticeWord w = LatticeWord::periodic(3, -1, random_point(rng, 3, 4, 3));
    ProjectionFactor f(3, 2);
    for (int k : {-2, 1, 5}) CHECK(apply_factor(f, shift(w, k)) == shift(apply_factor(f, w), k));
  }
  CHECK_THROWS(apply_factor(ProjectionFactor(3, 1), x));
}

TEST_CASE("fiber bracket small case") {
  SlopeBracket b = fiber_cover_bracket(ProjectionFactor(2, 1), 1, dy("1/2"), 2);
  CHECK(b.count_lower == 3);
  CHECK(b.tail == 3);
  CHECK(std::abs(to_double(b.lower.lo) - std::log(3.0) / std::log(2.0)) < 1e-9);
  CHECK(b.lower.lo >= 1);
  CHECK(b.lower.hi <= b.upper.lo);

  // Brute force: the fiber over y is {(y, z)} with z on the grid; for zero-fill
  // words on index 0 the metric is |z - z'|.
  oracle::Table d(5, std::vector<Rational>(5));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) d[i][j] = Rational(std::abs(i - j), 4);
  }
  CHECK(b.count_lower == oracle::min_set_cover(d, Rational(1, 2)));

  SlopeBracket same = fiber_cover_bracket(ProjectionFactor(3, 3), 4, dy("1/4"), 3);
  CHECK(same.lower == BoundedValue(Rational(0)));
  CHECK(same.upper == BoundedValue(Rational(0)));

  CHECK_THROWS(fiber_cover_bracket(ProjectionFactor(2, 1), 1, dy("3/4"), 4));
  CHECK_THROWS(fiber_cover_bracket(ProjectionFactor(2, 1), 1, dy("1/4"), 2));
}

TEST_CASE("fiber bracket upper matches the closed form") {
  for (auto [a, b] : {std::pair{2U, 1U}, std::pair{3U, 1U}, std::pair{3U, 2U}}) {
    double prev = 1e9;
    for (unsigned k : {4U, 6U, 8U}) {
      unsigned N = 8 * k;
      SlopeBracket br = fiber_cover_bracket(ProjectionFactor(a, b), N, Dyadic(1, k), k + 1);
      double expect = closed_upper(a - b, N, k, k + 2);
      CHECK(br.tail == k + 2);
      CHECK(std::abs(to_double(br.upper.hi) - expect) < 1e-9);
      CHECK(br.lower.lo >= a - b);
      CHECK(to_double(br.upper.hi) < prev);
      prev = to_double(br.upper.hi);
    }
  }
}

TEST_CASE("bracket lower stays above a - b on a grid of cells") {
  ProjectionFactor p(3, 1);
  std::vector<unsigned> Ns{1, 2, 3, 8, 16};
  std::vector<Dyadic> eps{Dyadic(1, 1), Dyadic(1, 2), Dyadic(1, 3), Dyadic(1, 5)};
  ProfileTable t = bracket_table(p, Ns, eps, 6);
  CHECK(t.rows.size() == 20);
  for (const auto& row : t.rows) {
    CHECK(row.normalized->lo >= 2);
    CHECK(row.normalized->lo <= row.normalized->hi);
  }
}

TEST_CASE("hypothesis check on full-shift embeddings") {
  std::mt19937_64 rng(1);
  std::vector<EmbeddingSample> fam;
  for (unsigned n = 1; n <= 4; ++n) {
    EmbeddingSample s = full_shift_embedding(2, n);
    for (int i = 0; i < 40; ++i) s.pairs.emplace_back(random_point(rng, 2, n, 3), random_point(rng, 2, n, 3));
    fam.push_back(std::move(s));
  }
  HypothesisReport r = hypothesis_check(fam);
  CHECK(r.pass);
  CHECK(r.ratio_trend == "constant");
  for (const auto& lv : r.levels) CHECK(lv.ratio == 2);

  EmbeddingSample fixed = with_fixed_point(full_shift_embedding(1, 2),
                                           LatticeWord::periodic(1, 0, {sym({"1/2"})}));
  fixed.pairs.emplace_back(CubePoint{sym({"0"}), sym({"1"})}, CubePoint{sym({"1"}), sym({"0"})});
  CHECK(fixed.psi(fixed.pairs[0].first).size() == 2);
  std::vector<EmbeddingSample> one{fixed};
  CHECK(hypothesis_check(one).pass);
}

TEST_CASE("corrupted embedding yields a witness") {
  EmbeddingSample s = full_shift_embedding(1, 2);
  s.psi = [](const CubePoint&) { return ProductPoint{LatticeWord::zero_fill(1, 0, {sym({"0"})})}; };
  CubePoint x{sym({"0"}), sym({"0"})};
  CubePoint y{sym({"1/2"}), sym({"0"})};
  s.pairs.emplace_back(x, x);
  s.pairs.emplace_back(x, y);
  std::vector<EmbeddingSample> fam{s};
  HypothesisReport r = hypothesis_check(fam);
  CHECK_FALSE(r.pass);
  REQUIRE(r.levels[0].witness);
  CHECK(r.levels[0].witness->second == y);
  CHECK(r.levels[0].witness_distance == dy("1/2"));
  CHECK(r.levels[0].witness_dN == BoundedValue(Rational(0)));
}
