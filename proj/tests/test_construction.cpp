#include <doctest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "mdim/construction.hpp"
#include "oracles.hpp"

using namespace mdim;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

std::vector<Dyadic> vals(const Block& b) {
  std::vector<Dyadic> out;
  for (const auto& s : b) out.push_back(s[0]);
  return out;
}

}  // namespace

TEST_CASE("pair circuits cover every ordered pair once") {
  for (std::uint64_t k = 1; k <= 12; ++k) {
    auto seq = pair_circuit(k);
    CHECK(seq.size() == k * k + 1);
    CHECK(oracle::covers_all_pairs(seq, k));
    CHECK(seq.front() == seq.back());
    for (auto v : seq) CHECK(v < k);
  }
  CHECK(pair_circuit(2) == std::vector<std::uint64_t>{0, 0, 1, 1, 0});
}

TEST_CASE("nets") {
  CHECK(net_side(1) == 1);
  CHECK(net_side(2) == 2);
  CHECK(net_side(3) == 2);
  CHECK(net_side(4) == 4);
  CHECK(net_values(1) == std::vector<Dyadic>{dy("1/2")});
  CHECK(net_values(2) == std::vector<Dyadic>{dy("1/4"), dy("3/4")});
  for (unsigned n = 1; n < 40; ++n) {
    CHECK(Rational(1, 2 * net_side(n)) < Rational(1, n));
    // every point of [0,1] is within 1/(2s) of a net value
    auto net = net_values(n);
    CHECK(net.front().to_rational() == Rational(1, 2 * net_side(n)));
    CHECK(net.back().to_rational() == 1 - Rational(1, 2 * net_side(n)));
  }
}

TEST_CASE("waypoints visit every ordered pair of net blocks") {
  Construction c = build_construction(1, Rational(1, 2), 3);
  const Level& l1 = c.level(1);
  CHECK(l1.q == 2);
  REQUIRE(l1.waypoints.size() == 2);
  CHECK(vals(l1.waypoints[0]) == std::vector<Dyadic>{dy("1/2")});
  CHECK(vals(l1.waypoints[1]) == std::vector<Dyadic>{dy("1/2")});

  const Level& l2 = c.level(2);
  const std::uint64_t nu = std::uint64_t{1} << l2.M;
  CHECK(l2.q == nu * nu + 1);
  std::vector<Block> distinct = l2.waypoints;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  CHECK(distinct.size() == nu);
  std::vector<std::uint64_t> ids;
  for (const auto& w : l2.waypoints) {
    CHECK(l2.block_set(1).contains(w));
    for (std::uint64_t i = 0; i < l2.N; ++i) {
      if (l2.free_slot[i]) {
        CHECK((w[i][0] == dy("1/4") || w[i][0] == dy("3/4")));
      }
    }
    ids.push_back(static_cast<std::uint64_t>(std::lower_bound(distinct.begin(), distinct.end(), w) - distinct.begin()));
  }
  CHECK(oracle::covers_all_pairs(ids, nu));
}

TEST_CASE("waypoint density on random pairs") {
  Construction c = build_construction(1, Rational(1, 2), 3);
  std::mt19937_64 rng(17);
  for (unsigned n = 1; n <= 2; ++n) {
    const Level& lv = c.level(n);
    for (int trial = 0; trial < 100; ++trial) {
      Block u = fill_block(lv, random_cube_point(c, n, 4, rng));
      Block v = fill_block(lv, random_cube_point(c, n, 4, rng));
      CHECK(waypoint_distance(lv, u, v).to_rational() < Rational(1, n));
    }
  }
}

TEST_CASE("level arithmetic") {
  Construction c = build_construction(1, Rational(1, 2), 2);
  const Level& l1 = c.level(1);
  CHECK(l1.p == 4);
  CHECK(l1.r == Rational(1, 2));
  CHECK(c.level(2).N == 4);
  CHECK(c.level(2).M == 2);
  CHECK(c.achieved_ratio == Rational(1, 2));

  for (auto [a, s, depth] : {std::tuple{1U, Rational(1, 2), 3U}, std::tuple{2U, Rational(1), 2U},
                             std::tuple{2U, Rational(3, 2), 2U}, std::tuple{3U, Rational(1, 3), 2U},
                             std::tuple{1U, Rational(0), 3U}}) {
    Construction k = build_construction(a, s, depth);
    Rational prod = 1;
    Rational prev_ratio = a;
    for (unsigned n = 1; n <= depth; ++n) {
      const Level& lv = k.level(n);
      Rational ratio = Rational(a * lv.M) / lv.N;
      CHECK(ratio == a * prod);
      CHECK(ratio <= prev_ratio);
      CHECK(ratio >= s);
      prev_ratio = ratio;
      std::uint64_t free = 0;
      for (bool f : lv.free_slot) free += f;
      CHECK(free == lv.M);
      CHECK(lv.free_slot.size() == lv.N);
      if (n < depth) {
        const Level& next = k.level(n + 1);
        CHECK(lv.p > lv.q);
        CHECK(lv.q > 1);
        CHECK(lv.r == Rational(lv.q, lv.p));
        CHECK(next.N == lv.p * lv.N);
        CHECK(next.M == (lv.p - lv.q) * lv.M);
        prod *= 1 - lv.r;
      }
    }
    CHECK(k.achieved_ratio >= s);
  }
  CHECK_THROWS_AS(build_construction(2, Rational(1), 3), CapExceeded);
  CHECK_THROWS_AS(build_construction(2, Rational(2), 2), std::invalid_argument);
}

TEST_CASE("next level block structure") {
  Construction c = build_construction(1, Rational(1, 2), 3);
  const Level& l2 = c.level(2);
  const Level& l3 = c.level(3);
  for (std::uint64_t i = 0; i < l3.N; ++i) {
    std::uint64_t block = i / l2.N, off = i % l2.N;
    if (block < l2.p - l2.q) {
      CHECK(l3.free_slot[i] == l2.free_slot[off]);
    } else {
      CHECK_FALSE(l3.free_slot[i]);
      CHECK(l3.fixed[i] == l2.waypoints[block - (l2.p - l2.q)][off]);
    }
  }
}

TEST_CASE("psi window isometry and expansivity") {
  Construction c = build_construction(2, Rational(1), 2);
  std::mt19937_64 rng(8);
  for (unsigned n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      CubePoint x = random_cube_point(c, n, 3, rng);
      CubePoint y = random_cube_point(c, n, 3, rng);
      LatticeWord px = psi_n(c, n, x, 2), py = psi_n(c, n, y, 2);
      auto N = static_cast<std::int64_t>(c.level(n).N);
      CHECK(window(px, 0, N - 1) == fill_block(c.level(n), x));
      CHECK(linf_dist(window(px, 0, N - 1), window(py, 0, N - 1)) == linf_dist(x, y));
      CHECK(linf_dist(x, y).to_rational() <= metric_dN(px, py, static_cast<unsigned>(N), 6).lo);
    }
  }
  CubePoint zero(c.level(1).M, DyadicVec::zeros(2));
  CHECK(metric_D(psi_n(c, 1, zero, 2), psi_n(c, 1, zero, 2), 6) == BoundedValue(Rational(0)));
}

TEST_CASE("psi words lie in the block system of the top level") {
  Construction c = build_construction(1, Rational(1, 2), 3);
  std::mt19937_64 rng(2);
  for (unsigned n = 1; n <= 3; ++n) {
    CubePoint x = random_cube_point(c, n, 3, rng);
    LatticeWord w = psi_n(c, n, x, 3);
    CHECK(w.lo() == -static_cast<std::int64_t>(c.level(3).N));
    CHECK(w.period() == 3 * c.level(3).N);
    auto phase = block_membership(w, c.level(3).block_set(1));
    REQUIRE(phase);
    CHECK(*phase == 0);
  }
}

TEST_CASE("expansivity report") {
  Construction c = build_construction(1, Rational(1, 2), 2);
  bool exhaustive = false;
  auto pairs = quantized_pairs(c, 1, 3, 10000, 1, &exhaustive);
  CHECK(exhaustive);
  CHECK(pairs.size() == 36);
  ExpansivityReport r = verify_expansivity(c, 1, pairs);
  CHECK(r.pass);
  CHECK(r.pairs_checked == 36);

  CubePoint x(c.level(2).M, DyadicVec::zeros(1));
  CubePoint y(c.level(2).M, DyadicVec({Dyadic(1)}));
  ExpansivityReport corner = verify_expansivity(c, 2, {{x, y}});
  CHECK(corner.pass);
  LatticeWord px = psi_n(c, 2, x, 2), py = psi_n(c, 2, y, 2);
  auto N = static_cast<std::int64_t>(c.level(2).N);
  CHECK(linf_dist(window(px, 0, N - 1), window(py, 0, N - 1)) == Dyadic(1));

  ExpansivityReport same = verify_expansivity(c, 2, {{x, x}});
  CHECK(same.pass);

  bool ex2 = true;
  auto sampled = quantized_pairs(c, 2, 3, 50, 4, &ex2);
  CHECK_FALSE(ex2);
  CHECK(sampled.size() == 50);
  CHECK(sampled == quantized_pairs(c, 2, 3, 50, 4));
}

TEST_CASE("syndetic recurrence") {
  Construction c = build_construction(1, Rational(1, 2), 2);
  SyndeticReport s = syndetic_check(c, 1, 2);
  CHECK(s.pass);
  CHECK(s.missing == 0);
  CHECK(s.gap_bound == 8);
  CHECK(s.worst_gap <= 8);
  CHECK(s.error < 1);

  Construction d = build_construction(1, Rational(1, 2), 3);
  SyndeticReport s2 = syndetic_check(d, 2, 3);
  CHECK(s2.pass);
  CHECK(s2.gap_bound == 2 * d.level(3).N);
  CHECK(s2.error < Rational(1, 2));
  CHECK_THROWS(syndetic_check(c, 2, 2));
}

TEST_CASE("construction embedding feeds the hypothesis checker") {
  Construction c = build_construction(2, Rational(1), 2);
  std::vector<EmbeddingSample> fam;
  for (unsigned n = 1; n <= 2; ++n) {
    EmbeddingSample s = construction_embedding(c, n, 2);
    s.pairs = quantized_pairs(c, n, 2, 200, 3);
    fam.push_back(std::move(s));
  }
  HypothesisReport r = hypothesis_check(fam);
  CHECK(r.pass);
  CHECK(r.ratio_trend == "non-increasing");
}
