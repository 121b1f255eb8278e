#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "mdim/waist.hpp"
#include "oracles.hpp"

using namespace mdim;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

/// Upper neighborhood measure recomputed from the cell list alone.
Rational oracle_upper(const GridMap& f, const FiberApprox& fa, const Dyadic& r) {
  const unsigned Q = std::max(f.q(), r.exp());
  const long side = 1L << Q;
  const long cell = 1L << (Q - f.q());
  const long rad = static_cast<long>(r.numerator_at(Q));
  std::vector<std::vector<std::pair<long, long>>> boxes;
  for (auto c : fa.cells) {
    auto coords = f.cell_coords(c);
    std::vector<std::pair<long, long>> box;
    for (auto k : coords) {
      long lo = static_cast<long>(k) * cell - rad;
      long hi = (static_cast<long>(k) + 1) * cell + rad;
      box.emplace_back(std::max(0L, lo), std::min(side, hi));
    }
    boxes.push_back(box);
  }
  return oracle::union_measure(f.n(), Q, boxes);
}

}  // namespace

TEST_CASE("interpolation") {
  GridMap lin(1, 1, 1, {{Rational(0)}, {Rational(1, 2)}, {Rational(1)}});
  CHECK(eval_map(lin, DyadicVec({dy("1/4")})) == TargetPoint{Rational(1, 4)});
  CHECK(eval_map(lin, DyadicVec({dy("1/2")})) == TargetPoint{Rational(1, 2)});

  GridMap sad = saddle_map(2);
  for (std::uint64_t node = 0; node < sad.node_count(); ++node) {
    CHECK(eval_map(sad, sad.node_point(node)) == sad.values()[node]);
  }
  GridMap c = constant_map(2, 1, 2, {Rational(1, 3)});
  CHECK(eval_map(c, DyadicVec({dy("3/16"), dy("5/8")})) == TargetPoint{Rational(1, 3)});
  CHECK_THROWS(GridMap(1, 1, 1, {{Rational(0)}, {Rational(1)}}));
}

TEST_CASE("fiber cells") {
  GridMap p = projection_map(2, 1, 2);
  FiberApprox fa = fiber_cells(p, {Rational(1, 2)});
  CHECK(fa.cells.size() == 8);
  for (auto c : fa.cells) {
    auto k = p.cell_coords(c);
    CHECK((k[0] == 1 || k[0] == 2));
  }
  CHECK(fiber_cells(p, {Rational(2)}).cells.empty());
  GridMap c = constant_map(2, 1, 2, {Rational(1, 3)});
  CHECK(fiber_cells(c, {Rational(1, 3)}).cells.size() == 16);
}

TEST_CASE("fiber cells are an outer approximation") {
  std::mt19937_64 rng(4);
  for (const auto& name : {"saddle", "projection_3_2", "identity_2"}) {
    GridMap f = builtin_map(name, 3);
    std::uniform_int_distribution<long long> pick(0, (1LL << 4) - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Dyadic> x;
      std::vector<std::uint64_t> cell;
      for (unsigned i = 0; i < f.n(); ++i) {
        long long k = pick(rng);
        x.emplace_back(BigInt(2 * k + 1), 5);
        cell.push_back(static_cast<std::uint64_t>(k / 2));
      }
      TargetPoint t = eval_map(f, DyadicVec(x));
      FiberApprox fa = fiber_cells(f, t);
      std::uint64_t id = 0;
      for (auto k : cell) id = id * f.side() + k;
      CAPTURE(name);
      CHECK(std::binary_search(fa.cells.begin(), fa.cells.end(), id));
    }
  }
}

TEST_CASE("neighborhood measure") {
  GridMap p = projection_map(2, 1, 2);
  FiberApprox fa = fiber_cells(p, {Rational(1, 2)});
  BoundedValue m = neighborhood_measure(fa, dy("1/4"));
  CHECK(m.contains(Rational(1, 2)));
  CHECK(m.hi - m.lo <= Rational(1, 2));
  CHECK(neighborhood_measure(fa, dy("7/16")).hi == 1);

  FiberApprox empty = fiber_cells(p, {Rational(3)});
  CHECK(neighborhood_measure(empty, dy("1/4")) == BoundedValue(Rational(0)));
}

TEST_CASE("neighborhood measure agrees with cell counting") {
  for (const auto& name : {"saddle", "projection_2_1", "identity_2", "constant_2_1", "projection_3_1"}) {
    GridMap f = builtin_map(name, 3);
    for (const auto& t : waist_candidates(f)) {
      FiberApprox fa = fiber_cells(f, t);
      for (const char* r : {"1/8", "1/4", "3/8"}) {
        BoundedValue m = neighborhood_measure(fa, dy(r));
        CAPTURE(name);
        CHECK(m.hi == oracle_upper(f, fa, dy(r)));
        CHECK(m.lo <= m.hi);
        CHECK(m.lo >= 0);
      }
      if (std::string(name) == "saddle") break;
    }
  }
}

TEST_CASE("measure check examples") {
  std::vector<Dyadic> rs{dy("1/8"), dy("1/4"), dy("3/8")};
  WaistMeasureReport p = waist_check_measure(projection_map(2, 1, 3), rs, 1);
  CHECK(p.pass);
  CHECK(p.label == "pass");
  CHECK(p.best_t == TargetPoint{Rational(1, 2)});
  for (const auto& c : p.per_r) {
    CHECK(c.bound == c.r.to_rational() / 2);
    CHECK(c.measure.contains(std::min(Rational(1), 2 * c.r.to_rational())));
  }

  WaistMeasureReport k = waist_check_measure(constant_map(2, 1, 3, {Rational(1, 3)}), rs, 1);
  CHECK(k.pass);
  CHECK(k.best_t == TargetPoint{Rational(1, 3)});
  for (const auto& c : k.per_r) CHECK(c.measure == BoundedValue(Rational(1)));

  std::vector<Dyadic> quarter{dy("1/4")};
  WaistMeasureReport id = waist_check_measure(identity_map(2, 3), quarter, 1);
  CHECK(id.pass);
  CHECK(id.per_r[0].certified);
  CHECK(id.per_r[0].measure.lo >= Rational(1, 16));
  CHECK(id.best_t == TargetPoint{Rational(1, 2), Rational(1, 2)});

  std::vector<Dyadic> bad{dy("1/2")};
  CHECK_THROWS(waist_check_measure(identity_map(1, 2), bad));
}

TEST_CASE("measure check is independent of the thread count") {
  std::vector<Dyadic> rs{dy("1/8"), dy("1/4")};
  GridMap f = saddle_map(3);
  WaistMeasureReport a = waist_check_measure(f, rs, 1);
  WaistMeasureReport b = waist_check_measure(f, rs, 3);
  CHECK(a.best_t == b.best_t);
  CHECK(a.best_ratio == b.best_ratio);
  CHECK(a.candidates.size() == b.candidates.size());
}

TEST_CASE("cover check examples") {
  std::vector<Dyadic> quarter{dy("1/4")};
  WaistCoverReport p = waist_check_cover(projection_map(2, 1, 2), quarter, TargetPoint{Rational(1, 2)});
  CHECK(p.pass);
  CHECK(p.per_r[0].separated >= 5);
  CHECK(p.per_r[0].bound == Rational(1, 16));

  WaistCoverReport id = waist_check_cover(identity_map(2, 3), quarter, 1U);
  CHECK(id.pass);
  CHECK(id.per_r[0].bound == Rational(1, 64));
  CHECK(id.per_r[0].separated >= 1);

  WaistCoverReport k = waist_check_cover(constant_map(2, 1, 3, {Rational(1, 3)}), quarter,
                                         TargetPoint{Rational(1, 3)});
  CHECK(k.pass);
  CHECK(k.per_r[0].separated >= 9);
}

TEST_CASE("cover witnesses are pairwise separated") {
  std::vector<Dyadic> rs{dy("1/8"), dy("1/4")};
  for (const auto& name : {"saddle", "projection_3_1", "projection_2_1"}) {
    WaistCoverReport rep = waist_check_cover(builtin_map(name, 3), rs, 1U);
    CHECK(rep.pass);
    for (const auto& c : rep.per_r) {
      CHECK(c.witness.size() == c.separated);
      for (std::size_t i = 0; i < c.witness.size(); ++i) {
        for (std::size_t j = i + 1; j < c.witness.size(); ++j) {
          Dyadic gap(0);
          const auto& [alo, ahi] = c.witness[i];
          const auto& [blo, bhi] = c.witness[j];
          for (std::size_t d = 0; d < alo.dim(); ++d) {
            gap = std::max({gap, blo[d] - ahi[d], alo[d] - bhi[d]});
          }
          CHECK(gap >= c.r);
        }
      }
    }
  }
}

TEST_CASE("builtin names") {
  for (const auto& name : builtin_map_names()) {
    GridMap f = builtin_map(name, 2);
    std::uint64_t nodes = 1;
    for (unsigned i = 0; i < f.n(); ++i) nodes *= 5;
    CHECK(f.node_count() == nodes);
    CHECK(f.m() <= f.n());
  }
  CHECK_THROWS(builtin_map("nope", 2));
}
