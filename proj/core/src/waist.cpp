#include "mdim/waist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mdim/parallel.hpp"

namespace mdim {

namespace {

constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 22;
constexpr std::uint64_t kMaxImageGrid = std::uint64_t{1} << 16;

bool target_less(const TargetPoint& a, const TargetPoint& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Rational rational_pow(const Rational& base, int exponent) {
  Rational out = 1;
  const Rational b = exponent >= 0 ? base : Rational(1) / base;
  for (int i = 0; i < std::abs(exponent); ++i) out *= b;
  return out;
}

/// Axis-aligned box with integer endpoints at scale 2^Q.
struct IntBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
};

/// Lebesgue measure of the union of boxes clipped to [0, 2^Q]^n, times 2^(Qn).
BigInt union_volume(unsigned n, unsigned Q, const std::vector<IntBox>& boxes) {
  const std::int64_t side = std::int64_t{1} << Q;
  std::vector<IntBox> clipped;
  clipped.reserve(boxes.size());
  for (const auto& b : boxes) {
    IntBox c{b.lo, b.hi};
    bool empty = false;
    for (unsigned i = 0; i < n; ++i) {
      c.lo[i] = std::clamp<std::int64_t>(c.lo[i], 0, side);
      c.hi[i] = std::clamp<std::int64_t>(c.hi[i], 0, side);
      if (c.lo[i] >= c.hi[i]) empty = true;
    }
    if (!empty) clipped.push_back(std::move(c));
  }
  if (clipped.empty()) return 0;

  std::vector<std::vector<std::int64_t>> axis(n);
  for (const auto& b : clipped) {
    for (unsigned i = 0; i < n; ++i) {
      axis[i].push_back(b.lo[i]);
      axis[i].push_back(b.hi[i]);
    }
  }
  std::vector<std::size_t> dims(n);
  std::vector<std::size_t> stride(n);
  std::size_t total = 1;
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    auto& v = axis[i];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    dims[i] = v.size();
    stride[i] = total;
    total *= dims[i];
  }
  std::vector<std::int32_t> diff(total, 0);
  std::vector<std::size_t> lo_idx(n);
  std::vector<std::size_t> hi_idx(n);
  for (const auto& b : clipped) {
    for (unsigned i = 0; i < n; ++i) {
      lo_idx[i] = std::lower_bound(axis[i].begin(), axis[i].end(), b.lo[i]) - axis[i].begin();
      hi_idx[i] = std::lower_bound(axis[i].begin(), axis[i].end(), b.hi[i]) - axis[i].begin();
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::size_t at = 0;
      int sign = 1;
      for (unsigned i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          at += hi_idx[i] * stride[i];
          sign = -sign;
        } else {
          at += lo_idx[i] * stride[i];
        }
      }
      diff[at] += sign;
    }
  }
  for (unsigned i = 0; i < n; ++i) {
    for (std::size_t at = 0; at < total; ++at) {
      if ((at / stride[i]) % dims[i] != 0) diff[at] += diff[at - stride[i]];
    }
  }
  BigInt volume = 0;
  std::vector<std::size_t> idx(n);
  for (std::size_t at = 0; at < total; ++at) {
    if (diff[at] <= 0) continue;
    std::size_t rest = at;
    bool interior = true;
    BigInt cell = 1;
    for (unsigned i = 0; i < n; ++i) {
      idx[i] = rest / stride[i];
      rest %= stride[i];
      if (idx[i] + 1 >= dims[i]) {
        interior = false;
        break;
      }
      cell *= axis[i][idx[i] + 1] - axis[i][idx[i]];
    }
    if (interior) volume += cell;
  }
  return volume;
}

std::int64_t scaled(const Dyadic& d, unsigned Q) { return d.numerator_at(Q).convert_to<std::int64_t>(); }

unsigned max_exp(unsigned a, const Dyadic& d) { return std::max(a, d.exp()); }

std::int64_t box_gap(const IntBox& a, const IntBox& b) {
  std::int64_t gap = 0;
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    gap = std::max({gap, b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]});
  }
  return gap;
}

}  // namespace

GridMap::GridMap(unsigned n, unsigned m, unsigned q, std::vector<TargetPoint> values)
    : n_(n), m_(m), q_(q), values_(std::move(values)) {
  if (n == 0 || m == 0) throw std::invalid_argument("grid map needs n, m >= 1");
  if (q > 20) throw std::invalid_argument("grid resolution q too large");
  BigInt expected = ipow(BigInt((std::uint64_t{1} << q) + 1), n);
  if (expected > kMaxNodes) throw CapExceeded("grid map with " + to_string(expected) + " nodes exceeds cap");
  if (BigInt(values_.size()) != expected) {
    throw std::invalid_argument("grid map needs " + to_string(expected) + " node values, got " +
                                std::to_string(values_.size()));
  }
  for (const auto& v : values_) {
    if (v.size() != m) throw std::invalid_argument("node value of wrong target dimension");
  }
  index_cells();
}

GridMap GridMap::from_function(unsigned n, unsigned m, unsigned q,
                               const std::function<TargetPoint(const DyadicVec&)>& fn) {
  std::vector<TargetPoint> values;
  for_each_grid_point(QGrid{n, q}, [&](const DyadicVec& x) { values.push_back(fn(x)); }, kMaxNodes);
  return {n, m, q, std::move(values)};
}

std::uint64_t GridMap::node_index(const std::vector<std::uint64_t>& idx) const {
  std::uint64_t at = 0;
  for (unsigned i = 0; i < n_; ++i) at = at * (side() + 1) + idx[i];
  return at;
}

std::vector<std::uint64_t> GridMap::cell_coords(std::uint64_t cell) const {
  std::vector<std::uint64_t> idx(n_);
  for (int i = static_cast<int>(n_) - 1; i >= 0; --i) {
    idx[i] = cell % side();
    cell /= side();
  }
  return idx;
}

DyadicVec GridMap::node_point(std::uint64_t node) const {
  std::vector<Dyadic> c(n_);
  for (int i = static_cast<int>(n_) - 1; i >= 0; --i) {
    c[i] = Dyadic(BigInt(node % (side() + 1)), q_);
    node /= side() + 1;
  }
  return DyadicVec(std::move(c));
}

DyadicVec GridMap::cell_center(std::uint64_t cell) const {
  const auto idx = cell_coords(cell);
  std::vector<Dyadic> c(n_);
  for (unsigned i = 0; i < n_; ++i) c[i] = Dyadic(BigInt(2 * idx[i] + 1), q_ + 1);
  return DyadicVec(std::move(c));
}

void GridMap::index_cells() {
  std::uint64_t cells = 1;
  for (unsigned i = 0; i < n_; ++i) cells *= side();
  cell_lo_.assign(cells, TargetPoint(m_));
  cell_hi_.assign(cells, TargetPoint(m_));
  center_.assign(cells, TargetPoint(m_, Rational(0)));
  cell_lo_d_.assign(cells * m_, 0.0);
  cell_hi_d_.assign(cells * m_, 0.0);
  const std::uint64_t corners = std::uint64_t{1} << n_;
  for (std::uint64_t c = 0; c < cells; ++c) {
    auto idx = cell_coords(c);
    for (std::uint64_t mask = 0; mask < corners; ++mask) {
      std::vector<std::uint64_t> node(idx);
      for (unsigned i = 0; i < n_; ++i) node[i] += (mask >> (n_ - 1 - i)) & 1U;
      const auto& v = values_[node_index(node)];
      for (unsigned j = 0; j < m_; ++j) {
        if (mask == 0 || v[j] < cell_lo_[c][j]) cell_lo_[c][j] = v[j];
        if (mask == 0 || v[j] > cell_hi_[c][j]) cell_hi_[c][j] = v[j];
        center_[c][j] += v[j];
      }
    }
    for (unsigned j = 0; j < m_; ++j) {
      center_[c][j] /= corners;
      cell_lo_d_[c * m_ + j] = to_double(cell_lo_[c][j]);
      cell_hi_d_[c * m_ + j] = to_double(cell_hi_[c][j]);
    }
  }
}

TargetPoint eval_map(const GridMap& f, const DyadicVec& x) {
  if (x.dim() != f.n()) throw std::invalid_argument("point dimension does not match the map");
  if (!x.in_unit_cube()) throw std::invalid_argument("point outside [0,1]^n");
  std::vector<std::uint64_t> cell(f.n());
  std::vector<Rational> lambda(f.n());
  for (unsigned i = 0; i < f.n(); ++i) {
    const Rational u = x[i].to_rational() * pow2(static_cast<int>(f.q()));
    BigInt c = floor(u);
    if (c >= BigInt(f.side())) c = f.side() - 1;
    cell[i] = c.convert_to<std::uint64_t>();
    lambda[i] = u - Rational(c);
  }
  TargetPoint out(f.m(), Rational(0));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.n()); ++mask) {
    Rational w = 1;
    std::vector<std::uint64_t> node(cell);
    for (unsigned i = 0; i < f.n(); ++i) {
      if ((mask >> (f.n() - 1 - i)) & 1U) {
        node[i] += 1;
        w *= lambda[i];
      } else {
        w *= 1 - lambda[i];
      }
    }
    if (w == 0) continue;
    const auto& v = f.values()[f.node_index(node)];
    for (unsigned j = 0; j < f.m(); ++j) out[j] += w * v[j];
  }
  return out;
}

FiberApprox fiber_cells(const GridMap& f, const TargetPoint& t) {
  if (t.size() != f.m()) throw std::invalid_argument("target dimension does not match the map");
  FiberApprox fa;
  fa.n = f.n();
  fa.q = f.q();
  fa.t = t;
  const unsigned m = f.m();
  std::vector<double> td(m);
  std::vector<double> tol(m);
  for (unsigned j = 0; j < m; ++j) {
    td[j] = to_double(t[j]);
    tol[j] = 1e-9 * (1.0 + std::abs(td[j]));
  }
  const auto& lo_d = f.cell_min_approx();
  const auto& hi_d = f.cell_max_approx();
  std::vector<std::uint64_t> corner_nodes;
  for (std::uint64_t c = 0; c < f.cell_count(); ++c) {
    bool keep = true;
    for (unsigned j = 0; j < m && keep; ++j) {
      if (td[j] < lo_d[c * m + j] - tol[j] || td[j] > hi_d[c * m + j] + tol[j]) {
        keep = false;
      } else if (t[j] < f.cell_min(c)[j] || t[j] > f.cell_max(c)[j]) {
        keep = false;
      }
    }
    if (!keep) continue;
    fa.cells.push_back(c);
    bool certified = (m == 1);
    if (f.center_value(c) == t) {
      fa.exact_points.push_back(f.cell_center(c));
      certified = true;
    }
    const auto idx = f.cell_coords(c);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.n()); ++mask) {
      std::vector<std::uint64_t> node(idx);
      for (unsigned i = 0; i < f.n(); ++i) node[i] += (mask >> (f.n() - 1 - i)) & 1U;
      const std::uint64_t at = f.node_index(node);
      if (f.values()[at] == t) {
        corner_nodes.push_back(at);
        certified = true;
      }
    }
    fa.certified.push_back(certified);
  }
  std::sort(corner_nodes.begin(), corner_nodes.end());
  corner_nodes.erase(std::unique(corner_nodes.begin(), corner_nodes.end()), corner_nodes.end());
  for (auto at : corner_nodes) fa.exact_points.push_back(f.node_point(at));
  std::sort(fa.exact_points.begin(), fa.exact_points.end());
  return fa;
}

BoundedValue neighborhood_measure(const FiberApprox& fa, const Dyadic& r) {
  if (r <= Dyadic(0)) throw std::invalid_argument("neighborhood radius must be positive");
  const Dyadic h(1, fa.q);
  const Dyadic shrunk = r - h;
  unsigned Q = std::max(fa.q + 1, r.exp());
  Q = max_exp(Q, shrunk);
  if (static_cast<std::uint64_t>(Q) * fa.n > 62) throw CapExceeded("neighborhood measure scale too fine");
  const std::int64_t R = scaled(r, Q);
  const std::int64_t cell_side = std::int64_t{1} << (Q - fa.q);

  const auto cell_box = [&](std::uint64_t cell, std::int64_t pad) {
    IntBox b{std::vector<std::int64_t>(fa.n), std::vector<std::int64_t>(fa.n)};
    const std::uint64_t side = std::uint64_t{1} << fa.q;
    for (int i = static_cast<int>(fa.n) - 1; i >= 0; --i) {
      const auto c = static_cast<std::int64_t>(cell % side);
      cell /= side;
      b.lo[i] = c * cell_side - pad;
      b.hi[i] = (c + 1) * cell_side + pad;
    }
    return b;
  };

  std::vector<IntBox> outer;
  outer.reserve(fa.cells.size());
  for (auto c : fa.cells) outer.push_back(cell_box(c, R));

  std::vector<IntBox> inner;
  for (const auto& p : fa.exact_points) {
    IntBox b{std::vector<std::int64_t>(fa.n), std::vector<std::int64_t>(fa.n)};
    for (unsigned i = 0; i < fa.n; ++i) {
      const std::int64_t v = scaled(p[i], Q);
      b.lo[i] = v - R;
      b.hi[i] = v + R;
    }
    inner.push_back(std::move(b));
  }
  if (shrunk > Dyadic(0)) {
    const std::int64_t S = scaled(shrunk, Q);
    for (std::size_t k = 0; k < fa.cells.size(); ++k) {
      if (fa.certified[k]) inner.push_back(cell_box(fa.cells[k], S));
    }
  }
  const Rational unit = pow2(-static_cast<int>(Q * fa.n));
  Rational hi = Rational(union_volume(fa.n, Q, outer)) * unit;
  Rational lo = Rational(union_volume(fa.n, Q, inner)) * unit;
  return {lo, hi};
}

std::vector<TargetPoint> waist_candidates(const GridMap& f) {
  std::vector<TargetPoint> out(f.values());
  for (std::uint64_t c = 0; c < f.cell_count(); ++c) out.push_back(f.center_value(c));
  TargetPoint lo = f.values().front();
  TargetPoint hi = f.values().front();
  for (const auto& v : f.values()) {
    for (unsigned j = 0; j < f.m(); ++j) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
    }
  }
  const Rational scale = pow2(static_cast<int>(f.q()));
  std::vector<BigInt> first(f.m());
  std::vector<BigInt> last(f.m());
  BigInt count = 1;
  for (unsigned j = 0; j < f.m(); ++j) {
    first[j] = ceil(lo[j] * scale);
    last[j] = floor(hi[j] * scale);
    count *= last[j] < first[j] ? BigInt(0) : BigInt(last[j] - first[j] + 1);
  }
  if (count > 0 && count <= kMaxImageGrid) {
    std::vector<BigInt> cur(first);
    while (true) {
      TargetPoint t(f.m());
      for (unsigned j = 0; j < f.m(); ++j) t[j] = Rational(cur[j]) / scale;
      out.push_back(std::move(t));
      int j = static_cast<int>(f.m()) - 1;
      while (j >= 0 && cur[j] == last[j]) {
        cur[j] = first[j];
        --j;
      }
      if (j < 0) break;
      ++cur[j];
    }
  }
  std::sort(out.begin(), out.end(), target_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WaistMeasureReport waist_check_measure(const GridMap& f, const std::vector<Dyadic>& rs, unsigned threads) {
  if (rs.empty()) throw std::invalid_argument("waist check needs at least one radius");
  for (const auto& r : rs) {
    if (r <= Dyadic(0) || r >= Dyadic(1, 1)) throw std::invalid_argument("radius must lie in (0, 1/2)");
  }
  const auto candidates = waist_candidates(f);
  std::vector<Rational> bounds;
  for (const auto& r : rs) bounds.push_back(rational_pow(r.to_rational() / 2, static_cast<int>(f.m())));

  std::vector<WaistCandidate> results(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const FiberApprox fa = fiber_cells(f, candidates[i]);
    WaistCandidate wc;
    wc.t = candidates[i];
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const BoundedValue mu = neighborhood_measure(fa, rs[k]);
      const Rational up = mu.hi / bounds[k];
      const Rational down = mu.lo / bounds[k];
      if (k == 0 || up < wc.min_ratio) wc.min_ratio = up;
      if (k == 0 || down < wc.min_ratio_lower) wc.min_ratio_lower = down;
    }
    results[i] = std::move(wc);
  });

  TargetPoint mid(f.m());
  {
    TargetPoint lo = f.values().front();
    TargetPoint hi = f.values().front();
    for (const auto& v : f.values()) {
      for (unsigned j = 0; j < f.m(); ++j) {
        lo[j] = std::min(lo[j], v[j]);
        hi[j] = std::max(hi[j], v[j]);
      }
    }
    for (unsigned j = 0; j < f.m(); ++j) mid[j] = (lo[j] + hi[j]) / 2;
  }
  const auto offset = [&](const TargetPoint& t) {
    Rational d = 0;
    for (unsigned j = 0; j < f.m(); ++j) d = std::max(d, Rational(abs(t[j] - mid[j])));
    return d;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    const auto& a = results[i];
    const auto& b = results[best];
    if (a.min_ratio != b.min_ratio) {
      if (a.min_ratio > b.min_ratio) best = i;
      continue;
    }
    if (a.min_ratio_lower != b.min_ratio_lower) {
      if (a.min_ratio_lower > b.min_ratio_lower) best = i;
      continue;
    }
    if (offset(a.t) < offset(b.t)) best = i;
  }

  WaistMeasureReport report;
  report.best_t = results[best].t;
  report.best_ratio = results[best].min_ratio;
  const FiberApprox fa = fiber_cells(f, report.best_t);
  report.fiber_cells = fa.cells.size();
  report.pass = true;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    WaistRCheck rc;
    rc.r = rs[k];
    rc.measure = neighborhood_measure(fa, rs[k]);
    rc.bound = bounds[k];
    rc.ratio_upper = rc.measure.hi / rc.bound;
    rc.pass = rc.measure.hi >= rc.bound;
    rc.certified = rc.measure.lo >= rc.bound;
    report.pass = report.pass && rc.pass;
    report.per_r.push_back(std::move(rc));
  }
  report.label = report.pass ? "pass" : "grid-resolution refutation candidate";
  report.candidates = std::move(results);
  return report;
}

WaistCoverReport waist_check_cover(const GridMap& f, const std::vector<Dyadic>& rs, const TargetPoint& t) {
  const FiberApprox fa = fiber_cells(f, t);
  WaistCoverReport report;
  report.t = t;
  report.pass = true;
  for (const auto& r : rs) {
    if (r <= Dyadic(0)) throw std::invalid_argument("radius must be positive");
    const unsigned Q = std::max(fa.q + 1, r.exp());
    const std::int64_t R = scaled(r, Q);
    const std::int64_t cell_side = std::int64_t{1} << (Q - fa.q);
    std::vector<IntBox> regions;
    for (const auto& p : fa.exact_points) {
      IntBox b{std::vector<std::int64_t>(fa.n), std::vector<std::int64_t>(fa.n)};
      for (unsigned i = 0; i < fa.n; ++i) b.lo[i] = b.hi[i] = scaled(p[i], Q);
      regions.push_back(std::move(b));
    }
    for (std::size_t k = 0; k < fa.cells.size(); ++k) {
      if (!fa.certified[k]) continue;
      const auto idx = f.cell_coords(fa.cells[k]);
      IntBox b{std::vector<std::int64_t>(fa.n), std::vector<std::int64_t>(fa.n)};
      for (unsigned i = 0; i < fa.n; ++i) {
        b.lo[i] = static_cast<std::int64_t>(idx[i]) * cell_side;
        b.hi[i] = b.lo[i] + cell_side;
      }
      regions.push_back(std::move(b));
    }
    std::vector<const IntBox*> chosen;
    for (const auto& b : regions) {
      bool far = true;
      for (const IntBox* c : chosen) {
        if (box_gap(*c, b) < R) {
          far = false;
          break;
        }
      }
      if (far) chosen.push_back(&b);
    }
    WaistCoverCheck cc;
    cc.r = r;
    cc.separated = chosen.size();
    cc.bound = rational_pow(Rational(1, 8), static_cast<int>(f.n())) *
               rational_pow(Rational(1) / r.to_rational(), static_cast<int>(f.n()) - static_cast<int>(f.m()));
    cc.pass = Rational(cc.separated) >= cc.bound;
    for (const IntBox* c : chosen) {
      std::vector<Dyadic> lo(fa.n);
      std::vector<Dyadic> hi(fa.n);
      for (unsigned i = 0; i < fa.n; ++i) {
        lo[i] = Dyadic(BigInt(c->lo[i]), Q);
        hi[i] = Dyadic(BigInt(c->hi[i]), Q);
      }
      cc.witness.emplace_back(DyadicVec(std::move(lo)), DyadicVec(std::move(hi)));
    }
    report.pass = report.pass && cc.pass;
    report.per_r.push_back(std::move(cc));
  }
  return report;
}

WaistCoverReport waist_check_cover(const GridMap& f, const std::vector<Dyadic>& rs, unsigned threads) {
  return waist_check_cover(f, rs, waist_check_measure(f, rs, threads).best_t);
}

GridMap projection_map(unsigned n, unsigned m, unsigned q) {
  if (m > n) throw std::invalid_argument("projection needs m <= n");
  return GridMap::from_function(n, m, q, [m](const DyadicVec& x) {
    TargetPoint t;
    for (unsigned j = 0; j < m; ++j) t.push_back(x[j].to_rational());
    return t;
  });
}

GridMap identity_map(unsigned n, unsigned q) { return projection_map(n, n, q); }

GridMap constant_map(unsigned n, unsigned m, unsigned q, const TargetPoint& value) {
  if (value.size() != m) throw std::invalid_argument("constant value has wrong dimension");
  return GridMap::from_function(n, m, q, [&value](const DyadicVec&) { return value; });
}

GridMap saddle_map(unsigned q) {
  return GridMap::from_function(2, 1, q, [](const DyadicVec& x) {
    const Rational u = x[0].to_rational() - Rational(1, 2);
    const Rational v = x[1].to_rational() - Rational(1, 2);
    return TargetPoint{u * u - v * v};
  });
}

std::vector<std::string> builtin_map_names() {
  return {"projection_2_1", "projection_3_1", "projection_3_2", "identity_1", "identity_2",
          "constant_2_1",   "constant_3_1",   "constant_2_2",   "saddle"};
}

GridMap builtin_map(const std::string& name, unsigned q) {
  const auto dims = [&](std::size_t prefix) {
    const std::string rest = name.substr(prefix);
    const auto us = rest.find('_');
    if (us == std::string::npos) throw std::invalid_argument("unknown builtin map: " + name);
    return std::pair<unsigned, unsigned>(std::stoul(rest.substr(0, us)), std::stoul(rest.substr(us + 1)));
  };
  if (name.rfind("projection_", 0) == 0) {
    const auto [n, m] = dims(11);
    return projection_map(n, m, q);
  }
  if (name.rfind("constant_", 0) == 0) {
    const auto [n, m] = dims(9);
    return constant_map(n, m, q, TargetPoint(m, Rational(1, 3)));
  }
  if (name.rfind("identity_", 0) == 0) return identity_map(std::stoul(name.substr(9)), q);
  if (name == "saddle") return saddle_map(q);
  throw std::invalid_argument("unknown builtin map: " + name);
}

}  // namespace mdim
