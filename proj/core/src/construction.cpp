#include "mdim/construction.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace mdim {

namespace {

unsigned log2_exact(std::uint64_t s) {
  unsigned k = 0;
  while ((std::uint64_t{1} << k) < s) ++k;
  return k;
}

Block repeat_append(Block out, const Block& part, std::uint64_t times) {
  for (std::uint64_t i = 0; i < times; ++i) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace

BlockSet Level::block_set(unsigned a) const {
  Block lo(N);
  Block hi(N);
  for (std::uint64_t i = 0; i < N; ++i) {
    if (free_slot[i]) {
      lo[i] = DyadicVec::zeros(a);
      hi[i] = DyadicVec(std::vector<Dyadic>(a, Dyadic(1)));
    } else {
      lo[i] = hi[i] = fixed[i];
    }
  }
  return BlockSet::box(a, static_cast<unsigned>(N), std::move(lo), std::move(hi));
}

const Level& Construction::level(unsigned n) const {
  if (n == 0 || n > levels.size()) {
    throw std::out_of_range("level " + std::to_string(n) + " outside 1.." + std::to_string(levels.size()));
  }
  return levels[n - 1];
}

std::uint64_t net_side(unsigned n) {
  if (n == 0) throw std::invalid_argument("net level must be >= 1");
  std::uint64_t s = 1;
  while (2 * s <= n) s *= 2;
  return s;
}

std::vector<Dyadic> net_values(unsigned n) {
  const std::uint64_t s = net_side(n);
  const unsigned e = log2_exact(s) + 1;
  std::vector<Dyadic> out;
  for (std::uint64_t j = 1; j <= s; ++j) out.emplace_back(BigInt(2 * j - 1), e);
  return out;
}

std::vector<std::uint64_t> pair_circuit(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("alphabet must be nonempty");
  constexpr unsigned order = 2;
  std::vector<std::uint64_t> a(k * order + 1, 0);
  std::vector<std::uint64_t> seq;
  std::function<void(unsigned, unsigned)> db = [&](unsigned t, unsigned p) {
    if (t > order) {
      if (order % p == 0) seq.insert(seq.end(), a.begin() + 1, a.begin() + p + 1);
      return;
    }
    a[t] = a[t - p];
    db(t + 1, p);
    for (std::uint64_t j = a[t - p] + 1; j < k; ++j) {
      a[t] = j;
      db(t + 1, t);
    }
  };
  db(1, 1);
  seq.push_back(seq.front());
  return seq;
}

Block fill_block(const Level& level, const std::vector<DyadicVec>& free) {
  if (free.size() != level.M) {
    throw std::invalid_argument("level " + std::to_string(level.n) + " needs " + std::to_string(level.M) +
                                " free symbols, got " + std::to_string(free.size()));
  }
  Block out(level.fixed);
  std::size_t k = 0;
  for (std::uint64_t i = 0; i < level.N; ++i) {
    if (level.free_slot[i]) {
      if (free[k].dim() != out[i].dim() || !free[k].in_unit_cube()) {
        throw std::invalid_argument("free symbol outside the alphabet cube");
      }
      out[i] = free[k++];
    }
  }
  return out;
}

std::vector<Block> build_waypoints(const Level& level, unsigned a, std::uint64_t cap) {
  const auto values = net_values(level.n);
  const std::uint64_t s = values.size();
  const std::uint64_t coords = level.M * a;
  const BigInt nu_big = ipow(BigInt(s), coords);
  if (nu_big > cap) throw CapExceeded("net of level " + std::to_string(level.n) + " has " + to_string(nu_big) +
                                      " points, cap " + std::to_string(cap));
  const auto nu = nu_big.convert_to<std::uint64_t>();
  if ((nu * nu + 1) * level.N > kMaxLevelSlots) {
    throw CapExceeded("waypoints of level " + std::to_string(level.n) + " need " +
                      std::to_string((nu * nu + 1) * level.N) + " symbols, cap " + std::to_string(kMaxLevelSlots));
  }

  const auto net_block = [&](std::uint64_t index) {
    std::vector<Dyadic> scalars(coords);
    for (std::uint64_t c = coords; c-- > 0;) {
      scalars[c] = values[index % s];
      index /= s;
    }
    std::vector<DyadicVec> free(level.M);
    for (std::uint64_t i = 0; i < level.M; ++i) {
      free[i] = DyadicVec(std::vector<Dyadic>(scalars.begin() + i * a, scalars.begin() + (i + 1) * a));
    }
    return fill_block(level, free);
  };

  const auto order = pair_circuit(nu);
  std::set<std::pair<std::uint64_t, std::uint64_t>> visited;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) visited.emplace(order[k], order[k + 1]);
  if (visited.size() != nu * nu) throw std::logic_error("waypoint circuit misses an ordered net pair");
  // net spacing: every coordinate lies within 1/(2s) < 1/n of a net value
  if (Rational(1, 2 * s) >= Rational(1, level.n)) throw std::logic_error("net too coarse for tolerance 1/n");

  std::vector<Block> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(net_block(i));
  return out;
}

Level build_level(Level& prev, unsigned a, const Rational& r_target) {
  if (r_target <= 0 || r_target > 1) throw std::invalid_argument("r_target must lie in (0, 1]");
  prev.net_side = net_side(prev.n);
  prev.waypoints = build_waypoints(prev, a);
  prev.q = static_cast<unsigned>(prev.waypoints.size());
  const BigInt p = std::max(BigInt(prev.q + 1), ceil(Rational(prev.q) / r_target));
  if (p * prev.N > kMaxLevelSlots) {
    throw CapExceeded("level " + std::to_string(prev.n + 1) + " would have " + to_string(BigInt(p * prev.N)) +
                      " symbols, cap " + std::to_string(kMaxLevelSlots));
  }
  prev.p = p.convert_to<unsigned>();
  prev.r = Rational(prev.q, prev.p);

  Level next;
  next.n = prev.n + 1;
  next.N = prev.N * prev.p;
  next.M = prev.M * (prev.p - prev.q);
  for (unsigned k = 0; k < prev.p - prev.q; ++k) {
    next.free_slot.insert(next.free_slot.end(), prev.free_slot.begin(), prev.free_slot.end());
    next.fixed.insert(next.fixed.end(), prev.fixed.begin(), prev.fixed.end());
  }
  for (const auto& w : prev.waypoints) {
    next.free_slot.insert(next.free_slot.end(), prev.N, false);
    next.fixed.insert(next.fixed.end(), w.begin(), w.end());
  }
  return next;
}

Construction build_construction(unsigned a, const Rational& s_target, unsigned depth) {
  if (a == 0) throw std::invalid_argument("alphabet dimension must be >= 1");
  if (s_target < 0 || s_target >= a) throw std::invalid_argument("target s must lie in [0, a)");
  if (depth == 0) throw std::invalid_argument("depth must be >= 1");
  Construction c;
  c.a = a;
  c.s_target = s_target;
  Level first;
  first.n = 1;
  first.N = 1;
  first.M = 1;
  first.free_slot = {true};
  first.fixed = {DyadicVec::zeros(a)};
  c.levels.push_back(std::move(first));
  for (unsigned n = 1; n < depth; ++n) {
    Level& cur = c.levels.back();
    const Rational ratio = Rational(a * cur.M) / cur.N;
    const Rational keep = s_target / ratio;
    const unsigned remaining = depth - n;
    const Rational r_target = (1 - keep) / remaining;
    Level next = build_level(cur, a, r_target);
    c.levels.push_back(std::move(next));
  }
  c.achieved_ratio = Rational(a * c.levels.back().M) / c.levels.back().N;
  return c;
}

Dyadic waypoint_distance(const Level& level, const Block& u, const Block& v) {
  if (level.waypoints.size() < 2) throw std::invalid_argument("level has no waypoint pairs");
  Dyadic best;
  for (std::size_t k = 0; k + 1 < level.waypoints.size(); ++k) {
    const Dyadic d = std::max(linf_dist(u, level.waypoints[k]), linf_dist(v, level.waypoints[k + 1]));
    if (k == 0 || d < best) best = d;
  }
  return best;
}

std::vector<Block> default_blocks(const Construction& c) {
  std::vector<Block> out;
  out.push_back(Block{DyadicVec::zeros(c.a)});
  for (std::size_t i = 0; i + 1 < c.levels.size(); ++i) {
    const Level& lv = c.levels[i];
    Block next = repeat_append({}, out.back(), lv.p - lv.q);
    for (const auto& w : lv.waypoints) next.insert(next.end(), w.begin(), w.end());
    out.push_back(std::move(next));
  }
  return out;
}

LatticeWord psi_n(const Construction& c, unsigned n, const std::vector<DyadicVec>& x, unsigned depth) {
  if (depth == 0 || depth > c.levels.size()) throw std::out_of_range("depth outside the built levels");
  if (n == 0 || n > depth) throw std::out_of_range("level outside 1..depth");
  const auto deltas = default_blocks(c);
  Block b = fill_block(c.level(n), x);
  for (unsigned m = n; m < depth; ++m) {
    const Level& lv = c.level(m);
    b = repeat_append(std::move(b), deltas[m - 1], lv.p - lv.q - 1);
    for (const auto& w : lv.waypoints) b.insert(b.end(), w.begin(), w.end());
  }
  const Block& delta = deltas[depth - 1];
  Block symbols(delta);
  symbols.insert(symbols.end(), b.begin(), b.end());
  symbols.insert(symbols.end(), delta.begin(), delta.end());
  return LatticeWord::periodic(c.a, -static_cast<std::int64_t>(delta.size()), std::move(symbols));
}

ExpansivityReport verify_expansivity(const Construction& c, unsigned n,
                                     const std::vector<std::pair<CubePoint, CubePoint>>& pairs, unsigned tail) {
  const Level& lv = c.level(n);
  const auto depth = static_cast<unsigned>(c.levels.size());
  ExpansivityReport rep;
  rep.n = n;
  rep.N = lv.N;
  rep.tail = tail;
  std::map<CubePoint, LatticeWord> cache;
  const auto image = [&](const CubePoint& x) -> const LatticeWord& {
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, psi_n(c, n, x, depth)).first;
    return it->second;
  };
  for (const auto& [x, y] : pairs) {
    ++rep.pairs_checked;
    const Dyadic dist = linf_dist(x, y);
    const BoundedValue dn = metric_dN(image(x), image(y), static_cast<unsigned>(lv.N), tail);
    if (dist.to_rational() > dn.lo) {
      rep.pass = false;
      rep.witness = std::pair{x, y};
      rep.witness_distance = dist;
      rep.witness_dN = dn;
      break;
    }
  }
  return rep;
}

CubePoint random_cube_point(const Construction& c, unsigned n, unsigned q, std::mt19937_64& rng) {
  const Level& lv = c.level(n);
  std::uniform_int_distribution<std::uint64_t> coord(0, std::uint64_t{1} << q);
  CubePoint x(lv.M);
  for (auto& sym : x) {
    std::vector<Dyadic> v(c.a);
    for (auto& d : v) d = Dyadic(BigInt(coord(rng)), q);
    sym = DyadicVec(std::move(v));
  }
  return x;
}

std::vector<std::pair<CubePoint, CubePoint>> quantized_pairs(const Construction& c, unsigned n, unsigned q,
                                                             std::size_t max_pairs, std::uint64_t seed,
                                                             bool* exhaustive) {
  const Level& lv = c.level(n);
  const BigInt points = ipow(BigInt((std::uint64_t{1} << q) + 1), lv.M * c.a);
  const BigInt all_pairs = points * (points - 1) / 2;
  std::vector<std::pair<CubePoint, CubePoint>> out;
  if (all_pairs <= max_pairs) {
    if (exhaustive != nullptr) *exhaustive = true;
    std::vector<CubePoint> grid;
    for_each_grid_point(QGrid{static_cast<unsigned>(lv.M * c.a), q}, [&](const DyadicVec& v) {
      CubePoint x(lv.M);
      for (std::uint64_t i = 0; i < lv.M; ++i) {
        x[i] = DyadicVec(std::vector<Dyadic>(v.coords().begin() + i * c.a, v.coords().begin() + (i + 1) * c.a));
      }
      grid.push_back(std::move(x));
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) out.emplace_back(grid[i], grid[j]);
    }
    return out;
  }
  if (exhaustive != nullptr) *exhaustive = false;
  std::mt19937_64 rng(seed);
  out.reserve(max_pairs);
  for (std::size_t k = 0; k < max_pairs; ++k) {
    CubePoint x = random_cube_point(c, n, q, rng);
    CubePoint y = random_cube_point(c, n, q, rng);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

EmbeddingSample construction_embedding(const Construction& c, unsigned n, unsigned depth, unsigned tail) {
  const Level& lv = c.level(n);
  EmbeddingSample s;
  s.N = static_cast<unsigned>(lv.N);
  s.M = static_cast<unsigned>(lv.M * c.a);
  s.tail = tail;
  s.psi = [&c, n, depth](const CubePoint& x) { return ProductPoint{psi_n(c, n, x, depth)}; };
  return s;
}

SyndeticReport syndetic_check(const Construction& c, unsigned n, unsigned depth) {
  if (depth < n + 1 || depth > c.levels.size()) throw std::invalid_argument("syndetic check needs n < depth <= built levels");
  const Level& lv = c.level(n);
  SyndeticReport rep;
  rep.n = n;
  rep.depth = depth;
  rep.gap_bound = 2 * c.level(n + 1).N;
  rep.error_bound = Rational(1, n);

  std::map<Block, std::size_t> patterns;
  for (std::size_t k = 0; k + 1 < lv.waypoints.size(); ++k) {
    Block pat(lv.waypoints[k]);
    pat.insert(pat.end(), lv.waypoints[k + 1].begin(), lv.waypoints[k + 1].end());
    patterns.emplace(std::move(pat), patterns.size());
  }
  rep.patterns = patterns.size();

  const LatticeWord word = psi_n(c, n, CubePoint(lv.M, DyadicVec::zeros(c.a)), depth);
  const auto period = static_cast<std::int64_t>(word.period());
  const auto len = static_cast<std::int64_t>(2 * lv.N);
  std::vector<std::vector<std::int64_t>> hits(patterns.size());
  for (std::int64_t i = 0; i < period; ++i) {
    const auto w = window(word, word.lo() + i, word.lo() + i + len - 1);
    const auto it = patterns.find(w);
    if (it != patterns.end()) hits[it->second].push_back(i);
  }
  for (const auto& h : hits) {
    if (h.empty()) {
      ++rep.missing;
      continue;
    }
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
      rep.worst_gap = std::max<std::uint64_t>(rep.worst_gap, h[k + 1] - h[k]);
    }
    rep.worst_gap = std::max<std::uint64_t>(rep.worst_gap, period - h.back() + h.front());
  }
  rep.error = Rational(1, 2 * net_side(n));
  rep.pass = rep.missing == 0 && rep.worst_gap <= rep.gap_bound && rep.error < rep.error_bound;
  return rep;
}

}  // namespace mdim
