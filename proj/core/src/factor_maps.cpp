#include "mdim/factor_maps.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdim {

ProjectionFactor::ProjectionFactor(unsigned domain_dim, unsigned target_dim) : a(domain_dim), b(target_dim) {
  if (a == 0 || b == 0 || b > a) {
    throw std::invalid_argument("projection needs 1 <= b <= a, got a=" + std::to_string(a) +
                                " b=" + std::to_string(b));
  }
}

LatticeWord apply_factor(const ProjectionFactor& factor, const LatticeWord& x) {
  if (x.alphabet_dim() != factor.a) {
    throw std::invalid_argument("word has alphabet dimension " + std::to_string(x.alphabet_dim()) +
                                ", factor expects " + std::to_string(factor.a));
  }
  std::vector<DyadicVec> out;
  out.reserve(x.symbols().size());
  for (const auto& s : x.symbols()) {
    out.emplace_back(std::vector<Dyadic>(s.coords().begin(), s.coords().begin() + factor.b));
  }
  return {factor.b, x.lo(), std::move(out), x.extension()};
}

SlopeBracket fiber_cover_bracket(const ProjectionFactor& factor, unsigned N, const Dyadic& eps, unsigned q) {
  if (N == 0) throw std::invalid_argument("horizon N must be >= 1");
  if (eps.num() != 1 || eps.exp() == 0) throw std::invalid_argument("eps must be 2^-k with k >= 1");
  const unsigned k = eps.exp();
  if (q < k + 1) {
    throw std::invalid_argument("resolution q=" + std::to_string(q) + " must be >= k+1=" + std::to_string(k + 1));
  }
  SlopeBracket br;
  br.eps = eps;
  br.N = N;
  br.tail = tail_horizon(eps.to_rational());
  const std::uint64_t free_dim = factor.a - factor.b;
  if (free_dim == 0) {
    br.count_lower = 1;
    br.count_upper = 1;
    br.lower = BoundedValue(Rational(0));
    br.upper = BoundedValue(Rational(0));
    return br;
  }
  const Rational e = eps.to_rational();
  br.count_lower = ipow(axis_cover_count(q, e), free_dim * N);
  // closed parts of diameter <= eps/6 along each free axis
  br.count_upper = ipow(ceil(Rational(6) / e), free_dim * (N + 2 * br.tail));
  const BoundedValue den = scale_denominator(N, eps);
  br.lower = divide_outward(log_bounds(br.count_lower), den);
  br.upper = divide_outward(log_bounds(br.count_upper), den);
  return br;
}

ProfileTable bracket_table(const ProjectionFactor& factor, std::span<const unsigned> Ns,
                           std::span<const Dyadic> epss, unsigned q) {
  ProfileTable table;
  table.system_id = "fiber-bracket(projection a=" + std::to_string(factor.a) + ",b=" + std::to_string(factor.b) +
                    ",q=" + std::to_string(q) + ")";
  table.factor_dims = std::pair{factor.a, factor.b};
  table.caveats.push_back("finite-scale bracket");
  table.caveats.push_back("lower: grid fiber window [0,N-1]; upper: continuum fiber window [-m,N+m-1] at mesh eps/6");
  for (unsigned N : Ns) {
    for (const auto& eps : epss) {
      const SlopeBracket br = fiber_cover_bracket(factor, N, eps, q);
      ProfileRow row;
      row.N = N;
      row.eps = eps;
      row.count_lower = br.count_lower;
      row.count_upper = br.count_upper;
      row.log_count = BoundedValue(log_bounds(br.count_lower).lo, log_bounds(br.count_upper).hi);
      row.normalized = BoundedValue(br.lower.lo, br.upper.hi);
      table.rows.push_back(std::move(row));
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const ProfileRow& x, const ProfileRow& y) {
    if (x.N != y.N) return x.N < y.N;
    return x.eps < y.eps;
  });
  return table;
}

BoundedValue product_metric_dN(const ProductPoint& x, const ProductPoint& y, unsigned N, unsigned m) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("product points must have equal arity");
  std::vector<BoundedValue> sum;
  for (std::size_t c = 0; c < x.size(); ++c) {
    auto orbit = metric_D_orbit(x[c], y[c], N, m);
    if (sum.empty()) {
      sum = std::move(orbit);
    } else {
      for (unsigned j = 0; j < N; ++j) sum[j] = sum[j] + orbit[j];
    }
  }
  BoundedValue out = sum.front();
  for (const auto& v : sum) out = interval_max(out, v);
  return out;
}

HypothesisReport hypothesis_check(std::span<const EmbeddingSample> family) {
  HypothesisReport report;
  bool up = false;
  bool down = false;
  for (const auto& member : family) {
    HypothesisLevel level;
    level.N = member.N;
    level.M = member.M;
    level.ratio = Rational(member.M) / member.N;
    for (const auto& [x, y] : member.pairs) {
      ++level.pairs_checked;
      const Dyadic dist = linf_dist(x, y);
      const BoundedValue dn = product_metric_dN(member.psi(x), member.psi(y), member.N, member.tail);
      if (dist.to_rational() > dn.lo) {
        level.pass = false;
        level.witness = std::pair{x, y};
        level.witness_distance = dist;
        level.witness_dN = dn;
        break;
      }
    }
    if (!report.levels.empty()) {
      const Rational& prev = report.levels.back().ratio;
      if (level.ratio > prev) up = true;
      if (level.ratio < prev) down = true;
    }
    report.pass = report.pass && level.pass;
    report.levels.push_back(std::move(level));
  }
  if (up && down) {
    report.ratio_trend = "mixed";
  } else if (up) {
    report.ratio_trend = "non-decreasing";
  } else if (down) {
    report.ratio_trend = "non-increasing";
  } else {
    report.ratio_trend = "constant";
  }
  return report;
}

EmbeddingSample full_shift_embedding(unsigned a, unsigned n, unsigned tail) {
  if (a == 0 || n == 0) throw std::invalid_argument("full-shift embedding needs a, n >= 1");
  EmbeddingSample s;
  s.N = n;
  s.M = a * n;
  s.tail = tail;
  s.psi = [a, n](const CubePoint& x) {
    if (x.size() != n) throw std::invalid_argument("cube point must have n symbols");
    return ProductPoint{LatticeWord::zero_fill(a, 0, x)};
  };
  return s;
}

EmbeddingSample with_fixed_point(EmbeddingSample base, LatticeWord fixed_point) {
  auto inner = std::move(base.psi);
  base.psi = [inner = std::move(inner), p = std::move(fixed_point)](const CubePoint& x) {
    ProductPoint out = inner(x);
    out.push_back(p);
    return out;
  };
  return base;
}

}  // namespace mdim
