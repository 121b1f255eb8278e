#include "mdim/estimators.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mdim/factor_maps.hpp"

namespace mdim {

namespace {

void sort_rows(std::vector<ProfileRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ProfileRow& x, const ProfileRow& y) {
    if (x.N != y.N) return x.N < y.N;
    return x.eps < y.eps;
  });
}

void check_inputs(std::span<const unsigned> Ns, std::span<const Dyadic> epss) {
  if (Ns.empty() || epss.empty()) throw std::invalid_argument("profile needs at least one N and one eps");
  for (unsigned N : Ns) {
    if (N == 0) throw std::invalid_argument("horizon N must be >= 1");
  }
  for (const auto& e : epss) {
    if (e <= Dyadic(0)) throw std::invalid_argument("eps must be positive");
  }
}

void check_resolution(unsigned q, const Dyadic& eps) {
  // grid spacing at most eps/2
  if (pow2(-static_cast<int>(q)) > eps.to_rational() / 2) {
    throw std::invalid_argument("resolution q=" + std::to_string(q) + " too coarse for eps=" + eps.to_string() +
                                " (need 2^-q <= eps/2)");
  }
}

}  // namespace

BoundedValue scale_denominator(unsigned N, const Dyadic& eps) {
  if (eps >= Dyadic(1)) throw std::invalid_argument("normalization needs eps < 1");
  const BoundedValue l = log_bounds(Rational(1) / eps.to_rational());
  return {l.lo * N, l.hi * N};
}

ProfileRow make_log_row(unsigned N, const Dyadic& eps, BoundedValue log_count) {
  ProfileRow row;
  row.N = N;
  row.eps = eps;
  row.log_count = std::move(log_count);
  if (eps < Dyadic(1)) row.normalized = divide_outward(row.log_count, scale_denominator(N, eps));
  return row;
}

ProfileRow make_count_row(unsigned N, const Dyadic& eps, const BigInt& lower, const BigInt& upper) {
  if (lower < 1 || upper < lower) throw std::invalid_argument("count row needs 1 <= lower <= upper");
  const BoundedValue lo = log_bounds(lower);
  const BoundedValue hi = log_bounds(upper);
  ProfileRow row = make_log_row(N, eps, BoundedValue(lo.lo, hi.hi));
  row.count_lower = lower;
  row.count_upper = upper;
  return row;
}

std::string system_id(const ShiftSystem& system) {
  struct Visitor {
    std::string operator()(const FullShiftSystem& s) const {
      return "fullshift(a=" + std::to_string(s.a) + ",q=" + std::to_string(s.q) + ")";
    }
    std::string operator()(const SingletonSystem&) const { return "singleton"; }
    std::string operator()(const WordSampleSystem& s) const { return "words(" + s.id + ")"; }
  };
  return std::visit(Visitor{}, system);
}

ProfileTable profile_S(const ShiftSystem& system, std::span<const unsigned> Ns, std::span<const Dyadic> epss) {
  check_inputs(Ns, epss);
  ProfileTable table;
  table.system_id = system_id(system);
  table.caveats.push_back("finite-scale bracket");

  for (unsigned N : Ns) {
    for (const auto& eps : epss) {
      const Rational e = eps.to_rational();
      if (const auto* full = std::get_if<FullShiftSystem>(&system)) {
        check_resolution(full->q, eps);
        // windowed l-inf <= d_N <= c_N * windowed l-inf on zero-fill words over [0, N-1]
        const Rational c = window_weight_factor(N).to_rational();
        const std::uint64_t exponent = std::uint64_t{full->a} * N;
        const BigInt lower = ipow(axis_cover_count(full->q, e), exponent);
        const BigInt upper = ipow(axis_cover_count(full->q, e / c), exponent);
        table.rows.push_back(make_count_row(N, eps, lower, upper));
      } else if (std::holds_alternative<SingletonSystem>(system)) {
        table.rows.push_back(make_count_row(N, eps, 1, 1));
      } else {
        const auto& sample = std::get<WordSampleSystem>(system);
        const auto words = sample.sampler(N);
        if (words.size() > sample.cap) {
          throw CapExceeded("word sample of " + std::to_string(words.size()) + " points exceeds cap " +
                            std::to_string(sample.cap) + " (no product structure declared)");
        }
        if (words.empty()) {
          ProfileRow row = make_log_row(N, eps, BoundedValue(Rational(0)));
          row.count_lower = 0;
          row.count_upper = 0;
          table.rows.push_back(std::move(row));
          continue;
        }
        const unsigned m = tail_horizon(e);
        const auto space = FiniteMetricSpace::from_points(
            words, [&](const LatticeWord& x, const LatticeWord& y) { return metric_dN(x, y, N, m); });
        const CoverResult cover = cover_bounds(space, e);
        table.rows.push_back(make_count_row(N, eps, cover.lower, cover.upper));
      }
    }
  }
  sort_rows(table.rows);
  return table;
}

RateEstimate rate_estimate(const ProfileTable& table, const Dyadic& eps) {
  std::map<unsigned, const ProfileRow*> by_n;
  for (const auto& row : table.rows) {
    if (row.eps == eps) by_n[row.N] = &row;
  }
  if (by_n.size() < 2) {
    throw std::invalid_argument("rate_estimate needs rows at >= 2 values of N for eps=" + eps.to_string());
  }
  RateEstimate est;
  est.eps = eps;
  est.tail = tail_horizon(eps.to_rational());
  bool first = true;
  for (const auto& [N, row] : by_n) {
    const Rational up = row->log_count.hi / N;
    const Rational lo = row->log_count.lo / (N + 2 * est.tail + kWindowOverhead);
    if (first || up < est.rate_upper) est.rate_upper = up;
    if (first || lo > est.rate_lower) est.rate_lower = lo;
    first = false;
  }
  est.certified = est.rate_lower <= est.rate_upper;
  if (eps < Dyadic(1)) {
    const BoundedValue l = log_bounds(Rational(1) / eps.to_rational());
    est.normalized = BoundedValue(round_down_to_grid(est.rate_lower / l.hi),
                                  round_up_to_grid(std::max(est.rate_upper / l.lo, est.rate_lower / l.hi)));
  }
  return est;
}

ProfileTable conditional_profile(const ProjectionFactor& factor, unsigned q, const Dyadic& delta,
                                 std::span<const unsigned> Ns, std::span<const Dyadic> epss) {
  check_inputs(Ns, epss);
  if (delta <= Dyadic(0)) throw std::invalid_argument("delta must be positive");
  ProfileTable table;
  table.system_id = "conditional(projection a=" + std::to_string(factor.a) + ",b=" + std::to_string(factor.b) +
                    ",q=" + std::to_string(q) + ",delta=" + delta.to_string() + ")";
  table.factor_dims = std::pair{factor.a, factor.b};
  table.caveats.push_back("finite-scale bracket");
  table.caveats.push_back("sup over y restricted to images of grid words");

  const std::uint64_t side = (std::uint64_t{1} << q) + 1;
  const Rational scale = pow2(static_cast<int>(q));
  const Rational d = delta.to_rational();
  for (unsigned N : Ns) {
    const Rational c = window_weight_factor(N).to_rational();
    // the delta-ball in d'_N contains the l-inf box of radius delta/c_N and
    // lies inside the l-inf box of radius delta (per target coordinate)
    const auto box_points = [&](const Rational& radius) {
      const BigInt half = floor(radius * scale);
      const BigInt pts = 2 * half + 1;
      return pts >= side ? side : pts.convert_to<std::uint64_t>();
    };
    const std::uint64_t inner = box_points(d / c);
    const std::uint64_t outer = box_points(d);
    const std::uint64_t fixed_exp = std::uint64_t{factor.b} * N;
    const std::uint64_t free_exp = std::uint64_t{factor.a - factor.b} * N;
    for (const auto& eps : epss) {
      check_resolution(q, eps);
      const Rational e = eps.to_rational();
      const BigInt lower = ipow(run_cover_count(inner, q, e), fixed_exp) * ipow(axis_cover_count(q, e), free_exp);
      const BigInt upper =
          ipow(run_cover_count(outer, q, e / c), fixed_exp) * ipow(axis_cover_count(q, e / c), free_exp);
      table.rows.push_back(make_count_row(N, eps, lower, upper));
    }
  }
  sort_rows(table.rows);
  return table;
}

ProfileTable conditional_profile_enumerated(const std::function<std::vector<LatticeWord>(unsigned N)>& domain,
                                            const std::function<LatticeWord(const LatticeWord&)>& map,
                                            const Dyadic& delta, std::span<const unsigned> Ns,
                                            std::span<const Dyadic> epss, std::size_t cap) {
  check_inputs(Ns, epss);
  if (delta <= Dyadic(0)) throw std::invalid_argument("delta must be positive");
  ProfileTable table;
  table.system_id = "conditional(enumerated,delta=" + delta.to_string() + ")";
  table.caveats.push_back("finite-scale bracket");
  table.caveats.push_back("sup over y restricted to images of sampled words");
  const Rational d = delta.to_rational();
  const unsigned target_tail = tail_horizon(d);

  for (unsigned N : Ns) {
    const auto words = domain(N);
    if (words.size() > cap) throw CapExceeded("conditional enumeration exceeds cap");
    std::vector<LatticeWord> images;
    images.reserve(words.size());
    for (const auto& w : words) images.push_back(map(w));
    std::vector<LatticeWord> targets = images;
    std::sort(targets.begin(), targets.end(), [](const LatticeWord& x, const LatticeWord& y) {
      if (x.symbols() != y.symbols()) return x.symbols() < y.symbols();
      return x.lo() < y.lo();
    });
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    // target-side distances do not depend on eps
    std::vector<std::vector<BoundedValue>> ball(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      ball[t].reserve(images.size());
      for (const auto& img : images) ball[t].push_back(metric_dN(img, targets[t], N, target_tail));
    }

    for (const auto& eps : epss) {
      const Rational e = eps.to_rational();
      const unsigned m = tail_horizon(e);
      const auto full = FiniteMetricSpace::from_points(
          words, [&](const LatticeWord& x, const LatticeWord& y) { return metric_dN(x, y, N, m); });
      const auto restrict = [&](const std::vector<std::size_t>& ids) {
        std::vector<std::vector<BoundedValue>> sub(ids.size(), std::vector<BoundedValue>(ids.size()));
        for (std::size_t i = 0; i < ids.size(); ++i) {
          for (std::size_t j = 0; j < ids.size(); ++j) sub[i][j] = full.dist(ids[i], ids[j]);
        }
        return FiniteMetricSpace(std::move(sub), false);
      };
      BigInt lower = 0;
      BigInt upper = 0;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        std::vector<std::size_t> certain;
        std::vector<std::size_t> possible;
        for (std::size_t i = 0; i < words.size(); ++i) {
          if (ball[t][i].hi <= d) certain.push_back(i);
          if (ball[t][i].lo <= d) possible.push_back(i);
        }
        if (!certain.empty()) lower = std::max(lower, cover_bounds(restrict(certain), e).lower);
        if (!possible.empty()) upper = std::max(upper, cover_bounds(restrict(possible), e).upper);
      }
      if (lower == 0) lower = 1;  // every target is the image of a sampled word
      if (upper < lower) upper = lower;
      table.rows.push_back(make_count_row(N, eps, lower, upper));
    }
  }
  sort_rows(table.rows);
  return table;
}

std::vector<SubadditivityViolation> check_subadditivity(std::span<const SubadditivityEntry> seq,
                                                        const Rational& slack) {
  std::map<unsigned, const BoundedValue*> by_n;
  for (const auto& e : seq) by_n[e.N] = &e.value;
  std::vector<SubadditivityViolation> out;
  for (const auto& [n1, v1] : by_n) {
    for (const auto& [n2, v2] : by_n) {
      if (n2 < n1) continue;
      const auto it = by_n.find(n1 + n2);
      if (it == by_n.end()) continue;
      const Rational rhs = v1->hi + v2->hi + slack;
      if (it->second->lo > rhs) out.push_back({n1, n2, it->second->lo, rhs});
    }
  }
  return out;
}

std::vector<SubadditivityEntry> log_sequence(const ProfileTable& table, const Dyadic& eps) {
  std::vector<SubadditivityEntry> out;
  for (const auto& row : table.rows) {
    if (row.eps == eps) out.push_back({row.N, row.log_count});
  }
  return out;
}

}  // namespace mdim
