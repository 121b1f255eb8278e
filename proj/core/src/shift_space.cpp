#include "mdim/shift_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdim {

const char* to_string(Extension ext) { return ext == Extension::kZero ? "zero" : "periodic"; }

Extension parse_extension(std::string_view text) {
  if (text == "zero") return Extension::kZero;
  if (text == "periodic") return Extension::kPeriodic;
  throw std::invalid_argument("unknown extension '" + std::string(text) + "'");
}

LatticeWord::LatticeWord(std::size_t a, std::int64_t lo, std::vector<DyadicVec> symbols, Extension ext)
    : a_(a), lo_(lo), symbols_(std::move(symbols)), ext_(ext), zero_(DyadicVec::zeros(a)) {
  if (symbols_.empty()) throw std::invalid_argument("LatticeWord needs a non-empty window");
  for (const auto& s : symbols_) {
    if (s.dim() != a_) throw std::invalid_argument("LatticeWord symbol has wrong alphabet dimension");
  }
}

const DyadicVec& LatticeWord::at(std::int64_t n) const {
  const auto len = static_cast<std::int64_t>(symbols_.size());
  std::int64_t offset = n - lo_;
  if (offset >= 0 && offset < len) return symbols_[static_cast<std::size_t>(offset)];
  if (ext_ == Extension::kZero) return zero_;
  offset %= len;
  if (offset < 0) offset += len;
  return symbols_[static_cast<std::size_t>(offset)];
}

LatticeWord shift(const LatticeWord& x, std::int64_t k) {
  return {x.alphabet_dim(), x.lo() - k, x.symbols(), x.extension()};
}

std::vector<DyadicVec> window(const LatticeWord& x, std::int64_t l, std::int64_t m) {
  if (l > m) throw std::invalid_argument("window requires l <= m");
  std::vector<DyadicVec> out;
  out.reserve(static_cast<std::size_t>(m - l + 1));
  for (std::int64_t n = l; n <= m; ++n) out.push_back(x.at(n));
  return out;
}

unsigned tail_horizon(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("tail_horizon requires eps > 0");
  unsigned m = 0;
  while (pow2(1 - static_cast<int>(m)) > eps / 2) ++m;
  return m;
}

Dyadic tail_weight(unsigned m) {
  if (m == 0) return Dyadic(2);
  return Dyadic(BigInt(1), m - 1);
}

namespace {

void check_compatible(const LatticeWord& x, const LatticeWord& y) {
  if (x.alphabet_dim() != y.alphabet_dim()) {
    throw std::invalid_argument("metric: alphabet dimension mismatch");
  }
}

unsigned abs_u(std::int64_t v) { return static_cast<unsigned>(v < 0 ? -v : v); }

// sum_{i in [from, to]} 2^-|i - j| * diffs[i - base]
Dyadic weighted_sum(const std::vector<Dyadic>& diffs, std::int64_t base, std::int64_t from, std::int64_t to,
                    std::int64_t j) {
  Dyadic sum(0);
  for (std::int64_t i = from; i <= to; ++i) {
    const Dyadic& d = diffs[static_cast<std::size_t>(i - base)];
    if (d.num() == 0) continue;
    sum += d.halved(abs_u(i - j));
  }
  return sum;
}

}  // namespace

std::vector<BoundedValue> metric_D_orbit(const LatticeWord& x, const LatticeWord& y, unsigned N, unsigned m) {
  check_compatible(x, y);
  if (N == 0) throw std::invalid_argument("metric_dN requires N >= 1");
  if (x == y) return std::vector<BoundedValue>(N, BoundedValue(Rational(0)));
  const bool exact = x.extension() == Extension::kZero && y.extension() == Extension::kZero;
  const auto mm = static_cast<std::int64_t>(m);
  const auto last = static_cast<std::int64_t>(N) - 1;
  std::int64_t from = -mm;
  std::int64_t to = last + mm;
  if (exact) {
    // beyond both storage windows the two words agree (both zero)
    from = std::min(from, std::min(x.lo(), y.lo()));
    to = std::max(to, std::max(x.hi(), y.hi()));
  }
  std::vector<Dyadic> diffs;
  diffs.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t i = from; i <= to; ++i) diffs.push_back(linf_dist(x.at(i), y.at(i)));

  std::vector<BoundedValue> out;
  out.reserve(N);
  const Rational tail = tail_weight(m).to_rational();
  for (std::int64_t j = 0; j <= last; ++j) {
    if (exact) {
      out.emplace_back(weighted_sum(diffs, from, from, to, j).to_rational());
    } else {
      Rational s = weighted_sum(diffs, from, j - mm, j + mm, j).to_rational();
      Rational hi = s + tail;
      out.emplace_back(std::move(s), std::move(hi));
    }
  }
  return out;
}

BoundedValue metric_D(const LatticeWord& x, const LatticeWord& y, unsigned m) {
  return metric_D_orbit(x, y, 1, m).front();
}

BoundedValue metric_dN(const LatticeWord& x, const LatticeWord& y, unsigned N, unsigned m) {
  const auto orbit = metric_D_orbit(x, y, N, m);
  BoundedValue best = orbit.front();
  for (std::size_t j = 1; j < orbit.size(); ++j) best = interval_max(best, orbit[j]);
  return best;
}

Dyadic window_weight_factor(unsigned N) {
  if (N == 0) throw std::invalid_argument("window_weight_factor requires N >= 1");
  Dyadic best(0);
  for (unsigned j = 0; j < N; ++j) {
    Dyadic s(0);
    for (unsigned n = 0; n < N; ++n) s += Dyadic(1).halved(n > j ? n - j : j - n);
    if (s > best) best = s;
  }
  return best;
}

}  // namespace mdim
