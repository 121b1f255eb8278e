#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mdim/block_system.hpp"
#include "mdim/construction.hpp"
#include "mdim/covering.hpp"
#include "mdim/estimators.hpp"
#include "mdim/factor_maps.hpp"
#include "mdim/io.hpp"
#include "mdim/waist.hpp"

namespace mdim::cli {

namespace {

using io::Json;

struct ParamSpec {
  std::string name;
  std::string help;
  bool flag = false;
};

const std::map<std::string, std::vector<ParamSpec>>& command_specs() {
  static const std::map<std::string, std::vector<ParamSpec>> specs = {
      {"cover",
       {{"space", "metric space JSON file"},
        {"dim", "grid cube dimension (when no --space)"},
        {"q", "grid resolution (when no --space)"},
        {"eps", "scale"},
        {"mode", "bounds | exact | greedy"}}},
      {"profile",
       {{"system", "fullshift | singleton"},
        {"a", "alphabet dimension"},
        {"q", "grid resolution"},
        {"N", "horizons, comma separated"},
        {"eps", "scales, comma separated"}}},
      {"conditional",
       {{"a", "domain alphabet dimension"},
        {"b", "target alphabet dimension"},
        {"q", "grid resolution"},
        {"delta", "target ball radius"},
        {"N", "horizons, comma separated"},
        {"eps", "scales, comma separated"},
        {"bracket", "report fiber slope brackets instead", true},
        {"check-subadditivity", "fail on subadditivity violations", true}}},
      {"waist",
       {{"map", "grid map JSON file"},
        {"builtin", "bundled map name"},
        {"q", "resolution for --builtin"},
        {"r", "radii, comma separated"},
        {"check", "measure | cover | both"}}},
      {"block",
       {{"blockset", "block set JSON file"},
        {"example", "two-point | singleton | full"},
        {"L", "horizon"},
        {"eps", "scale"},
        {"direct", "true | false"},
        {"word", "periodic word JSON file for a membership test"}}},
      {"construct", {{"a", "alphabet dimension"}, {"s", "target ratio"}, {"depth", "number of levels"}}},
      {"verify",
       {{"suite", "construction | hypothesis | subadditivity | covering | waist | all"},
        {"a", "alphabet dimension"},
        {"b", "target dimension (subadditivity)"},
        {"s", "target ratio (construction)"},
        {"depth", "levels (construction)"},
        {"q", "quantization"},
        {"pairs", "pair budget per level"},
        {"family", "fullshift | product | construction (hypothesis)"},
        {"levels", "levels n, comma separated (hypothesis)"},
        {"eps", "scales (subadditivity)"},
        {"delta", "radii (subadditivity)"},
        {"max-N", "largest horizon (subadditivity)"},
        {"instances", "random spaces (covering)"},
        {"r", "radii (waist)"},
        {"corrupt", "inject a non-injective map (hypothesis)", true}}},
  };
  return specs;
}

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

std::string param_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + param_text(e);
    return out;
  }
  throw UsageError("parameter values must be strings, integers, booleans or arrays, got " + v.dump());
}

class Params {
 public:
  explicit Params(const RunConfig& cfg) : p_(cfg.params) {}

  [[nodiscard]] bool has(const std::string& k) const { return p_.count(k) != 0; }
  [[nodiscard]] std::string text(const std::string& k, const std::string& def = "") const {
    auto it = p_.find(k);
    if (it == p_.end()) {
      if (def.empty()) throw UsageError("missing required parameter --" + k);
      return def;
    }
    return it->second;
  }
  [[nodiscard]] bool flag(const std::string& k, bool def = false) const {
    if (!has(k)) return def;
    const auto v = text(k);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("--" + k + " expects true or false, got '" + v + "'");
  }
  [[nodiscard]] unsigned uint(const std::string& k, const std::string& def = "") const {
    return to_uint(k, text(k, def));
  }
  [[nodiscard]] std::vector<unsigned> uints(const std::string& k, const std::string& def = "") const {
    std::vector<unsigned> out;
    for (const auto& s : split(text(k, def))) out.push_back(to_uint(k, s));
    if (out.empty()) throw UsageError("--" + k + " needs at least one value");
    return out;
  }
  [[nodiscard]] Dyadic dyadic(const std::string& k, const std::string& def = "") const {
    return to_dyadic(k, text(k, def));
  }
  [[nodiscard]] std::vector<Dyadic> dyadics(const std::string& k, const std::string& def = "") const {
    std::vector<Dyadic> out;
    for (const auto& s : split(text(k, def))) out.push_back(to_dyadic(k, s));
    if (out.empty()) throw UsageError("--" + k + " needs at least one value");
    return out;
  }
  [[nodiscard]] Rational rational(const std::string& k, const std::string& def = "") const {
    try {
      return parse_rational(text(k, def));
    } catch (const std::invalid_argument& e) {
      throw UsageError("--" + k + ": " + e.what());
    }
  }

 private:
  static unsigned to_uint(const std::string& k, const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        s.size() > 9) {
      throw UsageError("--" + k + " expects a non-negative integer, got '" + s + "'");
    }
    return static_cast<unsigned>(std::stoul(s));
  }
  static Dyadic to_dyadic(const std::string& k, const std::string& s) {
    try {
      return Dyadic::parse(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError("--" + k + " expects a dyadic rational like 3/8, got '" + s + "': " + e.what());
    }
  }

  std::map<std::string, std::string> p_;
};

struct Outcome {
  Json body;
  std::string csv;  ///< used instead of body when non-empty
  bool failed = false;
  std::vector<std::string> failures;  ///< "invariant-id: witness"
};

std::string compact(const Json& j) { return j.dump(); }

// ---------------------------------------------------------------------------

Outcome run_cover(const RunConfig& cfg, const Params& p) {
  const Dyadic eps = p.dyadic("eps");
  if (eps <= Dyadic(0)) throw UsageError("--eps must be positive");
  FiniteMetricSpace space;
  Json source;
  if (p.has("space")) {
    space = io::metric_space_from_json(io::read_json_file(p.text("space")));
    source = Json{{"space", p.text("space")}};
  } else {
    const QGrid grid{p.uint("dim", "1"), p.uint("q", "2")};
    const auto pts = enumerate_grid(grid, 4096);
    space = FiniteMetricSpace::from_points(
        pts, [](const DyadicVec& x, const DyadicVec& y) { return linf_dist(x, y).to_rational(); });
    source = Json{{"grid", Json{{"dim", grid.dim}, {"q", grid.q}}}};
  }
  const auto mode = p.text("mode", "bounds");
  const Rational e = eps.to_rational();
  CoverResult res;
  if (mode == "bounds") res = cover_bounds(space, e);
  else if (mode == "exact") res = cover_number_exact(space, e);
  else if (mode == "greedy") res = cover_number_greedy(space, e);
  else throw UsageError("--mode must be bounds, exact or greedy");
  Outcome o;
  o.body = source;
  o.body["points"] = space.size();
  o.body["eps"] = io::to_json(eps);
  o.body["mode"] = mode;
  o.body["result"] = io::to_json(res, cfg.certificates);
  return o;
}

Outcome run_profile(const RunConfig& cfg, const Params& p) {
  const auto Ns = p.uints("N", "1");
  const auto epss = p.dyadics("eps");
  const auto system = p.text("system", "fullshift");
  ShiftSystem sys;
  if (system == "fullshift") sys = FullShiftSystem{p.uint("a", "1"), p.uint("q", "2")};
  else if (system == "singleton") sys = SingletonSystem{};
  else throw UsageError("--system must be fullshift or singleton");
  const ProfileTable table = profile_S(sys, Ns, epss);
  Outcome o;
  if (cfg.format == "csv") {
    o.csv = io::to_csv(table);
    return o;
  }
  o.body["table"] = io::to_json(table);
  Json rates = Json::array();
  for (const auto& eps : epss) {
    if (std::set<unsigned>(Ns.begin(), Ns.end()).size() >= 2) rates.push_back(io::to_json(rate_estimate(table, eps)));
  }
  o.body["rates"] = std::move(rates);
  return o;
}

Outcome run_conditional(const RunConfig& cfg, const Params& p) {
  const ProjectionFactor factor(p.uint("a", "2"), p.uint("b", "1"));
  const auto Ns = p.uints("N", "1");
  const auto epss = p.dyadics("eps");
  const unsigned q = p.uint("q", "4");
  Outcome o;
  ProfileTable table;
  if (p.flag("bracket")) {
    table = bracket_table(factor, Ns, epss, q);
    if (cfg.format != "csv") {
      Json brackets = Json::array();
      for (unsigned N : Ns) {
        for (const auto& eps : epss) brackets.push_back(io::to_json(fiber_cover_bracket(factor, N, eps, q)));
      }
      o.body["brackets"] = std::move(brackets);
    }
  } else {
    table = conditional_profile(factor, q, p.dyadic("delta", "1/8"), Ns, epss);
  }
  if (p.flag("check-subadditivity")) {
    Json all = Json::array();
    for (const auto& eps : epss) {
      const auto seq = log_sequence(table, eps);
      const auto v = check_subadditivity(seq);
      for (const auto& x : v) {
        o.failed = true;
        o.failures.push_back("estimators.subadditivity: eps=" + eps.to_string() + " " +
                             compact(io::to_json(std::vector<SubadditivityViolation>{x})));
      }
      all.push_back(Json{{"eps", io::to_json(eps)}, {"violations", io::to_json(v)}});
    }
    o.body["subadditivity"] = std::move(all);
  }
  if (cfg.format == "csv") {
    o.csv = io::to_csv(table);
    return o;
  }
  o.body["table"] = io::to_json(table);
  return o;
}

Outcome run_waist(const RunConfig& cfg, const Params& p) {
  std::optional<GridMap> f;
  Json source;
  if (p.has("map")) {
    f = io::grid_map_from_json(io::read_json_file(p.text("map")));
    source = p.text("map");
  } else if (p.has("builtin")) {
    f = builtin_map(p.text("builtin"), p.uint("q", "4"));
    source = "builtin:" + p.text("builtin");
  } else {
    throw UsageError("waist needs --map or --builtin");
  }
  const auto rs = p.dyadics("r", "1/8,1/4,3/8");
  const auto check = p.text("check", "both");
  if (check != "measure" && check != "cover" && check != "both") throw UsageError("--check must be measure, cover or both");
  Outcome o;
  o.body["map"] = source;
  o.body["n"] = f->n();
  o.body["m"] = f->m();
  o.body["q"] = f->q();
  const auto measure = waist_check_measure(*f, rs, cfg.threads);
  if (check != "cover") {
    o.body["measure"] = io::to_json(measure, cfg.certificates);
    if (!measure.pass) {
      o.failed = true;
      o.failures.push_back("waist.measure: " + measure.label + " t=" + compact(o.body["measure"]["best_t"]) +
                           " ratio=" + to_string(measure.best_ratio));
    }
  }
  if (check != "measure") {
    const auto cover = waist_check_cover(*f, rs, measure.best_t);
    o.body["cover"] = io::to_json(cover, cfg.certificates);
    if (!cover.pass) {
      o.failed = true;
      o.failures.push_back("waist.cover: t=" + compact(o.body["cover"]["t"]));
    }
  }
  o.body["status"] = o.failed ? "FAIL" : "PASS";
  return o;
}

BlockSet example_block_set(const std::string& name) {
  const auto sym = [](long long v) { return DyadicVec(std::vector<Dyadic>{Dyadic(v)}); };
  if (name == "two-point") return BlockSet::explicit_set(1, 2, {{sym(0), sym(0)}, {sym(1), sym(1)}});
  if (name == "singleton") return BlockSet::explicit_set(1, 2, {{sym(0), sym(0)}});
  if (name == "full") return BlockSet::full(1, 2);
  throw UsageError("--example must be two-point, singleton or full");
}

Outcome run_block(const RunConfig&, const Params& p) {
  const BlockSet K = p.has("blockset") ? io::block_set_from_json(io::read_json_file(p.text("blockset")))
                                       : example_block_set(p.text("example", "two-point"));
  const auto rep = block_cover_upper(K, p.uint("L", "4"), p.dyadic("eps", "1/2"), p.flag("direct", true));
  Outcome o;
  o.body["blockset"] = io::to_json(K);
  o.body["bound"] = io::to_json(rep);
  if (!rep.dominated) {
    o.failed = true;
    o.failures.push_back("block.dominance: direct=" + to_string(*rep.direct) + " formula=" + to_string(rep.formula));
  }
  if (p.has("word")) {
    const auto word = io::lattice_word_from_json(io::read_json_file(p.text("word")));
    const auto phase = block_membership(word, K);
    o.body["membership"] = Json{{"member", phase.has_value()}, {"phase", phase ? Json(*phase) : Json(nullptr)}};
  }
  return o;
}

Outcome run_construct(const RunConfig&, const Params& p) {
  const auto c = build_construction(p.uint("a", "1"), p.rational("s", "1/2"), p.uint("depth", "2"));
  Outcome o;
  o.body = io::to_json(c);
  return o;
}

// ---------------------------------------------------------------------------

struct Check {
  explicit Check(std::string name) : id(std::move(name)) {}

  std::string id;
  bool pass = true;
  Json detail;
  std::string witness;
};

void add(Outcome& o, Json& checks, Check c) {
  Json e{{"id", c.id}, {"status", c.pass ? "PASS" : "FAIL"}};
  if (!c.detail.is_null()) e["detail"] = std::move(c.detail);
  checks.push_back(std::move(e));
  if (!c.pass) {
    o.failed = true;
    o.failures.push_back(c.id + ": " + c.witness);
  }
}

void suite_construction(const RunConfig& cfg, const Params& p, Outcome& o, Json& checks) {
  const unsigned a = p.uint("a", "1");
  const Rational s = p.rational("s", a == 1 ? "1/2" : "1");
  const unsigned depth = p.uint("depth", "2");
  const unsigned q = p.uint("q", "3");
  const unsigned budget = p.uint("pairs", "10000");
  const auto c = build_construction(a, s, depth);
  std::mt19937_64 rng(cfg.seed);

  Check book{"construction.bookkeeping"};
  Rational product = 1;
  for (unsigned n = 1; n <= depth; ++n) {
    const Level& lv = c.level(n);
    const Rational ratio = Rational(a * lv.M) / lv.N;
    if (ratio != a * product) {
      book.pass = false;
      book.witness = "level " + std::to_string(n) + " ratio " + to_string(ratio) + " != " + to_string(a * product);
    }
    if (n < depth) {
      const Level& nx = c.level(n + 1);
      if (nx.N != lv.p * lv.N || nx.M != (lv.p - lv.q) * lv.M || lv.p <= lv.q || lv.q < 2) {
        book.pass = false;
        book.witness = "level " + std::to_string(n) + " transition";
      }
      product *= 1 - lv.r;
    }
  }
  if (c.achieved_ratio < s) {
    book.pass = false;
    book.witness = "achieved ratio " + to_string(c.achieved_ratio) + " below target";
  }
  book.detail = Json{{"achieved_ratio", to_string(c.achieved_ratio)}};
  add(o, checks, std::move(book));

  for (unsigned n = 1; n < depth; ++n) {
    const Level& lv = c.level(n);
    Check dens{"construction.density"};
    std::set<std::pair<Block, Block>> seen;
    std::set<Block> net;
    for (std::size_t k = 0; k + 1 < lv.waypoints.size(); ++k) seen.emplace(lv.waypoints[k], lv.waypoints[k + 1]);
    for (const auto& w : lv.waypoints) net.insert(w);
    for (const auto& u : net) {
      for (const auto& v : net) {
        if (!seen.count({u, v})) {
          dens.pass = false;
          dens.witness = "net pair missing at level " + std::to_string(n);
        }
      }
    }
    const Rational tol(1, n);
    for (int trial = 0; trial < 100 && dens.pass; ++trial) {
      const Block u = fill_block(lv, random_cube_point(c, n, q + 3, rng));
      const Block v = fill_block(lv, random_cube_point(c, n, q + 3, rng));
      if (waypoint_distance(lv, u, v).to_rational() >= tol) {
        dens.pass = false;
        dens.witness = "random pair at level " + std::to_string(n) + " not within 1/n of a waypoint pair";
      }
    }
    dens.detail = Json{{"n", n}, {"net_points", net.size()}, {"q", lv.q}};
    add(o, checks, std::move(dens));
  }

  for (unsigned n = 1; n <= depth; ++n) {
    const Level& lv = c.level(n);
    Check iso{"construction.isometry"};
    std::size_t tested = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = random_cube_point(c, n, q, rng);
      const auto y = random_cube_point(c, n, q, rng);
      const auto wx = psi_n(c, n, x, depth);
      const auto wy = psi_n(c, n, y, depth);
      const auto lhs = linf_dist(window(wx, 0, static_cast<std::int64_t>(lv.N) - 1),
                                 window(wy, 0, static_cast<std::int64_t>(lv.N) - 1));
      ++tested;
      if (lhs != linf_dist(x, y) || linf_dist(fill_block(lv, x), fill_block(lv, y)) != linf_dist(x, y)) {
        iso.pass = false;
        iso.witness = "level " + std::to_string(n) + " pair " + compact(io::to_json(x)) + " " + compact(io::to_json(y));
        break;
      }
    }
    iso.detail = Json{{"n", n}, {"pairs", tested}};
    add(o, checks, std::move(iso));

    bool exhaustive = false;
    const auto pairs = quantized_pairs(c, n, q, budget, cfg.seed + n, &exhaustive);
    auto rep = verify_expansivity(c, n, pairs);
    rep.exhaustive = exhaustive;
    Check ex{"construction.expansivity"};
    ex.pass = rep.pass;
    ex.detail = io::to_json(rep);
    if (!rep.pass) ex.witness = compact(ex.detail["witness"]);
    add(o, checks, std::move(ex));
  }

  for (unsigned n = 1; n < depth; ++n) {
    const auto rep = syndetic_check(c, n, depth);
    Check sy{"construction.syndetic"};
    sy.pass = rep.pass;
    sy.detail = io::to_json(rep);
    if (!rep.pass) sy.witness = compact(sy.detail);
    add(o, checks, std::move(sy));
  }
}

void suite_hypothesis(const RunConfig& cfg, const Params& p, Outcome& o, Json& checks) {
  const unsigned a = p.uint("a", "2");
  const auto family = p.text("family", "fullshift");
  const unsigned budget = p.uint("pairs", "200");
  const unsigned q = p.uint("q", "3");
  std::mt19937_64 rng(cfg.seed);
  std::vector<EmbeddingSample> samples;
  std::optional<Construction> c;
  if (family == "construction") {
    const unsigned depth = p.uint("depth", "2");
    c = build_construction(a, p.rational("s", a == 1 ? "1/2" : "1"), depth);
    for (unsigned n = 1; n <= depth; ++n) {
      auto s = construction_embedding(*c, n, depth);
      s.pairs = quantized_pairs(*c, n, q, budget, cfg.seed + n);
      samples.push_back(std::move(s));
    }
  } else if (family == "fullshift" || family == "product") {
    for (unsigned n : p.uints("levels", "1,2,3,4")) {
      auto s = full_shift_embedding(a, n);
      std::uniform_int_distribution<std::uint64_t> coord(0, std::uint64_t{1} << q);
      const auto draw = [&] {
        CubePoint x(n);
        for (auto& sym : x) {
          std::vector<Dyadic> v(a);
          for (auto& d : v) d = Dyadic(BigInt(coord(rng)), q);
          sym = DyadicVec(std::move(v));
        }
        return x;
      };
      for (unsigned k = 0; k < budget; ++k) {
        auto x = draw();
        auto y = draw();
        s.pairs.emplace_back(std::move(x), std::move(y));
      }
      if (family == "product") {
        s = with_fixed_point(std::move(s), LatticeWord::zero_fill(1, 0, {DyadicVec(std::vector<Dyadic>{Dyadic(1, 1)})}));
      }
      samples.push_back(std::move(s));
    }
  } else {
    throw UsageError("--family must be fullshift, product or construction");
  }
  if (p.flag("corrupt")) {
    for (auto& s : samples) {
      s.psi = [inner = s.psi](const CubePoint& x) {
        CubePoint zero(x.size(), DyadicVec::zeros(x.front().dim()));
        return inner(zero);
      };
    }
  }
  const auto rep = hypothesis_check(samples);
  Check h{"factor.hypothesis"};
  h.pass = rep.pass;
  h.detail = io::to_json(rep);
  for (const auto& lv : h.detail["levels"]) {
    if (lv.contains("witness")) {
      h.witness = compact(lv["witness"]);
      break;
    }
  }
  add(o, checks, std::move(h));
}

void suite_subadditivity(const RunConfig&, const Params& p, Outcome& o, Json& checks) {
  const ProjectionFactor factor(p.uint("a", "2"), p.uint("b", "1"));
  const unsigned q = p.uint("q", "5");
  const unsigned max_n = p.uint("max-N", "16");
  std::vector<unsigned> Ns;
  for (unsigned N = 1; N <= max_n; ++N) Ns.push_back(N);
  const auto epss = p.dyadics("eps", "1/4,1/8");
  for (const auto& delta : p.dyadics("delta", "1/8,1/16")) {
    const auto table = conditional_profile(factor, q, delta, Ns, epss);
    for (const auto& eps : epss) {
      const auto v = check_subadditivity(log_sequence(table, eps));
      Check c{"estimators.subadditivity"};
      c.pass = v.empty();
      c.detail = Json{{"delta", io::to_json(delta)}, {"eps", io::to_json(eps)}, {"violations", v.size()}};
      if (!v.empty()) c.witness = compact(io::to_json(std::vector<SubadditivityViolation>{v.front()}));
      add(o, checks, std::move(c));
    }
  }
}

void suite_covering(const RunConfig& cfg, const Params& p, Outcome& o, Json& checks) {
  const unsigned instances = p.uint("instances", "200");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> size(1, 9);
  std::uniform_int_distribution<int> coord(0, 16);
  std::uniform_int_distribution<int> scale(1, 8);
  Check c{"covering.sandwich"};
  for (unsigned k = 0; k < instances && c.pass; ++k) {
    std::vector<DyadicVec> pts(size(rng));
    for (auto& pt : pts) pt = DyadicVec({Dyadic(BigInt(coord(rng)), 4), Dyadic(BigInt(coord(rng)), 4)});
    const auto space = FiniteMetricSpace::from_points(
        pts, [](const DyadicVec& x, const DyadicVec& y) { return linf_dist(x, y).to_rational(); });
    const Rational eps(scale(rng), 16);
    const auto exact = cover_number_exact(space, eps);
    const auto greedy = cover_number_greedy(space, eps);
    const auto sep = separated_lower_bound(space, eps);
    if (!(sep.lower <= exact.lower && exact.lower == exact.upper && exact.upper <= greedy.upper &&
          certificates_valid(space, eps, exact) && certificates_valid(space, eps, greedy))) {
      c.pass = false;
      c.witness = "instance " + std::to_string(k) + " points=" + std::to_string(pts.size()) + " eps=" + to_string(eps);
    }
  }
  c.detail = Json{{"instances", instances}};
  add(o, checks, std::move(c));
}

void suite_waist(const RunConfig& cfg, const Params& p, Outcome& o, Json& checks) {
  const unsigned q = p.uint("q", "4");
  const auto rs = p.dyadics("r", "1/8,1/4,3/8");
  for (const auto& name : builtin_map_names()) {
    for (unsigned qq : {q, q + 1}) {
      const GridMap f = builtin_map(name, qq);
      const auto m = waist_check_measure(f, rs, cfg.threads);
      const auto cov = waist_check_cover(f, rs, m.best_t);
      Check c{"waist.corpus"};
      c.pass = m.pass && cov.pass;
      c.detail = Json{{"map", name}, {"q", qq}, {"best_ratio", to_string(m.best_ratio)}};
      if (!c.pass) c.witness = name + " q=" + std::to_string(qq) + " " + m.label;
      add(o, checks, std::move(c));
    }
  }
}

Outcome run_verify(const RunConfig& cfg, const Params& p) {
  const auto suite = p.text("suite", "all");
  Outcome o;
  Json checks = Json::array();
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "covering") {
    known = true;
    suite_covering(cfg, p, o, checks);
  }
  if (all || suite == "subadditivity") {
    known = true;
    suite_subadditivity(cfg, p, o, checks);
  }
  if (all || suite == "hypothesis") {
    known = true;
    suite_hypothesis(cfg, p, o, checks);
  }
  if (all || suite == "construction") {
    known = true;
    suite_construction(cfg, p, o, checks);
  }
  if (all || suite == "waist") {
    known = true;
    suite_waist(cfg, p, o, checks);
  }
  if (!known) throw UsageError("unknown suite '" + suite + "'");
  o.body["suite"] = suite;
  o.body["seed"] = cfg.seed;
  o.body["checks"] = std::move(checks);
  o.body["status"] = o.failed ? "FAIL" : "PASS";
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  const Params p(cfg);
  const auto& specs = command_specs();
  const auto it = specs.find(cfg.command);
  if (it == specs.end()) throw UsageError("unknown command '" + cfg.command + "'");
  for (const auto& [k, v] : cfg.params) {
    if (std::none_of(it->second.begin(), it->second.end(), [&k](const ParamSpec& s) { return s.name == k; })) {
      throw UsageError("unknown parameter --" + k + " for command " + cfg.command);
    }
  }
  const bool table_command = cfg.command == "profile" || cfg.command == "conditional";
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  if (cfg.format == "csv" && !table_command) throw UsageError("--format csv is only available for table commands");
  if (cfg.command == "cover") return run_cover(cfg, p);
  if (cfg.command == "profile") return run_profile(cfg, p);
  if (cfg.command == "conditional") return run_conditional(cfg, p);
  if (cfg.command == "waist") return run_waist(cfg, p);
  if (cfg.command == "block") return run_block(cfg, p);
  if (cfg.command == "construct") return run_construct(cfg, p);
  return run_verify(cfg, p);
}

void load_config(const std::string& path, RunConfig& cfg) {
  Json j;
  try {
    j = io::read_json_file(path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k == "command") cfg.command = v.get<std::string>();
    else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (k == "threads") cfg.threads = v.get<unsigned>();
    else if (k == "certificates") cfg.certificates = v.get<bool>();
    else if (k == "params") {
      if (!v.is_object()) throw UsageError("config params must be an object");
      for (const auto& [pk, pv] : v.items()) cfg.params[pk] = param_text(pv);
    } else if (k == "output") {
      if (v.is_string()) {
        cfg.output = v.get<std::string>();
      } else {
        if (v.contains("path")) cfg.output = v.at("path").get<std::string>();
        if (v.contains("format")) cfg.format = v.at("format").get<std::string>();
      }
    } else if (k == "format") {
      cfg.format = v.get<std::string>();
    } else {
      throw UsageError("unknown config key '" + k + "'");
    }
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : command_specs()) out.push_back(k);
    return out;
  }();
  return names;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Covering numbers, mean-dimension profiles, waist checks and block constructions", "mdim"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  std::string output;
  std::string format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool certificates = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--output,-o", output, "output file (default: stdout)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--seed", seed, "seed for sampling operations");
  app.add_option("--threads", threads, "worker cap (0 = hardware)");
  app.add_flag("--certificates", certificates, "emit cover and separation certificates");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, specs] : command_specs()) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& s : specs) {
      if (s.flag) sub->add_flag("--" + s.name, flags[name][s.name], s.help);
      else sub->add_option("--" + s.name, values[name][s.name], s.help);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  if (!config_path.empty()) {
    try {
      load_config(config_path, cfg);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("malformed config " + config_path + ": " + e.what());
    }
  }
  if (app.count("--output") != 0U) cfg.output = output;
  if (app.count("--format") != 0U) cfg.format = format;
  if (app.count("--seed") != 0U) cfg.seed = seed;
  if (app.count("--threads") != 0U) cfg.threads = threads;
  if (certificates) cfg.certificates = true;

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    if (!cfg.command.empty() && cfg.command != name) {
      throw UsageError("command '" + name + "' conflicts with config command '" + cfg.command + "'");
    }
    cfg.command = name;
    for (const auto& s : command_specs().at(name)) {
      const std::string opt = "--" + s.name;
      if (sub->count(opt) == 0U) continue;
      cfg.params[s.name] = s.flag ? (flags[name][s.name] ? "true" : "false") : values[name][s.name];
    }
  }
  if (cfg.command.empty()) throw UsageError("no command given (expected one of cover, profile, conditional, waist, block, construct, verify)");
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    o = dispatch(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "usage error: enumeration cap exceeded: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  }
  std::string text = o.csv.empty() ? o.body.dump(2) + "\n" : o.csv;
  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "usage error: cannot write " << config.output << '\n';
      return kExitUsage;
    }
    file << text;
  }
  for (const auto& f : o.failures) err << "FAIL " << f << '\n';
  return o.failed ? kExitCheckFailed : kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace mdim::cli
