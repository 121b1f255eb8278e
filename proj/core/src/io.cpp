#include "mdim/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdim::io {

namespace {

Json rational(const Rational& r) { return to_string(r); }
Json integer(const BigInt& v) { return to_string(v); }

Json target_json(const TargetPoint& t) {
  Json out = Json::array();
  for (const auto& v : t) out.push_back(rational(v));
  return out;
}

Json cube_point_json(const CubePoint& x) {
  Json out = Json::array();
  for (const auto& s : x) out.push_back(to_json(s));
  return out;
}

std::string text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw std::invalid_argument("expected an exact rational string, got " + j.dump());
}

}  // namespace

Json to_json(const Dyadic& d) { return d.to_string(); }

Json to_json(const DyadicVec& v) {
  Json out = Json::array();
  for (const auto& c : v.coords()) out.push_back(to_json(c));
  return out;
}

Json to_json(const Block& block) {
  Json out = Json::array();
  for (const auto& s : block) out.push_back(to_json(s));
  return out;
}

Json to_json(const BoundedValue& v) { return Json{{"lo", rational(v.lo)}, {"hi", rational(v.hi)}}; }

Json to_json(const LatticeWord& w) {
  Json out;
  out["a"] = w.alphabet_dim();
  out["lo"] = w.lo();
  out["hi"] = w.hi();
  out["extension"] = to_string(w.extension());
  out["symbols"] = to_json(w.symbols());
  return out;
}

Json to_json(const CoverResult& r, bool certificates) {
  Json out;
  out["lower"] = integer(r.lower);
  out["upper"] = integer(r.upper);
  out["exact"] = r.exact;
  if (certificates) {
    out["cover_certificate"] = r.cover_certificate;
    out["separated_certificate"] = r.separated_certificate;
  }
  return out;
}

Json to_json(const ProfileTable& t) {
  Json out;
  out["system"] = t.system_id;
  if (t.factor_dims) {
    out["a"] = t.factor_dims->first;
    out["b"] = t.factor_dims->second;
  }
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["N"] = r.N;
    row["eps"] = to_json(r.eps);
    if (r.count_lower) row["count_lower"] = integer(*r.count_lower);
    if (r.count_upper) row["count_upper"] = integer(*r.count_upper);
    row["log_lower"] = rational(r.log_count.lo);
    row["log_upper"] = rational(r.log_count.hi);
    if (r.normalized) {
      row["normalized_lower"] = rational(r.normalized->lo);
      row["normalized_upper"] = rational(r.normalized->hi);
      row["display"] = Json{{"normalized_lower", to_double(r.normalized->lo)},
                            {"normalized_upper", to_double(r.normalized->hi)}};
    }
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  out["caveats"] = t.caveats;
  return out;
}

Json to_json(const RateEstimate& e) {
  Json out;
  out["eps"] = to_json(e.eps);
  out["tail"] = e.tail;
  out["rate_lower"] = rational(e.rate_lower);
  out["rate_upper"] = rational(e.rate_upper);
  if (e.normalized) out["normalized"] = to_json(*e.normalized);
  out["certified"] = e.certified;
  out["structure_dependent"] = e.structure_dependent;
  return out;
}

Json to_json(const SlopeBracket& b) {
  Json out;
  out["eps"] = to_json(b.eps);
  out["N"] = b.N;
  out["m"] = b.tail;
  out["count_lower"] = integer(b.count_lower);
  out["count_upper"] = integer(b.count_upper);
  out["lower"] = rational(b.lower.lo);
  out["upper"] = rational(b.upper.hi);
  out["display"] = Json{{"lower", to_double(b.lower.lo)}, {"upper", to_double(b.upper.hi)}};
  return out;
}

Json to_json(const std::vector<SubadditivityViolation>& v) {
  Json out = Json::array();
  for (const auto& x : v) {
    out.push_back(Json{{"N1", x.N1}, {"N2", x.N2}, {"lhs", rational(x.lhs)}, {"rhs", rational(x.rhs)}});
  }
  return out;
}

Json to_json(const WaistMeasureReport& r, bool certificates) {
  Json out;
  out["best_t"] = target_json(r.best_t);
  out["best_ratio"] = rational(r.best_ratio);
  out["fiber_cells"] = r.fiber_cells;
  out["candidates"] = r.candidates.size();
  Json per = Json::array();
  for (const auto& c : r.per_r) {
    Json e;
    e["r"] = to_json(c.r);
    e["measure_lower"] = rational(c.measure.lo);
    e["measure_upper"] = rational(c.measure.hi);
    e["bound"] = rational(c.bound);
    e["ratio_upper"] = rational(c.ratio_upper);
    e["status"] = c.pass ? "PASS" : "FAIL-candidate";
    e["certified"] = c.certified;
    per.push_back(std::move(e));
  }
  out["per_r"] = std::move(per);
  out["status"] = r.pass ? "PASS" : "FAIL-candidate";
  out["label"] = r.label;
  if (certificates) {
    Json all = Json::array();
    for (const auto& c : r.candidates) {
      all.push_back(Json{{"t", target_json(c.t)},
                         {"min_ratio_upper", rational(c.min_ratio)},
                         {"min_ratio_lower", rational(c.min_ratio_lower)}});
    }
    out["candidate_ratios"] = std::move(all);
  }
  return out;
}

Json to_json(const WaistCoverReport& r, bool certificates) {
  Json out;
  out["t"] = target_json(r.t);
  Json per = Json::array();
  for (const auto& c : r.per_r) {
    Json e;
    e["r"] = to_json(c.r);
    e["separated"] = c.separated;
    e["bound"] = rational(c.bound);
    e["status"] = c.pass ? "PASS" : "FAIL";
    if (certificates) {
      Json w = Json::array();
      for (const auto& [lo, hi] : c.witness) w.push_back(Json{{"lo", to_json(lo)}, {"hi", to_json(hi)}});
      e["witness"] = std::move(w);
    }
    per.push_back(std::move(e));
  }
  out["per_r"] = std::move(per);
  out["status"] = r.pass ? "PASS" : "FAIL";
  return out;
}

Json to_json(const BlockSet& K) {
  Json out;
  out["a"] = K.alphabet_dim();
  out["N"] = K.block_length();
  if (K.kind() == BlockSet::Kind::kExplicit) {
    out["kind"] = "explicit";
    Json blocks = Json::array();
    for (const auto& b : K.blocks()) blocks.push_back(to_json(b));
    out["blocks"] = std::move(blocks);
  } else {
    out["kind"] = "box";
    out["lo"] = to_json(K.lo());
    out["hi"] = to_json(K.hi());
  }
  return out;
}

Json to_json(const BlockCoverReport& r) {
  Json out;
  out["N"] = r.N;
  out["L"] = r.L;
  out["eps"] = to_json(r.eps);
  out["m"] = r.tail;
  out["cover_count_K"] = integer(r.cover_count_K);
  out["exponent"] = r.exponent;
  out["formula"] = integer(r.formula);
  if (r.direct) {
    out["direct"] = integer(*r.direct);
    out["sample_size"] = r.sample_size;
  } else {
    out["direct"] = nullptr;
  }
  out["dominated"] = r.dominated;
  return out;
}

Json to_json(const Construction& c) {
  Json out;
  out["a"] = c.a;
  out["s_target"] = rational(c.s_target);
  out["depth"] = c.levels.size();
  Json levels = Json::array();
  for (const auto& lv : c.levels) {
    Json l;
    l["n"] = lv.n;
    l["N"] = lv.N;
    l["M"] = lv.M;
    l["ratio"] = rational(Rational(c.a * lv.M) / lv.N);
    if (lv.p != 0) {
      l["p"] = lv.p;
      l["q"] = lv.q;
      l["r"] = rational(lv.r);
      l["net_side"] = lv.net_side;
      Json w = Json::array();
      for (const auto& b : lv.waypoints) w.push_back(to_json(b));
      l["waypoints"] = std::move(w);
    } else {
      l["p"] = nullptr;
      l["q"] = nullptr;
      l["r"] = nullptr;
    }
    levels.push_back(std::move(l));
  }
  out["levels"] = std::move(levels);
  out["achieved_ratio"] = rational(c.achieved_ratio);
  return out;
}

Json to_json(const ExpansivityReport& r) {
  Json out;
  out["n"] = r.n;
  out["N"] = r.N;
  out["m"] = r.tail;
  out["pairs_checked"] = r.pairs_checked;
  out["exhaustive"] = r.exhaustive;
  out["status"] = r.pass ? "PASS" : "FAIL";
  if (r.witness) {
    out["witness"] = Json{{"x", cube_point_json(r.witness->first)},
                          {"y", cube_point_json(r.witness->second)},
                          {"distance", to_json(r.witness_distance)},
                          {"dN", to_json(r.witness_dN)}};
  }
  return out;
}

Json to_json(const SyndeticReport& r) {
  Json out;
  out["n"] = r.n;
  out["depth"] = r.depth;
  out["patterns"] = r.patterns;
  out["missing"] = r.missing;
  out["worst_gap"] = r.worst_gap;
  out["gap_bound"] = r.gap_bound;
  out["error"] = rational(r.error);
  out["error_bound"] = rational(r.error_bound);
  out["status"] = r.pass ? "PASS" : "FAIL";
  return out;
}

Json to_json(const HypothesisReport& r) {
  Json out;
  Json levels = Json::array();
  for (const auto& lv : r.levels) {
    Json l;
    l["N"] = lv.N;
    l["M"] = lv.M;
    l["ratio"] = rational(lv.ratio);
    l["pairs_checked"] = lv.pairs_checked;
    l["status"] = lv.pass ? "PASS" : "FAIL";
    if (lv.witness) {
      l["witness"] = Json{{"x", cube_point_json(lv.witness->first)},
                          {"y", cube_point_json(lv.witness->second)},
                          {"distance", to_json(lv.witness_distance)},
                          {"dN", to_json(lv.witness_dN)}};
    }
    levels.push_back(std::move(l));
  }
  out["levels"] = std::move(levels);
  out["ratio_trend"] = r.ratio_trend;
  out["status"] = r.pass ? "PASS" : "FAIL";
  return out;
}

std::string to_csv(const ProfileTable& t) {
  std::ostringstream os;
  if (t.factor_dims) os << "a,b,";
  os << "N,eps,log_lower,log_upper,normalized_lower,normalized_upper\n";
  for (const auto& r : t.rows) {
    if (t.factor_dims) os << t.factor_dims->first << ',' << t.factor_dims->second << ',';
    os << r.N << ',' << r.eps.to_string() << ',' << to_string(r.log_count.lo) << ',' << to_string(r.log_count.hi)
       << ',';
    if (r.normalized) os << to_string(r.normalized->lo) << ',' << to_string(r.normalized->hi);
    else os << ',';
    os << '\n';
  }
  return os.str();
}

Dyadic dyadic_from_json(const Json& j) { return Dyadic::parse(text(j)); }

DyadicVec dyadic_vec_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("symbol must be an array of dyadic strings");
  std::vector<Dyadic> c;
  for (const auto& e : j) c.push_back(dyadic_from_json(e));
  return DyadicVec(std::move(c));
}

Block block_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("block must be an array of symbols");
  Block b;
  for (const auto& e : j) b.push_back(dyadic_vec_from_json(e));
  return b;
}

LatticeWord lattice_word_from_json(const Json& j) {
  const auto a = j.at("a").get<std::size_t>();
  const auto lo = j.at("lo").get<std::int64_t>();
  const Extension ext = parse_extension(j.value("extension", std::string("zero")));
  Block symbols = block_from_json(j.at("symbols"));
  if (j.contains("hi") && j.at("hi").get<std::int64_t>() != lo + static_cast<std::int64_t>(symbols.size()) - 1) {
    throw std::invalid_argument("word window [lo, hi] does not match the symbol count");
  }
  return {a, lo, std::move(symbols), ext};
}

GridMap grid_map_from_json(const Json& j) {
  const auto n = j.at("n").get<unsigned>();
  const auto m = j.at("m").get<unsigned>();
  const auto q = j.at("q").get<unsigned>();
  const auto& flat = j.at("values");
  if (!flat.is_array() || flat.size() % m != 0) throw std::invalid_argument("values must be a flat array of n_nodes*m");
  std::vector<TargetPoint> values;
  for (std::size_t i = 0; i < flat.size(); i += m) {
    TargetPoint t;
    for (unsigned k = 0; k < m; ++k) t.push_back(parse_rational(text(flat[i + k])));
    values.push_back(std::move(t));
  }
  return {n, m, q, std::move(values)};
}

Json grid_map_to_json(const GridMap& f) {
  Json out;
  out["n"] = f.n();
  out["m"] = f.m();
  out["q"] = f.q();
  Json flat = Json::array();
  for (const auto& v : f.values()) {
    for (const auto& x : v) flat.push_back(rational(x));
  }
  out["values"] = std::move(flat);
  return out;
}

BlockSet block_set_from_json(const Json& j) {
  const auto a = j.at("a").get<unsigned>();
  const auto N = j.at("N").get<unsigned>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    std::vector<Block> blocks;
    for (const auto& b : j.at("blocks")) blocks.push_back(block_from_json(b));
    return BlockSet::explicit_set(a, N, std::move(blocks));
  }
  if (kind == "box") return BlockSet::box(a, N, block_from_json(j.at("lo")), block_from_json(j.at("hi")));
  if (kind == "full") return BlockSet::full(a, N);
  throw std::invalid_argument("block set kind must be explicit, box or full");
}

FiniteMetricSpace metric_space_from_json(const Json& j) {
  if (j.contains("distances")) {
    std::vector<std::vector<BoundedValue>> table;
    for (const auto& row : j.at("distances")) {
      std::vector<BoundedValue> r;
      for (const auto& e : row) {
        if (e.is_array()) {
          if (e.size() != 2) throw std::invalid_argument("interval distance must be [lo, hi]");
          r.emplace_back(parse_rational(text(e[0])), parse_rational(text(e[1])));
        } else {
          r.emplace_back(parse_rational(text(e)));
        }
      }
      table.push_back(std::move(r));
    }
    for (const auto& r : table) {
      if (r.size() != table.size()) throw std::invalid_argument("distance table must be square");
    }
    return FiniteMetricSpace(std::move(table));
  }
  if (j.contains("points")) {
    const auto metric = j.value("metric", std::string("linf"));
    if (metric != "linf") throw std::invalid_argument("only the linf metric is supported for point lists");
    std::vector<DyadicVec> pts;
    for (const auto& p : j.at("points")) pts.push_back(dyadic_vec_from_json(p));
    return FiniteMetricSpace::from_points(
        pts, [](const DyadicVec& x, const DyadicVec& y) { return linf_dist(x, y).to_rational(); });
  }
  throw std::invalid_argument("metric space needs \"distances\" or \"points\"");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace mdim::io
