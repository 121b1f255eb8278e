#include <doctest.h>

#include "mdim/io.hpp"

using namespace mdim;
using io::Json;

TEST_CASE("grid map round trip") {
  GridMap f = saddle_map(2);
  Json j = io::grid_map_to_json(f);
  GridMap g = io::grid_map_from_json(j);
  CHECK(g.values() == f.values());
  CHECK(g.n() == 2);
  CHECK(io::grid_map_to_json(g) == j);

  Json short_values{{"n", 1}, {"m", 1}, {"q", 1}, {"values", {"0", "1"}}};
  CHECK_THROWS(io::grid_map_from_json(short_values));
  Json bad_number{{"n", 1}, {"m", 1}, {"q", 0}, {"values", {"0", "x"}}};
  CHECK_THROWS(io::grid_map_from_json(bad_number));
}

TEST_CASE("block set parsing") {
  Json ex = Json::parse(R"({"a": 1, "N": 2, "kind": "explicit", "blocks": [[["0"], ["0"]], [["1"], ["1"]]]})");
  BlockSet K = io::block_set_from_json(ex);
  CHECK(K.blocks().size() == 2);
  CHECK(io::to_json(K) == ex);

  Json box = Json::parse(R"({"a": 1, "N": 1, "kind": "box", "lo": [["1/4"]], "hi": [["3/4"]]})");
  CHECK(io::block_set_from_json(box).cover_upper(Rational(1, 4)) == 3);
  Json full = Json::parse(R"({"a": 2, "N": 2, "kind": "full"})");
  CHECK(io::block_set_from_json(full).kind() == BlockSet::Kind::kBox);
  CHECK_THROWS(io::block_set_from_json(Json::parse(R"({"a": 1, "N": 1, "kind": "other"})")));
}

TEST_CASE("metric space parsing") {
  Json d = Json::parse(R"({"distances": [["0", "1/2"], ["1/2", "0"]]})");
  FiniteMetricSpace s = io::metric_space_from_json(d);
  CHECK(s.size() == 2);
  CHECK(s.dist(0, 1) == BoundedValue(Rational(1, 2)));

  Json iv = Json::parse(R"({"distances": [["0", ["1/4", "1/2"]], [["1/4", "1/2"], "0"]]})");
  CHECK(io::metric_space_from_json(iv).dist(1, 0) == BoundedValue(Rational(1, 4), Rational(1, 2)));

  Json pts = Json::parse(R"({"points": [["0", "0"], ["1/2", "1/4"]], "metric": "linf"})");
  CHECK(io::metric_space_from_json(pts).dist(0, 1) == BoundedValue(Rational(1, 2)));

  CHECK_THROWS(io::metric_space_from_json(Json::parse(R"({"distances": [["0", "1"]]})")));
  CHECK_THROWS(io::metric_space_from_json(Json::parse(R"({"points": [["0"]], "metric": "l2"})")));
  CHECK_THROWS(io::metric_space_from_json(Json::parse("{}")));
}

TEST_CASE("lattice word parsing") {
  Json w = Json::parse(R"({"a": 1, "lo": -1, "hi": 0, "extension": "periodic", "symbols": [["0"], ["1/2"]]})");
  LatticeWord x = io::lattice_word_from_json(w);
  CHECK(x.at(1) == DyadicVec({Dyadic(0)}));
  CHECK(io::to_json(x) == w);
  w["hi"] = 3;
  CHECK_THROWS(io::lattice_word_from_json(w));
}

TEST_CASE("reports carry exact strings") {
  ProfileTable t;
  t.system_id = "x";
  t.rows.push_back(make_count_row(1, Dyadic::parse("1/2"), 3, 3));
  Json j = io::to_json(t);
  CHECK(j["rows"][0]["count_lower"] == "3");
  CHECK(j["rows"][0]["log_lower"].is_string());
  CHECK(j["rows"][0]["display"]["normalized_lower"].is_number_float());
  std::string csv = io::to_csv(t);
  CHECK(csv.rfind("N,eps,log_lower,log_upper,normalized_lower,normalized_upper\n1,1/2,", 0) == 0);

  CHECK(io::to_json(Dyadic::parse("6/8")) == "3/4");
  CHECK(io::to_json(BoundedValue(Rational(1, 3), Rational(1, 2))) == Json{{"lo", "1/3"}, {"hi", "1/2"}});
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(io::read_json_file("/definitely/not/here.json"), std::invalid_argument);
}
