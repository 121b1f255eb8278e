#pragma once

// JSON and CSV forms of every report. All numbers that matter are exact
// strings ("3/8", "118098"); floats appear only under "display" keys.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "mdim/block_system.hpp"
#include "mdim/construction.hpp"
#include "mdim/covering.hpp"
#include "mdim/estimators.hpp"
#include "mdim/factor_maps.hpp"
#include "mdim/waist.hpp"

namespace mdim::io {

using Json = nlohmann::ordered_json;

Json to_json(const Dyadic& d);
Json to_json(const DyadicVec& v);
Json to_json(const Block& block);
Json to_json(const BoundedValue& v);
Json to_json(const LatticeWord& w);
Json to_json(const CoverResult& r, bool certificates);
Json to_json(const ProfileTable& t);
Json to_json(const RateEstimate& e);
Json to_json(const SlopeBracket& b);
Json to_json(const std::vector<SubadditivityViolation>& v);
Json to_json(const WaistMeasureReport& r, bool certificates);
Json to_json(const WaistCoverReport& r, bool certificates);
Json to_json(const BlockSet& K);
Json to_json(const BlockCoverReport& r);
Json to_json(const Construction& c);
Json to_json(const ExpansivityReport& r);
Json to_json(const SyndeticReport& r);
Json to_json(const HypothesisReport& r);

/// Columns N, eps, log_lower, log_upper, normalized_lower, normalized_upper,
/// prefixed by a, b for factor tables.
std::string to_csv(const ProfileTable& t);

Dyadic dyadic_from_json(const Json& j);
DyadicVec dyadic_vec_from_json(const Json& j);
Block block_from_json(const Json& j);
LatticeWord lattice_word_from_json(const Json& j);
/// {"n", "m", "q", "values": flat list of rational strings, node-major}
GridMap grid_map_from_json(const Json& j);
Json grid_map_to_json(const GridMap& f);
/// {"a", "N", "kind": "explicit", "blocks": [...]} or
/// {"a", "N", "kind": "box", "lo": block, "hi": block}
BlockSet block_set_from_json(const Json& j);
/// {"distances": [[...]]} with exact or [lo, hi] entries, or
/// {"points": [[...]], "metric": "linf"} with dyadic coordinates.
FiniteMetricSpace metric_space_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace mdim::io
