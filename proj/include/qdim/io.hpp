#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qdim/codes.hpp"
#include "qdim/measure.hpp"
#include "qdim/quantizer.hpp"

// Serialization. JSON documents accept every real either as a number or as a
// decimal string (strings survive locale trouble and preserve exact decimal
// input); output always uses plain numbers. CSV tables have a mandatory
// header row "n,V_n,tail_bound,codebook_points" with the codebook points
// appended as extra columns, one per point (rows may differ in width).

namespace qdim {

double parse_real(const nlohmann::json& value);

nlohmann::json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& doc);

nlohmann::json system_to_json(const CondensationSystem& system);
CondensationSystem system_from_json(const nlohmann::json& doc);

DiscreteMeasure load_measure(const std::string& path);
CondensationSystem load_system(const std::string& path);

nlohmann::json result_to_json(const QuantizationResult& result);

// Arrays of symbol arrays, members in lexicographic order.
nlohmann::json antichain_to_json(const Antichain& gamma);

void write_results_csv(std::ostream& out, const std::vector<QuantizationResult>& results);
// Reads back (n, V_n) pairs from the first two columns.
std::vector<std::pair<double, double>> read_pairs_csv(std::istream& in);

}  // namespace qdim
