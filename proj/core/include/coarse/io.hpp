#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coarse/covers.hpp"
#include "coarse/extend.hpp"
#include "coarse/metric.hpp"
#include "coarse/simplex.hpp"
#include "coarse/verify.hpp"

// JSON artifacts. Every file carries "v": 1. Parse failures throw ParseError.
namespace coarse::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json read_json_file(const std::string& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const json& doc);

json space_to_json(const metric::FiniteMetricSpace& space);
metric::FiniteMetricSpace space_from_json(const json& doc);

json pou_to_json(const simplex::PartitionOfUnity& f, const std::string& space_ref);
// Throws UnknownPoint for ids outside [0, universe).
simplex::PartitionOfUnity pou_from_json(const json& doc, std::size_t universe);

json tree_to_json(const covers::DecompositionTree& tree);
covers::DecompositionTree tree_from_json(const json& doc);

json families_to_json(const std::vector<verify::CoverFamily>& families);
std::vector<verify::CoverFamily> families_from_json(const json& doc);

json schedule_to_json(const extend::BudgetSchedule& schedule);

json lipschitz_to_json(const verify::LipschitzReport& rep);
json cobounded_to_json(const verify::CoboundedReport& rep);
json tree_report_to_json(const covers::TreeReport& rep);
json certificate_report_to_json(const extend::Certificate& cert);

// "paper", "linear:<c>" or "table:<path>" (a JSON file {"v":1,"points":[[x,E],...]}).
extend::Modulus modulus_from_spec(const std::string& spec);

}  // namespace coarse::io
