// Space and map file formats consumed by the CLI.
//
// JSON space: {"points": [...], "groups": [...], "measure": [...]?,
//              "embedding": [[...]] | "dist": [[...]]}
// exactly one of embedding/dist; measure defaults to uniform; groups are
// 1-based indices. CSV alternative for embeddings: header id,group,x1..xm.
#pragma once

#include <istream>
#include <string>
#include <unordered_map>

#include "json.hpp"

#include "fairspace/metric_space.hpp"

namespace fairspace {

GroupedMetricSpace parse_space_file(const std::string& path);
GroupedMetricSpace parse_space_json(const nlohmann::json& j, const std::string& space_id);
GroupedMetricSpace parse_space_csv(std::istream& in, const std::string& space_id);

// Map file: {"assignment": {"domain-id": "codomain-id", ...}}
std::unordered_map<std::string, std::string> parse_map_file(const std::string& path);

nlohmann::json space_to_json(const GroupedMetricSpace& space);

}  // namespace fairspace
