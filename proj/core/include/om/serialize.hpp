#pragma once

#include "om/fmd.hpp"
#include "om/membrane.hpp"

#include <json.hpp>

namespace om {

inline constexpr const char* kSolutionSchema = "om-solution/1";

nlohmann::json solution_to_json(const MembraneSolution& sol);
MembraneSolution solution_from_json(const nlohmann::json& j);

nlohmann::json fmd_to_json(const FmdSolution& fmd);
nlohmann::json optimality_to_json(const OptimalityRecord& rec);

// Temp-and-rename write.
void write_text_atomic(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);

} // namespace om
