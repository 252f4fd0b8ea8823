#pragma once

// JSON form of a decision problem:
//
//   {"actions": [{"label": "y1", "outcomes": [1, 100], "probs": [0.8, 0.2]}, ...],
//    "utility": {"kind": "linear", "params": [1, 0]}}

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fracdec/decision.hpp"

namespace fracdec {

nlohmann::json to_json(const UtilityFunction& u);
UtilityFunction utility_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DecisionProblem& problem);
/// Throws ValidationError on missing fields or wrong types.
DecisionProblem problem_from_json(const nlohmann::json& j);

std::string problem_to_json_text(const DecisionProblem& problem, int indent = 2);
DecisionProblem problem_from_json_text(std::string_view text);
DecisionProblem load_problem(const std::filesystem::path& path);

}  // namespace fracdec
