#include "fracdec/decision_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fracdec/errors.hpp"

namespace fracdec {

using nlohmann::json;

json to_json(const UtilityFunction& u) {
    return json{{"kind", std::string(to_string(u.kind()))}, {"params", u.params()}};
}

UtilityFunction utility_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("utility must be an object with a string 'kind'");
    std::vector<double> params;
    if (j.contains("params")) {
        if (!j["params"].is_array()) throw ValidationError("utility 'params' must be an array");
        for (const auto& v : j["params"]) {
            if (!v.is_number()) throw ValidationError("utility 'params' must be numbers");
            params.push_back(v.get<double>());
        }
    }
    return UtilityFunction::from_kind(parse_utility_kind(j["kind"].get<std::string>()), params);
}

json to_json(const DecisionProblem& problem) {
    json actions = json::array();
    for (const auto& a : problem.actions()) {
        actions.push_back(json{{"label", a.label},
                               {"outcomes", a.outcomes},
                               {"probs", std::vector<double>(a.pmf.probs().begin(),
                                                             a.pmf.probs().end())}});
    }
    return json{{"actions", std::move(actions)}, {"utility", to_json(problem.utility())}};
}

namespace {

std::vector<double> number_array(const json& j, std::string_view field, std::size_t action) {
    if (!j.contains(field) || !j[std::string(field)].is_array())
        throw ValidationError(fmt::format("action {}: '{}' must be an array", action + 1, field));
    std::vector<double> out;
    for (const auto& v : j[std::string(field)]) {
        if (!v.is_number())
            throw ValidationError(fmt::format("action {}: '{}' must hold numbers", action + 1, field));
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

DecisionProblem problem_from_json(const json& j) {
    if (!j.is_object() || !j.contains("actions") || !j["actions"].is_array())
        throw ValidationError("decision problem must have an 'actions' array");
    if (!j.contains("utility")) throw ValidationError("decision problem must have a 'utility'");
    std::vector<ActionSpec> actions;
    std::size_t i = 0;
    for (const auto& a : j["actions"]) {
        if (!a.is_object()) throw ValidationError(fmt::format("action {} must be an object", i + 1));
        std::string label = fmt::format("y{}", i + 1);
        if (a.contains("label")) {
            if (!a["label"].is_string())
                throw ValidationError(fmt::format("action {}: 'label' must be a string", i + 1));
            label = a["label"].get<std::string>();
        }
        actions.emplace_back(std::move(label), number_array(a, "outcomes", i),
                             ProbVector(number_array(a, "probs", i)));
        ++i;
    }
    return DecisionProblem(std::move(actions), utility_from_json(j["utility"]));
}

std::string problem_to_json_text(const DecisionProblem& problem, int indent) {
    return to_json(problem).dump(indent);
}

DecisionProblem problem_from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("invalid JSON: {}", e.what()));
    }
    return problem_from_json(j);
}

DecisionProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return problem_from_json_text(buf.str());
}

}  // namespace fracdec
