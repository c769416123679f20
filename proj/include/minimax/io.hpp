#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "minimax/core_model.hpp"
#include "minimax/discretization.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/transport.hpp"

namespace minimax::io {

using nlohmann::json;

/// Rounds to 12 significant digits so reports are reproducible text.
double round12(double value);

json label_to_json(const Label& label);
/// Numbers become exact rationals when they are finite decimals; strings of
/// the form "p/q" or "p" become rationals, anything else stays a string.
Label label_from_json(const json& value);

/// Parses a problem document. Malformed JSON and invariant violations throw
/// InputError; JSON syntax errors carry line and column.
FiniteDecisionProblem parse_problem(const std::string& text);
FiniteDecisionProblem load_problem(const std::filesystem::path& path);
json problem_to_json(const FiniteDecisionProblem& problem);

DiscreteMeasure parse_measure(const std::string& text);
DiscreteMeasure load_measure(const std::filesystem::path& path);

json solve_report(const GameSolution& solution, bool certified);
json approximation_report(const std::vector<ApproximationResult>& results);
json fictitious_play_report(const FictitiousPlayResult& result, std::size_t iterations);

std::string read_file(const std::filesystem::path& path);

}  // namespace minimax::io
