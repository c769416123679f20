#include "minimax/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax::io {

double round12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

json label_to_json(const Label& label) {
  if (const auto* r = label.rational()) {
    if (r->den() == 1) return r->num();
    return r->to_string();
  }
  if (label.is_numeric()) return round12(label.to_double());
  return label.to_string();
}

Label label_from_json(const json& value) {
  if (value.is_number_integer()) return Label(Rational(value.get<std::int64_t>()));
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (!std::isfinite(d)) throw InputError("label is not finite");
    if (auto r = Rational::parse(value.dump())) return Label(*r);
    return Label(d);
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (auto r = Rational::parse(s)) return Label(*r);
    return Label(s);
  }
  throw InputError("labels must be strings or numbers, got " + value.dump());
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

LabelList labels(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array");
  LabelList out;
  for (const auto& v : arr) out.push_back(label_from_json(v));
  return out;
}

Matrix matrix(const json& doc, const char* key) {
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < arr.size(); ++r) {
    if (!arr[r].is_array()) throw InputError(std::string(key) + " row " + std::to_string(r) + " is not an array");
    std::vector<double> row;
    for (std::size_t c = 0; c < arr[r].size(); ++c) {
      if (!arr[r][c].is_number()) {
        throw InputError(std::string(key) + " entry (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") is not a number");
      }
      row.push_back(arr[r][c].get<double>());
    }
    rows.push_back(std::move(row));
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const InputError& e) {
    throw InputError(std::string(key) + ": " + e.what());
  }
}

std::vector<double> numbers(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw InputError(std::string("\"") + key + "\" must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) throw InputError(std::string("\"") + key + "\" contains a non-number: " + v.dump());
    out.push_back(v.get<double>());
  }
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (double v : m.row(r)) row.push_back(round12(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(round12(x));
  return out;
}

}  // namespace

FiniteDecisionProblem parse_problem(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("problem document must be a JSON object");
  LabelList theta = labels(doc, "theta");
  LabelList actions = labels(doc, "actions");
  if (!doc.contains("loss")) throw InputError("missing key \"loss\"");
  Matrix loss = matrix(doc, "loss");

  LabelList observations;
  Matrix kernel;
  if (doc.contains("kernel")) {
    observations = labels(doc, "observations");
    kernel = matrix(doc, "kernel");
  } else {
    observations = doc.contains("observations") ? labels(doc, "observations") : LabelList{Label(Rational(0))};
    if (observations.size() != 1) {
      throw InputError("\"kernel\" may only be omitted when there is exactly one observation");
    }
    kernel = Matrix(theta.size(), 1, 1.0);
  }

  auto problem = FiniteDecisionProblem::unchecked(std::move(theta), std::move(actions), std::move(observations),
                                                  std::move(loss), std::move(kernel));
  const auto report = validate_problem(problem);
  if (!report.ok()) {
    std::string msg = "invalid problem:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw InputError(msg);
  }
  return problem;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FiniteDecisionProblem load_problem(const std::filesystem::path& path) {
  try {
    return parse_problem(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

json problem_to_json(const FiniteDecisionProblem& problem) {
  json doc;
  auto list = [](const LabelList& ls) {
    json arr = json::array();
    for (const auto& l : ls) arr.push_back(label_to_json(l));
    return arr;
  };
  doc["theta"] = list(problem.theta_labels());
  doc["actions"] = list(problem.action_labels());
  doc["observations"] = list(problem.obs_labels());
  doc["loss"] = matrix_json(problem.loss());
  doc["kernel"] = matrix_json(problem.kernel());
  return doc;
}

DiscreteMeasure parse_measure(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("measure document must be a JSON object");
  return DiscreteMeasure(numbers(doc, "support"), numbers(doc, "weights"));
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  try {
    return parse_measure(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

json solve_report(const GameSolution& solution, bool certified) {
  json out;
  out["value"] = round12(solution.value);
  out["procedure"] = matrix_json(solution.minimax_procedure.matrix());
  out["prior"] = vector_json(solution.least_favorable_prior.weights());
  out["gap"] = round12(solution.duality_gap);
  out["certified"] = certified;
  return out;
}

json approximation_report(const std::vector<ApproximationResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    json entry;
    entry["mesh"] = round12(r.mesh);
    entry["value"] = round12(r.discrete_value);
    entry["maximin"] = round12(r.discrete_maximin);
    entry["interval"] = json::array({round12(r.interval_lo), round12(r.interval_hi)});
    json support = json::array();
    json weights = json::array();
    for (std::size_t i = 0; i < r.prior.size(); ++i) {
      if (r.prior[i] > 1e-12) {
        support.push_back(round12(r.theta_net[i]));
        weights.push_back(round12(r.prior[i]));
      }
    }
    entry["prior"] = {{"support", support}, {"weights", weights}};
    out.push_back(std::move(entry));
  }
  return out;
}

json fictitious_play_report(const FictitiousPlayResult& result, std::size_t iterations) {
  json out;
  out["iterations"] = iterations;
  out["lower"] = round12(result.lower_bound);
  out["upper"] = round12(result.upper_bound);
  out["width"] = round12(result.upper_bound - result.lower_bound);
  out["prior"] = vector_json(result.empirical_prior.weights());
  out["procedure"] = matrix_json(result.empirical_procedure.matrix());
  return out;
}

}  // namespace minimax::io
