#include "minimax/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "minimax/errors.hpp"
#include "minimax/kernels.hpp"

namespace minimax {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw InputError("ragged matrix: row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " entries, expected " + std::to_string(cols));
    }
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

// ---------------------------------------------------------------------------
// Label

double Label::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_double();
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  throw InputError("label '" + std::get<std::string>(value_) + "' is not numeric");
}

std::string Label::to_string() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->to_string();
  if (const auto* d = std::get_if<double>(&value_)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", *d);
    return buf;
  }
  return std::get<std::string>(value_);
}

bool operator==(const Label& a, const Label& b) {
  if (a.is_numeric() != b.is_numeric()) return false;
  if (!a.is_numeric()) return std::get<std::string>(a.value_) == std::get<std::string>(b.value_);
  const auto* ra = a.rational();
  const auto* rb = b.rational();
  if (ra && rb) return *ra == *rb;
  return a.to_double() == b.to_double();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_labels(const LabelList& labels, const char* name, std::vector<std::string>& out) {
  if (labels.empty()) {
    out.push_back(std::string(name) + " labels are empty");
    return;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) {
        out.push_back(std::string(name) + " label '" + labels[i].to_string() + "' is duplicated (indices " +
                      std::to_string(j) + " and " + std::to_string(i) + ")");
      }
    }
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

// Shortest round-trip form: 0.9 prints as 0.9, a near miss of 1 stays visible.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Checks a row-stochastic matrix and appends violations.
void check_stochastic_rows(const Matrix& m, const std::string& what, std::vector<std::string>& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    bool row_ok = true;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v)) {
        out.push_back(what + " entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not finite");
        row_ok = false;
      } else if (v < 0.0) {
        out.push_back(what + " entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is negative: " +
                      fmt(v));
        row_ok = false;
      }
      sum += v;
    }
    if (row_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
      out.push_back(what + " row " + std::to_string(r) + " sums to " + fmt(sum) + ", expected 1");
    }
  }
}

void check_distribution(std::span<const double> w, const std::string& what) {
  if (w.empty()) throw InputError(what + " is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      throw InputError(what + " weight " + std::to_string(i) + " is negative or not finite: " + fmt(w[i]));
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) throw InputError(what + " sums to " + fmt(sum) + ", expected 1");
}

void require_compatible(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta) {
  if (delta.num_obs() != problem.num_obs() || delta.num_actions() != problem.num_actions()) {
    throw InputError("procedure is " + std::to_string(delta.num_obs()) + "x" + std::to_string(delta.num_actions()) +
                     " but the problem has |X|=" + std::to_string(problem.num_obs()) +
                     ", |A|=" + std::to_string(problem.num_actions()));
  }
}

}  // namespace

ValidationReport validate_problem(const FiniteDecisionProblem& problem) {
  ValidationReport report;
  auto& out = report.violations;
  check_labels(problem.theta_labels(), "theta", out);
  check_labels(problem.action_labels(), "action", out);
  check_labels(problem.obs_labels(), "observation", out);

  const Matrix& loss = problem.loss();
  const Matrix& kernel = problem.kernel();
  if (loss.rows() != problem.num_theta() || loss.cols() != problem.num_actions()) {
    out.push_back("loss is " + std::to_string(loss.rows()) + "x" + std::to_string(loss.cols()) + ", expected " +
                  std::to_string(problem.num_theta()) + "x" + std::to_string(problem.num_actions()));
  } else {
    for (std::size_t t = 0; t < loss.rows(); ++t) {
      for (std::size_t a = 0; a < loss.cols(); ++a) {
        if (!std::isfinite(loss(t, a))) {
          out.push_back("loss entry (" + std::to_string(t) + ", " + std::to_string(a) + ") [theta=" +
                        problem.theta_labels()[t].to_string() + ", action=" +
                        problem.action_labels()[a].to_string() + "] is not finite");
        }
      }
    }
  }
  if (kernel.rows() != problem.num_theta() || kernel.cols() != problem.num_obs()) {
    out.push_back("kernel is " + std::to_string(kernel.rows()) + "x" + std::to_string(kernel.cols()) +
                  ", expected " + std::to_string(problem.num_theta()) + "x" + std::to_string(problem.num_obs()));
  } else {
    check_stochastic_rows(kernel, "kernel", out);
  }
  return report;
}

// ---------------------------------------------------------------------------
// FiniteDecisionProblem

FiniteDecisionProblem::FiniteDecisionProblem(LabelList theta, LabelList actions, LabelList observations,
                                             Matrix loss, Matrix kernel)
    : theta_(std::move(theta)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      loss_(std::move(loss)),
      kernel_(std::move(kernel)) {
  const auto report = validate_problem(*this);
  if (!report.ok()) throw InputError("invalid decision problem: " + join(report.violations));
}

FiniteDecisionProblem FiniteDecisionProblem::no_data(LabelList theta, LabelList actions, Matrix loss) {
  Matrix kernel(theta.size(), 1, 1.0);
  return FiniteDecisionProblem(std::move(theta), std::move(actions), LabelList{Label(Rational(0))},
                               std::move(loss), std::move(kernel));
}

FiniteDecisionProblem FiniteDecisionProblem::unchecked(LabelList theta, LabelList actions,
                                                       LabelList observations, Matrix loss, Matrix kernel) {
  FiniteDecisionProblem p;
  p.theta_ = std::move(theta);
  p.actions_ = std::move(actions);
  p.observations_ = std::move(observations);
  p.loss_ = std::move(loss);
  p.kernel_ = std::move(kernel);
  return p;
}

// ---------------------------------------------------------------------------
// Procedures and priors

RandomizedProcedure::RandomizedProcedure(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.cols() == 0) throw InputError("procedure matrix is empty");
  std::vector<std::string> violations;
  check_stochastic_rows(matrix_, "procedure", violations);
  if (!violations.empty()) throw InputError("invalid procedure: " + join(violations));
}

RandomizedProcedure RandomizedProcedure::deterministic(std::span<const std::size_t> choice,
                                                       std::size_t num_actions) {
  Matrix m(choice.size(), num_actions);
  for (std::size_t x = 0; x < choice.size(); ++x) {
    if (choice[x] >= num_actions) throw InputError("action index out of range");
    m(x, choice[x]) = 1.0;
  }
  return RandomizedProcedure(std::move(m));
}

RandomizedProcedure RandomizedProcedure::constant(std::size_t num_obs, std::size_t num_actions,
                                                  std::size_t action) {
  std::vector<std::size_t> choice(num_obs, action);
  return deterministic(choice, num_actions);
}

FinitePrior::FinitePrior(std::vector<double> weights) : weights_(std::move(weights)) {
  check_distribution(weights_, "prior");
}

FinitePrior FinitePrior::point_mass(std::size_t size, std::size_t index) {
  if (index >= size) throw InputError("point mass index out of range");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return FinitePrior(std::move(w));
}

FinitePrior FinitePrior::uniform(std::size_t size) {
  if (size == 0) throw InputError("uniform prior over an empty set");
  return FinitePrior(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

// ---------------------------------------------------------------------------
// Risk

double risk(const FiniteDecisionProblem& problem, std::size_t theta_index, const RandomizedProcedure& delta) {
  require_compatible(problem, delta);
  if (theta_index >= problem.num_theta()) throw InputError("theta index out of range");
  const Matrix& loss = problem.loss();
  const Matrix& kernel = problem.kernel();
  const Matrix& d = delta.matrix();
  double total = 0.0;
  for (std::size_t x = 0; x < problem.num_obs(); ++x) {
    double inner = 0.0;
    for (std::size_t a = 0; a < problem.num_actions(); ++a) inner += d(x, a) * loss(theta_index, a);
    total += kernel(theta_index, x) * inner;
  }
  return total;
}

RiskProfile risk_profile(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta) {
  require_compatible(problem, delta);
  return RiskProfile{kernels::risk_profile(problem.loss(), problem.kernel(), delta.matrix())};
}

double bayes_risk(const FiniteDecisionProblem& problem, const FinitePrior& prior, const RandomizedProcedure& delta) {
  if (prior.size() != problem.num_theta()) {
    throw InputError("prior has " + std::to_string(prior.size()) + " weights but the problem has " +
                     std::to_string(problem.num_theta()) + " parameters");
  }
  const auto profile = risk_profile(problem, delta);
  double total = 0.0;
  for (std::size_t t = 0; t < prior.size(); ++t) {
    if (prior[t] != 0.0) total += prior[t] * profile.values[t];
  }
  return total;
}

double worst_case_risk(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta) {
  const auto profile = risk_profile(problem, delta);
  return *std::max_element(profile.values.begin(), profile.values.end());
}

RandomizedProcedure mix_procedures(std::span<const RandomizedProcedure> deltas, std::span<const double> weights) {
  if (deltas.empty()) throw InputError("cannot mix an empty procedure list");
  if (deltas.size() != weights.size()) {
    throw InputError("mixture has " + std::to_string(deltas.size()) + " procedures but " +
                     std::to_string(weights.size()) + " weights");
  }
  check_distribution(weights, "mixture weights");
  const std::size_t rows = deltas.front().num_obs();
  const std::size_t cols = deltas.front().num_actions();
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i].num_obs() != rows || deltas[i].num_actions() != cols) {
      throw InputError("procedure " + std::to_string(i) + " has a different shape");
    }
    for (std::size_t x = 0; x < rows; ++x) {
      for (std::size_t a = 0; a < cols; ++a) out(x, a) += weights[i] * deltas[i].matrix()(x, a);
    }
  }
  // Row sums may drift by a few ulps; the mixture of stochastic rows is stochastic.
  return RandomizedProcedure(std::move(out));
}

FiniteDecisionProblem permute_theta(const FiniteDecisionProblem& problem, std::span<const std::size_t> order) {
  if (order.size() != problem.num_theta()) throw InputError("permutation has the wrong length");
  LabelList theta;
  Matrix loss(problem.num_theta(), problem.num_actions());
  Matrix kernel(problem.num_theta(), problem.num_obs());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= problem.num_theta()) throw InputError("permutation index out of range");
    theta.push_back(problem.theta_labels()[order[i]]);
    std::copy_n(problem.loss().row(order[i]).begin(), problem.num_actions(), loss.row(i).begin());
    std::copy_n(problem.kernel().row(order[i]).begin(), problem.num_obs(), kernel.row(i).begin());
  }
  return FiniteDecisionProblem(std::move(theta), problem.action_labels(), problem.obs_labels(), std::move(loss),
                               std::move(kernel));
}

}  // namespace minimax
