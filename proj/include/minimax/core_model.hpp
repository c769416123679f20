#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "minimax/rational.hpp"

namespace minimax {

/// Tolerance used for every "sums to one" check on kernels, procedures and priors.
inline constexpr double kRowSumTolerance = 1e-12;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested rows; throws InputError on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Parameter, action or observation label. Numeric labels are kept exact
/// where possible; grid points from discretization are plain doubles.
class Label {
 public:
  using Value = std::variant<Rational, double, std::string>;

  Label() = default;
  Label(Rational r) : value_(r) {}
  Label(double d) : value_(d) {}
  Label(std::string s) : value_(std::move(s)) {}
  Label(const char* s) : value_(std::string(s)) {}

  const Value& value() const { return value_; }
  bool is_numeric() const { return !std::holds_alternative<std::string>(value_); }
  const Rational* rational() const { return std::get_if<Rational>(&value_); }
  /// Numeric value; throws InputError for string labels.
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const Label& a, const Label& b);

 private:
  Value value_;
};

using LabelList = std::vector<Label>;

/// Finite statistical decision problem: parameters, actions, observations,
/// loss(theta, a) and sampling kernel P_theta(x).
class FiniteDecisionProblem {
 public:
  /// Validates all invariants; throws InputError listing every violation.
  FiniteDecisionProblem(LabelList theta, LabelList actions, LabelList observations, Matrix loss,
                        Matrix kernel);

  /// Trivial-observation problem (|X| = 1, kernel all ones).
  static FiniteDecisionProblem no_data(LabelList theta, LabelList actions, Matrix loss);

  /// Skips validation; used by validate_problem() tests and file loaders
  /// that want a full report instead of an exception.
  static FiniteDecisionProblem unchecked(LabelList theta, LabelList actions, LabelList observations,
                                         Matrix loss, Matrix kernel);

  std::size_t num_theta() const { return theta_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  std::size_t num_obs() const { return observations_.size(); }

  const LabelList& theta_labels() const { return theta_; }
  const LabelList& action_labels() const { return actions_; }
  const LabelList& obs_labels() const { return observations_; }
  const Matrix& loss() const { return loss_; }
  const Matrix& kernel() const { return kernel_; }

 private:
  FiniteDecisionProblem() = default;

  LabelList theta_;
  LabelList actions_;
  LabelList observations_;
  Matrix loss_;
  Matrix kernel_;
};

/// Row-stochastic |X| x |A| matrix delta(x, a).
class RandomizedProcedure {
 public:
  RandomizedProcedure() = default;
  explicit RandomizedProcedure(Matrix matrix);

  /// Non-randomized rule: observation x maps to action choice[x].
  static RandomizedProcedure deterministic(std::span<const std::size_t> choice, std::size_t num_actions);
  /// Same point-mass action for every observation.
  static RandomizedProcedure constant(std::size_t num_obs, std::size_t num_actions, std::size_t action);

  const Matrix& matrix() const { return matrix_; }
  std::size_t num_obs() const { return matrix_.rows(); }
  std::size_t num_actions() const { return matrix_.cols(); }

 private:
  Matrix matrix_;
};

/// Finitely supported prior over parameter indices.
class FinitePrior {
 public:
  FinitePrior() = default;
  explicit FinitePrior(std::vector<double> weights);

  static FinitePrior point_mass(std::size_t size, std::size_t index);
  static FinitePrior uniform(std::size_t size);

  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<double> weights_;
};

struct RiskProfile {
  std::vector<double> values;
};

/// Every violated invariant; empty iff the problem is valid.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_problem(const FiniteDecisionProblem& problem);

/// r(theta, delta) = sum_x P_theta(x) sum_a delta(x, a) loss(theta, a).
double risk(const FiniteDecisionProblem& problem, std::size_t theta_index,
            const RandomizedProcedure& delta);

/// Risk at every parameter.
RiskProfile risk_profile(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta);

/// r(pi, delta) = sum_theta pi(theta) r(theta, delta).
double bayes_risk(const FiniteDecisionProblem& problem, const FinitePrior& prior,
                  const RandomizedProcedure& delta);

double worst_case_risk(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta);

/// Pointwise convex combination sum_i w_i delta_i.
RandomizedProcedure mix_procedures(std::span<const RandomizedProcedure> deltas,
                                   std::span<const double> weights);

/// The problem with parameter rows reordered: row i of the result is row
/// order[i] of the input.
FiniteDecisionProblem permute_theta(const FiniteDecisionProblem& problem,
                                    std::span<const std::size_t> order);

}  // namespace minimax
