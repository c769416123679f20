#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "minimax/core_model.hpp"
#include "minimax/discretization.hpp"

namespace minimax {

/// Theta = A = {1, 1/2, ..., 1/n}, no data, loss 1 if theta < a, 0 if equal,
/// -1 if theta > a.
FiniteDecisionProblem pick_smaller_game(std::size_t n);

/// Theta = A = {1, ..., n}, no data, loss clamp(theta - a, -1, 1).
FiniteDecisionProblem clamp_game(std::size_t n);

/// Two-parameter test: 0-1 loss, P(x=1) = 3/4 under theta1 and 1/4 under theta2.
FiniteDecisionProblem binary_test_problem();

/// 2x2 loss [[1,-1],[-1,1]], no data.
FiniteDecisionProblem matching_pennies_problem();

double pick_smaller_loss(const Rational& theta, const Rational& action);
double clamp_loss(const Rational& theta, const Rational& action);

/// Finite mixture over exact-valued points (actions or parameters).
struct PointMixture {
  std::vector<Rational> points;
  std::vector<double> weights;
};

struct WitnessReport {
  std::variant<Rational, RandomizedProcedure> witness;
  /// The point-mass action of the statistician witness, or the nature point.
  Rational point;
  double achieved_value = 0.0;
  double epsilon = 0.0;
  /// The claimed inequality, rechecked through risk() / bayes_risk().
  bool holds = false;
};

/// Against a procedure on finitely many points 1/m, finds theta0 below the
/// smallest set K carrying mass > 1 - eps. Its risk exceeds 1 - 2 eps.
WitnessReport nature_witness(const PointMixture& delta, double epsilon);

/// Against a prior on finitely many points 1/m, finds the point-mass rule at
/// theta0 below the smallest set B with mass > 1 - eps. Its Bayes risk is
/// below 2 eps - 1.
WitnessReport statistician_witness(const PointMixture& prior, double epsilon);

struct EscapingEntry {
  std::int64_t k = 0;
  std::vector<double> bayes_risks;  // one per procedure
  /// Procedures whose support reaches K - 1 or beyond, where the escaping
  /// argument does not apply.
  std::vector<std::size_t> flagged;
  double infimum = 0.0;
};

/// For each K, the Bayes risk of every procedure against the point mass at
/// K in the clamp problem.
std::vector<EscapingEntry> escaping_prior_report(const std::vector<std::int64_t>& k_list,
                                                 const std::vector<PointMixture>& procedures);

/// Theta = A = [0, 1], no data, loss |theta - a|, k = 1.
MetricFamily location_family();
/// Theta = A = [0, 1], X = {0, 1}, P_theta(1) = theta, loss (theta - a)^2, k = 3.
MetricFamily bernoulli_family();
/// Theta = A = [0, length], no data, loss clamp(theta - a, -1, 1), k = 1.
MetricFamily clamp_family(double length = 4.0);

/// Builtin family by name ("location", "bernoulli", "clamp"); InputError
/// listing the alternatives otherwise.
MetricFamily family_by_name(const std::string& name, const std::vector<double>& parameters = {});
std::vector<std::string> family_names();

/// Builtin finite problem by name ("pick_smaller", "clamp", "binary_test",
/// "matching_pennies"); n is the truncation size where applicable.
FiniteDecisionProblem problem_by_name(const std::string& name, std::size_t n);
std::vector<std::string> problem_names();

}  // namespace minimax
