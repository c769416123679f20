#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "minimax/core_model.hpp"

namespace minimax {

/// Saddle point of a finite game: value V, minimax procedure, least
/// favorable prior, and the certified gap between the procedure's worst-case
/// risk and the prior's Bayes value.
struct GameSolution {
  double value = 0.0;
  RandomizedProcedure minimax_procedure;
  FinitePrior least_favorable_prior;
  double duality_gap = 0.0;
};

/// Restriction of the game to a parameter subset and to mixtures of a finite
/// procedure set, at a level v.
struct SeparationQuery {
  std::vector<std::size_t> theta_subset;
  std::vector<RandomizedProcedure> procedure_set;
  double level = 0.0;
};

/// inf over pure rules d of r(prior, d). The minimizing rule decomposes per
/// observation, so this is exact and polynomial.
double bayes_value(const FiniteDecisionProblem& problem, const FinitePrior& prior);

/// A Bayes rule for the prior (ties broken by lowest action index).
RandomizedProcedure bayes_rule(const FiniteDecisionProblem& problem, const FinitePrior& prior);

/// Solves the behavioral-strategy LP
///   min t  s.t.  r(theta, delta) <= t for all theta,  sum_a delta(x, a) = 1.
/// The least favorable prior is the negated dual of the theta rows.
GameSolution minimax_lp(const FiniteDecisionProblem& problem);

struct FictitiousPlayResult {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  FinitePrior empirical_prior;
  RandomizedProcedure empirical_procedure;
};

/// Alternating fictitious play. Nature opens with parameter 0; each player
/// best-responds to the other's empirical average, ties to the lowest index.
/// lower_bound = Bayes value of the empirical prior, upper_bound = worst-case
/// risk of the empirical procedure; both bracket the game value.
FictitiousPlayResult fictitious_play(const FiniteDecisionProblem& problem, std::size_t iterations);

/// worst_case_risk(delta) - bayes_risk(prior, delta); never negative.
double weak_duality_gap(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta,
                        const FinitePrior& prior);

struct SaddleReport {
  double worst_case_risk = 0.0;
  double bayes_value = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
  bool passed() const { return upper_ok && lower_ok; }
  std::string describe() const;
};

/// Checks worst_case_risk(procedure) <= value + tol and that every pure rule
/// has Bayes risk >= value - tol under the prior.
SaddleReport certify_saddle(const FiniteDecisionProblem& problem, const GameSolution& solution,
                            double tol);

/// min over mixtures of query.procedure_set of max over query.theta_subset of
/// the mixture's risk.
double subgame_value(const FiniteDecisionProblem& problem, const SeparationQuery& query);

struct SubgameSolution {
  double value = 0.0;
  std::vector<double> mixture;        // weights on the procedure set
  std::vector<double> theta_weights;  // dual weights on the theta subset
};

SubgameSolution solve_subgame(const FiniteDecisionProblem& problem, const SeparationQuery& query);

/// Parameters carrying positive dual weight in the full-parameter subgame
/// over `procedures`. The subgame restricted to them still exceeds `level`.
/// Throws InputError when the full subgame value is <= level.
std::vector<std::size_t> finite_certificate_support(const FiniteDecisionProblem& problem,
                                                    const std::vector<RandomizedProcedure>& procedures,
                                                    double level);

}  // namespace minimax
