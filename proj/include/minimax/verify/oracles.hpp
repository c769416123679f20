#pragma once

// Brute-force reference computations. They share no code path with the
// solvers they check.

#include <optional>

#include "minimax/core_model.hpp"
#include "minimax/lp.hpp"

namespace minimax::verify {

/// Optimum of a bounded LP with finite lower bounds by enumerating every
/// basic solution (active sets of n linearly independent constraints).
/// nullopt when no feasible vertex exists.
std::optional<double> vertex_enumeration_min(const lp::LinearProgram& lp, double feasibility_tol = 1e-9);

/// min over all |A|^|X| non-randomized rules of the Bayes risk.
double pure_rule_bayes_value(const FiniteDecisionProblem& problem, const FinitePrior& prior);

/// r(theta, delta) evaluated straight from the definition in long double.
long double definitional_risk(const FiniteDecisionProblem& problem, std::size_t theta,
                              const RandomizedProcedure& delta);

}  // namespace minimax::verify
