#pragma once

#include <cstddef>
#include <random>

#include "minimax/builtins.hpp"
#include "minimax/core_model.hpp"
#include "minimax/lp.hpp"
#include "minimax/transport.hpp"

namespace minimax::verify {

using Rng = std::mt19937_64;

struct ProblemShape {
  std::size_t max_theta = 6;
  std::size_t max_actions = 6;
  std::size_t max_obs = 6;
  double loss_lo = -1.0;
  double loss_hi = 1.0;
};

/// Random valid problem with dimensions drawn uniformly from 1..max.
FiniteDecisionProblem random_problem(Rng& rng, const ProblemShape& shape = {});

/// Random probability vector of the given size; some entries may be exactly zero.
std::vector<double> random_simplex_point(Rng& rng, std::size_t size);

RandomizedProcedure random_procedure(Rng& rng, std::size_t num_obs, std::size_t num_actions);
FinitePrior random_prior(Rng& rng, std::size_t size);

/// Feasible, bounded LP with small-denominator rational data, n and m <= 8.
lp::LinearProgram random_bounded_lp(Rng& rng);

/// Measure with 1..max_support distinct points on a 1/64 grid in [-2, 2].
DiscreteMeasure random_measure(Rng& rng, std::size_t max_support = 6);

/// Mixture over points 1/m with m in 1..max_den.
PointMixture random_reciprocal_mixture(Rng& rng, std::size_t max_points, std::int64_t max_den);

}  // namespace minimax::verify
