#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "minimax/core_model.hpp"
#include "minimax/game_solver.hpp"

namespace minimax {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Metric decision problem over real intervals with a declared Lipschitz
/// modulus. `lipschitz_k` bounds how fast the risk of any procedure moves in
/// theta and how fast the loss moves in the action.
struct MetricFamily {
  std::string family_id;
  std::vector<double> parameters;
  double lipschitz_k = 1.0;
  Interval theta_interval;
  Interval action_interval;
  LabelList observations;
  std::function<double(double theta, double action)> loss;
  /// P_theta(x) for observation index x.
  std::function<double(double theta, std::size_t x)> kernel;
};

/// Risk of a non-randomized rule given as one action per observation.
double family_risk(const MetricFamily& family, double theta, std::span<const double> action_by_obs);

/// Spot-tests the declared modulus on random pairs: loss in theta and in the
/// action, and the risk of random two-action rules in theta. Throws
/// InputError naming the first violating pair.
void check_lipschitz(const MetricFamily& family, std::size_t samples, std::uint64_t seed);

/// Evenly spaced points, endpoints included, consecutive spacing <= mesh.
/// Every point of the interval is within mesh / 2 of the net.
std::vector<double> uniform_net(const Interval& interval, double mesh);

/// Replaces both intervals by their nets and evaluates the oracle on the grid.
FiniteDecisionProblem discretize(const MetricFamily& family, double mesh);
/// Separate meshes for the parameter and action nets. Refining only the
/// parameter net can never lower the value; refining both can.
FiniteDecisionProblem discretize(const MetricFamily& family, double theta_mesh, double action_mesh);

struct ApproximationResult {
  double mesh = 0.0;
  double discrete_value = 0.0;
  /// Bayes value of `prior` in the discretized game (r_{pi_n}).
  double discrete_maximin = 0.0;
  std::vector<double> theta_net;
  std::vector<double> action_net;
  FinitePrior prior;
  RandomizedProcedure procedure;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

/// Solves the discretized game. The interval [lo, hi] has width k * mesh
/// and contains the minimax value of the continuous problem.
ApproximationResult approximate_minimax(const MetricFamily& family, double mesh);

/// One approximation per mesh; the schedule must be strictly decreasing and
/// positive. Independent entries may be solved in parallel; output order
/// follows the schedule.
std::vector<ApproximationResult> lf_prior_sequence(const MetricFamily& family,
                                                   const std::vector<double>& mesh_schedule);

/// r(pi_mesh, delta) - V_mesh for a procedure on the mesh's action net.
double excess_bayes_risk(const MetricFamily& family, const RandomizedProcedure& delta, double mesh);

}  // namespace minimax
