#include "minimax/discretization.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "minimax/errors.hpp"
#include "minimax/kernels.hpp"

namespace minimax {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check_interval(const Interval& interval, const char* what) {
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || interval.lo > interval.hi) {
    throw InputError(std::string(what) + " interval [" + fmt(interval.lo) + ", " + fmt(interval.hi) +
                     "] is not a bounded interval");
  }
}

void check_family(const MetricFamily& family) {
  check_interval(family.theta_interval, "parameter");
  check_interval(family.action_interval, "action");
  if (!(family.lipschitz_k > 0.0) || !std::isfinite(family.lipschitz_k)) {
    throw InputError("family '" + family.family_id + "' has a non-positive Lipschitz constant");
  }
  if (!family.loss || !family.kernel || family.observations.empty()) {
    throw InputError("family '" + family.family_id + "' is missing its oracle");
  }
}

}  // namespace

double family_risk(const MetricFamily& family, double theta, std::span<const double> action_by_obs) {
  if (action_by_obs.size() != family.observations.size()) throw InputError("rule does not cover every observation");
  double total = 0.0;
  for (std::size_t x = 0; x < action_by_obs.size(); ++x) {
    total += family.kernel(theta, x) * family.loss(theta, action_by_obs[x]);
  }
  return total;
}

void check_lipschitz(const MetricFamily& family, std::size_t samples, std::uint64_t seed) {
  check_family(family);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta_dist(family.theta_interval.lo, family.theta_interval.hi);
  std::uniform_real_distribution<double> action_dist(family.action_interval.lo, family.action_interval.hi);
  const double k = family.lipschitz_k;
  constexpr double slack = 1e-12;
  std::vector<double> rule(family.observations.size());
  for (std::size_t i = 0; i < samples; ++i) {
    const double t1 = theta_dist(rng), t2 = theta_dist(rng);
    const double a1 = action_dist(rng), a2 = action_dist(rng);
    if (std::abs(family.loss(t1, a1) - family.loss(t2, a1)) > k * std::abs(t1 - t2) + slack) {
      throw InputError("loss of '" + family.family_id + "' moves faster than k in theta at (" + fmt(t1) + ", " +
                       fmt(t2) + "; a=" + fmt(a1) + ")");
    }
    if (std::abs(family.loss(t1, a1) - family.loss(t1, a2)) > k * std::abs(a1 - a2) + slack) {
      throw InputError("loss of '" + family.family_id + "' moves faster than k in the action at (theta=" +
                       fmt(t1) + "; " + fmt(a1) + ", " + fmt(a2) + ")");
    }
    for (double& a : rule) a = action_dist(rng);
    if (std::abs(family_risk(family, t1, rule) - family_risk(family, t2, rule)) > k * std::abs(t1 - t2) + slack) {
      throw InputError("risk of a rule under '" + family.family_id + "' moves faster than k at (" + fmt(t1) +
                       ", " + fmt(t2) + ")");
    }
  }
}

std::vector<double> uniform_net(const Interval& interval, double mesh) {
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw InputError("mesh must be positive, got " + fmt(mesh));
  check_interval(interval, "net");
  const double length = interval.length();
  if (length == 0.0) return {interval.lo};
  // The relative slack keeps exact divisions (1 / 0.25) from gaining a cell.
  const double cells = std::ceil(length / mesh * (1.0 - 1e-12));
  const auto n = static_cast<std::size_t>(std::max(1.0, cells));
  std::vector<double> points(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    points[i] = interval.lo + length * static_cast<double>(i) / static_cast<double>(n);
  }
  points.back() = interval.hi;
  return points;
}

FiniteDecisionProblem discretize(const MetricFamily& family, double mesh) { return discretize(family, mesh, mesh); }

FiniteDecisionProblem discretize(const MetricFamily& family, double theta_mesh, double action_mesh) {
  check_family(family);
  const auto theta = uniform_net(family.theta_interval, theta_mesh);
  const auto actions = uniform_net(family.action_interval, action_mesh);
  const std::size_t nobs = family.observations.size();

  auto checked = [&](double v, const char* what, double t, double other) {
    if (!std::isfinite(v)) {
      throw EvaluationError(std::string(what) + " oracle of '" + family.family_id + "' returned " + fmt(v) +
                            " at theta=" + fmt(t) + ", " + (what[0] == 'l' ? "a=" : "x=") + fmt(other));
    }
    return v;
  };
  Matrix loss = kernels::fill_grid(theta.size(), actions.size(), [&](std::size_t i, std::size_t j) {
    return checked(family.loss(theta[i], actions[j]), "loss", theta[i], actions[j]);
  });
  Matrix kernel = kernels::fill_grid(theta.size(), nobs, [&](std::size_t i, std::size_t x) {
    return checked(family.kernel(theta[i], x), "kernel", theta[i], static_cast<double>(x));
  });

  LabelList theta_labels(theta.begin(), theta.end());
  LabelList action_labels(actions.begin(), actions.end());
  return FiniteDecisionProblem(std::move(theta_labels), std::move(action_labels), family.observations,
                               std::move(loss), std::move(kernel));
}

ApproximationResult approximate_minimax(const MetricFamily& family, double mesh) {
  const FiniteDecisionProblem problem = discretize(family, mesh);
  const GameSolution solution = minimax_lp(problem);
  ApproximationResult out;
  out.mesh = mesh;
  out.discrete_value = solution.value;
  out.discrete_maximin = bayes_value(problem, solution.least_favorable_prior);
  out.theta_net = uniform_net(family.theta_interval, mesh);
  out.action_net = uniform_net(family.action_interval, mesh);
  out.prior = solution.least_favorable_prior;
  out.procedure = solution.minimax_procedure;
  // Every point lies within mesh/2 of the net on both axes, so neither
  // player's restriction moves the value by more than k * mesh / 2.
  const double half_width = family.lipschitz_k * mesh / 2.0;
  out.interval_lo = out.discrete_value - half_width;
  out.interval_hi = out.discrete_value + half_width;
  return out;
}

std::vector<ApproximationResult> lf_prior_sequence(const MetricFamily& family,
                                                   const std::vector<double>& mesh_schedule) {
  if (mesh_schedule.empty()) throw InputError("mesh schedule is empty");
  for (std::size_t i = 0; i < mesh_schedule.size(); ++i) {
    if (!(mesh_schedule[i] > 0.0) || !std::isfinite(mesh_schedule[i])) {
      throw InputError("mesh schedule entry " + std::to_string(i) + " is not positive");
    }
    if (i > 0 && !(mesh_schedule[i] < mesh_schedule[i - 1])) {
      throw InputError("mesh schedule is not strictly decreasing at entry " + std::to_string(i));
    }
  }
  std::vector<ApproximationResult> out(mesh_schedule.size());
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(mesh_schedule.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = approximate_minimax(family, mesh_schedule[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(minimax_schedule_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double excess_bayes_risk(const MetricFamily& family, const RandomizedProcedure& delta, double mesh) {
  const FiniteDecisionProblem problem = discretize(family, mesh);
  if (delta.num_obs() != problem.num_obs() || delta.num_actions() != problem.num_actions()) {
    throw InputError("procedure is " + std::to_string(delta.num_obs()) + "x" + std::to_string(delta.num_actions()) +
                     " but the mesh " + fmt(mesh) + " net is " + std::to_string(problem.num_obs()) + "x" +
                     std::to_string(problem.num_actions()));
  }
  const GameSolution solution = minimax_lp(problem);
  return bayes_risk(problem, solution.least_favorable_prior, delta) - solution.value;
}

}  // namespace minimax
