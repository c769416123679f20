#include "minimax/game_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

#include "minimax/errors.hpp"
#include "minimax/kernels.hpp"
#include "minimax/lp.hpp"

namespace minimax {

namespace {

// Clamps round-off negatives and renormalizes a nonnegative vector.
std::vector<double> normalized(std::vector<double> w) {
  double sum = 0.0;
  for (double& v : w) {
    v = v > 0.0 ? v : 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) throw InternalError("cannot normalize a zero weight vector");
  for (double& v : w) v /= sum;
  return w;
}

RandomizedProcedure procedure_from_primal(std::span<const double> primal, std::size_t obs, std::size_t actions) {
  Matrix m(obs, actions);
  for (std::size_t x = 0; x < obs; ++x) {
    auto row = normalized(std::vector<double>(primal.begin() + x * actions, primal.begin() + (x + 1) * actions));
    std::copy(row.begin(), row.end(), m.row(x).begin());
  }
  return RandomizedProcedure(std::move(m));
}

std::vector<std::size_t> argmin_per_row(const Matrix& costs) {
  std::vector<std::size_t> choice(costs.rows(), 0);
  for (std::size_t x = 0; x < costs.rows(); ++x) {
    for (std::size_t a = 1; a < costs.cols(); ++a) {
      if (costs(x, a) < costs(x, choice[x])) choice[x] = a;
    }
  }
  return choice;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Among priors whose Bayes value reaches `value`, the one with the smallest
// largest weight:
//   min s  s.t.  pi <= s,  sum pi = 1,
//                u_x <= sum_theta pi(theta) P_theta(x) loss(theta, a)  for all (x, a),
//                sum_x u_x >= value.
// nullopt if the LP fails to certify a prior.
std::optional<FinitePrior> least_concentrated_prior(const FiniteDecisionProblem& problem, double value) {
  const std::size_t nt = problem.num_theta();
  const std::size_t nx = problem.num_obs();
  const std::size_t na = problem.num_actions();
  const std::size_t s_var = nt + nx;
  lp::LinearProgram prog(s_var + 1);
  prog.objective[s_var] = 1.0;
  for (std::size_t x = 0; x < nx; ++x) prog.lower[nt + x] = -lp::kInfinity;
  prog.lower[s_var] = -lp::kInfinity;

  std::vector<double> row(s_var + 1, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    std::fill(row.begin(), row.end(), 0.0);
    row[t] = 1.0;
    row[s_var] = -1.0;
    prog.add_row(row, lp::Relation::kLessEqual, 0.0);
  }
  std::fill(row.begin(), row.end(), 0.0);
  std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(nt), 1.0);
  prog.add_row(row, lp::Relation::kEqual, 1.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t t = 0; t < nt; ++t) row[t] = -problem.kernel()(t, x) * problem.loss()(t, a);
      row[nt + x] = 1.0;
      prog.add_row(row, lp::Relation::kLessEqual, 0.0);
    }
  }
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t x = 0; x < nx; ++x) row[nt + x] = 1.0;
  prog.add_row(row, lp::Relation::kGreaterEqual, value - 1e-12 * (1.0 + std::abs(value)));

  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  try {
    FinitePrior prior(normalized(std::vector<double>(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(nt))));
    return prior;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

double bayes_value(const FiniteDecisionProblem& problem, const FinitePrior& prior) {
  if (prior.size() != problem.num_theta()) throw InputError("prior does not match the parameter count");
  const Matrix costs = kernels::action_costs(problem.loss(), problem.kernel(), prior.weights());
  double total = 0.0;
  for (std::size_t x = 0; x < costs.rows(); ++x) {
    total += *std::min_element(costs.row(x).begin(), costs.row(x).end());
  }
  return total;
}

RandomizedProcedure bayes_rule(const FiniteDecisionProblem& problem, const FinitePrior& prior) {
  if (prior.size() != problem.num_theta()) throw InputError("prior does not match the parameter count");
  const Matrix costs = kernels::action_costs(problem.loss(), problem.kernel(), prior.weights());
  const auto choice = argmin_per_row(costs);
  return RandomizedProcedure::deterministic(choice, problem.num_actions());
}

namespace {

// Loss rescaled by a power of two so its largest magnitude lies in [1/2, 1).
// The rescaling is exact, and losses that differ by a power-of-two factor
// present the simplex with bitwise-identical tableaus.
std::pair<FiniteDecisionProblem, int> normalize_loss(const FiniteDecisionProblem& problem) {
  double largest = 0.0;
  for (double v : problem.loss().data()) largest = std::max(largest, std::abs(v));
  int exponent = 0;
  if (largest > 0.0) std::frexp(largest, &exponent);
  Matrix loss = problem.loss();
  for (std::size_t i = 0; i < loss.rows(); ++i)
    for (std::size_t j = 0; j < loss.cols(); ++j) loss(i, j) = std::ldexp(loss(i, j), -exponent);
  return {FiniteDecisionProblem::unchecked(problem.theta_labels(), problem.action_labels(), problem.obs_labels(),
                                           std::move(loss), problem.kernel()),
          exponent};
}

}  // namespace

GameSolution minimax_lp(const FiniteDecisionProblem& original) {
  if (const auto report = validate_problem(original); !report.ok()) {
    throw InputError("invalid decision problem: " + report.violations.front());
  }
  const auto [problem, exponent] = normalize_loss(original);
  const std::size_t nt = problem.num_theta();
  const std::size_t nx = problem.num_obs();
  const std::size_t na = problem.num_actions();
  const std::size_t t_var = nx * na;

  lp::LinearProgram prog(t_var + 1);
  prog.objective[t_var] = 1.0;
  prog.lower[t_var] = -lp::kInfinity;
  std::vector<double> row(t_var + 1, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = problem.kernel()(t, x);
      for (std::size_t a = 0; a < na; ++a) row[x * na + a] = p * problem.loss()(t, a);
    }
    row[t_var] = -1.0;
    prog.add_row(row, lp::Relation::kLessEqual, 0.0);
  }
  for (std::size_t x = 0; x < nx; ++x) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t a = 0; a < na; ++a) row[x * na + a] = 1.0;
    prog.add_row(row, lp::Relation::kEqual, 1.0);
  }

  const lp::LPSolution sol = lp::solve_lp(prog);
  if (sol.status != lp::Status::kOptimal) {
    throw InternalError("game LP reported " + lp::to_string(sol.status) + " for a valid problem");
  }

  GameSolution out;
  out.value = sol.objective_value;
  out.minimax_procedure = procedure_from_primal(sol.primal, nx, na);
  std::vector<double> prior(nt);
  for (std::size_t t = 0; t < nt; ++t) prior[t] = -sol.dual[t];
  out.least_favorable_prior = FinitePrior(normalized(std::move(prior)));
  // The dual prior is one vertex of the least favorable set; report the
  // least concentrated member instead when it certifies at least as well.
  if (auto spread = least_concentrated_prior(problem, out.value)) {
    if (bayes_value(problem, *spread) >= bayes_value(problem, out.least_favorable_prior) - 1e-12) {
      out.least_favorable_prior = std::move(*spread);
    }
  }
  out.value = std::ldexp(out.value, exponent);
  out.duality_gap = worst_case_risk(original, out.minimax_procedure) - bayes_value(original, out.least_favorable_prior);
  return out;
}

FictitiousPlayResult fictitious_play(const FiniteDecisionProblem& problem, std::size_t iterations) {
  if (iterations == 0) throw InputError("fictitious play needs at least one iteration");
  const std::size_t nt = problem.num_theta();
  const std::size_t nx = problem.num_obs();
  const std::size_t na = problem.num_actions();
  const Matrix& loss = problem.loss();
  const Matrix& kernel = problem.kernel();

  std::vector<double> nature_counts(nt, 0.0);
  Matrix rule_counts(nx, na);
  Matrix costs(nx, na);                        // cumulative nature-weighted loss per (x, a)
  std::vector<double> cumulative_risk(nt, 0.0);  // cumulative risk of the statistician's rules

  std::size_t theta = 0;
  std::vector<std::size_t> rule(nx, 0);
  for (std::size_t it = 0; it < iterations; ++it) {
    if (it > 0) {
      theta = 0;
      for (std::size_t t = 1; t < nt; ++t) {
        if (cumulative_risk[t] > cumulative_risk[theta]) theta = t;
      }
    }
    nature_counts[theta] += 1.0;
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = kernel(theta, x);
      if (p == 0.0) continue;
      for (std::size_t a = 0; a < na; ++a) costs(x, a) += p * loss(theta, a);
    }
    rule = argmin_per_row(costs);
    for (std::size_t x = 0; x < nx; ++x) rule_counts(x, rule[x]) += 1.0;
    for (std::size_t t = 0; t < nt; ++t) {
      double r = 0.0;
      for (std::size_t x = 0; x < nx; ++x) r += kernel(t, x) * loss(t, rule[x]);
      cumulative_risk[t] += r;
    }
  }

  const double n = static_cast<double>(iterations);
  FictitiousPlayResult out;
  out.upper_bound = *std::max_element(cumulative_risk.begin(), cumulative_risk.end()) / n;
  double lower = 0.0;
  for (std::size_t x = 0; x < nx; ++x) lower += *std::min_element(costs.row(x).begin(), costs.row(x).end());
  out.lower_bound = lower / n;
  out.empirical_prior = FinitePrior(normalized(nature_counts));
  Matrix avg(nx, na);
  for (std::size_t x = 0; x < nx; ++x) {
    auto row = normalized(std::vector<double>(rule_counts.row(x).begin(), rule_counts.row(x).end()));
    std::copy(row.begin(), row.end(), avg.row(x).begin());
  }
  out.empirical_procedure = RandomizedProcedure(std::move(avg));
  return out;
}

double weak_duality_gap(const FiniteDecisionProblem& problem, const RandomizedProcedure& delta,
                        const FinitePrior& prior) {
  return worst_case_risk(problem, delta) - bayes_risk(problem, prior, delta);
}

std::string SaddleReport::describe() const {
  std::string out;
  if (!upper_ok) out = "worst-case risk " + fmt(worst_case_risk) + " exceeds the claimed value";
  if (!lower_ok) {
    if (!out.empty()) out += "; ";
    out += "Bayes value " + fmt(bayes_value) + " of the prior falls below the claimed value";
  }
  if (out.empty()) out = "saddle certified";
  return out;
}

SaddleReport certify_saddle(const FiniteDecisionProblem& problem, const GameSolution& solution, double tol) {
  SaddleReport report;
  if (solution.minimax_procedure.num_obs() != problem.num_obs() ||
      solution.minimax_procedure.num_actions() != problem.num_actions() ||
      solution.least_favorable_prior.size() != problem.num_theta()) {
    report.worst_case_risk = std::numeric_limits<double>::infinity();
    report.bayes_value = -std::numeric_limits<double>::infinity();
    return report;
  }
  report.worst_case_risk = worst_case_risk(problem, solution.minimax_procedure);
  report.bayes_value = bayes_value(problem, solution.least_favorable_prior);
  report.upper_ok = report.worst_case_risk <= solution.value + tol;
  report.lower_ok = report.bayes_value >= solution.value - tol;
  return report;
}

SubgameSolution solve_subgame(const FiniteDecisionProblem& problem, const SeparationQuery& query) {
  if (query.theta_subset.empty()) throw InputError("separation query has an empty parameter subset");
  if (query.procedure_set.empty()) throw InputError("separation query has an empty procedure set");
  if (!std::isfinite(query.level)) throw InputError("separation level is not finite");
  for (std::size_t t : query.theta_subset) {
    if (t >= problem.num_theta()) throw InputError("parameter index " + std::to_string(t) + " out of range");
  }
  const std::size_t k = query.procedure_set.size();
  std::vector<std::vector<double>> risks;
  risks.reserve(k);
  for (const auto& d : query.procedure_set) risks.push_back(risk_profile(problem, d).values);

  lp::LinearProgram prog(k + 1);
  prog.objective[k] = 1.0;
  prog.lower[k] = -lp::kInfinity;
  std::vector<double> row(k + 1, 0.0);
  for (std::size_t t : query.theta_subset) {
    for (std::size_t i = 0; i < k; ++i) row[i] = risks[i][t];
    row[k] = -1.0;
    prog.add_row(row, lp::Relation::kLessEqual, 0.0);
  }
  std::fill(row.begin(), row.end(), 1.0);
  row[k] = 0.0;
  prog.add_row(row, lp::Relation::kEqual, 1.0);

  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::Status::kOptimal) throw InternalError("subgame LP reported " + lp::to_string(sol.status));
  SubgameSolution out;
  out.value = sol.objective_value;
  out.mixture = normalized(std::vector<double>(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(k)));
  std::vector<double> w(query.theta_subset.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = -sol.dual[i];
  out.theta_weights = normalized(std::move(w));
  return out;
}

double subgame_value(const FiniteDecisionProblem& problem, const SeparationQuery& query) {
  return solve_subgame(problem, query).value;
}

std::vector<std::size_t> finite_certificate_support(const FiniteDecisionProblem& problem,
                                                    const std::vector<RandomizedProcedure>& procedures,
                                                    double level) {
  SeparationQuery query;
  query.procedure_set = procedures;
  query.level = level;
  for (std::size_t t = 0; t < problem.num_theta(); ++t) query.theta_subset.push_back(t);
  const auto full = solve_subgame(problem, query);
  if (!(full.value > level)) {
    throw InputError("full-parameter subgame value " + fmt(full.value) + " does not exceed level " + fmt(level));
  }
  std::vector<std::size_t> support;
  for (std::size_t t = 0; t < full.theta_weights.size(); ++t) {
    if (full.theta_weights[t] > 1e-12) support.push_back(t);
  }
  query.theta_subset = support;
  if (!(subgame_value(problem, query) > level)) {
    throw InternalError("dual support does not certify the separation level");
  }
  return support;
}

}  // namespace minimax
