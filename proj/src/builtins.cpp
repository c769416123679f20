#include "minimax/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "minimax/errors.hpp"

namespace minimax {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InputError("epsilon must lie in (0, 1/2), got " + fmt(epsilon));
}

// Validates a mixture over points 1/m and returns it as an action/prior row.
void check_mixture(const PointMixture& mix, const char* what, bool reciprocal) {
  if (mix.points.empty()) throw InputError(std::string(what) + " has no support points");
  if (mix.points.size() != mix.weights.size()) {
    throw InputError(std::string(what) + " has " + std::to_string(mix.points.size()) + " points but " +
                     std::to_string(mix.weights.size()) + " weights");
  }
  for (std::size_t i = 0; i < mix.points.size(); ++i) {
    const Rational& p = mix.points[i];
    if (reciprocal && (p.num() != 1 || p.den() < 1)) {
      throw InputError(std::string(what) + " point " + p.to_string() + " is not of the form 1/m");
    }
    if (!reciprocal && (p.den() != 1 || p.num() < 1)) {
      throw InputError(std::string(what) + " point " + p.to_string() + " is not a positive integer");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (mix.points[j] == p) throw InputError(std::string(what) + " repeats point " + p.to_string());
    }
  }
}

// Indices of the fewest points whose mass exceeds 1 - epsilon, heaviest
// first; ties go to the larger point.
std::vector<std::size_t> heavy_set(const PointMixture& mix, double epsilon) {
  std::vector<std::size_t> order(mix.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mix.weights[a] != mix.weights[b]) return mix.weights[a] > mix.weights[b];
    return mix.points[a] > mix.points[b];
  });
  std::vector<std::size_t> chosen;
  double mass = 0.0;
  for (std::size_t i : order) {
    chosen.push_back(i);
    mass += mix.weights[i];
    if (mass > 1.0 - epsilon) break;
  }
  return chosen;
}

// The point 1/(m+1) just below the smallest chosen point 1/m.
Rational point_below(const PointMixture& mix, const std::vector<std::size_t>& chosen) {
  std::int64_t largest_den = 1;
  for (std::size_t i : chosen) largest_den = std::max(largest_den, mix.points[i].den());
  return Rational(1, largest_den + 1);
}

LabelList labels_of(const std::vector<Rational>& points) { return LabelList(points.begin(), points.end()); }

MetricFamily unit_family(std::string id) {
  MetricFamily f;
  f.family_id = std::move(id);
  f.theta_interval = {0.0, 1.0};
  f.action_interval = {0.0, 1.0};
  return f;
}

}  // namespace

double pick_smaller_loss(const Rational& theta, const Rational& action) {
  if (theta < action) return 1.0;
  if (theta == action) return 0.0;
  return -1.0;
}

double clamp_loss(const Rational& theta, const Rational& action) {
  const Rational diff = theta - action;
  if (diff > Rational(1)) return 1.0;
  if (diff < Rational(-1)) return -1.0;
  return diff.to_double();
}

FiniteDecisionProblem pick_smaller_game(std::size_t n) {
  if (n == 0) throw InputError("pick_smaller_game needs n >= 1");
  std::vector<Rational> points;
  for (std::size_t i = 1; i <= n; ++i) points.emplace_back(1, static_cast<std::int64_t>(i));
  Matrix loss(n, n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t a = 0; a < n; ++a) loss(t, a) = pick_smaller_loss(points[t], points[a]);
  return FiniteDecisionProblem::no_data(labels_of(points), labels_of(points), std::move(loss));
}

FiniteDecisionProblem clamp_game(std::size_t n) {
  if (n == 0) throw InputError("clamp_game needs n >= 1");
  std::vector<Rational> points;
  for (std::size_t i = 1; i <= n; ++i) points.emplace_back(static_cast<std::int64_t>(i));
  Matrix loss(n, n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t a = 0; a < n; ++a) loss(t, a) = clamp_loss(points[t], points[a]);
  return FiniteDecisionProblem::no_data(labels_of(points), labels_of(points), std::move(loss));
}

FiniteDecisionProblem binary_test_problem() {
  Matrix loss = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  Matrix kernel = Matrix::from_rows({{0.25, 0.75}, {0.75, 0.25}});
  return FiniteDecisionProblem({"theta1", "theta2"}, {"a1", "a2"}, {Label(Rational(0)), Label(Rational(1))},
                               std::move(loss), std::move(kernel));
}

FiniteDecisionProblem matching_pennies_problem() {
  return FiniteDecisionProblem::no_data({"heads", "tails"}, {"heads", "tails"},
                                        Matrix::from_rows({{1.0, -1.0}, {-1.0, 1.0}}));
}

WitnessReport nature_witness(const PointMixture& delta, double epsilon) {
  check_epsilon(epsilon);
  check_mixture(delta, "procedure", true);
  const Rational theta0 = point_below(delta, heavy_set(delta, epsilon));

  // Recompute the claim through the generic risk path.
  Matrix loss(1, delta.points.size());
  for (std::size_t a = 0; a < delta.points.size(); ++a) loss(0, a) = pick_smaller_loss(theta0, delta.points[a]);
  const auto problem = FiniteDecisionProblem::no_data({Label(theta0)}, labels_of(delta.points), std::move(loss));
  Matrix row(1, delta.points.size());
  std::copy(delta.weights.begin(), delta.weights.end(), row.row(0).begin());
  const RandomizedProcedure procedure(std::move(row));

  WitnessReport report;
  report.witness = theta0;
  report.point = theta0;
  report.epsilon = epsilon;
  report.achieved_value = risk(problem, 0, procedure);
  report.holds = report.achieved_value > 1.0 - 2.0 * epsilon;
  return report;
}

WitnessReport statistician_witness(const PointMixture& prior, double epsilon) {
  check_epsilon(epsilon);
  check_mixture(prior, "prior", true);
  const Rational theta0 = point_below(prior, heavy_set(prior, epsilon));

  Matrix loss(prior.points.size(), 1);
  for (std::size_t t = 0; t < prior.points.size(); ++t) loss(t, 0) = pick_smaller_loss(prior.points[t], theta0);
  const auto problem = FiniteDecisionProblem::no_data(labels_of(prior.points), {Label(theta0)}, std::move(loss));
  const auto rule = RandomizedProcedure::constant(1, 1, 0);

  WitnessReport report;
  report.witness = rule;
  report.point = theta0;
  report.epsilon = epsilon;
  report.achieved_value = bayes_risk(problem, FinitePrior(prior.weights), rule);
  report.holds = report.achieved_value < 2.0 * epsilon - 1.0;
  return report;
}

std::vector<EscapingEntry> escaping_prior_report(const std::vector<std::int64_t>& k_list,
                                                 const std::vector<PointMixture>& procedures) {
  if (procedures.empty()) throw InputError("escaping prior report needs at least one procedure");
  std::vector<Rational> reach;
  for (const auto& p : procedures) {
    check_mixture(p, "procedure", false);
    reach.push_back(*std::max_element(p.points.begin(), p.points.end()));
  }
  std::vector<EscapingEntry> out;
  for (std::int64_t k : k_list) {
    if (k < 1) throw InputError("escaping prior point K must be a positive integer, got " + std::to_string(k));
    EscapingEntry entry;
    entry.k = k;
    const Rational theta(k);
    for (std::size_t i = 0; i < procedures.size(); ++i) {
      const auto& p = procedures[i];
      Matrix loss(1, p.points.size());
      for (std::size_t a = 0; a < p.points.size(); ++a) loss(0, a) = clamp_loss(theta, p.points[a]);
      const auto problem = FiniteDecisionProblem::no_data({Label(theta)}, labels_of(p.points), std::move(loss));
      Matrix row(1, p.points.size());
      std::copy(p.weights.begin(), p.weights.end(), row.row(0).begin());
      entry.bayes_risks.push_back(bayes_risk(problem, FinitePrior::point_mass(1, 0), RandomizedProcedure(std::move(row))));
      if (!(theta - reach[i] > Rational(1))) entry.flagged.push_back(i);
    }
    entry.infimum = *std::min_element(entry.bayes_risks.begin(), entry.bayes_risks.end());
    out.push_back(std::move(entry));
  }
  return out;
}

MetricFamily location_family() {
  MetricFamily f = unit_family("location");
  f.lipschitz_k = 1.0;
  f.observations = {Label(Rational(0))};
  f.loss = [](double theta, double a) { return std::abs(theta - a); };
  f.kernel = [](double, std::size_t) { return 1.0; };
  return f;
}

MetricFamily bernoulli_family() {
  MetricFamily f = unit_family("bernoulli");
  // |d/dtheta r| <= 1 + 2 for any rule, and |d/da loss| <= 2.
  f.lipschitz_k = 3.0;
  f.observations = {Label(Rational(0)), Label(Rational(1))};
  f.loss = [](double theta, double a) { return (theta - a) * (theta - a); };
  f.kernel = [](double theta, std::size_t x) { return x == 1 ? theta : 1.0 - theta; };
  return f;
}

MetricFamily clamp_family(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InputError("clamp family length must be positive");
  MetricFamily f;
  f.family_id = "clamp";
  f.parameters = {length};
  f.theta_interval = {0.0, length};
  f.action_interval = {0.0, length};
  f.lipschitz_k = 1.0;
  f.observations = {Label(Rational(0))};
  f.loss = [](double theta, double a) { return std::clamp(theta - a, -1.0, 1.0); };
  f.kernel = [](double, std::size_t) { return 1.0; };
  return f;
}

std::vector<std::string> family_names() { return {"location", "bernoulli", "clamp"}; }

MetricFamily family_by_name(const std::string& name, const std::vector<double>& parameters) {
  if (name == "location" || name == "bernoulli") {
    if (!parameters.empty()) throw InputError("family '" + name + "' takes no parameters");
    return name == "location" ? location_family() : bernoulli_family();
  }
  if (name == "clamp") {
    if (parameters.size() > 1) throw InputError("family 'clamp' takes at most one parameter (length)");
    return parameters.empty() ? clamp_family() : clamp_family(parameters.front());
  }
  throw InputError("unknown family '" + name + "'; available: " + join(family_names()));
}

std::vector<std::string> problem_names() { return {"pick_smaller", "clamp", "binary_test", "matching_pennies"}; }

FiniteDecisionProblem problem_by_name(const std::string& name, std::size_t n) {
  if (name == "pick_smaller") return pick_smaller_game(n);
  if (name == "clamp") return clamp_game(n);
  if (name == "binary_test") return binary_test_problem();
  if (name == "matching_pennies") return matching_pennies_problem();
  throw InputError("unknown problem '" + name + "'; available: " + join(problem_names()));
}

}  // namespace minimax
