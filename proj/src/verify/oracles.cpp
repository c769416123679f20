#include "minimax/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimax/errors.hpp"

namespace minimax::verify {

namespace {

struct Row {
  std::vector<long double> coef;
  long double rhs;
  lp::Relation relation;
};

// Solves the square system given by `active` rows; false if singular.
bool solve_active(const std::vector<Row>& rows, const std::vector<std::size_t>& active, std::size_t n,
                  std::vector<long double>& x) {
  std::vector<long double> m(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * (n + 1) + j] = rows[active[i]].coef[j];
    m[i * (n + 1) + n] = rows[active[i]].rhs;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m[i * (n + 1) + k]) > std::fabs(m[piv * (n + 1) + k])) piv = i;
    }
    if (std::fabs(m[piv * (n + 1) + k]) < 1e-12L) return false;
    for (std::size_t c = 0; c <= n; ++c) std::swap(m[k * (n + 1) + c], m[piv * (n + 1) + c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const long double f = m[i * (n + 1) + k] / m[k * (n + 1) + k];
      if (f == 0.0L) continue;
      for (std::size_t c = k; c <= n; ++c) m[i * (n + 1) + c] -= f * m[k * (n + 1) + c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i * (n + 1) + n] / m[i * (n + 1) + i];
  return true;
}

bool feasible(const std::vector<Row>& rows, const std::vector<long double>& x, long double tol) {
  for (const Row& r : rows) {
    long double ax = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) ax += r.coef[j] * x[j];
    const long double scale = 1.0L + std::fabs(r.rhs);
    switch (r.relation) {
      case lp::Relation::kLessEqual:
        if (ax > r.rhs + tol * scale) return false;
        break;
      case lp::Relation::kGreaterEqual:
        if (ax < r.rhs - tol * scale) return false;
        break;
      case lp::Relation::kEqual:
        if (std::fabs(ax - r.rhs) > tol * scale) return false;
        break;
    }
  }
  return true;
}

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<double> vertex_enumeration_min(const lp::LinearProgram& lp, double feasibility_tol) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  std::vector<Row> rows;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    Row r{std::vector<long double>(n), lp.rhs[i], lp.relations[i]};
    for (std::size_t j = 0; j < n; ++j) r.coef[j] = lp.constraints(i, j);
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) throw InputError("vertex enumeration needs finite lower bounds");
    Row lo{std::vector<long double>(n, 0.0L), lp.lower[j], lp::Relation::kGreaterEqual};
    lo.coef[j] = 1.0L;
    rows.push_back(std::move(lo));
    if (std::isfinite(lp.upper[j])) {
      Row hi{std::vector<long double>(n, 0.0L), lp.upper[j], lp::Relation::kLessEqual};
      hi.coef[j] = 1.0L;
      rows.push_back(std::move(hi));
    }
  }
  std::vector<std::size_t> equalities, inequalities;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    (rows[i].relation == lp::Relation::kEqual ? equalities : inequalities).push_back(i);
  }

  std::optional<long double> best;
  std::vector<long double> x;
  auto consider = [&](const std::vector<std::size_t>& active) {
    if (!solve_active(rows, active, n, x)) return;
    if (!feasible(rows, x, feasibility_tol)) return;
    long double obj = 0.0L;
    for (std::size_t j = 0; j < n; ++j) obj += static_cast<long double>(lp.objective[j]) * x[j];
    if (!best || obj < *best) best = obj;
  };

  std::vector<std::size_t> active(n);
  if (equalities.size() <= n) {
    const std::size_t free_slots = n - equalities.size();
    for_each_subset(inequalities.size(), free_slots, [&](const std::vector<std::size_t>& pick) {
      std::copy(equalities.begin(), equalities.end(), active.begin());
      for (std::size_t i = 0; i < free_slots; ++i) active[equalities.size() + i] = inequalities[pick[i]];
      consider(active);
    });
  } else {
    for_each_subset(rows.size(), n, [&](const std::vector<std::size_t>& pick) { consider(pick); });
  }
  if (!best) return std::nullopt;
  return static_cast<double>(*best);
}

double pure_rule_bayes_value(const FiniteDecisionProblem& problem, const FinitePrior& prior) {
  const std::size_t nx = problem.num_obs();
  const std::size_t na = problem.num_actions();
  std::vector<std::size_t> rule(nx, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    long double total = 0.0L;
    for (std::size_t t = 0; t < problem.num_theta(); ++t) {
      long double r = 0.0L;
      for (std::size_t x = 0; x < nx; ++x) r += static_cast<long double>(problem.kernel()(t, x)) * problem.loss()(t, rule[x]);
      total += prior[t] * r;
    }
    best = std::min(best, static_cast<double>(total));
    std::size_t pos = 0;
    while (pos < nx && ++rule[pos] == na) rule[pos++] = 0;
    if (pos == nx) break;
  }
  return best;
}

long double definitional_risk(const FiniteDecisionProblem& problem, std::size_t theta,
                              const RandomizedProcedure& delta) {
  long double total = 0.0L;
  for (std::size_t x = 0; x < problem.num_obs(); ++x) {
    for (std::size_t a = 0; a < problem.num_actions(); ++a) {
      total += static_cast<long double>(problem.kernel()(theta, x)) * delta.matrix()(x, a) * problem.loss()(theta, a);
    }
  }
  return total;
}

}  // namespace minimax::verify
