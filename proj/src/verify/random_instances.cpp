#include "minimax/verify/random_instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace minimax::verify {

namespace {

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<double> normalize(std::vector<double> w) {
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

std::vector<double> random_simplex_point(Rng& rng, std::size_t size) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution zero(0.2);
  std::vector<double> w(size);
  for (double& v : w) v = zero(rng) ? 0.0 : unit(rng) + 1e-3;
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) w[uniform_size(rng, 0, size - 1)] = 1.0;
  return normalize(std::move(w));
}

FiniteDecisionProblem random_problem(Rng& rng, const ProblemShape& shape) {
  const std::size_t nt = uniform_size(rng, 1, shape.max_theta);
  const std::size_t na = uniform_size(rng, 1, shape.max_actions);
  const std::size_t nx = uniform_size(rng, 1, shape.max_obs);
  std::uniform_real_distribution<double> loss_dist(shape.loss_lo, shape.loss_hi);
  Matrix loss(nt, na);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t a = 0; a < na; ++a) loss(t, a) = loss_dist(rng);
  Matrix kernel(nt, nx);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto row = random_simplex_point(rng, nx);
    std::copy(row.begin(), row.end(), kernel.row(t).begin());
  }
  auto labels = [](std::size_t n) {
    LabelList out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(Rational(static_cast<std::int64_t>(i)));
    return out;
  };
  return FiniteDecisionProblem(labels(nt), labels(na), labels(nx), std::move(loss), std::move(kernel));
}

RandomizedProcedure random_procedure(Rng& rng, std::size_t num_obs, std::size_t num_actions) {
  Matrix m(num_obs, num_actions);
  for (std::size_t x = 0; x < num_obs; ++x) {
    const auto row = random_simplex_point(rng, num_actions);
    std::copy(row.begin(), row.end(), m.row(x).begin());
  }
  return RandomizedProcedure(std::move(m));
}

FinitePrior random_prior(Rng& rng, std::size_t size) { return FinitePrior(random_simplex_point(rng, size)); }

lp::LinearProgram random_bounded_lp(Rng& rng) {
  const std::size_t n = uniform_size(rng, 1, 8);
  const std::size_t m = uniform_size(rng, 1, 8);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> start(0, 3);
  std::uniform_int_distribution<int> slack(0, 3);
  std::uniform_int_distribution<int> relation(0, 5);
  // Half-integer data.
  auto half = [&](int v) { return static_cast<double>(v) / 2.0; };

  lp::LinearProgram prog(n);
  for (double& c : prog.objective) c = half(coef(rng) * 2 + std::uniform_int_distribution<int>(-1, 1)(rng));
  std::vector<double> x0(n);
  for (double& v : x0) v = start(rng);

  // Row 0 bounds the feasible region together with x >= 0.
  std::vector<double> row(n, 1.0);
  prog.add_row(row, lp::Relation::kLessEqual, std::accumulate(x0.begin(), x0.end(), 0.0) + 1 + slack(rng));
  bool has_equality = false;
  for (std::size_t i = 1; i < m; ++i) {
    do {
      for (double& a : row) a = half(coef(rng));
    } while (std::all_of(row.begin(), row.end(), [](double a) { return a == 0.0; }));
    const double ax = std::inner_product(row.begin(), row.end(), x0.begin(), 0.0);
    const int kind = relation(rng);
    if (kind == 0 && !has_equality) {
      has_equality = true;
      prog.add_row(row, lp::Relation::kEqual, ax);
    } else if (kind <= 3) {
      prog.add_row(row, lp::Relation::kLessEqual, ax + half(slack(rng)));
    } else {
      prog.add_row(row, lp::Relation::kGreaterEqual, ax - half(slack(rng)));
    }
  }
  if (std::bernoulli_distribution(0.25)(rng)) {
    const std::size_t j = uniform_size(rng, 0, n - 1);
    prog.upper[j] = x0[j] + slack(rng);
  }
  return prog;
}

DiscreteMeasure random_measure(Rng& rng, std::size_t max_support) {
  const std::size_t k = uniform_size(rng, 1, max_support);
  std::uniform_int_distribution<int> grid(-128, 128);
  std::set<int> picked;
  while (picked.size() < k) picked.insert(grid(rng));
  std::vector<double> support;
  for (int p : picked) support.push_back(p / 64.0);
  std::shuffle(support.begin(), support.end(), rng);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> w(k);
  for (double& v : w) v = unit(rng);
  return DiscreteMeasure(std::move(support), normalize(std::move(w)));
}

PointMixture random_reciprocal_mixture(Rng& rng, std::size_t max_points, std::int64_t max_den) {
  const std::size_t k = uniform_size(rng, 1, max_points);
  std::uniform_int_distribution<std::int64_t> den(1, max_den);
  std::set<std::int64_t> dens;
  while (dens.size() < std::min<std::size_t>(k, static_cast<std::size_t>(max_den))) dens.insert(den(rng));
  PointMixture mix;
  for (auto d : dens) mix.points.emplace_back(1, d);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  mix.weights.resize(mix.points.size());
  for (double& v : mix.weights) v = unit(rng);
  mix.weights = normalize(std::move(mix.weights));
  return mix;
}

}  // namespace minimax::verify
