#include "minimax/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "minimax/errors.hpp"
#include "minimax/lp.hpp"

namespace minimax {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw InputError("measure has an empty support");
  if (support_.size() != weights_.size()) {
    throw InputError("measure has " + std::to_string(support_.size()) + " support points but " +
                     std::to_string(weights_.size()) + " weights");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(support_[i])) throw InputError("support point " + std::to_string(i) + " is not finite");
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw InputError("measure weight " + std::to_string(i) + " is negative or not finite");
    }
    sum += weights_[i];
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) throw InputError("measure weights sum to " + fmt(sum));
  std::vector<double> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("measure support has duplicate points");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double point) { return DiscreteMeasure({point}, {1.0}); }

double line_distance(double x, double y) { return std::abs(x - y); }

double w1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  // Merge (point, mass delta) events; between consecutive breakpoints the CDF
  // difference is constant.
  std::vector<std::pair<double, long double>> events;
  events.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) events.emplace_back(mu.support()[i], mu.weights()[i]);
  for (std::size_t i = 0; i < nu.size(); ++i) events.emplace_back(nu.support()[i], -static_cast<long double>(nu.weights()[i]));
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  long double diff = 0.0L;
  long double area = 0.0L;
  for (std::size_t i = 0; i < events.size(); ++i) {
    diff += events[i].second;
    if (i + 1 < events.size()) {
      const long double width = static_cast<long double>(events[i + 1].first) - events[i].first;
      area += std::fabs(diff) * width;
    }
  }
  return static_cast<double>(area);
}

TransportPlan optimal_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Distance& distance) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  lp::LinearProgram prog(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(mu.support()[i], nu.support()[j]);
      if (!std::isfinite(d)) throw InputError("distance is not finite");
      prog.objective[i * m + j] = d;
    }
  }
  std::vector<double> row(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    prog.add_row(row, lp::Relation::kEqual, mu.weights()[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    prog.add_row(row, lp::Relation::kEqual, nu.weights()[j]);
  }
  const auto sol = lp::solve_lp(prog);
  if (sol.status != lp::Status::kOptimal) throw InternalError("transport LP reported " + lp::to_string(sol.status));

  TransportPlan plan;
  plan.cost = sol.objective_value;
  plan.coupling = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) plan.coupling(i, j) = sol.primal[i * m + j];
  }
  plan.potential_mu.assign(sol.dual.begin(), sol.dual.begin() + static_cast<std::ptrdiff_t>(n));
  plan.potential_nu.assign(sol.dual.begin() + static_cast<std::ptrdiff_t>(n), sol.dual.end());
  return plan;
}

void check_metric(std::span<const double> points, const Distance& distance) {
  constexpr double slack = 1e-12;
  const std::size_t n = points.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i * n + j] = distance(points[i], points[j]);
      if (!std::isfinite(d[i * n + j]) || d[i * n + j] < 0.0) {
        throw InputError("distance(" + fmt(points[i]) + ", " + fmt(points[j]) + ") is negative or not finite");
      }
    }
    if (d[i * n + i] > slack) throw InputError("distance(" + fmt(points[i]) + ", itself) is not zero");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(d[i * n + j] - d[j * n + i]) > slack * (1.0 + d[i * n + j])) {
        throw InputError("distance is not symmetric at (" + fmt(points[i]) + ", " + fmt(points[j]) + ")");
      }
    }
  }
  // All triples while cheap, a fixed random sample otherwise.
  auto triangle = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (d[i * n + k] > d[i * n + j] + d[j * n + k] + slack * (1.0 + d[i * n + k])) {
      throw InputError("distance violates the triangle inequality at (" + fmt(points[i]) + ", " + fmt(points[j]) +
                       ", " + fmt(points[k]) + ")");
    }
  };
  if (n <= 40) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) triangle(i, j, k);
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < 20000; ++s) triangle(pick(rng), pick(rng), pick(rng));
  }
}

double wk_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Distance& distance, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("Lipschitz order k must be positive, got " + fmt(k));
  std::vector<double> joint = mu.support();
  joint.insert(joint.end(), nu.support().begin(), nu.support().end());
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
  check_metric(joint, distance);
  return k * optimal_transport(mu, nu, distance).cost;
}

}  // namespace minimax
