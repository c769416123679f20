#pragma once

#include <functional>
#include <vector>

#include "minimax/core_model.hpp"

namespace minimax {

/// Finitely supported probability measure on the real line.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Throws InputError unless weights are nonnegative, sum to one, and the
  /// support is duplicate-free and finite.
  DiscreteMeasure(std::vector<double> support, std::vector<double> weights);

  static DiscreteMeasure dirac(double point);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
};

using Distance = std::function<double(double, double)>;

/// |x - y|.
double line_distance(double x, double y);

/// Integral of |F_mu - F_nu| over the merged breakpoints.
double w1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct TransportPlan {
  double cost = 0.0;
  Matrix coupling;               // |supp mu| x |supp nu|
  std::vector<double> potential_mu;
  std::vector<double> potential_nu;
};

/// Minimum-cost coupling by the transport LP with ground cost `distance`.
TransportPlan optimal_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const Distance& distance);

/// Checks that `distance` is a metric on the given points: nonnegative,
/// zero on the diagonal, symmetric and triangle-satisfying. Throws InputError
/// describing the first violation.
void check_metric(std::span<const double> points, const Distance& distance);

/// sup over k-Lipschitz f of |int f dmu - int f dnu| = k * optimal transport cost.
double wk_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Distance& distance,
                   double k);

}  // namespace minimax
