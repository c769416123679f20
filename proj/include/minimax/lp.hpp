#pragma once

#include <limits>
#include <string>
#include <vector>

#include "minimax/core_model.hpp"

namespace minimax::lp {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Feasibility tolerance of the simplex.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// minimize c^T x  s.t.  A x (rel) b,  lower <= x <= upper.
/// Lower bounds may be -infinity (free variable), upper bounds +infinity.
struct LinearProgram {
  std::vector<double> objective;
  Matrix constraints;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  /// n variables in [0, inf), no constraints yet.
  explicit LinearProgram(std::size_t num_vars = 0);

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  /// Appends a dense constraint row.
  void add_row(std::span<const double> coefficients, Relation relation, double value);
  /// Throws InputError on inconsistent shapes or non-finite data.
  void validate() const;
};

/// Dual values follow the minimization convention: a <= row has y <= 0,
/// a >= row y >= 0, an equality row is free. Reduced costs are
/// c - A^T y and carry the bound multipliers.
struct LPSolution {
  Status status = Status::kInfeasible;
  std::vector<double> primal;
  std::vector<double> dual;
  double objective_value = 0.0;
  int iterations = 0;
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic; the final
/// basis is re-factorized to recover accurate primal and dual values.
LPSolution solve_lp(const LinearProgram& lp);

struct CertificateReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective_gap = 0.0;
  bool passed = false;
  /// Names of the residuals exceeding the tolerance.
  std::vector<std::string> failures;
};

/// Recomputes primal feasibility, dual feasibility and the primal-dual
/// objective gap of a claimed optimal solution.
CertificateReport check_certificate(const LinearProgram& lp, const LPSolution& solution, double tol);

/// Dual objective b^T y plus the bound terms implied by the reduced costs.
double dual_objective(const LinearProgram& lp, std::span<const double> dual);

}  // namespace minimax::lp
