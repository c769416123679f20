#include "minimax/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "minimax/errors.hpp"

namespace minimax::lp {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective(num_vars, 0.0), constraints(0, num_vars), lower(num_vars, 0.0), upper(num_vars, kInfinity) {}

void LinearProgram::add_row(std::span<const double> coefficients, Relation relation, double value) {
  if (coefficients.size() != num_vars()) throw InputError("constraint row has the wrong number of coefficients");
  Matrix grown(constraints.rows() + 1, num_vars());
  std::copy(constraints.data().begin(), constraints.data().end(), grown.row(0).begin());
  std::copy(coefficients.begin(), coefficients.end(), grown.row(constraints.rows()).begin());
  constraints = std::move(grown);
  relations.push_back(relation);
  rhs.push_back(value);
}

void LinearProgram::validate() const {
  const std::size_t n = num_vars();
  const std::size_t m = rhs.size();
  if (constraints.rows() != m || (m > 0 && constraints.cols() != n)) {
    throw InputError("constraint matrix shape does not match rhs/objective");
  }
  if (relations.size() != m) throw InputError("relations and rhs differ in length");
  if (lower.size() != n || upper.size() != n) throw InputError("variable bounds do not match the objective");
  for (double c : objective) {
    if (!std::isfinite(c)) throw InputError("objective coefficient is not finite");
  }
  for (double v : constraints.data()) {
    if (!std::isfinite(v)) throw InputError("constraint coefficient is not finite");
  }
  for (double b : rhs) {
    if (!std::isfinite(b)) throw InputError("rhs is not finite");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity || upper[j] == -kInfinity ||
        lower[j] > upper[j]) {
      throw InputError("invalid bounds on variable " + std::to_string(j));
    }
  }
}

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kCostTolerance = 1e-10;
constexpr double kRatioTie = 1e-12;

// x_j = offset + sign * y[col] - (minus_col ? y[minus_col] : 0)
struct VarMap {
  double offset = 0.0;
  double sign = 1.0;
  std::ptrdiff_t col = -1;
  std::ptrdiff_t minus_col = -1;
};

// Equality-form problem: A y = b, y >= 0, b >= 0.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;  // structural + slack columns (artificials appended later)
  std::vector<double> a;  // rows x cols
  std::vector<double> b;
  std::vector<double> cost;
  std::vector<double> row_sign;  // +-1, flip applied to make b >= 0
  std::vector<VarMap> vars;
  double cost_offset = 0.0;

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
};

StandardForm standardize(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  StandardForm sf;
  sf.vars.resize(n);

  std::size_t structural = 0;
  std::vector<std::size_t> bounded;  // variables needing an explicit upper-bound row
  for (std::size_t j = 0; j < n; ++j) {
    VarMap& v = sf.vars[j];
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (std::isfinite(lo)) {
      v.offset = lo;
      v.col = static_cast<std::ptrdiff_t>(structural++);
      if (std::isfinite(hi)) bounded.push_back(j);
    } else if (std::isfinite(hi)) {
      v.offset = hi;
      v.sign = -1.0;
      v.col = static_cast<std::ptrdiff_t>(structural++);
    } else {
      v.col = static_cast<std::ptrdiff_t>(structural++);
      v.minus_col = static_cast<std::ptrdiff_t>(structural++);
    }
  }

  const std::size_t rows = m + bounded.size();
  std::size_t slacks = bounded.size();
  for (Relation r : lp.relations) {
    if (r != Relation::kEqual) ++slacks;
  }
  sf.rows = rows;
  sf.cols = structural + slacks;
  sf.a.assign(rows * sf.cols, 0.0);
  sf.b.assign(rows, 0.0);
  sf.cost.assign(sf.cols, 0.0);
  sf.row_sign.assign(rows, 1.0);

  for (std::size_t j = 0; j < n; ++j) {
    const VarMap& v = sf.vars[j];
    sf.cost[v.col] += v.sign * lp.objective[j];
    if (v.minus_col >= 0) sf.cost[v.minus_col] -= lp.objective[j];
    sf.cost_offset += lp.objective[j] * v.offset;
  }

  std::size_t slack = structural;
  for (std::size_t i = 0; i < m; ++i) {
    double rhs = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double coef = lp.constraints(i, j);
      if (coef == 0.0) continue;
      const VarMap& v = sf.vars[j];
      sf.at(i, v.col) += v.sign * coef;
      if (v.minus_col >= 0) sf.at(i, v.minus_col) -= coef;
      rhs -= coef * v.offset;
    }
    if (lp.relations[i] == Relation::kLessEqual) sf.at(i, slack++) = 1.0;
    if (lp.relations[i] == Relation::kGreaterEqual) sf.at(i, slack++) = -1.0;
    sf.b[i] = rhs;
  }
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const std::size_t i = m + k;
    const std::size_t j = bounded[k];
    sf.at(i, sf.vars[j].col) = 1.0;
    sf.at(i, slack++) = 1.0;
    sf.b[i] = lp.upper[j] - lp.lower[j];
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (sf.b[i] < 0.0) {
      sf.row_sign[i] = -1.0;
      sf.b[i] = -sf.b[i];
      for (std::size_t c = 0; c < sf.cols; ++c) sf.at(i, c) = -sf.at(i, c);
    }
  }
  return sf;
}

// Dense tableau over [structural | slack | artificial | rhs]. The original
// columns are kept so the tableau can be rebuilt from the current basis,
// which bounds the error accumulated by long pivot sequences.
class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : rows_(sf.rows), cols_(sf.cols + sf.rows), width_(cols_ + 1), first_artificial_(sf.cols) {
    original_.assign(rows_ * width_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t c = 0; c < sf.cols; ++c) original_[i * width_ + c] = sf.a[i * sf.cols + c];
      original_[i * width_ + sf.cols + i] = 1.0;
      original_[i * width_ + cols_] = sf.b[i];
    }
    t_ = original_;
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) basis_[i] = sf.cols + i;
  }

  double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t first_artificial() const { return first_artificial_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  bool is_artificial(std::size_t c) const { return c >= first_artificial_; }

  // Reduced costs for `cost` on the non-artificial columns, artificials
  // priced at artificial_cost. The last entry is minus the objective.
  std::vector<double> reduced_costs(const std::vector<double>& cost, double artificial_cost) const {
    auto col_cost = [&](std::size_t c) { return c < first_artificial_ ? cost[c] : artificial_cost; };
    std::vector<double> z(cols_ + 1, 0.0);
    for (std::size_t c = 0; c < cols_; ++c) z[c] = col_cost(c);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = col_cost(basis_[i]);
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) z[c] -= cb * at(i, c);
    }
    return z;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t c = 0; c <= cols_; ++c) at(row, c) /= p;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(i, c) -= f * at(row, c);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  // Recomputes B^-1 [A | b] from the original data by Gauss-Jordan
  // elimination on the basic columns with partial pivoting. Rows are
  // reassigned to basic variables in the process. Returns false (leaving the
  // tableau untouched) if the basis is numerically singular.
  bool rebuild() {
    std::vector<double> work = original_;
    std::vector<std::size_t> new_basis(rows_);
    std::vector<char> used(rows_, 0);
    auto w = [&](std::size_t r, std::size_t c) -> double& { return work[r * width_ + c]; };
    // Sorted order keeps the rebuild deterministic.
    std::vector<std::size_t> order = basis_;
    std::sort(order.begin(), order.end());
    for (std::size_t col : order) {
      std::ptrdiff_t piv = -1;
      double best = 1e-12;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!used[r] && std::abs(w(r, col)) > best) {
          best = std::abs(w(r, col));
          piv = static_cast<std::ptrdiff_t>(r);
        }
      }
      if (piv < 0) return false;
      const auto pr = static_cast<std::size_t>(piv);
      used[pr] = 1;
      new_basis[pr] = col;
      const double p = w(pr, col);
      for (std::size_t c = 0; c <= cols_; ++c) w(pr, c) /= p;
      w(pr, col) = 1.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == pr) continue;
        const double f = w(r, col);
        if (f == 0.0) continue;
        for (std::size_t c = 0; c <= cols_; ++c) w(r, c) -= f * w(pr, c);
        w(r, col) = 0.0;
      }
    }
    t_ = std::move(work);
    basis_ = std::move(new_basis);
    return true;
  }

  enum class Outcome { kOptimal, kUnbounded };

  // Bland's rule: lowest-index improving column, lowest-index basic variable
  // among tied ratios. Artificial columns never enter.
  Outcome run(const std::vector<double>& cost, double artificial_cost, int& iterations, int limit) {
    std::vector<double> z = reduced_costs(cost, artificial_cost);
    int since_rebuild = 0;
    while (true) {
      std::ptrdiff_t enter = -1;
      for (std::size_t c = 0; c < first_artificial_; ++c) {
        if (z[c] < -kCostTolerance) {
          enter = static_cast<std::ptrdiff_t>(c);
          break;
        }
      }
      if (enter < 0 && since_rebuild > 0) {
        // Confirm optimality on a freshly rebuilt tableau.
        if (rebuild()) {
          since_rebuild = 0;
          z = reduced_costs(cost, artificial_cost);
          continue;
        }
      }
      if (enter < 0) return Outcome::kOptimal;
      const auto ec = static_cast<std::size_t>(enter);
      std::ptrdiff_t leave = -1;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double coef = at(i, ec);
        if (coef <= kPivotTolerance) continue;
        const double ratio = std::max(at(i, cols_), 0.0) / coef;
        if (leave < 0 || ratio < best - kRatioTie) {
          best = ratio;
          leave = static_cast<std::ptrdiff_t>(i);
        } else if (ratio <= best + kRatioTie && basis_[i] < basis_[static_cast<std::size_t>(leave)]) {
          best = std::min(best, ratio);
          leave = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (leave < 0) return Outcome::kUnbounded;
      pivot(static_cast<std::size_t>(leave), ec);
      if (++iterations > limit) throw InternalError("simplex iteration limit exceeded");
      if (++since_rebuild >= kRebuildInterval && rebuild()) {
        since_rebuild = 0;
        z = reduced_costs(cost, artificial_cost);
      } else {
        // Update the pricing row in place.
        const double f = z[ec];
        const std::size_t lr = static_cast<std::size_t>(leave);
        for (std::size_t c = 0; c <= cols_; ++c) z[c] -= f * at(lr, c);
        z[ec] = 0.0;
      }
    }
  }

 private:
  static constexpr int kRebuildInterval = 50;

  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::size_t first_artificial_;
  std::vector<double> original_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

// Solves M v = rhs (or M^T v = rhs) by Gaussian elimination with partial
// pivoting. Returns false when M is numerically singular.
bool dense_solve(std::vector<double> m, std::size_t n, std::vector<double>& rhs, bool transpose) {
  if (transpose) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) std::swap(m[i * n + j], m[j * n + i]);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    }
    if (std::abs(m[piv * n + k]) < 1e-14) return false;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[k * n + c], m[piv * n + c]);
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / m[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) m[i * n + c] -= f * m[k * n + c];
      rhs[i] -= f * rhs[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= m[k * n + c] * rhs[c];
    rhs[k] = s / m[k * n + k];
  }
  return true;
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  const StandardForm sf = standardize(lp);
  Tableau tab(sf);
  LPSolution sol;
  const int limit = 200 * static_cast<int>(sf.rows + sf.cols) + 100000;

  // Phase 1: drive the artificial sum to zero.
  tab.run(std::vector<double>(sf.cols, 0.0), 1.0, sol.iterations, limit);
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (tab.is_artificial(tab.basis()[i])) infeasibility += std::max(tab.at(i, tab.cols()), 0.0);
  }
  double scale = 1.0;
  for (double b : sf.b) scale = std::max(scale, std::abs(b));
  if (infeasibility > kFeasibilityTolerance * scale) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  // Pivot zero-level artificials out wherever a real column allows; rows
  // where none does are redundant.
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (!tab.is_artificial(tab.basis()[i])) continue;
    std::ptrdiff_t best = -1;
    for (std::size_t c = 0; c < tab.first_artificial(); ++c) {
      if (std::abs(tab.at(i, c)) > 1e-9 &&
          (best < 0 || std::abs(tab.at(i, c)) > std::abs(tab.at(i, static_cast<std::size_t>(best))) * 10.0)) {
        best = static_cast<std::ptrdiff_t>(c);
      }
    }
    if (best >= 0) tab.pivot(i, static_cast<std::size_t>(best));
  }

  // Phase 2.
  if (tab.run(sf.cost, 0.0, sol.iterations, limit) == Tableau::Outcome::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  const std::vector<double> z = tab.reduced_costs(sf.cost, 0.0);

  // Re-solve with the final basis for accurate primal and dual values.
  const std::size_t m = sf.rows;
  std::vector<double> basis_matrix(m * m, 0.0);
  std::vector<double> cb(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t col = tab.basis()[k];
    if (col < sf.cols) {
      for (std::size_t i = 0; i < m; ++i) basis_matrix[i * m + k] = sf.a[i * sf.cols + col];
      cb[k] = sf.cost[col];
    } else {
      basis_matrix[(col - sf.cols) * m + k] = 1.0;
    }
  }
  std::vector<double> xb = sf.b;
  std::vector<double> y = cb;
  std::vector<double> y_std(m, 0.0);
  std::vector<double> values(sf.cols, 0.0);
  if (m > 0 && dense_solve(basis_matrix, m, xb, false) && dense_solve(basis_matrix, m, y, true)) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t col = tab.basis()[k];
      if (col < sf.cols) values[col] = xb[k] > 0.0 ? xb[k] : 0.0;
    }
    y_std = y;
  } else {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t col = tab.basis()[k];
      if (col < sf.cols) values[col] = tab.at(k, tab.cols()) > 0.0 ? tab.at(k, tab.cols()) : 0.0;
    }
    for (std::size_t i = 0; i < m; ++i) y_std[i] = -z[sf.cols + i];
  }

  sol.status = Status::kOptimal;
  sol.primal.assign(lp.num_vars(), 0.0);
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const VarMap& v = sf.vars[j];
    double x = v.offset + v.sign * values[v.col];
    if (v.minus_col >= 0) x -= values[v.minus_col];
    sol.primal[j] = x;
  }
  sol.dual.assign(lp.num_rows(), 0.0);
  for (std::size_t i = 0; i < lp.num_rows(); ++i) sol.dual[i] = sf.row_sign[i] * y_std[i];
  sol.objective_value = std::inner_product(lp.objective.begin(), lp.objective.end(), sol.primal.begin(), 0.0);
  return sol;
}

namespace {

std::vector<double> reduced_costs(const LinearProgram& lp, std::span<const double> dual) {
  std::vector<double> r = lp.objective;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (dual[i] == 0.0) continue;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) r[j] -= lp.constraints(i, j) * dual[i];
  }
  return r;
}

}  // namespace

double dual_objective(const LinearProgram& lp, std::span<const double> dual) {
  double value = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) value += lp.rhs[i] * dual[i];
  const auto r = reduced_costs(lp, dual);
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (r[j] > 0.0 && std::isfinite(lp.lower[j])) value += lp.lower[j] * r[j];
    if (r[j] < 0.0 && std::isfinite(lp.upper[j])) value += lp.upper[j] * r[j];
  }
  return value;
}

CertificateReport check_certificate(const LinearProgram& lp, const LPSolution& solution, double tol) {
  lp.validate();
  CertificateReport report;
  if (solution.status != Status::kOptimal || solution.primal.size() != lp.num_vars() ||
      solution.dual.size() != lp.num_rows()) {
    report.primal_residual = report.dual_residual = report.objective_gap = kInfinity;
    report.failures = {"solution is not a complete optimal solution"};
    return report;
  }
  const auto& x = solution.primal;
  const auto& y = solution.dual;

  double primal = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) ax += lp.constraints(i, j) * x[j];
    const double diff = ax - lp.rhs[i];
    switch (lp.relations[i]) {
      case Relation::kLessEqual: primal = std::max(primal, diff); break;
      case Relation::kGreaterEqual: primal = std::max(primal, -diff); break;
      case Relation::kEqual: primal = std::max(primal, std::abs(diff)); break;
    }
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    primal = std::max({primal, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }

  double dual = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (lp.relations[i] == Relation::kLessEqual) dual = std::max(dual, y[i]);
    if (lp.relations[i] == Relation::kGreaterEqual) dual = std::max(dual, -y[i]);
  }
  const auto r = reduced_costs(lp, y);
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (!std::isfinite(lp.lower[j])) dual = std::max(dual, r[j]);
    if (!std::isfinite(lp.upper[j])) dual = std::max(dual, -r[j]);
  }

  const double primal_obj = std::inner_product(lp.objective.begin(), lp.objective.end(), x.begin(), 0.0);
  report.primal_residual = primal;
  report.dual_residual = dual;
  report.objective_gap = std::abs(primal_obj - dual_objective(lp, y));
  if (!(report.primal_residual <= tol)) report.failures.push_back("primal residual");
  if (!(report.dual_residual <= tol)) report.failures.push_back("dual residual");
  if (!(report.objective_gap <= tol)) report.failures.push_back("objective gap");
  report.passed = report.failures.empty();
  return report;
}

}  // namespace minimax::lp
