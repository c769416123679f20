#include "minimax/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <exception>

#include "minimax/errors.hpp"

namespace minimax::kernels {

namespace {

// Below this many multiply-adds the thread start-up costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

void check_risk_shapes(const Matrix& loss, const Matrix& kernel, const Matrix& delta) {
  if (kernel.rows() != loss.rows() || delta.rows() != kernel.cols() || delta.cols() != loss.cols()) {
    throw InputError("risk kernel: incompatible loss/kernel/procedure shapes");
  }
}

void check_cost_shapes(const Matrix& loss, const Matrix& kernel, std::span<const double> prior) {
  if (kernel.rows() != loss.rows() || prior.size() != loss.rows()) {
    throw InputError("action cost kernel: incompatible loss/kernel/prior shapes");
  }
}

inline double risk_row(const Matrix& loss, const Matrix& kernel, const Matrix& delta, std::size_t t) {
  double total = 0.0;
  for (std::size_t x = 0; x < kernel.cols(); ++x) {
    double inner = 0.0;
    for (std::size_t a = 0; a < loss.cols(); ++a) inner += delta(x, a) * loss(t, a);
    total += kernel(t, x) * inner;
  }
  return total;
}

inline void cost_row(const Matrix& loss, const Matrix& kernel, std::span<const double> prior, std::size_t x,
                     Matrix& out) {
  for (std::size_t a = 0; a < loss.cols(); ++a) {
    double sum = 0.0;
    for (std::size_t t = 0; t < loss.rows(); ++t) {
      const double w = prior[t] * kernel(t, x);
      if (w != 0.0) sum += w * loss(t, a);
    }
    out(x, a) = sum;
  }
}

}  // namespace

namespace serial {

std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta) {
  check_risk_shapes(loss, kernel, delta);
  std::vector<double> out(loss.rows());
  for (std::size_t t = 0; t < loss.rows(); ++t) out[t] = risk_row(loss, kernel, delta, t);
  return out;
}

Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior) {
  check_cost_shapes(loss, kernel, prior);
  Matrix out(kernel.cols(), loss.cols());
  for (std::size_t x = 0; x < kernel.cols(); ++x) cost_row(loss, kernel, prior, x, out);
  return out;
}

Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell) {
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = cell(r, c);
  }
  return out;
}

}  // namespace serial

namespace omp {

std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta) {
  check_risk_shapes(loss, kernel, delta);
  const auto rows = static_cast<std::ptrdiff_t>(loss.rows());
  std::vector<double> out(loss.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < rows; ++t) out[t] = risk_row(loss, kernel, delta, static_cast<std::size_t>(t));
  return out;
}

Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior) {
  check_cost_shapes(loss, kernel, prior);
  Matrix out(kernel.cols(), loss.cols());
  const auto obs = static_cast<std::ptrdiff_t>(kernel.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < obs; ++x) cost_row(loss, kernel, prior, static_cast<std::size_t>(x), out);
  return out;
}

Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell) {
  Matrix out(rows, cols);
  const auto n = static_cast<std::ptrdiff_t>(rows);
  // Exceptions cannot cross the parallel region; keep the first one.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    try {
      for (std::size_t c = 0; c < cols; ++c) out(static_cast<std::size_t>(r), c) = cell(static_cast<std::size_t>(r), c);
    } catch (...) {
#pragma omp critical(minimax_fill_grid_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace omp

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta) {
  if (loss.rows() * kernel.cols() * loss.cols() >= kParallelWork) return omp::risk_profile(loss, kernel, delta);
  return serial::risk_profile(loss, kernel, delta);
}

Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior) {
  if (loss.rows() * kernel.cols() * loss.cols() >= kParallelWork) return omp::action_costs(loss, kernel, prior);
  return serial::action_costs(loss, kernel, prior);
}

Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell) {
  if (rows * cols >= 4096) return omp::fill_grid(rows, cols, cell);
  return serial::fill_grid(rows, cols, cell);
}

}  // namespace minimax::kernels
