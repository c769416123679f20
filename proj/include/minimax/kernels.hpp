#pragma once

// Data-parallel inner loops shared by the solvers. Each kernel has a serial
// reference and an OpenMP version. Parallelism is only over independent
// output cells and every reduction runs in the same order in both versions,
// so the two produce bitwise-identical results.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "minimax/core_model.hpp"

namespace minimax::kernels {

/// Cell evaluator for grid fills: (row index, column index) -> value.
using CellFn = std::function<double(std::size_t, std::size_t)>;

namespace serial {

/// out[theta] = sum_x kernel(theta, x) sum_a delta(x, a) loss(theta, a)
std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta);

/// out(x, a) = sum_theta prior[theta] kernel(theta, x) loss(theta, a)
Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior);

Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell);

}  // namespace serial

namespace omp {

std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta);
Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior);
/// `cell` must be safe to call concurrently.
Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell);

}  // namespace omp

/// Number of worker threads OpenMP would use (1 when built without OpenMP).
int max_threads();

// Dispatching versions: OpenMP above a work threshold, serial otherwise.
std::vector<double> risk_profile(const Matrix& loss, const Matrix& kernel, const Matrix& delta);
Matrix action_costs(const Matrix& loss, const Matrix& kernel, std::span<const double> prior);
Matrix fill_grid(std::size_t rows, std::size_t cols, const CellFn& cell);

}  // namespace minimax::kernels
