#include "acmm/partition.hpp"

#include "acmm/errors.hpp"

#include <fmt/format.h>

namespace acmm::partition {

BlockGrid split(const Matrix& A, int grid_rows, int grid_cols) {
  if (grid_rows < 1 || grid_cols < 1) throw ShapeViolation("grid dimensions must be positive");
  if (A.rows() % grid_rows != 0 || A.cols() % grid_cols != 0)
    throw ShapeViolation(fmt::format("{}x{} matrix does not split into a {}x{} grid", A.rows(), A.cols(), grid_rows, grid_cols));
  BlockGrid g;
  g.grid_rows = grid_rows;
  g.grid_cols = grid_cols;
  g.block_rows = static_cast<int>(A.rows()) / grid_rows;
  g.block_cols = static_cast<int>(A.cols()) / grid_cols;
  g.blocks.reserve(static_cast<std::size_t>(grid_rows * grid_cols));
  for (int i = 0; i < grid_rows; ++i)
    for (int j = 0; j < grid_cols; ++j)
      g.blocks.emplace_back(A.block(i * g.block_rows, j * g.block_cols, g.block_rows, g.block_cols));
  return g;
}

Matrix merge(const BlockGrid& g) {
  if (g.grid_rows < 1 || g.grid_cols < 1 || g.blocks.size() != static_cast<std::size_t>(g.grid_rows * g.grid_cols))
    throw ShapeViolation("block count does not match grid shape");
  for (const auto& b : g.blocks)
    if (b.rows() != g.block_rows || b.cols() != g.block_cols) throw ShapeViolation("ragged block grid");
  Matrix A(g.grid_rows * g.block_rows, g.grid_cols * g.block_cols);
  for (int i = 0; i < g.grid_rows; ++i)
    for (int j = 0; j < g.grid_cols; ++j) A.block(i * g.block_rows, j * g.block_cols, g.block_rows, g.block_cols) = g(i, j);
  return A;
}

bool check_norm(const Matrix& A, double eta) { return A.norm() <= eta * (1.0 + 1e-12); }

Matrix pad_to_divisible(const Matrix& A, int row_multiple, int col_multiple) {
  if (row_multiple < 1 || col_multiple < 1) throw ShapeViolation("multiples must be positive");
  const auto up = [](Eigen::Index n, int k) { return (n + k - 1) / k * k; };
  Matrix out = Matrix::Zero(up(A.rows(), row_multiple), up(A.cols(), col_multiple));
  out.topLeftCorner(A.rows(), A.cols()) = A;
  return out;
}

}  // namespace acmm::partition
