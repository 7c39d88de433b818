#pragma once

#include "acmm/types.hpp"

#include <vector>

namespace acmm::partition {

// grid_rows x grid_cols equal-size blocks, stored row-major.
struct BlockGrid {
  int grid_rows = 0;
  int grid_cols = 0;
  int block_rows = 0;
  int block_cols = 0;
  std::vector<Matrix> blocks;

  const Matrix& operator()(int i, int j) const { return blocks[static_cast<std::size_t>(i * grid_cols + j)]; }
  Matrix& operator()(int i, int j) { return blocks[static_cast<std::size_t>(i * grid_cols + j)]; }
};

// Throws ShapeViolation unless rows and cols divide evenly.
BlockGrid split(const Matrix& A, int grid_rows, int grid_cols);
// Throws ShapeViolation on ragged blocks.
Matrix merge(const BlockGrid& grid);

// ||A||_F <= eta, with 1e-12 relative slack.
bool check_norm(const Matrix& A, double eta);

// Zero-pads up to the next multiples.  Padding with zeros leaves the
// Frobenius norm unchanged, but the padded operand belongs to a larger
// shape class, so bounds that depend on n (not eta) change.
Matrix pad_to_divisible(const Matrix& A, int row_multiple, int col_multiple);

}  // namespace acmm::partition
