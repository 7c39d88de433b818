#include "acmm/errors.hpp"
#include "acmm/matrix_io.hpp"
#include "acmm/partition.hpp"
#include "acmm/rng.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace acmm;
using namespace acmm::partition;

TEST(Split, IdentityColumns) {
  const auto g = split(Matrix::Identity(2, 2), 1, 2);
  ASSERT_EQ(g.blocks.size(), 2u);
  EXPECT_EQ(g(0, 0), (Matrix(2, 1) << 1, 0).finished());
  EXPECT_EQ(g(0, 1), (Matrix(2, 1) << 0, 1).finished());
}

TEST(Split, BlockIndexing) {
  Matrix A(4, 4);
  for (int i = 0; i < 16; ++i) A(i / 4, i % 4) = i + 1;
  const auto g = split(A, 2, 2);
  EXPECT_EQ(g(0, 1), (Matrix(2, 2) << 3, 4, 7, 8).finished());
}

TEST(Split, MergeRoundTripIsBitExact) {
  Rng rng(1);
  const Matrix A = random_normal(12, 12, rng);
  for (auto [p, q] : {std::pair{1, 12}, {2, 6}, {3, 4}, {12, 1}}) {
    const auto g = split(A, p, q);
    EXPECT_EQ(g.block_rows * g.grid_rows, 12);
    EXPECT_EQ(merge(g), A);
    for (const auto& b : g.blocks) EXPECT_LE(b.norm(), A.norm());
  }
}

TEST(Split, Rectangular) {
  Rng rng(2);
  const Matrix A = random_normal(3, 8, rng);
  EXPECT_EQ(merge(split(A, 1, 4)), A);
}

TEST(Split, RejectsNonDivisible) {
  EXPECT_THROW(split(Matrix::Zero(5, 6), 2, 2), ShapeViolation);
  EXPECT_THROW(split(Matrix::Zero(4, 4), 0, 2), ShapeViolation);
}

TEST(Merge, RejectsRaggedGrid) {
  auto g = split(Matrix::Zero(4, 4), 2, 2);
  g(1, 1) = Matrix::Zero(3, 2);
  EXPECT_THROW(merge(g), ShapeViolation);
}

TEST(CheckNorm, Examples) {
  EXPECT_TRUE(check_norm(Matrix::Zero(3, 3), 1e-9));
  EXPECT_TRUE(check_norm(Matrix::Identity(4, 4), 2.0));
  EXPECT_FALSE(check_norm(Matrix::Identity(4, 4), 1.9));
}

TEST(PadToDivisible, KeepsNormAndContent) {
  Rng rng(3);
  const Matrix A = random_normal(5, 7, rng);
  const Matrix P = pad_to_divisible(A, 3, 4);
  EXPECT_EQ(P.rows(), 6);
  EXPECT_EQ(P.cols(), 8);
  EXPECT_EQ(P.topLeftCorner(5, 7), A);
  EXPECT_DOUBLE_EQ(P.norm(), A.norm());
  EXPECT_EQ(pad_to_divisible(A, 5, 7), A);
}

TEST(MatrixIo, CsvRoundTripIsBitExact) {
  Rng rng(4);
  Matrix A = random_normal(4, 3, rng);
  A(0, 0) = std::numeric_limits<double>::denorm_min();
  A(1, 1) = -0.1;
  std::stringstream ss;
  io::write_matrix_csv(ss, A);
  EXPECT_EQ(ss.str().substr(0, 4), "4,3\n");
  EXPECT_EQ(io::read_matrix_csv(ss), A);
}

TEST(MatrixIo, BinaryRoundTripIsBitExact) {
  Rng rng(5);
  const Matrix A = random_normal(3, 5, rng);
  std::stringstream ss;
  io::write_matrix_binary(ss, A);
  EXPECT_EQ(ss.str().substr(0, 4), "ACMM");
  EXPECT_EQ(ss.str().size(), 4u + 8u + 15u * 8u);
  EXPECT_EQ(io::read_matrix_binary(ss), A);
}

TEST(MatrixIo, FilesDetectFormat) {
  Rng rng(6);
  const Matrix A = random_normal(2, 2, rng);
  const auto dir = std::filesystem::temp_directory_path() / "acmm_io_test";
  std::filesystem::create_directories(dir);
  io::write_matrix(dir / "a.bin", A);
  io::write_matrix(dir / "a.csv", A);
  EXPECT_EQ(io::read_matrix(dir / "a.bin"), A);
  EXPECT_EQ(io::read_matrix(dir / "a.csv"), A);
  EXPECT_THROW(io::read_matrix(dir / "missing.csv"), IoError);
  std::ofstream(dir / "bad.csv") << "2,2\n1,2\n3\n";
  EXPECT_THROW(io::read_matrix(dir / "bad.csv"), FormatError);
  std::filesystem::remove_all(dir);
}
