#include "acmm/errors.hpp"
#include "acmm/matdot.hpp"
#include "acmm/partition.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace acmm;
using namespace acmm::matdot;
using poly::EvaluationPoints;

namespace {

std::vector<WorkerResult> run_workers(const Matrix& A, const Matrix& B, int m, const EvaluationPoints& x) {
  const auto shares = encode(partition::split(A, 1, m), partition::split(B, m, 1), x);
  std::vector<WorkerResult> out;
  for (const auto& s : shares) out.push_back(worker_multiply(s));
  return out;
}

std::vector<WorkerResult> pick(const std::vector<WorkerResult>& all, const Subset& s) {
  std::vector<WorkerResult> out;
  for (int i : s) out.push_back(all[static_cast<std::size_t>(i)]);
  return out;
}

const Matrix kA = (Matrix(1, 2) << 1, 2).finished();
const Matrix kB = (Matrix(2, 1) << 3, 4).finished();

}  // namespace

TEST(Encode, ScalarBlocks) {
  const auto shares = encode(partition::split(kA, 1, 2), partition::split(kB, 2, 1), EvaluationPoints({0.0, 1.0}));
  EXPECT_EQ(shares[0].A_tilde(0, 0), 1);
  EXPECT_EQ(shares[0].B_tilde(0, 0), 4);
  EXPECT_EQ(shares[1].A_tilde(0, 0), 3);
  EXPECT_EQ(shares[1].B_tilde(0, 0), 7);
  EXPECT_EQ(worker_multiply(shares[1]).C_tilde(0, 0), 21);  // (1+2x)(3x+4) at 1
  EXPECT_EQ(worker_multiply(shares[0]).C_tilde(0, 0), 4);
}

TEST(Encode, SingleBlockIgnoresPoint) {
  Rng rng(1);
  const Matrix A = random_normal(3, 3, rng), B = random_normal(3, 3, rng);
  const auto shares = encode(partition::split(A, 1, 1), partition::split(B, 1, 1), EvaluationPoints({0.3, -2.0}));
  for (const auto& s : shares) {
    EXPECT_EQ(s.A_tilde, A);
    EXPECT_EQ(s.B_tilde, B);
  }
}

TEST(Encode, ZeroOperandGivesZeroOutput) {
  const auto r = run_workers(Matrix::Zero(4, 4), Matrix::Ones(4, 4), 2, EvaluationPoints({0.5, 0.7}));
  for (const auto& w : r) EXPECT_EQ(w.C_tilde.norm(), 0.0);
}

TEST(Encode, RejectsWrongGrid) {
  EXPECT_THROW(encode(partition::split(Matrix::Zero(4, 4), 2, 2), partition::split(Matrix::Zero(4, 4), 2, 2),
                      EvaluationPoints({1.0})),
               ShapeViolation);
}

TEST(ExactDecode, HandInterpolation) {
  const auto r = run_workers(kA, kB, 2, EvaluationPoints({-1.0, 0.0, 1.0}));
  EXPECT_DOUBLE_EQ(r[0].C_tilde(0, 0), -1);
  EXPECT_DOUBLE_EQ(r[2].C_tilde(0, 0), 21);
  EXPECT_NEAR(exact_decode(r, 2)(0, 0), 11.0, 1e-13);
}

TEST(ExactDecode, SingleResultForMEqualsOne) {
  const auto r = run_workers(kA.transpose() * kB.transpose(), Matrix::Identity(2, 2), 1, EvaluationPoints({0.4}));
  EXPECT_EQ(exact_decode(r, 1), r[0].C_tilde);
}

TEST(ExactDecode, RandomMatricesAtChebyshevPoints) {
  Rng rng(2);
  const Matrix A = test::unit_matrix(12, 12, rng), B = test::unit_matrix(12, 12, rng);
  const auto r = run_workers(A, B, 3, poly::chebyshev_points(5, 1.0));
  EXPECT_LE(test::max_abs(exact_decode(r, 3) - A * B), 1e-8);
}

TEST(ExactDecode, OrderInvariant) {
  Rng rng(3);
  const Matrix A = test::unit_matrix(6, 6, rng), B = test::unit_matrix(6, 6, rng);
  auto r = run_workers(A, B, 3, poly::chebyshev_points(5, 1.0));
  const Matrix C1 = exact_decode(r, 3);
  std::reverse(r.begin(), r.end());
  EXPECT_LE(test::max_abs(exact_decode(r, 3) - C1), 1e-12);
}

TEST(ExactDecode, Errors) {
  const auto r = run_workers(kA, kB, 2, EvaluationPoints({-1.0, 0.0, 1.0}));
  EXPECT_THROW(exact_decode(std::span(r).first(2), 2), InsufficientResults);
  auto dup = r;
  dup[1].lambda = dup[0].lambda;
  EXPECT_THROW(exact_decode(dup, 2), DistinctnessViolation);
}

TEST(PointBound, Examples) {
  EXPECT_NEAR(point_bound(CodeParams::matdot(2, 3, 2, 1.0, 1.0)), 1.0 / (6 * std::sqrt(3.0) * 2), 1e-15);
  EXPECT_NEAR(point_bound(CodeParams::matdot(3, 6, 3, 0.01, 1.0)), 0.01 / (6 * std::sqrt(5.0) * 6), 1e-18);
  EXPECT_NEAR(point_bound(CodeParams::matdot(3, 6, 3, 0.01, 1.0), Bound::Relaxed), 0.01 / 6, 1e-18);
  EXPECT_NEAR(point_bound(CodeParams::matdot(3, 6, 3, 1.9, 1.0), Bound::Relaxed), 1.9 / 6, 1e-15);
  // The 1/m cap binds once eps / (eta^2 m (m-1)) exceeds it.
  EXPECT_NEAR(point_bound(CodeParams::matdot(3, 6, 3, 1.0, 0.5), Bound::Relaxed), 1.0 / 3, 1e-15);
}

TEST(PointBound, EpsilonRange) {
  EXPECT_THROW(point_bound(CodeParams::matdot(2, 3, 2, 2.5, 1.0)), EpsilonRange);
  // 3 eta^2 sqrt(3) ~ 0.52 at eta^2 = 0.1
  EXPECT_THROW(point_bound(CodeParams::matdot(2, 3, 2, 0.6, std::sqrt(0.1))), EpsilonRange);
  EXPECT_THROW(point_bound(CodeParams::matdot(1, 3, 1, 0.1, 1.0)), ParameterViolation);
}

TEST(EpsPoints, InsideBoundAndChebyshevShaped) {
  const auto params = CodeParams::matdot(3, 6, 3, 0.01, 1.0);
  const double bound = point_bound(params);
  const auto x = eps_points(params);
  const auto ref = poly::chebyshev_points(6, 1.0);
  ASSERT_EQ(x.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_LT(std::abs(x[i]), bound);
    EXPECT_NEAR(x[i], 0.99 * bound * ref[i], 1e-20);
  }
  for (double v : eps_points(params, Spacing::Uniform)) EXPECT_LT(std::abs(v), bound);
}

TEST(ApproxDecode, ScalarCase) {
  const auto params = CodeParams::matdot(2, 2, 2, 0.01, 5.0);
  const auto r = run_workers(kA, kB, 2, eps_points(params));
  const auto out = approx_decode(r, params);
  EXPECT_FALSE(out.failed);
  EXPECT_NEAR(out.estimate(0, 0), 11.0, 0.01);
}

TEST(ApproxDecode, EverySubsetOfSizeMWithinEpsilon) {
  Rng rng(4);
  const auto params = CodeParams::matdot(3, 6, 3, 1e-2, 1.0);
  const auto x = eps_points(params);
  for (int pair = 0; pair < 5; ++pair) {
    const Matrix A = test::unit_matrix(21, 21, rng), B = test::unit_matrix(21, 21, rng);
    const auto all = run_workers(A, B, 3, x);
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b)
        for (int c = b + 1; c < 6; ++c) {
          const auto out = approx_decode(pick(all, {a, b, c}), params);
          EXPECT_FALSE(out.failed);
          EXPECT_LE(test::max_abs(out.estimate - A * B), 1e-2);
        }
  }
}

TEST(ApproxDecode, ThresholdAcrossShapes) {
  Rng rng(5);
  for (int m = 2; m <= 4; ++m) {
    const int n = 6 * m;
    const auto params = CodeParams::matdot(m, m + 2, m, 1e-2, 1.0);
    const auto x = eps_points(params);
    for (int pair = 0; pair < 10; ++pair) {
      const Matrix A = test::unit_matrix(n, n, rng), B = test::unit_matrix(n, n, rng);
      const auto all = run_workers(A, B, m, x);
      const Subset s = random_subset(m + 2, m, rng);
      const auto out = approx_decode(pick(all, s), params);
      EXPECT_FALSE(out.failed);
      EXPECT_LE(test::max_abs(out.estimate - A * B), 1e-2);
    }
  }
}

TEST(ApproxDecode, RelaxedBoundAlsoWithinEpsilon) {
  Rng rng(6);
  const auto params = CodeParams::matdot(3, 6, 3, 1e-2, 1.0);
  const auto x = eps_points(params, Spacing::Chebyshev, Bound::Relaxed);
  for (int pair = 0; pair < 10; ++pair) {
    const Matrix A = test::unit_matrix(12, 12, rng), B = test::unit_matrix(12, 12, rng);
    const auto all = run_workers(A, B, 3, x);
    const auto out = approx_decode(pick(all, {0, 2, 5}), params);
    EXPECT_LE(test::max_abs(out.estimate - A * B), 1e-2);
  }
}

TEST(ApproxDecode, FullSetAgreesWithExactDecode) {
  Rng rng(7);
  const auto params = CodeParams::matdot(3, 5, 5, 1e-2, 1.0);
  const Matrix A = test::unit_matrix(9, 9, rng), B = test::unit_matrix(9, 9, rng);
  const auto all = run_workers(A, B, 3, eps_points(params));
  EXPECT_LE(test::max_abs(approx_decode(all, params).estimate - exact_decode(all, 3)), 1e-2);
}

TEST(ApproxDecode, InsufficientResults) {
  const auto params = CodeParams::matdot(3, 6, 3, 1e-2, 1.0);
  const auto all = run_workers(Matrix::Identity(3, 3), Matrix::Identity(3, 3), 3, eps_points(params));
  EXPECT_THROW(approx_decode(pick(all, {0, 1}), params), InsufficientResults);
}

TEST(ApproxDecode, DeclaresFailureWhenNormExceeded) {
  // Operands far above eta: the min-norm coefficients cannot fit in the ball.
  const auto params = CodeParams::matdot(2, 3, 2, 1e-2, 1.0);
  const Matrix A = 100 * Matrix::Ones(2, 2), B = 100 * Matrix::Ones(2, 2);
  const auto all = run_workers(A, B, 2, eps_points(params));
  EXPECT_TRUE(approx_decode(pick(all, {0, 1}), params).failed);
}

TEST(CoefficientNorm, EntrywiseBound) {
  // ||p_[i,j]||_2 <= sqrt(2m-1) eta^2 with the product coefficients built directly.
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + rng.below(3);
    const int n = 2 * m;
    const double eta = 0.5 + rng.uniform();
    const Matrix A = random_with_norm(n, n, eta * rng.uniform(), rng);
    const Matrix B = random_with_norm(n, n, eta, rng);
    const auto Ag = partition::split(A, 1, m), Bg = partition::split(B, m, 1);
    std::vector<Matrix> a, b;
    for (int j = 0; j < m; ++j) a.push_back(Ag(0, j));
    for (int j = m - 1; j >= 0; --j) b.push_back(Bg(j, 0));
    const auto coef = test::product_coefficients(a, b);
    Matrix sq = Matrix::Zero(n, n);
    for (const auto& c : coef) sq += c.cwiseAbs2();
    EXPECT_LE(std::sqrt(sq.maxCoeff()), std::sqrt(2.0 * m - 1) * eta * eta * (1 + 1e-12));
    EXPECT_LE(test::max_abs(coef[static_cast<std::size_t>(m - 1)] - A * B), 1e-12);
  }
}

TEST(NullSpace, LeadingCoordinatesBounded) {
  // For m < k, vectors of norm <= R in null(V^T) with points inside
  // eps / (3 R (k-m) m) have their first m coordinates within eps.
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + rng.below(4);
    const int k = m + 1 + rng.below(3);
    const double R = 0.5 + 2 * rng.uniform();
    const double eps = std::min(2.0, 3 * R) * (0.05 + 0.9 * rng.uniform());
    const double radius = 0.99 * eps / (3 * R * (k - m) * m);
    std::vector<double> xs;
    for (int i = 0; i < m; ++i) xs.push_back(radius * (2.0 * (i + rng.uniform()) / m - 1));
    const Matrix V = poly::vandermonde(EvaluationPoints(xs), k);  // k x m
    const Matrix N = Eigen::FullPivLU<Matrix>(V.transpose()).kernel();
    ASSERT_EQ(N.cols(), k - m);
    Vector x = N * random_normal(k - m, 1, rng);
    x *= R * rng.uniform() / x.norm();
    EXPECT_LE(x.head(m).cwiseAbs().maxCoeff(), eps) << "m=" << m << " k=" << k;
  }
}

TEST(NullSpace, ShiftedProductsSpanIt) {
  // u_i = coefficients of x^{i-1} prod_j (x - lambda_j) annihilate V.
  const std::vector<double> xs{0.1, -0.3, 0.25};
  const int m = 3, k = 6;
  const Matrix V = poly::vandermonde(EvaluationPoints(xs), k);
  for (int i = 0; i < k - m; ++i) {
    Vector u = Vector::Zero(k);
    for (int l = 0; l <= m; ++l) u[i + l] = ((m - l) % 2 ? -1 : 1) * poly::elem_sym(xs, m - l);
    EXPECT_LE((u.transpose() * V).cwiseAbs().maxCoeff(), 1e-15);
  }
}
