#include "acmm/errors.hpp"
#include "acmm/poly_algebra.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace acmm;
using namespace acmm::poly;

TEST(EvaluationPoints, RejectsRepeatsAndNonFinite) {
  EXPECT_THROW(EvaluationPoints({0.1, 0.2, 0.1}), DistinctnessViolation);
  EXPECT_THROW(EvaluationPoints({0.1, std::nan("")}), ParameterViolation);
  EXPECT_NO_THROW(EvaluationPoints({-0.0 + 1e-300, 0.0}));
}

TEST(EvaluationPoints, SubsetChecksIndices) {
  const EvaluationPoints x({1, 2, 3});
  EXPECT_EQ(x.subset({0, 2}).values()[1], 3.0);
  EXPECT_THROW(x.subset({3}), IndexViolation);
}

TEST(Vandermonde, MatchesHornerEvaluation) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + rng.below(6);
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(2 * rng.uniform() - 1 + 3 * i);
    const EvaluationPoints x(xs);
    const Vector a = random_normal(1, k, rng).transpose();
    const Vector vals = (a.transpose() * vandermonde(x, k)).transpose();
    for (int c = 0; c < 5; ++c) {
      double horner = 0;
      for (int r = k - 1; r >= 0; --r) horner = horner * xs[static_cast<std::size_t>(c)] + a[r];
      EXPECT_NEAR(vals[c], horner, 1e-10 * (1 + std::abs(horner)));
    }
  }
}

TEST(VandermondeInverseLastRow, MatchesFullInverse) {
  const EvaluationPoints x({-0.7, 0.1, 0.4, 0.9});
  const Matrix V = vandermonde(x, 4).transpose();  // rows (1, x, x^2, x^3)
  const Matrix inv = V.inverse();
  const Vector v = vandermonde_inverse_last_row(x);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v[i], inv(3, i), 1e-10);
}

TEST(VandermondeInverseLastRow, ExtractsLeadingCoefficient) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + rng.below(6);
    std::vector<double> xs;
    for (int i = 0; i < m; ++i) xs.push_back(i + rng.uniform() * 0.5);
    const EvaluationPoints x(xs);
    const Vector a = random_normal(m, 1, rng);
    Vector y(m);
    for (int i = 0; i < m; ++i) {
      double h = 0;
      for (int r = m - 1; r >= 0; --r) h = h * xs[static_cast<std::size_t>(i)] + a[r];
      y[i] = h;
    }
    EXPECT_NEAR(vandermonde_inverse_last_row(x).dot(y), a[m - 1], 1e-9 * (1 + std::abs(a[m - 1])));
  }
}

TEST(VandermondeInverseLastRow, ConstantHasZeroLeadingCoefficient) {
  for (int m = 2; m <= 6; ++m) {
    std::vector<double> xs;
    for (int i = 0; i < m; ++i) xs.push_back(0.3 * i - 0.5);
    EXPECT_NEAR(vandermonde_inverse_last_row(EvaluationPoints(xs)).sum(), 0.0, 1e-10);
  }
}

TEST(ElemSym, Examples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(elem_sym(x, 0), 1.0);
  EXPECT_DOUBLE_EQ(elem_sym(x, 2), 11.0);
  EXPECT_DOUBLE_EQ(elem_sym(x, 3), 6.0);
  EXPECT_THROW(elem_sym(x, 4), IndexViolation);
  EXPECT_THROW(elem_sym(x, -1), IndexViolation);
}

TEST(ElemSym, MatchesSubsetEnumeration) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(8);
    std::vector<double> x;
    for (int i = 0; i < n; ++i) x.push_back(rng.normal());
    for (int l = 0; l <= n; ++l)
      EXPECT_NEAR(elem_sym(x, l), test::brute_elem_sym(x, l), 1e-12 * (1 + std::abs(test::brute_elem_sym(x, l))));
  }
}

TEST(CompleteHomog, Examples) {
  const std::vector<double> ab{0.3, -1.7};
  EXPECT_EQ(complete_homog(ab, 0), 1.0);
  EXPECT_DOUBLE_EQ(complete_homog(ab, 1), 0.3 - 1.7);
  EXPECT_DOUBLE_EQ(complete_homog(std::vector<double>{1, 2}, 2), 7.0);
}

TEST(CompleteHomog, MatchesMonomialEnumeration) {
  Rng rng(4);
  for (int m = 1; m <= 5; ++m)
    for (int l = 0; m * l <= 20; ++l) {
      std::vector<double> x;
      for (int i = 0; i < m; ++i) x.push_back(rng.normal());
      const double brute = test::brute_complete_homog(x, l);
      EXPECT_NEAR(complete_homog(x, l), brute, 1e-10 * (1 + std::abs(brute))) << "m=" << m << " l=" << l;
    }
}

TEST(SymmetricFunctions, NewtonStyleIdentity) {
  // sum_{i=0..l} (-1)^i e_i h_{l-i} = 0 for l >= 1.
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(6);
    std::vector<double> x;
    for (int i = 0; i < n; ++i) x.push_back(2 * rng.uniform() - 1);
    for (int l = 1; l <= 8; ++l) {
      double s = 0, scale = 0;
      for (int i = 0; i <= std::min(l, n); ++i) {
        const double t = (i % 2 ? -1 : 1) * elem_sym(x, i) * complete_homog(x, l - i);
        s += t;
        scale += std::abs(t);
      }
      EXPECT_NEAR(s, 0.0, 1e-12 * (1 + scale));
    }
  }
}

TEST(PowerSumIdentity, Examples) {
  const auto [lhs, rhs] = power_sum_identity_check(EvaluationPoints({1, 2}), 1);
  EXPECT_NEAR(lhs, 3.0, 1e-14);
  EXPECT_NEAR(rhs, 3.0, 1e-14);
  const auto [l2, r2] = power_sum_identity_check(EvaluationPoints({0.3, -0.5, 0.7}), 2);
  EXPECT_NEAR(l2, r2, 1e-10);
  EXPECT_THROW(power_sum_identity_check(EvaluationPoints({1, 1}), 1), DistinctnessViolation);
}

TEST(MinNormSolve, Examples) {
  Matrix V(1, 1);
  V << 2;
  EXPECT_NEAR(min_norm_solve(V, Vector::Constant(1, 6.0))[0], 3.0, 1e-15);

  // Degree-2 polynomial 4 + 11x + 6x^2 seen at two points.
  const EvaluationPoints x({0.1, -0.1});
  const Matrix W = vandermonde(x, 3);
  Vector a0(3);
  a0 << 4, 11, 6;
  const Vector y = (a0.transpose() * W).transpose();
  const Vector a = min_norm_solve(W, y);
  EXPECT_LE(((a.transpose() * W).transpose() - y).norm(), 1e-8 * (1 + y.norm()));
  EXPECT_LE(a.norm(), a0.norm() + 1e-8);
}

TEST(MinNormSolve, SquareSystemsMatchDirectSolve) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + rng.below(6);
    const Matrix V = random_normal(k, k, rng);
    const Vector y = random_normal(k, 1, rng);
    const Vector direct = V.transpose().fullPivLu().solve(y);
    EXPECT_LE((min_norm_solve(V, y) - direct).norm(), 1e-9 * (1 + direct.norm()));
  }
}

TEST(MinNormSolve, ConsistentUnderdeterminedSystems) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + rng.below(4);
    const int k = K + rng.below(4);
    const Matrix V = random_normal(k, K, rng);
    const Vector a0 = random_normal(k, 1, rng);
    const Vector y = (a0.transpose() * V).transpose();
    const Vector a = min_norm_solve(V, y);
    EXPECT_LE(((a.transpose() * V).transpose() - y).norm(), 1e-8 * (1 + y.norm()));
    EXPECT_LE(a.norm(), a0.norm() + 1e-8);
    // Any other solution a + n with n in the left null space is longer.
    const Eigen::FullPivLU<Matrix> lu(V.transpose());
    const Matrix N = lu.kernel();
    if (N.cols() > 0 && N.norm() > 0) {
      const Vector other = a + N * random_normal(static_cast<int>(N.cols()), 1, rng);
      EXPECT_LE(a.norm(), other.norm() + 1e-8);
    }
  }
}

TEST(MinNormSolve, RejectsBadShapesAndRank) {
  EXPECT_THROW(min_norm_solve(Matrix::Ones(2, 3), Vector::Ones(3)), ShapeViolation);
  Matrix V(2, 2);
  V << 1, 2, 2, 4;
  EXPECT_THROW(min_norm_solve(V, Vector::Ones(2)), RankDeficient);
}

TEST(CoefficientSolver, TinyPointsKeepFullRank) {
  // Raw Vandermonde rows at 1e-5 points span ten orders of magnitude.
  const auto x = chebyshev_points(6, 70000);
  const CoefficientSolver s(vandermonde(x.subset({0, 2, 4}), 5));
  EXPECT_EQ(s.coefficients(), 5);
  EXPECT_EQ(s.evaluations(), 3);
}

TEST(ChebyshevPoints, Examples) {
  const auto one = chebyshev_points(1, 1);
  EXPECT_NEAR(one[0], 0.0, 1e-16);
  const auto two = chebyshev_points(2, 1);
  EXPECT_NEAR(two[0], std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(two[1], -std::numbers::sqrt2 / 2, 1e-15);
  const auto six = chebyshev_points(6, 70000);
  for (double v : six) EXPECT_LT(std::abs(v), 1.0 / 70000);
}

TEST(ChebyshevPoints, CosineFormula) {
  for (int P = 1; P <= 9; ++P) {
    const auto x = chebyshev_points(P, 3.0);
    for (int i = 1; i <= P; ++i)
      EXPECT_NEAR(x[static_cast<std::size_t>(i - 1)], std::cos((2 * i - 1) * std::numbers::pi / (2 * P)) / 3.0, 1e-15);
  }
}

TEST(UniformPoints, InsideInterval) {
  const auto x = uniform_points(4, 0.5);
  for (double v : x) EXPECT_LT(std::abs(v), 0.5);
  EXPECT_NEAR(x[0] + x[3], 0.0, 1e-15);
}

TEST(Polynomial, DegreeAndEvaluation) {
  const Polynomial p{{4, 11, 6, 0}};
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p(1.0), 21.0);
  EXPECT_EQ((Polynomial{{0, 0}}.degree()), -1);
}
