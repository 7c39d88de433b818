#pragma once

#include "acmm/errors.hpp"
#include "acmm/types.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace acmm::poly {

// Pairwise distinct, finite evaluation points.
class EvaluationPoints {
 public:
  EvaluationPoints() = default;
  // Throws DistinctnessViolation on repeated values, ParameterViolation on NaN/Inf.
  explicit EvaluationPoints(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> values() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  double max_abs() const;
  EvaluationPoints subset(const Subset& indices) const;

 private:
  std::vector<double> points_;
};

// Throws DistinctnessViolation if two entries compare equal.
void require_distinct(std::span<const double> x);

// coeffs[i] multiplies x^i.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  // -1 for the zero polynomial.
  int degree() const;
  Polynomial normalized() const;
};

// k x |points|, entry (r, c) = points[c]^r.
Matrix vandermonde(const EvaluationPoints& points, int k);

// v[i] = 1 / prod_{j != i} (x_i - x_j): the last row of the inverse of the
// square Vandermonde matrix with rows (1, x_r, ..., x_r^{m-1}).
Vector vandermonde_inverse_last_row(const EvaluationPoints& points);

template <class T>
std::vector<T> inverse_last_row(std::span<const T> x) {
  std::vector<T> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    T den(1);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) den *= x[i] - x[j];
    v[i] = T(1) / den;
  }
  return v;
}

double elem_sym(std::span<const double> x, int l);
double complete_homog(std::span<const double> x, int l);

// (sum_i x_i^{m-1+l} v_i, h_l(x)) with v from vandermonde_inverse_last_row.
std::pair<double, double> power_sum_identity_check(const EvaluationPoints& points, int l);

// Solves a . V = y for the coefficient row a, V being k x K.
//   k >= K: minimum 2-norm solution of the consistent system;
//   k <  K: least-squares solution.
// The linear map y -> a is formed once and shared by every right-hand side.
// Rank is tested at 1e-12 relative on the row-equilibrated V, since raw
// Vandermonde rows at tiny points differ in scale by many orders.
class CoefficientSolver {
 public:
  explicit CoefficientSolver(const Matrix& V);

  int coefficients() const { return static_cast<int>(map_.rows()); }
  int evaluations() const { return static_cast<int>(map_.cols()); }

  Vector solve(const Vector& y) const { return map_ * y; }
  // Columns of Y are independent right-hand sides.
  Matrix solve_many(const Matrix& Y) const { return map_ * Y; }
  // Row r of the map: the functional extracting coefficient r.
  Vector functional(int r) const { return map_.row(r).transpose(); }
  const Matrix& map() const { return map_; }

 private:
  Matrix map_;  // k x K, a = map_ * y
};

// Requires k >= K.  Throws ShapeViolation otherwise, RankDeficient if V is.
Vector min_norm_solve(const Matrix& V, const Vector& y);

// lambda_i = cos((2i-1) pi / (2P)) / gamma, i = 1..P.
EvaluationPoints chebyshev_points(int P, double gamma);
// Midpoints of P equal cells of (-half_width, half_width).
EvaluationPoints uniform_points(int P, double half_width);

}  // namespace acmm::poly
