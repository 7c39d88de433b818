#include "acmm/poly_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace acmm::poly {

void require_distinct(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  auto it = std::adjacent_find(s.begin(), s.end());
  if (it != s.end()) throw DistinctnessViolation("repeated evaluation point " + std::to_string(*it));
}

EvaluationPoints::EvaluationPoints(std::vector<double> points) : points_(std::move(points)) {
  for (double x : points_)
    if (!std::isfinite(x)) throw ParameterViolation("evaluation point is not finite");
  require_distinct(points_);
}

double EvaluationPoints::max_abs() const {
  double r = 0;
  for (double x : points_) r = std::max(r, std::abs(x));
  return r;
}

EvaluationPoints EvaluationPoints::subset(const Subset& indices) const {
  std::vector<double> out;
  out.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= points_.size())
      throw IndexViolation("worker index " + std::to_string(i) + " out of range");
    out.push_back(points_[i]);
  }
  return EvaluationPoints(std::move(out));
}

double Polynomial::operator()(double x) const {
  double r = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
  return r;
}

int Polynomial::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[i] != 0.0) return i;
  return -1;
}

Polynomial Polynomial::normalized() const {
  Polynomial p{coeffs};
  p.coeffs.resize(static_cast<std::size_t>(degree() + 1));
  return p;
}

Matrix vandermonde(const EvaluationPoints& points, int k) {
  if (k < 1) throw IndexViolation("vandermonde needs k >= 1");
  const int n = static_cast<int>(points.size());
  Matrix V(k, n);
  for (int c = 0; c < n; ++c) {
    double p = 1.0;
    for (int r = 0; r < k; ++r) {
      V(r, c) = p;
      p *= points[c];
    }
  }
  return V;
}

Vector vandermonde_inverse_last_row(const EvaluationPoints& points) {
  if (points.empty()) throw IndexViolation("need at least one point");
  auto v = inverse_last_row<double>(points.values());
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double elem_sym(std::span<const double> x, int l) {
  const int n = static_cast<int>(x.size());
  if (l < 0 || l > n) throw IndexViolation("elem_sym degree outside [0, n]");
  // e[j] over a growing prefix of x
  std::vector<double> e(static_cast<std::size_t>(l) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(i + 1, l); j >= 1; --j) e[j] += x[i] * e[j - 1];
  return e[l];
}

double complete_homog(std::span<const double> x, int l) {
  if (l < 0) throw IndexViolation("complete_homog degree must be >= 0");
  if (x.empty()) throw IndexViolation("complete_homog needs at least one variable");
  // h over a growing prefix: h_new[d] = h_old[d] + x_i h_new[d-1]
  std::vector<double> h(static_cast<std::size_t>(l) + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x)
    for (int d = 1; d <= l; ++d) h[d] += xi * h[d - 1];
  return h[l];
}

std::pair<double, double> power_sum_identity_check(const EvaluationPoints& points, int l) {
  if (l < 1) throw IndexViolation("power_sum_identity_check needs l >= 1");
  const Vector v = vandermonde_inverse_last_row(points);
  const int m = static_cast<int>(points.size());
  double lhs = 0;
  for (int i = 0; i < m; ++i) lhs += std::pow(points[i], m - 1 + l) * v[i];
  return {lhs, complete_homog(points.values(), l)};
}

CoefficientSolver::CoefficientSolver(const Matrix& V) {
  const Eigen::Index k = V.rows(), K = V.cols();
  if (k == 0 || K == 0) throw ShapeViolation("empty Vandermonde system");

  Vector scale(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const double s = V.row(r).cwiseAbs().maxCoeff();
    scale[r] = s > 0 ? s : 1.0;
  }
  const Matrix Ve = scale.cwiseInverse().asDiagonal() * V;

  Eigen::ColPivHouseholderQR<Matrix> rank_qr(Ve);
  rank_qr.setThreshold(1e-12);
  if (rank_qr.rank() < std::min(k, K)) throw RankDeficient("Vandermonde system is rank deficient");

  if (k >= K) {
    // a = Q R^{-T} y with V = QR (thin): the minimum-norm solution of V^T a = y.
    Eigen::HouseholderQR<Matrix> qr(V);
    const Matrix Q = qr.householderQ() * Matrix::Identity(k, K);
    const Matrix R = qr.matrixQR().topRows(K).triangularView<Eigen::Upper>();
    const Matrix Rinv_t = R.transpose().triangularView<Eigen::Lower>().solve(Matrix::Identity(K, K));
    map_ = Q * Rinv_t;
  } else {
    // Least squares on V^T a = y in the scaled unknown b = D a.
    const Matrix Vt = Ve.transpose();
    Eigen::HouseholderQR<Matrix> qr(Vt);
    const Matrix Qt = (qr.householderQ() * Matrix::Identity(K, k)).transpose();
    const Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    map_ = scale.cwiseInverse().asDiagonal() * R.triangularView<Eigen::Upper>().solve(Qt);
  }
}

Vector min_norm_solve(const Matrix& V, const Vector& y) {
  if (V.rows() < V.cols()) throw ShapeViolation("min_norm_solve needs at least as many coefficients as evaluations");
  if (y.size() != V.cols()) throw ShapeViolation("right-hand side length does not match V");
  return CoefficientSolver(V).solve(y);
}

EvaluationPoints chebyshev_points(int P, double gamma) {
  if (P < 1) throw ParameterViolation("chebyshev_points needs P >= 1");
  if (!(gamma > 0)) throw ParameterViolation("chebyshev_points needs gamma > 0");
  // cos((2i-1)pi/(2P)) written as sin((P-2i+1)pi/(2P)): same value, but the
  // set comes out exactly symmetric and the middle node exactly 0.
  std::vector<double> x(P);
  for (int i = 1; i <= P; ++i) x[i - 1] = std::sin((P - 2 * i + 1) * std::numbers::pi / (2.0 * P)) / gamma;
  return EvaluationPoints(std::move(x));
}

EvaluationPoints uniform_points(int P, double half_width) {
  if (P < 1) throw ParameterViolation("uniform_points needs P >= 1");
  if (!(half_width > 0)) throw ParameterViolation("uniform_points needs a positive half width");
  std::vector<double> x(P);
  for (int i = 1; i <= P; ++i) x[i - 1] = half_width * (P - 2 * i + 1) / static_cast<double>(P);
  return EvaluationPoints(std::move(x));
}

}  // namespace acmm::poly
