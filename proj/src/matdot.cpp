#include "acmm/matdot.hpp"

#include "acmm/encoding.hpp"
#include "acmm/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace acmm::matdot {

using partition::BlockGrid;
using poly::EvaluationPoints;

std::vector<MatDotShare> encode(const BlockGrid& A_grid, const BlockGrid& B_grid, const EvaluationPoints& points) {
  if (A_grid.grid_rows != 1 || B_grid.grid_cols != 1 || A_grid.grid_cols != B_grid.grid_rows)
    throw ShapeViolation("MatDot needs A split 1 x m and B split m x 1");
  if (A_grid.block_cols != B_grid.block_rows) throw ShapeViolation("inner block dimensions differ");
  const int m = A_grid.grid_cols;
  std::vector<const Matrix*> a, b;
  std::vector<int> ea, eb;
  for (int j = 0; j < m; ++j) {
    a.push_back(&A_grid(0, j));
    ea.push_back(j);
    b.push_back(&B_grid(j, 0));
    eb.push_back(m - 1 - j);
  }
  std::vector<MatDotShare> shares;
  shares.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    shares.push_back({static_cast<int>(i), points[i], detail::weighted_sum(a, ea, points[i]),
                      detail::weighted_sum(b, eb, points[i])});
  return shares;
}

WorkerResult worker_multiply(const MatDotShare& s) {
  if (s.A_tilde.cols() != s.B_tilde.rows()) throw ShapeViolation("share shapes do not conform");
  return {s.worker_id, s.lambda, s.A_tilde * s.B_tilde};
}

double point_bound(const CodeParams& params, Bound bound) {
  const int m = params.m;
  if (m < 2) throw ParameterViolation("approximate MatDot needs m >= 2");
  const double eta2 = params.eta * params.eta;
  const double root = std::sqrt(2.0 * m - 1.0);
  const double eps = params.epsilon;
  if (!(eps > 0) || !(eps < std::min(2.0, 3.0 * eta2 * root)))
    throw EpsilonRange(fmt::format("epsilon {:g} outside (0, min(2, 3 eta^2 sqrt(2m-1)))", eps));
  if (bound == Bound::Strict) return eps / (6.0 * eta2 * root * (m - 1) * m);
  return std::min(eps / (eta2 * m * (m - 1)), 1.0 / m);
}

EvaluationPoints eps_points(const CodeParams& params, Spacing spacing, Bound bound) {
  const double r = 0.99 * point_bound(params, bound);
  if (spacing == Spacing::Uniform) return poly::uniform_points(params.P, r);
  return poly::chebyshev_points(params.P, 1.0 / r);
}

namespace {

std::vector<double> lambdas(std::span<const WorkerResult> results) {
  std::vector<double> x;
  x.reserve(results.size());
  for (const auto& r : results) x.push_back(r.lambda);
  return x;
}

void require_same_shape(std::span<const WorkerResult> results) {
  for (const auto& r : results)
    if (r.C_tilde.rows() != results.front().C_tilde.rows() || r.C_tilde.cols() != results.front().C_tilde.cols())
      throw ShapeViolation("worker results differ in shape");
}

// Row t of the returned matrix holds the entries of result t.
Matrix stack(std::span<const WorkerResult> results) {
  const auto n = results.front().C_tilde.size();
  Matrix Y(static_cast<Eigen::Index>(results.size()), n);
  for (std::size_t t = 0; t < results.size(); ++t)
    Y.row(static_cast<Eigen::Index>(t)) = Eigen::Map<const Eigen::RowVectorXd>(results[t].C_tilde.data(), n);
  return Y;
}

Matrix combine(std::span<const WorkerResult> results, const Vector& w) {
  Matrix C = Matrix::Zero(results.front().C_tilde.rows(), results.front().C_tilde.cols());
  for (std::size_t t = 0; t < results.size(); ++t) C += w[static_cast<Eigen::Index>(t)] * results[t].C_tilde;
  return C;
}

}  // namespace

Matrix exact_decode(std::span<const WorkerResult> results, int m) {
  if (m < 1) throw ParameterViolation("m must be positive");
  const std::size_t need = 2 * static_cast<std::size_t>(m) - 1;
  if (results.size() < need)
    throw InsufficientResults(fmt::format("exact MatDot decoding needs {} results, got {}", need, results.size()));
  const auto used = results.first(need);
  require_same_shape(used);
  const EvaluationPoints x(lambdas(used));
  const poly::CoefficientSolver solver(poly::vandermonde(x, static_cast<int>(need)));
  return combine(used, solver.functional(m - 1));
}

Matrix min_norm_decode(std::span<const WorkerResult> results, int m, double* max_coefficient_norm) {
  if (results.empty()) throw InsufficientResults("no worker results");
  if (m < 1) throw ParameterViolation("m must be positive");
  require_same_shape(results);
  const EvaluationPoints x(lambdas(results));
  const poly::CoefficientSolver solver(poly::vandermonde(x, 2 * m - 1));
  if (max_coefficient_norm) {
    // Coefficient vectors of every entry at once: (2m-1) x n^2.  At tiny
    // points the high coefficients are dominated by rounding (|map| ~ x^-(2m-2)),
    // so each norm is reduced by the first-order bound 2K u |map| |y| before
    // it is compared with the exact-arithmetic limit.
    const Matrix Y = stack(results);
    const Matrix coeffs = solver.solve_many(Y);
    const Matrix noise = solver.map().cwiseAbs() * Y.cwiseAbs();
    const double u = std::numeric_limits<double>::epsilon() / 2;
    const double c = 2.0 * static_cast<double>(results.size()) * u;
    double worst = 0;
    for (Eigen::Index e = 0; e < coeffs.cols(); ++e)
      worst = std::max(worst, coeffs.col(e).norm() - c * noise.col(e).norm());
    *max_coefficient_norm = worst;
  }
  return combine(results, solver.functional(m - 1));
}

DecodeOutcome approx_decode(std::span<const WorkerResult> results, const CodeParams& params) {
  if (results.size() < static_cast<std::size_t>(params.m))
    throw InsufficientResults(fmt::format("approximate MatDot decoding needs {} results, got {}", params.m, results.size()));
  DecodeOutcome out;
  out.estimate = min_norm_decode(results, params.m, &out.coefficient_norm);
  const double limit = std::sqrt(2.0 * params.m - 1.0) * params.eta * params.eta;
  out.failed = !(out.coefficient_norm <= limit);
  return out;
}

}  // namespace acmm::matdot
