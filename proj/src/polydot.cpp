#include "acmm/polydot.hpp"

#include "acmm/encoding.hpp"
#include "acmm/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acmm::polydot {

using partition::BlockGrid;

int exponent_A(int i, int j, int, int q) { return q * i + j; }
int exponent_B(int k, int l, int p, int q) { return (q - 1 - k) + p * q * l; }
int exponent_C(int i, int l, int p, int q) { return q * (i + 1) - 1 + p * q * l; }
int product_degree(int p, int q) { return p * p * q + q - 2; }
int block_points(int i, int l, int p, int q) { return q * (i + 1) + p * q * l; }

namespace {

void check_grids(const BlockGrid& A, const BlockGrid& B) {
  if (A.grid_rows != B.grid_cols || A.grid_cols != B.grid_rows)
    throw ShapeViolation("PolyDot needs A split p x q and B split q x p");
  if (A.block_cols != B.block_rows) throw ShapeViolation("inner block dimensions differ");
}

template <class T>
void require_distinct(std::vector<T> x) {
  std::sort(x.begin(), x.end());
  if (std::adjacent_find(x.begin(), x.end()) != x.end()) throw DistinctnessViolation("repeated evaluation point");
}

template <class T>
void check_results(std::span<const BasicWorkerResult<T>> results) {
  std::vector<T> x;
  for (const auto& r : results) {
    if (r.C_tilde.rows() != results.front().C_tilde.rows() || r.C_tilde.cols() != results.front().C_tilde.cols())
      throw ShapeViolation("worker results differ in shape");
    x.push_back(r.lambda);
  }
  require_distinct(std::move(x));
}

}  // namespace

template <class T>
std::vector<BasicShare<T>> encode(const BlockGrid& A_grid, const BlockGrid& B_grid, std::span<const T> points) {
  check_grids(A_grid, B_grid);
  require_distinct(std::vector<T>(points.begin(), points.end()));
  const int p = A_grid.grid_rows, q = A_grid.grid_cols;
  std::vector<const Matrix*> a, b;
  std::vector<int> ea, eb;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      a.push_back(&A_grid(i, j));
      ea.push_back(exponent_A(i, j, p, q));
    }
  for (int k = 0; k < q; ++k)
    for (int l = 0; l < p; ++l) {
      b.push_back(&B_grid(k, l));
      eb.push_back(exponent_B(k, l, p, q));
    }
  std::vector<BasicShare<T>> shares;
  shares.reserve(points.size());
  for (std::size_t t = 0; t < points.size(); ++t)
    shares.push_back({static_cast<int>(t), points[t], detail::weighted_sum<T>(a, ea, points[t]),
                      detail::weighted_sum<T>(b, eb, points[t])});
  return shares;
}

std::vector<PolyDotShare> encode(const BlockGrid& A_grid, const BlockGrid& B_grid, const poly::EvaluationPoints& points) {
  return encode<double>(A_grid, B_grid, points.values());
}

template <class T>
BasicWorkerResult<T> worker_multiply(const BasicShare<T>& s) {
  if (s.A_tilde.cols() != s.B_tilde.rows()) throw ShapeViolation("share shapes do not conform");
  return {s.worker_id, s.lambda, s.A_tilde * s.B_tilde};
}

double point_bound(const CodeParams& c) {
  if (!(c.epsilon > 0)) throw EpsilonRange("epsilon must be positive");
  const int deg = c.p * c.p * c.q - 1;
  if (deg == 0) return std::numeric_limits<double>::infinity();
  return std::min(c.epsilon / (c.eta * c.eta * c.q * deg), 1.0 / deg);
}

poly::EvaluationPoints eps_points(const CodeParams& c) {
  const double r = point_bound(c);
  return poly::chebyshev_points(c.P, std::isinf(r) ? 1.0 : 1.0 / (0.99 * r));
}

template <class T>
Matrix approx_decode(std::span<const BasicWorkerResult<T>> results, const CodeParams& c) {
  const int p = c.p, q = c.q;
  const std::size_t need = static_cast<std::size_t>(p * p * q);
  if (results.size() < need)
    throw InsufficientResults(fmt::format("PolyDot block decoding needs {} results, got {}", need, results.size()));
  check_results(results);

  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    using std::abs;
    return abs(results[a].lambda) < abs(results[b].lambda);
  });

  const auto br = results.front().C_tilde.rows(), bc = results.front().C_tilde.cols();
  Matrix C(p * br, p * bc);
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < p; ++l) {
      const int d = block_points(i, l, p, q);
      std::vector<T> x(static_cast<std::size_t>(d));
      for (int t = 0; t < d; ++t) x[t] = results[order[t]].lambda;
      const auto v = poly::inverse_last_row<T>(x);
      MatrixT<T> block = MatrixT<T>::Zero(br, bc);
      for (int t = 0; t < d; ++t) block += results[order[t]].C_tilde * v[t];
      C.block(i * br, l * bc, br, bc) = block.template cast<double>();
    }
  return C;
}

template <class T>
Matrix exact_decode(std::span<const BasicWorkerResult<T>> results, const CodeParams& c) {
  const int p = c.p, q = c.q;
  const int N = product_degree(p, q) + 1;
  if (results.size() < static_cast<std::size_t>(N))
    throw InsufficientResults(fmt::format("exact PolyDot decoding needs {} results, got {}", N, results.size()));
  const auto used = results.first(static_cast<std::size_t>(N));
  check_results(used);

  // Row t: powers of x_t.  Solve W a = y for every entry at once.
  MatrixT<T> W(N, N);
  for (int t = 0; t < N; ++t) {
    T pw(1);
    for (int e = 0; e < N; ++e) {
      W(t, e) = pw;
      pw *= used[t].lambda;
    }
  }
  const auto br = used.front().C_tilde.rows(), bc = used.front().C_tilde.cols();
  MatrixT<T> Y(N, br * bc);
  for (int t = 0; t < N; ++t)
    Y.row(t) = Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(used[t].C_tilde.data(), br * bc);
  const MatrixT<T> coeffs = Eigen::FullPivLU<MatrixT<T>>(W).solve(Y);

  Matrix C(p * br, p * bc);
  for (int i = 0; i < p; ++i)
    for (int l = 0; l < p; ++l) {
      const MatrixT<T> row = coeffs.row(exponent_C(i, l, p, q));
      C.block(i * br, l * bc, br, bc) = Eigen::Map<const MatrixT<T>>(row.data(), br, bc).template cast<double>();
    }
  return C;
}

namespace {

template <class T>
Matrix run_subset(const Matrix& A, const Matrix& B, const CodeParams& c, const poly::EvaluationPoints& points,
                  const Subset& subset, bool exact) {
  const auto Ag = partition::split(A, c.p, c.q);
  const auto Bg = partition::split(B, c.q, c.p);
  std::vector<T> x;
  for (int i : subset) x.push_back(T(points[static_cast<std::size_t>(i)]));
  auto shares = encode<T>(Ag, Bg, std::span<const T>(x));
  std::vector<BasicWorkerResult<T>> results;
  for (std::size_t t = 0; t < shares.size(); ++t) {
    auto r = worker_multiply<T>(shares[t]);
    r.worker_id = subset[t];
    results.push_back(std::move(r));
  }
  const std::span<const BasicWorkerResult<T>> view(results);
  if (exact && results.size() >= static_cast<std::size_t>(product_degree(c.p, c.q) + 1)) return exact_decode<T>(view, c);
  return approx_decode<T>(view, c);
}

}  // namespace

Matrix multiply_subset(const Matrix& A, const Matrix& B, const CodeParams& c, const poly::EvaluationPoints& points,
                       const Subset& subset, bool exact, Precision precision) {
  if (precision == Precision::High) return run_subset<HighPrecision>(A, B, c, points, subset, exact);
  return run_subset<double>(A, B, c, points, subset, exact);
}

template std::vector<BasicShare<double>> encode<double>(const BlockGrid&, const BlockGrid&, std::span<const double>);
template std::vector<BasicShare<HighPrecision>> encode<HighPrecision>(const BlockGrid&, const BlockGrid&,
                                                                      std::span<const HighPrecision>);
template BasicWorkerResult<double> worker_multiply<double>(const BasicShare<double>&);
template BasicWorkerResult<HighPrecision> worker_multiply<HighPrecision>(const BasicShare<HighPrecision>&);
template Matrix approx_decode<double>(std::span<const BasicWorkerResult<double>>, const CodeParams&);
template Matrix approx_decode<HighPrecision>(std::span<const BasicWorkerResult<HighPrecision>>, const CodeParams&);
template Matrix exact_decode<double>(std::span<const BasicWorkerResult<double>>, const CodeParams&);
template Matrix exact_decode<HighPrecision>(std::span<const BasicWorkerResult<HighPrecision>>, const CodeParams&);

}  // namespace acmm::polydot
