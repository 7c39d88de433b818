#pragma once

// Independent oracles shared by the unit tests.  Nothing here calls into the
// decoders under test.

#include "acmm/rng.hpp"
#include "acmm/types.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <vector>

namespace acmm::test {

using Big = boost::multiprecision::cpp_dec_float_50;

inline Matrix unit_matrix(int rows, int cols, Rng& rng) { return random_with_norm(rows, cols, 1.0, rng); }

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

// e_l by enumerating all subsets.
inline double brute_elem_sym(const std::vector<double>& x, int l) {
  const int n = static_cast<int>(x.size());
  double total = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != l) continue;
    double prod = 1;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= x[static_cast<std::size_t>(i)];
    total += prod;
  }
  return total;
}

// h_l by enumerating monomials (exponent vectors summing to l).
inline double brute_complete_homog(const std::vector<double>& x, int l) {
  double total = 0;
  std::vector<int> d(x.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == x.size()) {
      d[i] = left;
      double prod = 1;
      for (std::size_t t = 0; t < x.size(); ++t) prod *= std::pow(x[t], d[t]);
      total += prod;
      return;
    }
    for (int a = 0; a <= left; ++a) {
      d[i] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, l);
  return total;
}

// Coefficients of the degree-(n-1) interpolant through (x_i, y_i), by Newton
// divided differences in 50-digit arithmetic.
inline std::vector<double> interpolate(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<Big> X(x.begin(), x.end()), c(y.begin(), y.end());
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (X[i] - X[i - j]);
  std::vector<Big> poly(n, Big(0));
  for (std::size_t i = n; i-- > 0;) {
    // poly = poly * (t - X[i]) + c[i]
    std::vector<Big> next(n, Big(0));
    for (std::size_t d = 0; d + 1 < n; ++d) {
      next[d + 1] += poly[d];
      next[d] -= poly[d] * X[i];
    }
    next[0] += c[i];
    poly = next;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(poly[i]);
  return out;
}

// Coefficient matrices of p_A(x) p_B(x) for MatDot blocks, by direct
// polynomial multiplication of the block lists.
inline std::vector<Matrix> product_coefficients(const std::vector<Matrix>& a_coef, const std::vector<Matrix>& b_coef) {
  std::vector<Matrix> out(a_coef.size() + b_coef.size() - 1,
                          Matrix::Zero(a_coef.front().rows(), b_coef.front().cols()));
  for (std::size_t i = 0; i < a_coef.size(); ++i)
    for (std::size_t j = 0; j < b_coef.size(); ++j)
      if (a_coef[i].size() > 0 && b_coef[j].size() > 0) out[i + j] += a_coef[i] * b_coef[j];
  return out;
}

}  // namespace acmm::test
