#pragma once

#include "acmm/high_precision.hpp"
#include "acmm/partition.hpp"
#include "acmm/poly_algebra.hpp"
#include "acmm/types.hpp"

#include <span>
#include <vector>

namespace acmm::polydot {

// Scalar used for encoding, worker products and decoding.  The per-block
// decoder divides by products of point differences of size up to
// (2|x|)^{p^2 q - 1}, so small points at p >= 2 need more than binary64.
enum class Precision { Double, High };

using PolyDotShare = BasicShare<double>;

// Exponent (0-based blocks) of A_{i,j}: q i + j; of B_{k,l}: (q-1-k) + p q l.
int exponent_A(int i, int j, int p, int q);
int exponent_B(int k, int l, int p, int q);
// Exponent holding C_{i,l}: q(i+1) - 1 + p q l.
int exponent_C(int i, int l, int p, int q);
// Degree of the product polynomial, p^2 q + q - 2.
int product_degree(int p, int q);
// Points used by the block decoder for C_{i,l}: q(i+1) + p q l.
int block_points(int i, int l, int p, int q);

// A split p x q, B split q x p.
template <class T>
std::vector<BasicShare<T>> encode(const partition::BlockGrid& A_grid, const partition::BlockGrid& B_grid,
                                  std::span<const T> points);
std::vector<PolyDotShare> encode(const partition::BlockGrid& A_grid, const partition::BlockGrid& B_grid,
                                 const poly::EvaluationPoints& points);

template <class T>
BasicWorkerResult<T> worker_multiply(const BasicShare<T>& share);

// min(eps / (eta^2 q (p^2 q - 1)), 1 / (p^2 q - 1)); infinite when p = q = 1.
double point_bound(const CodeParams& params);
// Chebyshev points at 0.99 of the bound (gamma = 1 when the bound is infinite).
poly::EvaluationPoints eps_points(const CodeParams& params);

// Per-block decoder: C_{i,l} from the block_points(i,l) smallest-|lambda|
// results, weighted by the inverse-Vandermonde last row.  Needs K >= p^2 q.
template <class T>
Matrix approx_decode(std::span<const BasicWorkerResult<T>> results, const CodeParams& params);

// Full interpolation from the first p^2 q + q - 1 results.
template <class T>
Matrix exact_decode(std::span<const BasicWorkerResult<T>> results, const CodeParams& params);

// Convenience for the simulator: encode, multiply on `subset`, decode.
// `exact` selects exact_decode when enough results are present.
Matrix multiply_subset(const Matrix& A, const Matrix& B, const CodeParams& params, const poly::EvaluationPoints& points,
                       const Subset& subset, bool exact, Precision precision);

extern template std::vector<BasicShare<double>> encode<double>(const partition::BlockGrid&, const partition::BlockGrid&,
                                                               std::span<const double>);
extern template std::vector<BasicShare<HighPrecision>> encode<HighPrecision>(const partition::BlockGrid&,
                                                                             const partition::BlockGrid&,
                                                                             std::span<const HighPrecision>);
extern template BasicWorkerResult<double> worker_multiply<double>(const BasicShare<double>&);
extern template BasicWorkerResult<HighPrecision> worker_multiply<HighPrecision>(const BasicShare<HighPrecision>&);
extern template Matrix approx_decode<double>(std::span<const BasicWorkerResult<double>>, const CodeParams&);
extern template Matrix approx_decode<HighPrecision>(std::span<const BasicWorkerResult<HighPrecision>>,
                                                    const CodeParams&);
extern template Matrix exact_decode<double>(std::span<const BasicWorkerResult<double>>, const CodeParams&);
extern template Matrix exact_decode<HighPrecision>(std::span<const BasicWorkerResult<HighPrecision>>,
                                                   const CodeParams&);

}  // namespace acmm::polydot
