#pragma once

#include "acmm/partition.hpp"
#include "acmm/poly_algebra.hpp"
#include "acmm/types.hpp"

#include <span>
#include <vector>

namespace acmm::matdot {

using MatDotShare = BasicShare<double>;

enum class Spacing { Chebyshev, Uniform };
enum class Bound { Strict, Relaxed };

// A split 1 x m (column blocks), B split m x 1 (row blocks).
// A~ = sum_j A_j x^j, B~ = sum_j B_j x^{m-1-j} (0-based j).
std::vector<MatDotShare> encode(const partition::BlockGrid& A_grid, const partition::BlockGrid& B_grid,
                                const poly::EvaluationPoints& points);

WorkerResult worker_multiply(const MatDotShare& share);

// Admissible radius for the evaluation points.
//   Strict:  eps / (6 eta^2 sqrt(2m-1) (m-1) m)
//   Relaxed: min(eps / (eta^2 m (m-1)), 1/m)
// Throws EpsilonRange outside 0 < eps < min(2, 3 eta^2 sqrt(2m-1)) and
// ParameterViolation for m < 2.
double point_bound(const CodeParams& params, Bound bound = Bound::Strict);

// P points strictly inside the radius, at 0.99 of it.
poly::EvaluationPoints eps_points(const CodeParams& params, Spacing spacing = Spacing::Chebyshev,
                                  Bound bound = Bound::Strict);

// Interpolates from the first 2m-1 results and returns the coefficient of x^{m-1}.
Matrix exact_decode(std::span<const WorkerResult> results, int m);

// Minimum-norm (or, with more than 2m-1 results, least-squares) estimate of
// the x^{m-1} coefficient.  Declares failure when some entry's coefficient
// vector exceeds sqrt(2m-1) eta^2 by more than its rounding bound.  Throws
// InsufficientResults if K < m.
DecodeOutcome approx_decode(std::span<const WorkerResult> results, const CodeParams& params);

// The same estimator without the K >= m precondition or the failure test;
// used by sweeps that go below the threshold.
// max_coefficient_norm receives max over entries of ||a|| minus its rounding bound.
Matrix min_norm_decode(std::span<const WorkerResult> results, int m, double* max_coefficient_norm = nullptr);

}  // namespace acmm::matdot
