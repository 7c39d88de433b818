#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace acmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Sorted 0-based worker indices.
using Subset = std::vector<int>;

// (m, p, q, P, k, epsilon, eta).  m = p*q is the storage fraction, P the
// worker count, k the number of survivors the code is designed for.
struct CodeParams {
  int m = 1;
  int p = 1;
  int q = 1;
  int P = 1;
  int k = 1;
  double epsilon = 1e-2;
  double eta = 1.0;

  // Throws ParameterViolation.
  void validate() const;

  // p = 1, q = m.
  static CodeParams matdot(int m, int P, int k, double epsilon = 1e-2, double eta = 1.0);
  static CodeParams polydot(int p, int q, int P, int k, double epsilon = 1e-2, double eta = 1.0);

  bool operator==(const CodeParams&) const = default;
};

std::string to_string(const CodeParams& params);

template <class T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// What worker `worker_id` receives: the encoded operands at its point.
template <class T>
struct BasicShare {
  int worker_id = 0;
  T lambda{};
  MatrixT<T> A_tilde;
  MatrixT<T> B_tilde;
};

template <class T>
struct BasicWorkerResult {
  int worker_id = 0;
  T lambda{};
  MatrixT<T> C_tilde;
};

using WorkerResult = BasicWorkerResult<double>;

// Result of an approximate decode.  A failed decode still carries the
// estimate so simulations can record its error.
struct DecodeOutcome {
  Matrix estimate;
  bool failed = false;
  double coefficient_norm = 0.0;  // largest rounding-adjusted ||a||_2 over entries, 0 if not applicable
};

}  // namespace acmm
