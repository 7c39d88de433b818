#pragma once

#include "acmm/poly_algebra.hpp"
#include "acmm/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace acmm::search {

// All size-k subsets of {0..P-1} in lexicographic order.  Throws IndexViolation.
std::vector<Subset> enumerate_scenarios(int P, int k);
std::int64_t binomial(int n, int k);
// Position of `s` in enumerate_scenarios(P, s.size()).
int scenario_index(const Subset& s, int P);

// Worker i stores alpha_i^T [A_1 .. A_m] and [B_1 .. B_m] beta_i; a surviving
// set S decodes as sum_{i in S} d_i C~_i.  Decoders are indexed like
// enumerate_scenarios(P, k).
struct GeneralLinearCode {
  Matrix A_coeffs;  // m x P
  Matrix B_coeffs;  // m x P
  std::vector<Vector> decoders;
  CodeParams params;

  std::vector<Subset> scenarios() const { return enumerate_scenarios(params.P, params.k); }
  const Vector& decoder(const Subset& s) const { return decoders.at(static_cast<std::size_t>(scenario_index(s, params.P))); }
  // Throws ShapeViolation / ParameterViolation.
  void validate() const;
};

struct OptimizerState {
  Matrix Z_full;  // (A^T A) .* (B^T B)
  Vector z_full;  // z_i = alpha_i . beta_i
  Matrix Y;       // Y_ij = sum_p d_i d_j over scenarios containing i, j
  Vector y;       // y_i = sum_p d_i
  Matrix Y_A;     // Y .* (A^T A)
  Matrix Y_B;     // Y .* (B^T B)

  void refresh_encoding(const GeneralLinearCode& code);
  void refresh_decoding(const GeneralLinearCode& code);  // Y, y, Y_B
  void refresh_YA(const GeneralLinearCode& code);
  static OptimizerState from(const GeneralLinearCode& code);
};

struct LossReport {
  std::vector<double> per_scenario;
  double total = 0.0;
  int worst_scenario = 0;
  double error_bound = 0.0;  // sqrt(l_worst) m eta^2
};

// ||I_m - sum_{i in S} d_i alpha_i beta_i^T||_F^2
double scenario_loss(const Matrix& A_coeffs, const Matrix& B_coeffs, const Subset& S, const Vector& d);
LossReport loss(const GeneralLinearCode& code);

// Frobenius error bound sqrt(l) m eta^2 for a scenario of loss l.
double error_bound(double scenario_loss, const CodeParams& params);
std::vector<double> error_bounds(const LossReport& report, const CodeParams& params);

// Block minimizers.  Each solves its normal equations H X = R by the
// solution closest to the current X: X0 + pinv(H)(R - H X0), with
// eigenvalues below 1e-12 of the largest discarded.
std::vector<Vector> update_decoders(const GeneralLinearCode& code, const OptimizerState& state);
// Y_B A^T = diag(y) B^T.
Matrix update_A(const GeneralLinearCode& code, const OptimizerState& state);
// Y_A B^T = diag(y) A^T.
Matrix update_B(const GeneralLinearCode& code, const OptimizerState& state);

// Loss-minimizing decoder for an arbitrary surviving set.
Vector optimal_decoder(const Matrix& A_coeffs, const Matrix& B_coeffs, const Subset& S);

// Normwise backward errors ||HX - R|| / (||H|| ||X|| + ||R||) of the three
// stationarity conditions (decoders: max over scenarios).
struct Residuals {
  double decoders = 0.0;
  double A = 0.0;
  double B = 0.0;
  double max() const;
};
Residuals stationarity_residuals(const GeneralLinearCode& code);

struct SearchOptions {
  int max_iter = 1'000'000;
  // Stop once |delta total| < plateau_tol for plateau_window sweeps in a row.
  bool plateau_stop = true;
  double plateau_tol = 1e-14;
  int plateau_window = 100;
  // Stop once all residuals are <= this (checked every check_every sweeps); 0 disables.
  double stationarity_tol = 0.0;
  int check_every = 50;
};

struct SearchResult {
  GeneralLinearCode code;
  std::vector<double> loss_trace;  // total loss after each sweep
  Residuals residuals;
  std::uint64_t seed = 0;
};

// Algorithm 1 from a seeded standard-normal start.
SearchResult alternating_minimize(const CodeParams& params, std::uint64_t seed, int max_iter);
SearchResult alternating_minimize(const CodeParams& params, std::uint64_t seed, const SearchOptions& options);
// Algorithm 1 from a given code (its decoders are recomputed first).
SearchResult refine(GeneralLinearCode code, const SearchOptions& options);

struct MultiSeedResult {
  SearchResult best;
  std::vector<double> per_seed_loss;  // index = seed
};

// Seeds 0..n_seeds-1, run concurrently.  Ties go to the lower seed.
MultiSeedResult multi_seed_search(const CodeParams& params, int n_seeds, int max_iter);
MultiSeedResult multi_seed_search(const CodeParams& params, int n_seeds, const SearchOptions& options);

// MatDot in coefficient form: alpha_i = (1, x, .., x^{m-1}),
// beta_i = (x^{m-1}, .., 1), d = the minimum-norm x^{m-1} extractor.
GeneralLinearCode code_from_matdot(const CodeParams& params, const poly::EvaluationPoints& points);
// Plain splitting with no redundancy: P = m, A = B = I, d = 1.  A failure
// drops that worker's term.
GeneralLinearCode code_uncoded(int m, int k);

nlohmann::json to_json(const GeneralLinearCode& code);
GeneralLinearCode code_from_json(const nlohmann::json& j);
void save_code(const std::filesystem::path& path, const GeneralLinearCode& code);
GeneralLinearCode load_code(const std::filesystem::path& path);

}  // namespace acmm::search
