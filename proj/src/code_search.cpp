#include "acmm/code_search.hpp"

#include "acmm/errors.hpp"
#include "acmm/parallel.hpp"
#include "acmm/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace acmm::search {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Subset> enumerate_scenarios(int P, int k) {
  if (k < 1 || k > P) throw IndexViolation(fmt::format("scenario size {} outside [1, P = {}]", k, P));
  std::vector<Subset> out;
  out.reserve(static_cast<std::size_t>(binomial(P, k)));
  Subset s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  for (;;) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == P - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

int scenario_index(const Subset& s, int P) {
  const int k = static_cast<int>(s.size());
  std::int64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    if (s[i] <= prev || s[i] >= P) throw IndexViolation("subset is not sorted or out of range");
    for (int v = prev + 1; v < s[i]; ++v) rank += binomial(P - v - 1, k - i - 1);
    prev = s[i];
  }
  return static_cast<int>(rank);
}

void GeneralLinearCode::validate() const {
  params.validate();
  const int m = params.m, P = params.P;
  if (A_coeffs.rows() != m || A_coeffs.cols() != P || B_coeffs.rows() != m || B_coeffs.cols() != P)
    throw ShapeViolation("coefficient matrices must be m x P");
  if (static_cast<std::int64_t>(decoders.size()) != binomial(P, params.k))
    throw ShapeViolation("one decoder per scenario required");
  for (const auto& d : decoders) {
    if (d.size() != params.k) throw ShapeViolation("decoder length must equal k");
    if (!d.allFinite()) throw ParameterViolation("decoder entries must be finite");
  }
  if (!A_coeffs.allFinite() || !B_coeffs.allFinite()) throw ParameterViolation("coefficients must be finite");
}

namespace {

Matrix columns(const Matrix& M, const Subset& S) {
  Matrix out(M.rows(), static_cast<Eigen::Index>(S.size()));
  for (std::size_t t = 0; t < S.size(); ++t) out.col(static_cast<Eigen::Index>(t)) = M.col(S[t]);
  return out;
}

// X0 + pinv(H)(R - H X0) for symmetric positive semidefinite H.
Matrix closest_solution(const Matrix& H, const Matrix& R, const Matrix& X0) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const Vector& w = eig.eigenvalues();
  const double top = w.cwiseAbs().maxCoeff();
  if (!(top > 0)) return X0;
  Vector inv = Vector::Zero(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) > 1e-12 * top) inv[i] = 1.0 / w[i];
  const Matrix& U = eig.eigenvectors();
  return X0 + U * inv.asDiagonal() * (U.transpose() * (R - H * X0));
}

double backward_error(const Matrix& H, const Matrix& X, const Matrix& R) {
  const double den = H.norm() * X.norm() + R.norm();
  return den > 0 ? (H * X - R).norm() / den : 0.0;
}

}  // namespace

void OptimizerState::refresh_encoding(const GeneralLinearCode& c) {
  Z_full = (c.A_coeffs.transpose() * c.A_coeffs).cwiseProduct(c.B_coeffs.transpose() * c.B_coeffs);
  z_full = c.A_coeffs.cwiseProduct(c.B_coeffs).colwise().sum().transpose();
}

void OptimizerState::refresh_decoding(const GeneralLinearCode& c) {
  const int P = c.params.P;
  Y = Matrix::Zero(P, P);
  y = Vector::Zero(P);
  const auto S = c.scenarios();
  for (std::size_t p = 0; p < S.size(); ++p) {
    const Vector& d = c.decoders[p];
    for (std::size_t a = 0; a < S[p].size(); ++a) {
      y[S[p][a]] += d[static_cast<Eigen::Index>(a)];
      for (std::size_t b = 0; b < S[p].size(); ++b)
        Y(S[p][a], S[p][b]) += d[static_cast<Eigen::Index>(a)] * d[static_cast<Eigen::Index>(b)];
    }
  }
  Y_B = Y.cwiseProduct(c.B_coeffs.transpose() * c.B_coeffs);
}

void OptimizerState::refresh_YA(const GeneralLinearCode& c) { Y_A = Y.cwiseProduct(c.A_coeffs.transpose() * c.A_coeffs); }

OptimizerState OptimizerState::from(const GeneralLinearCode& c) {
  OptimizerState s;
  s.refresh_encoding(c);
  s.refresh_decoding(c);
  s.refresh_YA(c);
  return s;
}

double scenario_loss(const Matrix& A, const Matrix& B, const Subset& S, const Vector& d) {
  const Eigen::Index m = A.rows();
  Matrix E = Matrix::Identity(m, m);
  for (std::size_t t = 0; t < S.size(); ++t) E -= d[static_cast<Eigen::Index>(t)] * A.col(S[t]) * B.col(S[t]).transpose();
  return E.squaredNorm();
}

double error_bound(double l, const CodeParams& params) {
  return std::sqrt(std::max(l, 0.0)) * params.m * params.eta * params.eta;
}

LossReport loss(const GeneralLinearCode& c) {
  LossReport r;
  const auto S = c.scenarios();
  r.per_scenario.reserve(S.size());
  for (std::size_t p = 0; p < S.size(); ++p) {
    r.per_scenario.push_back(scenario_loss(c.A_coeffs, c.B_coeffs, S[p], c.decoders[p]));
    r.total += r.per_scenario.back();
    if (r.per_scenario.back() > r.per_scenario[static_cast<std::size_t>(r.worst_scenario)])
      r.worst_scenario = static_cast<int>(p);
  }
  r.error_bound = error_bound(r.per_scenario[static_cast<std::size_t>(r.worst_scenario)], c.params);
  return r;
}

std::vector<double> error_bounds(const LossReport& report, const CodeParams& params) {
  std::vector<double> out;
  for (double l : report.per_scenario) out.push_back(error_bound(l, params));
  return out;
}

std::vector<Vector> update_decoders(const GeneralLinearCode& c, const OptimizerState& st) {
  const auto S = c.scenarios();
  std::vector<Vector> out(S.size());
  for (std::size_t p = 0; p < S.size(); ++p) {
    const auto k = static_cast<Eigen::Index>(S[p].size());
    Matrix Z(k, k);
    Vector z(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      z[a] = st.z_full[S[p][a]];
      for (Eigen::Index b = 0; b < k; ++b) Z(a, b) = st.Z_full(S[p][a], S[p][b]);
    }
    out[p] = closest_solution(Z, z, c.decoders[p]);
  }
  return out;
}

Matrix update_A(const GeneralLinearCode& c, const OptimizerState& st) {
  const Matrix R = st.y.asDiagonal() * c.B_coeffs.transpose();
  return closest_solution(st.Y_B, R, c.A_coeffs.transpose()).transpose();
}

Matrix update_B(const GeneralLinearCode& c, const OptimizerState& st) {
  const Matrix R = st.y.asDiagonal() * c.A_coeffs.transpose();
  return closest_solution(st.Y_A, R, c.B_coeffs.transpose()).transpose();
}

Vector optimal_decoder(const Matrix& A, const Matrix& B, const Subset& S) {
  const Matrix As = columns(A, S), Bs = columns(B, S);
  const Matrix Z = (As.transpose() * As).cwiseProduct(Bs.transpose() * Bs);
  const Vector z = As.cwiseProduct(Bs).colwise().sum().transpose();
  return closest_solution(Z, z, Vector::Zero(static_cast<Eigen::Index>(S.size())));
}

double Residuals::max() const { return std::max({decoders, A, B}); }

Residuals stationarity_residuals(const GeneralLinearCode& c) {
  const OptimizerState st = OptimizerState::from(c);
  Residuals r;
  const auto S = c.scenarios();
  for (std::size_t p = 0; p < S.size(); ++p) {
    const auto k = static_cast<Eigen::Index>(S[p].size());
    Matrix Z(k, k);
    Vector z(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      z[a] = st.z_full[S[p][a]];
      for (Eigen::Index b = 0; b < k; ++b) Z(a, b) = st.Z_full(S[p][a], S[p][b]);
    }
    r.decoders = std::max(r.decoders, backward_error(Z, c.decoders[p], z));
  }
  r.A = backward_error(st.Y_B, c.A_coeffs.transpose(), st.y.asDiagonal() * c.B_coeffs.transpose());
  r.B = backward_error(st.Y_A, c.B_coeffs.transpose(), st.y.asDiagonal() * c.A_coeffs.transpose());
  return r;
}

namespace {

double total_loss(const GeneralLinearCode& c) {
  const auto S = c.scenarios();
  double t = 0;
  for (std::size_t p = 0; p < S.size(); ++p) t += scenario_loss(c.A_coeffs, c.B_coeffs, S[p], c.decoders[p]);
  return t;
}

SearchResult run(GeneralLinearCode code, const SearchOptions& opt) {
  if (opt.max_iter < 1) throw ParameterViolation("max_iter must be >= 1");
  SearchResult res;
  OptimizerState st;
  int flat = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    st.refresh_encoding(code);
    code.decoders = update_decoders(code, st);
    st.refresh_decoding(code);
    code.A_coeffs = update_A(code, st);
    st.refresh_YA(code);
    code.B_coeffs = update_B(code, st);

    res.loss_trace.push_back(total_loss(code));
    if (it > 0) {
      const double delta = std::abs(res.loss_trace[it] - res.loss_trace[it - 1]);
      flat = delta < opt.plateau_tol ? flat + 1 : 0;
      if (opt.plateau_stop && flat >= opt.plateau_window) break;
    }
    if (opt.stationarity_tol > 0 && (it + 1) % opt.check_every == 0 &&
        stationarity_residuals(code).max() <= opt.stationarity_tol)
      break;
  }
  res.residuals = stationarity_residuals(code);
  res.code = std::move(code);
  return res;
}

}  // namespace

SearchResult alternating_minimize(const CodeParams& params, std::uint64_t seed, const SearchOptions& options) {
  params.validate();
  Rng rng(seed);
  GeneralLinearCode code;
  code.params = params;
  code.A_coeffs = random_normal(params.m, params.P, rng);
  code.B_coeffs = random_normal(params.m, params.P, rng);
  code.decoders.assign(static_cast<std::size_t>(binomial(params.P, params.k)), Vector::Zero(params.k));
  SearchResult r = run(std::move(code), options);
  r.seed = seed;
  return r;
}

SearchResult alternating_minimize(const CodeParams& params, std::uint64_t seed, int max_iter) {
  SearchOptions o;
  o.max_iter = max_iter;
  return alternating_minimize(params, seed, o);
}

SearchResult refine(GeneralLinearCode code, const SearchOptions& options) {
  code.validate();
  return run(std::move(code), options);
}

MultiSeedResult multi_seed_search(const CodeParams& params, int n_seeds, const SearchOptions& options) {
  if (n_seeds < 1) throw ParameterViolation("n_seeds must be >= 1");
  params.validate();
  std::vector<SearchResult> runs(static_cast<std::size_t>(n_seeds));
  parallel_for(n_seeds, [&](int s) { runs[s] = alternating_minimize(params, static_cast<std::uint64_t>(s), options); });
  MultiSeedResult out;
  std::size_t best = 0;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    out.per_seed_loss.push_back(runs[s].loss_trace.back());
    if (out.per_seed_loss[s] < out.per_seed_loss[best]) best = s;
  }
  out.best = std::move(runs[best]);
  return out;
}

MultiSeedResult multi_seed_search(const CodeParams& params, int n_seeds, int max_iter) {
  SearchOptions o;
  o.max_iter = max_iter;
  return multi_seed_search(params, n_seeds, o);
}

GeneralLinearCode code_from_matdot(const CodeParams& params, const poly::EvaluationPoints& points) {
  if (params.p != 1) throw ParameterViolation("MatDot coefficient form needs p = 1");
  if (points.size() != static_cast<std::size_t>(params.P)) throw ShapeViolation("need one point per worker");
  const int m = params.m, P = params.P;
  GeneralLinearCode c;
  c.params = params;
  c.A_coeffs.resize(m, P);
  c.B_coeffs.resize(m, P);
  for (int i = 0; i < P; ++i) {
    double pw = 1.0;
    for (int r = 0; r < m; ++r) {
      c.A_coeffs(r, i) = pw;
      c.B_coeffs(m - 1 - r, i) = pw;
      pw *= points[static_cast<std::size_t>(i)];
    }
  }
  for (const auto& S : c.scenarios()) {
    const poly::CoefficientSolver solver(poly::vandermonde(points.subset(S), 2 * m - 1));
    c.decoders.push_back(solver.functional(m - 1));
  }
  return c;
}

GeneralLinearCode code_uncoded(int m, int k) {
  GeneralLinearCode c;
  c.params = CodeParams::matdot(m, m, k);
  c.A_coeffs = Matrix::Identity(m, m);
  c.B_coeffs = Matrix::Identity(m, m);
  c.decoders.assign(static_cast<std::size_t>(binomial(m, k)), Vector::Ones(k));
  return c;
}

}  // namespace acmm::search
