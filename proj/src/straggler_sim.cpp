#include "acmm/straggler_sim.hpp"

#include "acmm/errors.hpp"
#include "acmm/matdot.hpp"
#include "acmm/parallel.hpp"
#include "acmm/partition.hpp"
#include "acmm/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace acmm::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kMaxSweepSubsets = 200;

bool is_matdot(CodecKind k) { return k == CodecKind::MatDotExact || k == CodecKind::MatDotApprox; }
bool is_polydot(CodecKind k) { return k == CodecKind::PolyDotExact || k == CodecKind::PolyDotApprox; }

DecodeOutcome failed_outcome(Eigen::Index rows, Eigen::Index cols) {
  DecodeOutcome o;
  o.estimate = Matrix::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
  o.failed = true;
  o.coefficient_norm = kInf;
  return o;
}

}  // namespace

std::string Codec::name() const {
  std::string base;
  switch (kind) {
    case CodecKind::MatDotExact: base = "matdot"; break;
    case CodecKind::MatDotApprox: base = "eps-matdot"; break;
    case CodecKind::PolyDotExact: base = "polydot"; break;
    case CodecKind::PolyDotApprox: base = "eps-polydot"; break;
    case CodecKind::GeneralLinear: base = "general"; break;
  }
  if (gamma) base += fmt::format("@{:g}", *gamma);
  if (precision == polydot::Precision::High) base += "+hp";
  return base;
}

Codec Codec::matdot_exact(std::optional<double> gamma) { return {CodecKind::MatDotExact, gamma, {}, nullptr}; }
Codec Codec::matdot_approx(std::optional<double> gamma) { return {CodecKind::MatDotApprox, gamma, {}, nullptr}; }
Codec Codec::polydot_exact(polydot::Precision p) { return {CodecKind::PolyDotExact, std::nullopt, p, nullptr}; }
Codec Codec::polydot_approx(polydot::Precision p) { return {CodecKind::PolyDotApprox, std::nullopt, p, nullptr}; }
Codec Codec::general(std::shared_ptr<const search::GeneralLinearCode> code) {
  if (!code) throw ParameterViolation("general codec needs a code");
  return {CodecKind::GeneralLinear, std::nullopt, {}, std::move(code)};
}

poly::EvaluationPoints codec_points(const Codec& codec, const CodeParams& params) {
  if (codec.kind == CodecKind::GeneralLinear) return {};
  if (codec.gamma) return poly::chebyshev_points(params.P, *codec.gamma);
  switch (codec.kind) {
    case CodecKind::MatDotApprox: return matdot::eps_points(params);
    case CodecKind::PolyDotApprox: return polydot::eps_points(params);
    default: return poly::chebyshev_points(params.P, 1.0);
  }
}

FailurePlan FailurePlan::exhaustive(int k) { return {Mode::Exhaustive, k, {}, 0, 1}; }
FailurePlan FailurePlan::fixed(Subset s) {
  std::sort(s.begin(), s.end());
  const int k = static_cast<int>(s.size());
  return {Mode::Fixed, k, std::move(s), 0, 1};
}
FailurePlan FailurePlan::random(int k, std::uint64_t seed, int trials) { return {Mode::Random, k, {}, seed, trials}; }
FailurePlan FailurePlan::worst_case(int k) { return {Mode::WorstCase, k, {}, 0, 1}; }

void FailurePlan::validate(int P) const {
  if (k < 1 || k > P) throw ParameterViolation(fmt::format("plan needs 1 <= k <= P, got k = {}, P = {}", k, P));
  if (mode == Mode::Fixed) {
    if (static_cast<int>(subset.size()) != k) throw ParameterViolation("fixed subset size differs from k");
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (subset[i] < 0 || subset[i] >= P || (i > 0 && subset[i] <= subset[i - 1]))
        throw ParameterViolation("fixed subset must be distinct workers in [0, P)");
  }
  if (mode == Mode::Random && trials < 1) throw ParameterViolation("random plan needs trials >= 1");
}

Simulation::Simulation(Codec codec, Matrix A, Matrix B, CodeParams params)
    : codec_(std::move(codec)), A_(std::move(A)), B_(std::move(B)), params_(params) {
  params_.validate();
  if (A_.cols() != B_.rows()) throw ShapeViolation("A and B do not conform");
  if (!partition::check_norm(A_, params_.eta) || !partition::check_norm(B_, params_.eta))
    throw ParameterViolation(fmt::format("input Frobenius norms ({:g}, {:g}) exceed eta = {:g}", A_.norm(), B_.norm(),
                                         params_.eta));
  C_ = A_ * B_;
  points_ = codec_points(codec_, params_);
  const int m = params_.m;

  if (is_matdot(codec_.kind)) {
    if (params_.p != 1) throw ParameterViolation("MatDot codecs need p = 1");
    const auto shares = matdot::encode(partition::split(A_, 1, m), partition::split(B_, m, 1), points_);
    for (const auto& s : shares) outputs_.push_back(matdot::worker_multiply(s));
    forms_.resize(static_cast<std::size_t>(params_.P) + 1);
  } else if (is_polydot(codec_.kind)) {
    if (codec_.precision == polydot::Precision::Double) {
      const auto shares = polydot::encode(partition::split(A_, params_.p, params_.q),
                                          partition::split(B_, params_.q, params_.p), points_);
      for (const auto& s : shares) outputs_.push_back(polydot::worker_multiply<double>(s));
    }
  } else {
    const auto& code = *codec_.code;
    if (code.params.m != m || code.params.P != params_.P)
      throw ParameterViolation("code (m, P) differs from the simulation parameters");
    const auto Ag = partition::split(A_, 1, m);
    const auto Bg = partition::split(B_, m, 1);
    for (int i = 0; i < params_.P; ++i) {
      Matrix At = Matrix::Zero(Ag.block_rows, Ag.block_cols), Bt = Matrix::Zero(Bg.block_rows, Bg.block_cols);
      for (int j = 0; j < m; ++j) {
        At += code.A_coeffs(j, i) * Ag(0, j);
        Bt += code.B_coeffs(j, i) * Bg(j, 0);
      }
      outputs_.push_back({i, 0.0, At * Bt});
    }
  }
}

const search::GeneralLinearCode* Simulation::coefficient_form(int k) const {
  if (codec_.kind == CodecKind::GeneralLinear) return k == codec_.code->params.k ? codec_.code.get() : nullptr;
  if (!is_matdot(codec_.kind)) return nullptr;
  std::lock_guard lock(forms_mutex_);
  auto& slot = forms_[static_cast<std::size_t>(k)];
  if (!slot) {
    CodeParams p = params_;
    p.k = k;
    slot = std::make_shared<search::GeneralLinearCode>(search::code_from_matdot(p, points_));
  }
  return slot.get();
}

DecodeOutcome Simulation::decode(const Subset& survivors) const {
  Subset S = survivors;
  std::sort(S.begin(), S.end());
  if (S.empty()) return failed_outcome(C_.rows(), C_.cols());
  for (std::size_t i = 0; i < S.size(); ++i)
    if (S[i] < 0 || S[i] >= params_.P || (i > 0 && S[i] == S[i - 1]))
      throw ParameterViolation("survivors must be distinct workers in [0, P)");

  const int m = params_.m;
  const int K = static_cast<int>(S.size());
  std::vector<WorkerResult> picked;
  for (int i : S)
    if (!outputs_.empty()) picked.push_back(outputs_[static_cast<std::size_t>(i)]);

  try {
    switch (codec_.kind) {
      case CodecKind::MatDotExact: {
        DecodeOutcome o;
        o.estimate = K >= 2 * m - 1 ? matdot::exact_decode(picked, m) : matdot::min_norm_decode(picked, m);
        return o;
      }
      case CodecKind::MatDotApprox: {
        DecodeOutcome o;
        // Below m survivors the estimate is kept for sweeps but counts as a failure.
        o.estimate = matdot::min_norm_decode(picked, m, &o.coefficient_norm);
        o.failed = K < m || !(o.coefficient_norm <= std::sqrt(2.0 * m - 1.0) * params_.eta * params_.eta);
        return o;
      }
      case CodecKind::PolyDotExact:
      case CodecKind::PolyDotApprox: {
        const bool exact = codec_.kind == CodecKind::PolyDotExact;
        DecodeOutcome o;
        if (codec_.precision == polydot::Precision::High) {
          o.estimate = polydot::multiply_subset(A_, B_, params_, points_, S, exact, polydot::Precision::High);
        } else {
          const std::span<const WorkerResult> view(picked);
          o.estimate = exact && K >= polydot::product_degree(params_.p, params_.q) + 1
                           ? polydot::exact_decode<double>(view, params_)
                           : polydot::approx_decode<double>(view, params_);
        }
        return o;
      }
      case CodecKind::GeneralLinear: {
        const auto* form = coefficient_form(K);
        const Vector d = form ? form->decoder(S) : search::optimal_decoder(codec_.code->A_coeffs, codec_.code->B_coeffs, S);
        DecodeOutcome o;
        o.estimate = Matrix::Zero(C_.rows(), C_.cols());
        for (int t = 0; t < K; ++t) o.estimate += d[t] * picked[static_cast<std::size_t>(t)].C_tilde;
        return o;
      }
    }
  } catch (const InsufficientResults&) {
  } catch (const RankDeficient&) {
  }
  return failed_outcome(C_.rows(), C_.cols());
}

SubsetOutcome Simulation::evaluate(const Subset& survivors) const {
  const DecodeOutcome d = decode(survivors);
  SubsetOutcome o;
  o.subset = survivors;
  std::sort(o.subset.begin(), o.subset.end());
  o.declared_failure = d.failed;
  const Matrix E = d.estimate - C_;
  if (E.allFinite()) {
    o.max_entry_error = E.cwiseAbs().maxCoeff();
    o.frobenius_error = E.norm();
  } else {
    o.max_entry_error = o.frobenius_error = kInf;
  }
  return o;
}

Subset Simulation::worst_subset(int k) const {
  const auto S = search::enumerate_scenarios(params_.P, k);
  std::vector<double> score(S.size());
  if (codec_.kind == CodecKind::GeneralLinear || is_matdot(codec_.kind)) {
    for (std::size_t p = 0; p < S.size(); ++p) score[p] = max_scenario_loss({S[p]});
  } else {
    for (std::size_t p = 0; p < S.size(); ++p) score[p] = evaluate(S[p]).max_entry_error;
  }
  std::size_t best = 0;
  for (std::size_t p = 1; p < S.size(); ++p)
    if (score[p] > score[best]) best = p;
  return S[best];
}

double Simulation::max_scenario_loss(const std::vector<Subset>& subsets) const {
  if (!(codec_.kind == CodecKind::GeneralLinear || is_matdot(codec_.kind)))
    return std::numeric_limits<double>::quiet_NaN();
  double worst = 0;
  for (Subset S : subsets) {
    std::sort(S.begin(), S.end());
    const int K = static_cast<int>(S.size());
    const auto* form = coefficient_form(K);
    const Matrix& A = form ? form->A_coeffs : codec_.code->A_coeffs;
    const Matrix& B = form ? form->B_coeffs : codec_.code->B_coeffs;
    const Vector d = form ? form->decoder(S) : search::optimal_decoder(A, B, S);
    worst = std::max(worst, search::scenario_loss(A, B, S, d));
  }
  return worst;
}

std::vector<Subset> Simulation::resolve(const FailurePlan& plan) const {
  plan.validate(params_.P);
  switch (plan.mode) {
    case FailurePlan::Mode::Exhaustive: return search::enumerate_scenarios(params_.P, plan.k);
    case FailurePlan::Mode::Fixed: return {plan.subset};
    case FailurePlan::Mode::WorstCase: return {worst_subset(plan.k)};
    case FailurePlan::Mode::Random: {
      std::vector<Subset> out;
      for (int t = 0; t < plan.trials; ++t) {
        Rng rng(plan.seed, static_cast<std::uint64_t>(t));
        out.push_back(random_subset(params_.P, plan.k, rng));
      }
      return out;
    }
  }
  return {};
}

SimReport run(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params, const FailurePlan& plan) {
  const auto t0 = std::chrono::steady_clock::now();
  const Simulation sim(codec, A, B, params);
  SimReport r = run(sim, plan);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SimReport run(const Simulation& sim, const FailurePlan& plan) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto subsets = sim.resolve(plan);
  SimReport r;
  r.per_subset.resize(subsets.size());
  parallel_for(static_cast<int>(subsets.size()), [&](int i) { r.per_subset[i] = sim.evaluate(subsets[i]); });
  for (const auto& o : r.per_subset) r.epsilon_measured = std::max(r.epsilon_measured, o.max_entry_error);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

DecodeOutcome multiply(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params,
                       const Subset& survivors) {
  return Simulation(codec, A, B, params).decode(survivors);
}

namespace {

std::vector<Subset> sweep_subsets(int P, int n, std::uint64_t seed) {
  if (search::binomial(P, n) <= kMaxSweepSubsets) return search::enumerate_scenarios(P, n);
  std::vector<Subset> out;
  Rng rng(seed, static_cast<std::uint64_t>(n));
  for (std::int64_t t = 0; t < kMaxSweepSubsets; ++t) out.push_back(random_subset(P, n, rng));
  return out;
}

}  // namespace

std::vector<NsuccRow> sweep_nsucc(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params,
                                  const std::vector<int>& n_succ_range, std::uint64_t seed) {
  const Simulation sim(codec, A, B, params);
  std::vector<NsuccRow> rows;
  for (int n : n_succ_range) {
    if (n < 1 || n > params.P) throw ParameterViolation(fmt::format("N_succ = {} outside [1, P]", n));
    const auto subsets = sweep_subsets(params.P, n, seed);
    std::vector<SubsetOutcome> outcomes(subsets.size());
    parallel_for(static_cast<int>(subsets.size()), [&](int i) { outcomes[i] = sim.evaluate(subsets[i]); });
    NsuccRow row;
    row.n_succ = n;
    row.subsets = static_cast<int>(subsets.size());
    for (const auto& o : outcomes) {
      row.failures += o.declared_failure;
      row.epsilon_measured = std::max(row.epsilon_measured, o.max_entry_error);
    }
    row.loss = sim.max_scenario_loss(subsets);
    rows.push_back(row);
  }
  return rows;
}

std::vector<GammaRow> gamma_sweep(const Matrix& A, const Matrix& B, const CodeParams& params,
                                  const std::vector<double>& gammas, int n_succ, std::uint64_t seed) {
  if (n_succ < 1 || n_succ > params.P) throw ParameterViolation("n_succ outside [1, P]");
  std::vector<GammaRow> rows;
  for (double g : gammas) {
    if (!(g > 0)) throw ParameterViolation("gamma must be positive");
    const Simulation sim(Codec::matdot_exact(g), A, B, params);
    GammaRow row{n_succ, g, 0.0};
    for (const auto& S : sweep_subsets(params.P, n_succ, seed))
      row.epsilon_measured = std::max(row.epsilon_measured, sim.evaluate(S).max_entry_error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace acmm::sim
