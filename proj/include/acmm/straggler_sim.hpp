#pragma once

#include "acmm/code_search.hpp"
#include "acmm/poly_algebra.hpp"
#include "acmm/polydot.hpp"
#include "acmm/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace acmm::sim {

enum class CodecKind { MatDotExact, MatDotApprox, PolyDotExact, PolyDotApprox, GeneralLinear };

struct Codec {
  CodecKind kind = CodecKind::MatDotApprox;
  // Chebyshev points lambda(gamma) instead of the kind's default points.
  std::optional<double> gamma;
  polydot::Precision precision = polydot::Precision::Double;
  std::shared_ptr<const search::GeneralLinearCode> code;  // GeneralLinear only

  std::string name() const;

  static Codec matdot_exact(std::optional<double> gamma = std::nullopt);
  static Codec matdot_approx(std::optional<double> gamma = std::nullopt);
  static Codec polydot_exact(polydot::Precision precision = polydot::Precision::Double);
  static Codec polydot_approx(polydot::Precision precision = polydot::Precision::Double);
  static Codec general(std::shared_ptr<const search::GeneralLinearCode> code);
};

// Default points: lambda(1) for exact kinds, the admissible eps points for
// approximate kinds, lambda(gamma) when gamma is set.  Empty for GeneralLinear.
poly::EvaluationPoints codec_points(const Codec& codec, const CodeParams& params);

struct FailurePlan {
  enum class Mode { Exhaustive, Fixed, Random, WorstCase };
  Mode mode = Mode::Exhaustive;
  int k = 1;
  Subset subset;           // Fixed
  std::uint64_t seed = 0;  // Random
  int trials = 1;          // Random: subsets drawn

  static FailurePlan exhaustive(int k);
  static FailurePlan fixed(Subset subset);
  static FailurePlan random(int k, std::uint64_t seed, int trials = 1);
  static FailurePlan worst_case(int k);

  // Throws ParameterViolation.
  void validate(int P) const;
};

struct SubsetOutcome {
  Subset subset;
  double max_entry_error = 0.0;
  double frobenius_error = 0.0;
  bool declared_failure = false;
  bool operator==(const SubsetOutcome&) const = default;
};

struct SimReport {
  std::vector<SubsetOutcome> per_subset;
  double epsilon_measured = 0.0;
  double runtime_ms = 0.0;
  // Ignores runtime.
  bool operator==(const SimReport& o) const {
    return per_subset == o.per_subset && epsilon_measured == o.epsilon_measured;
  }
};

// Encodes once, keeps every worker's output, and decodes any survivor set.
class Simulation {
 public:
  Simulation(Codec codec, Matrix A, Matrix B, CodeParams params);

  // Never throws for a valid subset: an undecodable set comes back failed
  // with an infinite error.
  DecodeOutcome decode(const Subset& survivors) const;
  SubsetOutcome evaluate(const Subset& survivors) const;

  std::vector<Subset> resolve(const FailurePlan& plan) const;
  // Scenario with the largest loss for coefficient-form codecs, the largest
  // measured error otherwise.  Ties go to the lowest scenario index.
  Subset worst_subset(int k) const;
  // Largest scenario loss over `subsets`; NaN when the codec has no coefficient form.
  double max_scenario_loss(const std::vector<Subset>& subsets) const;

  const Matrix& product() const { return C_; }
  const CodeParams& params() const { return params_; }
  const Codec& codec() const { return codec_; }

 private:
  const search::GeneralLinearCode* coefficient_form(int k) const;

  Codec codec_;
  Matrix A_, B_, C_;
  CodeParams params_;
  poly::EvaluationPoints points_;
  std::vector<WorkerResult> outputs_;  // double-precision kinds
  mutable std::vector<std::shared_ptr<search::GeneralLinearCode>> forms_;  // by k, MatDot kinds
  mutable std::mutex forms_mutex_;
};

SimReport run(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params, const FailurePlan& plan);
SimReport run(const Simulation& sim, const FailurePlan& plan);

// One coded product from a given survivor set.
DecodeOutcome multiply(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params,
                       const Subset& survivors);

struct NsuccRow {
  int n_succ = 0;
  int subsets = 0;
  int failures = 0;
  double loss = 0.0;  // largest scenario loss over the subsets, NaN if not defined
  double epsilon_measured = 0.0;
};

// Every subset when there are at most 200, else 200 seeded random draws.
std::vector<NsuccRow> sweep_nsucc(const Codec& codec, const Matrix& A, const Matrix& B, const CodeParams& params,
                                  const std::vector<int>& n_succ_range, std::uint64_t seed);

struct GammaRow {
  int n_succ = 0;
  double gamma = 0.0;
  double epsilon_measured = 0.0;
};

// MatDot at lambda(gamma) with n_succ survivors, all (or 200 sampled) subsets.
std::vector<GammaRow> gamma_sweep(const Matrix& A, const Matrix& B, const CodeParams& params,
                                  const std::vector<double>& gammas, int n_succ, std::uint64_t seed = 0);

void write_report_csv(std::ostream& out, const SimReport& report);
nlohmann::json report_to_json(const SimReport& report);
void write_nsucc_csv(std::ostream& out, const std::string& codec, const std::vector<NsuccRow>& rows, bool header = true);
void write_gamma_csv(std::ostream& out, const std::vector<GammaRow>& rows, bool header = true);
std::string subset_to_string(const Subset& s);

}  // namespace acmm::sim
