#include "acmm/coded_logreg.hpp"

#include "acmm/errors.hpp"
#include "acmm/partition.hpp"
#include "acmm/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acmm::logreg {

void Dataset::validate() const {
  if (X.cols() != D || Y_onehot.cols() != D || Y_onehot.rows() != J || static_cast<int>(labels.size()) != D)
    throw ShapeViolation("dataset shapes are inconsistent");
  for (int i = 0; i < D; ++i)
    if (labels[i] < 0 || labels[i] >= J || Y_onehot.col(i).sum() != 1.0 || Y_onehot(labels[i], i) != 1.0)
      throw ShapeViolation(fmt::format("sample {} is not one-hot", i));
}

Dataset Dataset::columns(const std::vector<int>& idx) const {
  Matrix Xs(X.rows(), static_cast<Eigen::Index>(idx.size()));
  std::vector<int> ls;
  for (std::size_t t = 0; t < idx.size(); ++t) {
    Xs.col(static_cast<Eigen::Index>(t)) = X.col(idx[t]);
    ls.push_back(labels[static_cast<std::size_t>(idx[t])]);
  }
  return from_labels(std::move(Xs), ls, J);
}

Dataset from_labels(Matrix X, const std::vector<int>& labels, int J) {
  Dataset d;
  d.D = static_cast<int>(labels.size());
  d.J = J;
  d.X = std::move(X);
  d.labels = labels;
  d.Y_onehot = Matrix::Zero(J, d.D);
  for (int i = 0; i < d.D; ++i) {
    if (labels[i] < 0 || labels[i] >= J) throw ShapeViolation(fmt::format("label {} outside [0, {})", labels[i], J));
    d.Y_onehot(labels[i], i) = 1.0;
  }
  d.validate();
  return d;
}

Split synthetic_blobs(const BlobSpec& s) {
  if (s.classes < 2 || s.features < 1 || s.train_samples < 1 || s.test_samples < 1)
    throw ParameterViolation("blob spec needs >= 2 classes and positive sizes");
  Rng mean_rng(s.seed, 0);
  const Matrix means = random_normal(s.features, s.classes, mean_rng) * s.mean_scale;
  const auto draw = [&](int n, std::uint64_t stream) {
    Rng rng(s.seed, stream);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int& l : labels) l = rng.below(s.classes);
    Matrix X = random_normal(s.features, n, rng);
    for (int i = 0; i < n; ++i) X.col(i) += means.col(labels[static_cast<std::size_t>(i)]);
    return from_labels(std::move(X), labels, s.classes);
  };
  return {draw(s.train_samples, 1), draw(s.test_samples, 2)};
}

Split split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) throw ParameterViolation("test_fraction must be in (0, 1)");
  std::vector<int> perm(static_cast<std::size_t>(data.D));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (int i = data.D - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  const int n_test = std::max(1, static_cast<int>(std::lround(test_fraction * data.D)));
  std::vector<int> tr(perm.begin(), perm.end() - n_test), te(perm.end() - n_test, perm.end());
  return {data.columns(tr), data.columns(te)};
}

Matrix softmax_columns(const Matrix& Z) {
  Matrix P(Z.rows(), Z.cols());
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    const Vector e = (Z.col(c).array() - Z.col(c).maxCoeff()).exp();
    P.col(c) = e / e.sum();
  }
  return P;
}

double cross_entropy_from_logits(const Matrix& Z, const Matrix& Y) {
  if (Z.rows() != Y.rows() || Z.cols() != Y.cols()) throw ShapeViolation("logits and labels differ in shape");
  const Matrix P = softmax_columns(Z);
  double L = 0;
  for (Eigen::Index c = 0; c < Z.cols(); ++c)
    for (Eigen::Index j = 0; j < Z.rows(); ++j)
      if (Y(j, c) != 0.0) L += Y(j, c) * std::log(std::max(P(j, c), 1e-12));
  return L;
}

double cross_entropy(const Matrix& W, const Matrix& X, const Matrix& Y) {
  if (W.cols() != X.rows()) throw ShapeViolation("W and X do not conform");
  return cross_entropy_from_logits(W * X, Y);
}

Matrix gradient(const Matrix& W, const Matrix& X, const Matrix& Y) {
  return (softmax_columns(W * X) - Y) * X.transpose();
}

ProductEngine::ProductEngine(sim::Codec codec, CodeParams params, sim::FailurePlan plan, std::optional<double> fixed_eta)
    : codec_(std::move(codec)), params_(params), plan_(std::move(plan)), fixed_eta_(fixed_eta) {
  params_.validate();
  plan_.validate(params_.P);
  if (plan_.mode == sim::FailurePlan::Mode::Exhaustive)
    throw ParameterViolation("training needs a fixed, random or worst-case plan");
}

Subset ProductEngine::survivors(const sim::Simulation& sim) {
  switch (plan_.mode) {
    case sim::FailurePlan::Mode::Fixed: return plan_.subset;
    case sim::FailurePlan::Mode::WorstCase:
      if (!worst_) worst_ = sim.worst_subset(plan_.k);
      return *worst_;
    case sim::FailurePlan::Mode::Random: {
      Rng rng(plan_.seed, static_cast<std::uint64_t>(calls_));
      return random_subset(params_.P, plan_.k, rng);
    }
    case sim::FailurePlan::Mode::Exhaustive: break;
  }
  throw ParameterViolation("unsupported plan");
}

DecodeOutcome ProductEngine::multiply(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows()) throw ShapeViolation("A and B do not conform");
  DecodeOutcome out;
  if (!codec_) {
    ++calls_;
    out.estimate = A * B;
    return out;
  }
  const bool polydot = codec_->kind == sim::CodecKind::PolyDotExact || codec_->kind == sim::CodecKind::PolyDotApprox;
  const int rows = polydot ? params_.p : 1;
  const int inner = polydot ? params_.q : params_.m;
  const Matrix Ap = partition::pad_to_divisible(A, rows, inner);
  const Matrix Bp = partition::pad_to_divisible(B, inner, rows);

  CodeParams p = params_;
  p.eta = fixed_eta_ ? *fixed_eta_ : std::max(Ap.norm(), Bp.norm());
  if (!(p.eta > 0)) {
    ++calls_;
    out.estimate = Matrix::Zero(A.rows(), B.cols());
    return out;
  }
  const sim::Simulation sim(*codec_, Ap, Bp, p);
  const Subset S = survivors(sim);
  ++calls_;
  out = sim.decode(S);
  out.estimate = out.estimate.topLeftCorner(A.rows(), B.cols()).eval();
  return out;
}

DecodeOutcome coded_forward(const Matrix& W, const Matrix& X_batch, ProductEngine& engine) {
  return engine.multiply(W, X_batch);
}

DecodeOutcome coded_gradient(const Matrix& H, const Matrix& X_batch, ProductEngine& engine) {
  return engine.multiply(H, X_batch.transpose());
}

void TrainConfig::validate(int D) const {
  if (!(learning_rate > 0)) throw ParameterViolation("learning rate must be positive");
  if (batch_size < 1 || batch_size > D) throw ParameterViolation(fmt::format("batch size must be in [1, {}]", D));
  if (iterations < 0) throw ParameterViolation("iterations must be >= 0");
  if (codec) {
    params.validate();
    plan.validate(params.P);
  }
}

double accuracy(const Matrix& Z, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(Z.cols()) != labels.size()) throw ShapeViolation("logits and labels differ in count");
  if (labels.empty()) return 0.0;
  int hit = 0;
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    Eigen::Index arg = 0;
    // NaN logits never win, so a failed decode counts as a miss.
    const bool ok = Z.col(c).allFinite();
    if (ok) Z.col(c).maxCoeff(&arg);
    hit += ok && arg == labels[static_cast<std::size_t>(c)];
  }
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

TrainResult train(const Dataset& tr, const Dataset& te, const TrainConfig& cfg) {
  tr.validate();
  te.validate();
  if (tr.X.rows() != te.X.rows() || tr.J != te.J) throw ShapeViolation("train and test sets differ in shape");
  cfg.validate(tr.D);

  ProductEngine engine = cfg.codec ? ProductEngine(*cfg.codec, cfg.params, cfg.plan, cfg.fixed_eta) : ProductEngine();
  TrainResult r;
  r.W = Matrix::Zero(tr.J, tr.X.rows());
  r.loss_trace.reserve(static_cast<std::size_t>(cfg.iterations));
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  for (int it = 0; it < cfg.iterations; ++it) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(it));
    const Dataset batch = tr.columns(random_subset(tr.D, cfg.batch_size, rng));
    const DecodeOutcome z = coded_forward(r.W, batch.X, engine);
    if (z.failed) {
      ++r.skipped_steps;
      r.loss_trace.push_back(kNaN);
      continue;
    }
    const Matrix H = softmax_columns(z.estimate) - batch.Y_onehot;
    const DecodeOutcome g = coded_gradient(H, batch.X, engine);
    if (g.failed) {
      ++r.skipped_steps;
      r.loss_trace.push_back(kNaN);
      continue;
    }
    r.loss_trace.push_back(-cross_entropy_from_logits(z.estimate, batch.Y_onehot) / cfg.batch_size);
    r.W -= cfg.learning_rate * g.estimate;
  }
  r.accuracy_train = accuracy(engine.multiply(r.W, tr.X).estimate, tr.labels);
  r.accuracy_test = accuracy(engine.multiply(r.W, te.X).estimate, te.labels);
  return r;
}

}  // namespace acmm::logreg
