#pragma once

#include "acmm/straggler_sim.hpp"
#include "acmm/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace acmm::logreg {

// Columns of X are samples; Y_onehot is J x D.
struct Dataset {
  Matrix X;
  Matrix Y_onehot;
  std::vector<int> labels;
  int J = 0;
  int D = 0;

  // Throws ShapeViolation.
  void validate() const;
  Dataset columns(const std::vector<int>& idx) const;
};

Dataset from_labels(Matrix X, const std::vector<int>& labels, int J);

struct BlobSpec {
  int classes = 3;
  int features = 24;
  int train_samples = 600;
  int test_samples = 300;
  double mean_scale = 0.9;  // class means ~ N(0, mean_scale^2), unit noise
  std::uint64_t seed = 1;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Gaussian blobs sharing one set of class means.
Split synthetic_blobs(const BlobSpec& spec);
// First (1 - test_fraction) of a seeded permutation trains, the rest tests.
Split split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed);

// Rows "label,f1,f2,...", labels 0..J-1; a non-numeric first line is skipped.
Dataset load_csv(const std::filesystem::path& path);
// IDX image (0x00000803) and label (0x00000801) files; pixels scaled to [0, 1].
Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels, int limit = 0);
// DIR/{train,t10k}-{images-idx3,labels-idx1}-ubyte.
Split load_mnist_dir(const std::filesystem::path& dir, int train_limit = 0, int test_limit = 0);

// Column-wise softmax with max subtraction.
Matrix softmax_columns(const Matrix& Z);
// sum_i sum_j y_ji log p_ji: the log-likelihood, <= 0.  Probabilities are
// floored at 1e-12.
double cross_entropy(const Matrix& W, const Matrix& X, const Matrix& Y);
double cross_entropy_from_logits(const Matrix& Z, const Matrix& Y);
// (softmax(WX) - Y) X^T: the gradient of -cross_entropy.
Matrix gradient(const Matrix& W, const Matrix& X, const Matrix& Y);

// Runs products A B through a codec under a failure plan.  Operands are
// zero-padded to the codec's grid and eta is taken per product as
// max(||A||_F, ||B||_F) unless fixed_eta is set, which makes the error
// guarantee relative to the operand norms.
class ProductEngine {
 public:
  // No codec: direct product.
  ProductEngine() = default;
  ProductEngine(sim::Codec codec, CodeParams params, sim::FailurePlan plan, std::optional<double> fixed_eta = std::nullopt);

  DecodeOutcome multiply(const Matrix& A, const Matrix& B);
  long calls() const { return calls_; }
  bool coded() const { return codec_.has_value(); }

 private:
  Subset survivors(const sim::Simulation& sim);

  std::optional<sim::Codec> codec_;
  CodeParams params_;
  sim::FailurePlan plan_;
  std::optional<double> fixed_eta_;
  std::optional<Subset> worst_;
  long calls_ = 0;
};

// Z = W X.
DecodeOutcome coded_forward(const Matrix& W, const Matrix& X_batch, ProductEngine& engine);
// G = H X^T.
DecodeOutcome coded_gradient(const Matrix& H, const Matrix& X_batch, ProductEngine& engine);

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 128;
  int iterations = 1000;
  std::optional<sim::Codec> codec;  // none: uncoded
  CodeParams params;                // m, p, q, P, k, epsilon; eta per product
  sim::FailurePlan plan = sim::FailurePlan::worst_case(1);
  std::uint64_t seed = 0;
  std::optional<double> fixed_eta;

  // Throws ParameterViolation.
  void validate(int D) const;
};

struct TrainResult {
  Matrix W;
  double accuracy_train = 0.0;
  double accuracy_test = 0.0;
  std::vector<double> loss_trace;  // mean negative log-likelihood of each batch, NaN when skipped
  int skipped_steps = 0;
};

// Minibatch gradient descent from W = 0.  Accuracies are measured through
// the same engine, so a lossy decoder also affects prediction.
TrainResult train(const Dataset& train_set, const Dataset& test_set, const TrainConfig& config);

double accuracy(const Matrix& Z, const std::vector<int>& labels);

}  // namespace acmm::logreg
