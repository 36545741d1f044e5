#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace wmlp::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kNumClasses = 3;
inline constexpr int kDefaultHidden = 100;

/// Weights of the input -> ReLU hidden -> softmax(3) network.
struct MlpParams {
  Matrix w1;  // hidden x input
  Vector b1;  // hidden
  Matrix w2;  // classes x hidden
  Vector b2;  // classes

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int output_dim() const { return static_cast<int>(w2.rows()); }

  /// Dimensions are mutually consistent and every entry is finite.
  bool valid() const;

  friend bool operator==(const MlpParams& a, const MlpParams& b);
};

/// Same shapes as MlpParams; one gradient per tensor.
using Gradients = MlpParams;

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 256;
  int epochs = 100;
  std::uint64_t seed = 1;
  double l2 = 0.0;
  std::optional<int> early_stop_patience;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
};

/// Column-per-sample design matrix with integer class labels.
struct Dataset {
  Eigen::MatrixXd x;  // input_dim x samples
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  int input_dim() const { return static_cast<int>(x.rows()); }
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
MlpParams init_params(int input_dim, int hidden_dim, std::uint64_t seed);

MlpParams zeros_like(const MlpParams& p);

/// Activations for a column-per-sample batch.
struct ForwardResult {
  Eigen::MatrixXd hidden;  // hidden x batch, post-ReLU
  Eigen::MatrixXd probs;   // classes x batch, columns sum to 1
};

ForwardResult forward(const MlpParams& p, const Eigen::MatrixXd& x);

/// Column-wise softmax with max subtraction.
Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits);

struct LossAndGrads {
  double loss = 0.0;
  Gradients grads;
};

/// Mean cross-entropy plus (l2 / 2) * ||w1, w2||^2; biases are not penalized.
LossAndGrads loss_and_grads(const MlpParams& p, const Eigen::MatrixXd& x, std::span<const int> labels, double l2);

/// Loss only, same definition as loss_and_grads.
double loss(const MlpParams& p, const Eigen::MatrixXd& x, std::span<const int> labels, double l2);

/// Mini-batch SGD. Throws TrainingDivergedError when a batch loss is not finite.
std::pair<MlpParams, TrainReport> train(MlpParams p, const Dataset& train_set, const Dataset& val_set,
                                        const TrainConfig& cfg);

struct Prediction {
  int label = 0;
  Eigen::Vector3d probs;
};

/// Argmax with ties going to the lowest class index.
int argmax(std::span<const double> probs);

Prediction predict(const MlpParams& p, const Eigen::VectorXd& x);

/// Predicted labels and class-probability columns for every sample.
struct BatchPrediction {
  std::vector<int> labels;
  Eigen::MatrixXd probs;  // classes x samples
};

BatchPrediction predict_all(const MlpParams& p, const Eigen::MatrixXd& x);

double accuracy(const MlpParams& p, const Dataset& d);

/// CSV with header epoch,train_loss,train_acc,val_acc.
void write_train_report(const TrainReport& report, const std::filesystem::path& path);

}  // namespace wmlp::nn
