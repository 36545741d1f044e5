#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "wmlp/dragonfly.hpp"
#include "wmlp/neuralnet.hpp"

namespace wmlp::da {

inline constexpr int kMinHidden = 10;
inline constexpr int kMaxHidden = 200;

/// Hidden-unit count for a candidate: round(candidate[1]) clamped to [10, 200].
int candidate_hidden(std::span<const double> candidate);

/// One objective evaluation, in call order.
struct TuningEvaluation {
  double learning_rate = 0.0;
  int hidden = 0;
  double fitness = 0.0;
};

/// Negative validation accuracy of an MLP trained with the candidate
/// (learning rate, hidden units) for budget.epochs. Divergence yields +inf.
/// budget.learning_rate is ignored; budget.seed fixes the initialization.
double mlp_tuning_objective(std::span<const double> candidate, const nn::Dataset& train_set,
                            const nn::Dataset& val_set, const nn::TrainConfig& budget);

struct TuningResult {
  double learning_rate = 0.0;
  int hidden = 0;
  double fitness = 0.0;
  OptimizeResult search;
  std::vector<TuningEvaluation> evaluations;
};

/// Runs the dragonfly search over (learning rate, hidden units).
TuningResult tune_mlp(const nn::Dataset& train_set, const nn::Dataset& val_set, const nn::TrainConfig& budget,
                      const DaConfig& cfg);

/// CSV with header candidate_lr,candidate_hidden,fitness.
void write_tuning_log(const std::vector<TuningEvaluation>& evals, const std::filesystem::path& path);

}  // namespace wmlp::da
