#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "wmlp/config.hpp"
#include "wmlp/dataset.hpp"
#include "wmlp/evaluation.hpp"
#include "wmlp/neuralnet.hpp"
#include "wmlp/tuning.hpp"

namespace wmlp {

/// Per-feature affine scaling fitted on training inputs.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population std, 1 where a feature is constant

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

  /// Rewrites the first layer so the network accepts unscaled inputs.
  nn::MlpParams fold_into(const nn::MlpParams& p) const;
};

/// Loads, resizes to 128x128 and normalizes one image, then builds the
/// network input for `mode` (16384 pixels or 64 wavelet statistics).
Eigen::VectorXd preprocess(const std::filesystem::path& image, InputMode mode);

/// Inputs for every manifest sample, one column each.
nn::Dataset build_inputs(const data::DatasetManifest& manifest, InputMode mode);

/// Subset of columns/labels selected by `indices`.
nn::Dataset select(const nn::Dataset& d, const std::vector<std::size_t>& indices);

int input_dim_for(InputMode mode);

/// Mode implied by a network's input width; throws for other widths.
InputMode mode_for_input_dim(int input_dim);

struct Evaluation {
  eval::ConfusionMatrix confusion;
  eval::MetricsReport metrics;
  std::array<eval::RocCurve, eval::kClasses> curves;
};

/// Confusion matrix, metrics and one-vs-rest ROC (scores = class probabilities).
/// Classes absent from `d` (or present in every sample) get an empty curve and AUC 0.
Evaluation evaluate_model(const nn::MlpParams& p, const nn::Dataset& d);

struct PipelineResult {
  std::filesystem::path checkpoint;
  nn::TrainReport initial_report;
  nn::TrainReport final_report;
  std::optional<da::TuningResult> tuning;
  double learning_rate = 0.0;
  int hidden = 0;
  Evaluation evaluation;
};

/// Preprocess, build inputs, initial training, dragonfly tuning, retraining
/// and held-out evaluation. Every artifact lands in cfg.out_dir; failures are
/// reported as StageError and leave the output directory untouched.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Scores a saved checkpoint against every image under `data_root` and
/// writes metrics.csv, confusion.csv and roc_class*.csv to `out_dir`.
Evaluation evaluate_checkpoint(const std::filesystem::path& checkpoint, const std::filesystem::path& data_root,
                               const std::filesystem::path& out_dir);

}  // namespace wmlp
