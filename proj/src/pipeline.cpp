#include "wmlp/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "wmlp/checkpoint.hpp"
#include "wmlp/errors.hpp"
#include "wmlp/imaging.hpp"
#include "wmlp/staging.hpp"
#include "wmlp/wavelet.hpp"

namespace wmlp {

namespace fs = std::filesystem;

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  if (x.cols() == 0) throw std::invalid_argument("Standardizer::fit: no samples");
  Standardizer s;
  s.mean = x.rowwise().mean();
  s.scale = ((x.colwise() - s.mean).array().square().rowwise().mean()).sqrt();
  for (Eigen::Index i = 0; i < s.scale.size(); ++i) {
    if (!(s.scale[i] > 1e-12)) s.scale[i] = 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  return (x.colwise() - mean).array().colwise() / scale.array();
}

nn::MlpParams Standardizer::fold_into(const nn::MlpParams& p) const {
  nn::MlpParams out = p;
  for (Eigen::Index j = 0; j < out.w1.cols(); ++j) out.w1.col(j) /= scale[j];
  out.b1 = p.b1 - out.w1 * mean;
  return out;
}

int input_dim_for(InputMode mode) {
  return mode == InputMode::kFlat ? imaging::kPipelineSize * imaging::kPipelineSize
                                  : static_cast<int>(wavelet::kFeatureCount);
}

InputMode mode_for_input_dim(int input_dim) {
  if (input_dim == input_dim_for(InputMode::kFlat)) return InputMode::kFlat;
  if (input_dim == input_dim_for(InputMode::kFeatures)) return InputMode::kFeatures;
  throw std::invalid_argument("no input mode has " + std::to_string(input_dim) + " inputs");
}

Eigen::VectorXd preprocess(const fs::path& image, InputMode mode) {
  const imaging::GrayImage8 raw = imaging::load_grayscale(image);
  const imaging::NormalizedImage img =
      imaging::normalize(imaging::resize_bilinear(raw, imaging::kPipelineSize, imaging::kPipelineSize));
  if (mode == InputMode::kFlat) return Eigen::Map<const Eigen::VectorXd>(img.values.data(), static_cast<Eigen::Index>(img.values.size()));
  const wavelet::FeatureVector f = wavelet::feature_vector(img);
  return Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

nn::Dataset build_inputs(const data::DatasetManifest& manifest, InputMode mode) {
  nn::Dataset d;
  d.x.resize(input_dim_for(mode), static_cast<Eigen::Index>(manifest.size()));
  d.y.reserve(manifest.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    d.x.col(static_cast<Eigen::Index>(i)) = preprocess(manifest.samples[i].path, mode);
    d.y.push_back(manifest.samples[i].label);
  }
  return d;
}

nn::Dataset select(const nn::Dataset& d, const std::vector<std::size_t>& indices) {
  nn::Dataset out;
  out.x.resize(d.x.rows(), static_cast<Eigen::Index>(indices.size()));
  out.y.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.x.col(static_cast<Eigen::Index>(k)) = d.x.col(static_cast<Eigen::Index>(indices[k]));
    out.y.push_back(d.y[indices[k]]);
  }
  return out;
}

Evaluation evaluate_model(const nn::MlpParams& p, const nn::Dataset& d) {
  const nn::BatchPrediction pred = nn::predict_all(p, d.x);
  Evaluation ev;
  ev.confusion = eval::confusion_matrix(d.y, pred.labels);
  ev.metrics = eval::classification_metrics(ev.confusion);
  for (int c = 0; c < eval::kClasses; ++c) {
    std::vector<double> scores(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) scores[j] = pred.probs(c, static_cast<Eigen::Index>(j));
    try {
      ev.curves[c] = eval::roc_curve(d.y, scores, c);
    } catch (const std::invalid_argument&) {
      ev.curves[c].clear();
    }
  }
  eval::attach_auc(ev.metrics, ev.curves);
  return ev;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  stage("config", [&] {
    cfg.validate();
    if (cfg.data_root.empty()) throw std::invalid_argument("no dataset root configured (key 'data')");
  });
  cfg.train.seed = cfg.seed;
  cfg.tuning.seed = cfg.seed;

  const data::DatasetManifest manifest = stage("ingest", [&] { return data::scan_dataset(cfg.data_root); });

  // Steps 1-2: resize, normalize and (features mode) wavelet statistics.
  const nn::Dataset all = stage("preprocess", [&] { return build_inputs(manifest, cfg.input_mode); });

  struct Splits {
    nn::Dataset fit, val, test;
    Standardizer scaler;
  };
  const Splits splits = stage("split", [&] {
    const data::SplitIndices outer = data::split_labels(all.y, cfg.split_ratio, cfg.seed);
    const nn::Dataset train = select(all, outer.train);
    const data::SplitIndices inner = data::split_labels(train.y, 1.0 - cfg.val_fraction, cfg.seed + 1);
    Splits s{select(train, inner.train), select(train, inner.test), select(all, outer.test), {}};
    if (cfg.input_mode == InputMode::kFeatures) {
      s.scaler = Standardizer::fit(s.fit.x);
      s.fit.x = s.scaler.apply(s.fit.x);
      s.val.x = s.scaler.apply(s.val.x);
    }
    return s;
  });

  PipelineResult result;
  result.learning_rate = cfg.train.learning_rate;
  result.hidden = cfg.hidden;

  // Step 3: initial training with the configured hyperparameters.
  auto [params, initial_report] = stage("initial-training", [&] {
    return nn::train(nn::init_params(splits.fit.input_dim(), cfg.hidden, cfg.seed), splits.fit, splits.val, cfg.train);
  });
  result.initial_report = initial_report;
  result.final_report = initial_report;

  if (!cfg.skip_tuning) {
    // Step 4: dragonfly search over (learning rate, hidden units).
    result.tuning = stage("tuning", [&] {
      nn::TrainConfig budget = cfg.train;
      budget.epochs = cfg.tune_epochs;
      return da::tune_mlp(splits.fit, splits.val, budget, cfg.tuning);
    });
    result.learning_rate = result.tuning->learning_rate;
    result.hidden = result.tuning->hidden;

    // Step 5: retrain with the tuned hyperparameters and the full epoch budget.
    std::tie(params, result.final_report) = stage("final-training", [&] {
      nn::TrainConfig tuned = cfg.train;
      tuned.learning_rate = result.learning_rate;
      return nn::train(nn::init_params(splits.fit.input_dim(), result.hidden, cfg.seed), splits.fit, splits.val, tuned);
    });
  }

  const nn::MlpParams model =
      cfg.input_mode == InputMode::kFeatures ? splits.scaler.fold_into(params) : params;

  // Step 6: held-out evaluation, then publish every artifact at once.
  result.evaluation = stage("evaluation", [&] { return evaluate_model(model, splits.test); });

  stage("export", [&] {
    StagedOutput out(cfg.out_dir);
    nn::save_checkpoint(model, out.dir() / "model.wmlp");
    nn::write_train_report(result.final_report, out.dir() / "train_report.csv");
    nn::write_train_report(result.initial_report, out.dir() / "train_report_initial.csv");
    if (result.tuning) {
      da::write_trace(result.tuning->search.trace, (out.dir() / "trace.csv").string());
      da::write_tuning_log(result.tuning->evaluations, out.dir() / "tuning.csv");
    }
    eval::export_report(result.evaluation.metrics, result.evaluation.confusion, result.evaluation.curves, out.dir());
    RunConfig resolved = cfg;
    resolved.train.learning_rate = result.learning_rate;
    resolved.hidden = result.hidden;
    write_text(out.dir() / "resolved_config.txt", resolved.dump());
    out.commit();
  });
  result.checkpoint = cfg.out_dir / "model.wmlp";
  return result;
}

Evaluation evaluate_checkpoint(const fs::path& checkpoint, const fs::path& data_root, const fs::path& out_dir) {
  const nn::MlpParams model = stage("load-checkpoint", [&] { return nn::load_checkpoint(checkpoint); });
  const InputMode mode = stage("load-checkpoint", [&] { return mode_for_input_dim(model.input_dim()); });
  const data::DatasetManifest manifest = stage("ingest", [&] { return data::scan_dataset(data_root); });
  const nn::Dataset all = stage("preprocess", [&] { return build_inputs(manifest, mode); });
  Evaluation ev = stage("evaluation", [&] { return evaluate_model(model, all); });
  stage("export", [&] {
    StagedOutput out(out_dir);
    eval::export_report(ev.metrics, ev.confusion, ev.curves, out.dir());
    out.commit();
  });
  return ev;
}

}  // namespace wmlp
