// Command-line front end: dataset ingestion, synthetic data, training,
// tuning, evaluation and the dragonfly benchmark.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "wmlp/config.hpp"
#include "wmlp/csv.hpp"
#include "wmlp/dataset.hpp"
#include "wmlp/dragonfly.hpp"
#include "wmlp/errors.hpp"
#include "wmlp/imaging.hpp"
#include "wmlp/pipeline.hpp"
#include "wmlp/staging.hpp"
#include "wmlp/wavelet.hpp"

namespace fs = std::filesystem;

namespace {

void print_metrics(const wmlp::Evaluation& ev) {
  const auto& m = ev.metrics;
  std::printf("accuracy %.4f  macro precision %.4f  recall %.4f  f1 %.4f  auc %.4f\n", m.accuracy, m.macro_precision,
              m.macro_recall, m.macro_f1, m.macro_auc);
  for (int k = 0; k < wmlp::eval::kClasses; ++k) {
    const auto& c = m.per_class[k];
    std::printf("  %-9s precision %.4f  recall %.4f  f1 %.4f  auc %.4f%s\n", wmlp::data::kClassNames[k], c.precision,
                c.recall, c.f1, c.auc, c.undefined ? "  (undefined ratio reported as 0)" : "");
  }
}

// Config file first, then any --<key> flags given on the command line.
wmlp::RunConfig resolve_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  wmlp::RunConfig cfg = path.empty() ? wmlp::RunConfig{} : wmlp::load_config(path);
  for (const auto& [key, value] : overrides) cfg.set(key, value);
  return cfg;
}

int run_ingest(const std::string& root, const std::string& features_csv, const std::string& debug_dir) {
  const auto manifest = wmlp::data::scan_dataset(root);
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
  for (int k = 0; k < wmlp::data::kClassCount; ++k) {
    std::printf("%-9s %zu\n", wmlp::data::kClassNames[k], manifest.counts[k]);
  }
  std::printf("%-9s %zu\n", "total", manifest.size());

  if (!debug_dir.empty()) {
    wmlp::StagedOutput out(debug_dir);
    for (const auto& s : manifest.samples) {
      const auto img = wmlp::imaging::resize_bilinear(wmlp::imaging::load_grayscale(s.path), wmlp::imaging::kPipelineSize,
                                                      wmlp::imaging::kPipelineSize);
      wmlp::imaging::write_canny_debug(img, out.dir() / wmlp::data::kClassNames[s.label], s.path.stem().string());
    }
    out.commit();
  }
  if (!features_csv.empty()) {
    std::vector<wmlp::wavelet::FeatureVector> rows;
    std::vector<int> labels;
    for (const auto& s : manifest.samples) {
      const auto x = wmlp::preprocess(s.path, wmlp::InputMode::kFeatures);
      wmlp::wavelet::FeatureVector f{};
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = x[static_cast<Eigen::Index>(i)];
      rows.push_back(f);
      labels.push_back(s.label);
    }
    const fs::path target(features_csv);
    wmlp::StagedOutput out(target.parent_path().empty() ? fs::path(".") : target.parent_path());
    wmlp::wavelet::write_feature_csv(out.dir() / target.filename(), rows, labels);
    out.commit();
  }
  return 0;
}

int run_training(const wmlp::RunConfig& cfg) {
  const auto result = wmlp::run_pipeline(cfg);
  if (result.tuning) {
    std::printf("tuned learning_rate %.6g  hidden %d  (validation accuracy %.4f)\n", result.learning_rate,
                result.hidden, -result.tuning->fitness);
  }
  const auto& last = result.final_report.epochs.back();
  std::printf("epoch %d  train loss %.6f  train acc %.4f  val acc %.4f\n", last.epoch, last.train_loss,
              last.train_accuracy, last.val_accuracy);
  std::printf("test ");
  print_metrics(result.evaluation);
  std::printf("artifacts written to %s\n", cfg.out_dir.string().c_str());
  return 0;
}

int run_benchmark(int dim, int pop, int iters, std::uint64_t seed, const std::string& out) {
  wmlp::da::DaConfig cfg = wmlp::da::DaConfig::benchmark(seed);
  cfg.dim = dim;
  cfg.lb.assign(static_cast<std::size_t>(dim), -5.12);
  cfg.ub.assign(static_cast<std::size_t>(dim), 5.12);
  cfg.pop = pop;
  cfg.max_iter = iters;
  const auto result = wmlp::da::optimize(wmlp::da::rastrigin, cfg);
  if (out.empty()) {
    std::printf("iteration,best_fitness\n");
    for (std::size_t t = 0; t < result.trace.size(); ++t) std::printf("%zu,%s\n", t, wmlp::csv::num(result.trace[t]).c_str());
  } else {
    const fs::path target(out);
    wmlp::StagedOutput staged(target.parent_path().empty() ? fs::path(".") : target.parent_path());
    wmlp::da::write_trace(result.trace, (staged.dir() / target.filename()).string());
    staged.commit();
    std::printf("initial best %.6g  final best %.6g\n", result.trace.front(), result.trace.back());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet MLP lung-CT classifier with dragonfly hyperparameter tuning"};
  app.require_subcommand(1);

  std::string root;
  std::string features_csv;
  std::string debug_dir;
  auto* ingest = app.add_subcommand("ingest", "Scan a class-per-directory dataset and report counts");
  ingest->add_option("root", root, "Dataset root with benign/, malignant/, normal/")->required();
  ingest->add_option("--features", features_csv, "Write the 64 wavelet features per image to this CSV");
  ingest->add_option("--debug-dir", debug_dir, "Write Canny stage images (_blur, _mag, _nms, _edges) here");

  int synth_n = 200;
  std::uint64_t synth_seed = 1;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic three-class corpus");
  synth->add_option("--n", synth_n, "Images per class")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("dir", synth_dir, "Output directory")->required();

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file of 'key = value' lines")->check(CLI::ExistingFile);
    for (const auto& key : wmlp::config_keys()) {
      std::string names = "--" + key;
      if (key.find('_') != std::string::npos) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        names += ",--" + dashed;
      }
      auto* opt = cmd->add_option_function<std::string>(
          names, [&overrides, key](const std::string& v) { overrides[key] = v.empty() ? "true" : v; },
          "Override config key " + key);
      // Booleans may be given bare: --skip-tuning
      if (key == "skip_tuning") opt->expected(0, 1);
    }
  };
  auto* train = app.add_subcommand("train", "Train and evaluate with the configured hyperparameters (no tuning)");
  add_config_options(train);
  auto* tune = app.add_subcommand("tune", "Full pipeline: initial training, dragonfly tuning, retraining, evaluation (--skip-tuning stops after the initial training)");
  add_config_options(tune);

  std::string checkpoint;
  std::string eval_data;
  std::string eval_out = "eval_out";
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on every image of a dataset");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--data", eval_data, "Dataset root")->required();
  evaluate->add_option("--out", eval_out, "Output directory for metrics CSVs");

  int dim = 10;
  int pop = 30;
  int iters = 100;
  std::uint64_t da_seed = 1;
  std::string trace_out;
  auto* bench = app.add_subcommand("benchmark-da", "Minimize Rastrigin with the dragonfly algorithm");
  bench->add_option("--dim", dim, "Dimensions")->check(CLI::PositiveNumber);
  bench->add_option("--pop", pop, "Population size")->check(CLI::PositiveNumber);
  bench->add_option("--iters", iters, "Iterations")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", da_seed, "Seed");
  bench->add_option("--out", trace_out, "Write the trace CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(root, features_csv, debug_dir);
    if (*synth) {
      const auto m = wmlp::data::synth_generate(synth_n, synth_seed, synth_dir);
      std::printf("wrote %zu images to %s\n", m.size(), synth_dir.c_str());
      return 0;
    }
    if (*train || *tune) {
      wmlp::RunConfig cfg = resolve_config(config_path, overrides);
      if (*train) cfg.skip_tuning = true;
      return run_training(cfg);
    }
    if (*evaluate) {
      print_metrics(wmlp::evaluate_checkpoint(checkpoint, eval_data, eval_out));
      return 0;
    }
    if (*bench) return run_benchmark(dim, pop, iters, da_seed, trace_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
