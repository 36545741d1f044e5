#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmlp/dragonfly.hpp"
#include "wmlp/neuralnet.hpp"

namespace wmlp {

enum class InputMode { kFlat, kFeatures };

std::string to_string(InputMode mode);
InputMode parse_input_mode(const std::string& s);

/// Everything one pipeline run depends on. Defaults reproduce the reference
/// MLP settings (lr 0.01, batch 256, 100 epochs, seed 1, 100 hidden units)
/// and the reference tuning search (10 dragonflies, 2 iterations).
struct RunConfig {
  InputMode input_mode = InputMode::kFlat;
  nn::TrainConfig train;  // train.seed mirrors `seed`
  int hidden = nn::kDefaultHidden;
  da::DaConfig tuning = da::DaConfig::tuning();
  int tune_epochs = 10;
  double split_ratio = 0.7;
  double val_fraction = 0.2;
  bool skip_tuning = false;
  std::uint64_t seed = 1;
  std::filesystem::path data_root;
  std::filesystem::path out_dir = "out";

  /// Sets one key from its textual value. Throws std::invalid_argument for
  /// unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);

  /// Checks ranges; throws std::invalid_argument.
  void validate() const;

  /// `key = value` lines for every key, in config_keys() order.
  std::string dump() const;
};

/// Recognised keys, in a fixed order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; '#' starts a comment, blank lines are ignored.
RunConfig parse_config(const std::string& text, RunConfig base = {});

RunConfig load_config(const std::filesystem::path& path);

}  // namespace wmlp
