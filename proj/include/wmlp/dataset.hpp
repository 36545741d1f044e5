#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wmlp::data {

inline constexpr int kClassCount = 3;

/// Class directory names in label order: benign = 0, malignant = 1, normal = 2.
inline constexpr std::array<const char*, kClassCount> kClassNames{"benign", "malignant", "normal"};

struct Sample {
  std::filesystem::path path;
  int label = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct DatasetManifest {
  std::vector<Sample> samples;
  std::array<std::size_t, kClassCount> counts{};
  std::vector<std::string> warnings;

  std::size_t size() const { return samples.size(); }

  /// Builds a manifest from samples, recomputing counts. Throws on duplicate paths.
  static DatasetManifest from_samples(std::vector<Sample> samples);
};

/// True for the raster extensions the loader understands.
bool is_image_file(const std::filesystem::path& path);

/// Scans <root>/{benign,malignant,normal} (names matched case-insensitively),
/// classes in label order, files sorted by name. An empty class directory only
/// adds a warning.
DatasetManifest scan_dataset(const std::filesystem::path& root);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified split: each class is shuffled with one seeded stream (classes in
/// label order) and floor(ratio * n_c) indices go to train, the rest to test.
SplitIndices split_train_test(const DatasetManifest& m, double ratio, std::uint64_t seed);

/// Same rule applied to a plain label list.
SplitIndices split_labels(const std::vector<int>& labels, double ratio, std::uint64_t seed);

/// Writes n_per_class 128x128 grayscale PNGs per class into <dir>/<class>/ and
/// returns the resulting manifest.
DatasetManifest synth_generate(int n_per_class, std::uint64_t seed, const std::filesystem::path& dir);

}  // namespace wmlp::data
