#include "wmlp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "wmlp/rng.hpp"

namespace wmlp::data {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<fs::path> find_class_dir(const fs::path& root, const std::string& name) {
  std::vector<fs::path> matches;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && lower(entry.path().filename().string()) == name) matches.push_back(entry.path());
  }
  if (matches.empty()) return std::nullopt;
  if (matches.size() > 1) throw std::runtime_error("ambiguous class directory '" + name + "' under " + root.string());
  return matches.front();
}

}  // namespace

DatasetManifest DatasetManifest::from_samples(std::vector<Sample> samples) {
  DatasetManifest m;
  std::set<fs::path> seen;
  for (const auto& s : samples) {
    if (s.label < 0 || s.label >= kClassCount) throw std::invalid_argument("manifest: invalid label");
    if (!seen.insert(s.path).second) throw std::invalid_argument("manifest: duplicate path " + s.path.string());
    ++m.counts[s.label];
  }
  m.samples = std::move(samples);
  return m;
}

bool is_image_file(const fs::path& path) {
  const std::string ext = lower(path.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

DatasetManifest scan_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw std::runtime_error("dataset root is not a directory: " + root.string());
  std::vector<Sample> samples;
  std::vector<std::string> warnings;
  for (int label = 0; label < kClassCount; ++label) {
    const std::string name = kClassNames[label];
    const auto dir = find_class_dir(root, name);
    if (!dir) throw std::runtime_error("missing class directory '" + name + "' under " + root.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(*dir)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (files.empty()) warnings.push_back("class directory '" + dir->string() + "' contains no images");
    for (auto& f : files) samples.push_back({std::move(f), label});
  }
  DatasetManifest m = DatasetManifest::from_samples(std::move(samples));
  m.warnings = std::move(warnings);
  return m;
}

SplitIndices split_labels(const std::vector<int>& labels, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split: ratio must lie in (0, 1)");
  std::array<std::vector<std::size_t>, kClassCount> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= kClassCount) throw std::invalid_argument("split: invalid label");
    by_class[labels[i]].push_back(i);
  }
  Rng rng(seed);
  SplitIndices out;
  for (int c = 0; c < kClassCount; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < 2) {
      throw std::invalid_argument(std::string("split: class '") + kClassNames[c] + "' has fewer than 2 samples");
    }
    rng.shuffle(std::span<std::size_t>(idx));
    const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(idx.size())));
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  return out;
}

SplitIndices split_train_test(const DatasetManifest& m, double ratio, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(m.size());
  for (const auto& s : m.samples) labels.push_back(s.label);
  return split_labels(labels, ratio, seed);
}

}  // namespace wmlp::data
