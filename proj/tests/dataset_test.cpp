#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_util.hpp"
#include "wmlp/dataset.hpp"
#include "wmlp/pipeline.hpp"
#include "wmlp/wavelet.hpp"

namespace wmlp::data {
namespace {

using wmlp::testing::TempDir;

std::vector<int> labels_with_counts(std::array<int, 3> counts) {
  std::vector<int> y;
  for (int k = 0; k < 3; ++k) y.insert(y.end(), static_cast<std::size_t>(counts[k]), k);
  return y;
}

void touch_image(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  imaging::save_grayscale(imaging::GrayImage8(4, 4, 9), p);
}

TEST(Split, ReferenceCorpusCounts) {
  const std::vector<int> y = labels_with_counts({120, 561, 416});
  const SplitIndices s = split_labels(y, 0.7, 1);
  EXPECT_EQ(s.train.size(), 767u);
  EXPECT_EQ(s.test.size(), 330u);
  std::array<int, 3> train{};
  std::array<int, 3> test{};
  for (auto i : s.train) ++train[static_cast<std::size_t>(y[i])];
  for (auto i : s.test) ++test[static_cast<std::size_t>(y[i])];
  EXPECT_EQ(train, (std::array<int, 3>{84, 392, 291}));
  EXPECT_EQ(test, (std::array<int, 3>{36, 169, 125}));
}

TEST(Split, TwoSampleClassesSplitInHalf) {
  const std::vector<int> y = labels_with_counts({2, 2, 2});
  const SplitIndices s = split_labels(y, 0.5, 3);
  EXPECT_EQ(s.train.size(), 3u);
  EXPECT_EQ(s.test.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(std::count_if(s.train.begin(), s.train.end(), [&](std::size_t i) { return y[i] == k; }), 1);
  }
}

TEST(Split, DisjointExhaustiveStratifiedDeterministic) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::array<int, 3> counts{2 + static_cast<int>(rng.below(60)), 2 + static_cast<int>(rng.below(60)),
                                    2 + static_cast<int>(rng.below(60))};
    std::vector<int> y = labels_with_counts(counts);
    std::span<int> view(y);
    rng.shuffle(view);
    const double ratio = rng.uniform(0.1, 0.9);
    const SplitIndices s = split_labels(y, ratio, static_cast<std::uint64_t>(trial));

    std::set<std::size_t> all(s.train.begin(), s.train.end());
    EXPECT_EQ(all.size(), s.train.size());
    for (auto i : s.test) EXPECT_TRUE(all.insert(i).second) << "index in both parts";
    EXPECT_EQ(all.size(), y.size());
    EXPECT_EQ(*all.rbegin(), y.size() - 1);

    for (int k = 0; k < 3; ++k) {
      const auto n_train = std::count_if(s.train.begin(), s.train.end(), [&](std::size_t i) { return y[i] == k; });
      EXPECT_EQ(n_train, static_cast<long>(std::floor(ratio * counts[static_cast<std::size_t>(k)])));
    }
    const SplitIndices again = split_labels(y, ratio, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(again.train, s.train);
    EXPECT_EQ(again.test, s.test);
  }
}

TEST(Split, Errors) {
  EXPECT_THROW(split_labels(labels_with_counts({1, 5, 5}), 0.7, 1), std::invalid_argument);
  EXPECT_THROW(split_labels(labels_with_counts({5, 5, 5}), 1.0, 1), std::invalid_argument);
  EXPECT_THROW(split_labels(labels_with_counts({5, 5, 5}), 0.0, 1), std::invalid_argument);
}

TEST(Manifest, RejectsDuplicatePaths) {
  EXPECT_THROW(DatasetManifest::from_samples({{"a.png", 0}, {"a.png", 1}}), std::invalid_argument);
  const DatasetManifest m = DatasetManifest::from_samples({{"a.png", 0}, {"b.png", 2}, {"c.png", 2}});
  EXPECT_EQ(m.counts, (std::array<std::size_t, 3>{1, 0, 2}));
}

TEST(ScanDataset, ClassOrderSortedFilesAndCaseInsensitiveNames) {
  TempDir tmp("scan");
  touch_image(tmp / "Benign" / "b2.png");
  touch_image(tmp / "Benign" / "b1.png");
  touch_image(tmp / "MALIGNANT" / "m1.pgm");
  touch_image(tmp / "normal" / "z.png");
  touch_image(tmp / "normal" / "a.png");
  wmlp::testing::write_bytes(tmp / "normal" / "notes.txt", "ignored");

  const DatasetManifest m = scan_dataset(tmp.path());
  ASSERT_EQ(m.size(), 5u);
  EXPECT_EQ(m.counts, (std::array<std::size_t, 3>{2, 1, 2}));
  EXPECT_EQ(m.samples[0].path.filename(), "b1.png");
  EXPECT_EQ(m.samples[1].path.filename(), "b2.png");
  EXPECT_EQ(m.samples[2].label, 1);
  EXPECT_EQ(m.samples[3].path.filename(), "a.png");
  EXPECT_EQ(m.samples[4].label, 2);
  EXPECT_TRUE(m.warnings.empty());
  EXPECT_EQ(scan_dataset(tmp.path()).samples, m.samples);
}

TEST(ScanDataset, EmptyClassWarnsMissingClassFails) {
  TempDir tmp("scan");
  std::filesystem::create_directories(tmp / "benign");
  touch_image(tmp / "malignant" / "m.png");
  touch_image(tmp / "normal" / "n.png");
  const DatasetManifest m = scan_dataset(tmp.path());
  EXPECT_EQ(m.counts[0], 0u);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("benign"), std::string::npos);

  std::filesystem::remove_all(tmp / "normal");
  EXPECT_THROW(scan_dataset(tmp.path()), std::runtime_error);
  EXPECT_THROW(scan_dataset(tmp / "nowhere"), std::runtime_error);
}

TEST(IsImageFile, KnownExtensions) {
  EXPECT_TRUE(is_image_file("a.png"));
  EXPECT_TRUE(is_image_file("a.PNG"));
  EXPECT_TRUE(is_image_file("a.pgm"));
  EXPECT_TRUE(is_image_file("a.jpg"));
  EXPECT_TRUE(is_image_file("a.JPEG"));
  EXPECT_FALSE(is_image_file("a.txt"));
  EXPECT_FALSE(is_image_file("png"));
}

TEST(Synth, CountsAndImageShape) {
  TempDir tmp("synth");
  const DatasetManifest m = synth_generate(4, 1, tmp / "corpus");
  EXPECT_EQ(m.counts, (std::array<std::size_t, 3>{4, 4, 4}));
  EXPECT_EQ(scan_dataset(tmp / "corpus").samples, m.samples);
  const imaging::GrayImage8 img = imaging::load_grayscale(m.samples[5].path);
  EXPECT_EQ(img.width, 128);
  EXPECT_EQ(img.height, 128);
}

TEST(Synth, SameSeedSameBytes) {
  TempDir tmp("synth");
  const DatasetManifest a = synth_generate(3, 9, tmp / "a");
  const DatasetManifest b = synth_generate(3, 9, tmp / "b");
  const DatasetManifest c = synth_generate(3, 10, tmp / "c");
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(wmlp::testing::read_bytes(a.samples[i].path), wmlp::testing::read_bytes(b.samples[i].path));
  }
  EXPECT_NE(wmlp::testing::read_bytes(a.samples[0].path), wmlp::testing::read_bytes(c.samples[0].path));
}

TEST(Synth, DiagonalDetailEnergyOrdersClasses) {
  TempDir tmp("synth");
  const DatasetManifest m = synth_generate(30, 1, tmp / "corpus");
  std::array<double, 3> energy{};
  for (const auto& s : m.samples) {
    const auto img = imaging::normalize(imaging::load_grayscale(s.path));
    const auto d = wavelet::haar_dwt2(wavelet::to_matrix(img));
    energy[static_cast<std::size_t>(s.label)] += d.cD.squaredNorm() / 30.0;
  }
  EXPECT_GT(energy[1], energy[2]);
  EXPECT_GT(energy[2], energy[0]);
}

}  // namespace
}  // namespace wmlp::data
