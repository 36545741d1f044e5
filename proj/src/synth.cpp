#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wmlp/dataset.hpp"
#include "wmlp/imaging.hpp"
#include "wmlp/rng.hpp"
#include "wmlp/staging.hpp"

namespace wmlp {

namespace fs = std::filesystem;

namespace data {

namespace {

constexpr int kSize = imaging::kPipelineSize;

// Smooth low-frequency blobs on a bright background.
std::vector<double> benign_field(Rng& rng) {
  std::vector<double> f(kSize * kSize, rng.uniform(165.0, 185.0));
  const int blobs = 3 + static_cast<int>(rng.below(4));
  for (int b = 0; b < blobs; ++b) {
    const double cy = rng.uniform(0.0, kSize);
    const double cx = rng.uniform(0.0, kSize);
    const double sigma = rng.uniform(8.0, 16.0);
    const double amp = rng.uniform(-30.0, 30.0);
    for (int r = 0; r < kSize; ++r) {
      for (int c = 0; c < kSize; ++c) {
        const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
        f[r * kSize + c] += amp * std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
  }
  return f;
}

// Per-pixel speckle on a dark background.
std::vector<double> malignant_field(Rng& rng) {
  std::vector<double> f(kSize * kSize, rng.uniform(65.0, 85.0));
  for (double& v : f) v += rng.uniform(-45.0, 45.0);
  return f;
}

// Oriented sinusoidal ridges with a period of a few pixels over a vertical
// intensity ramp.
std::vector<double> normal_field(Rng& rng) {
  std::vector<double> f(kSize * kSize, rng.uniform(115.0, 135.0));
  const double amp = rng.uniform(20.0, 30.0);
  const double period = rng.uniform(8.0, 12.0);
  // Diagonal bands (30-60 or 120-150 degrees) keep diagonal detail energy up.
  const double theta = rng.uniform(std::numbers::pi / 6.0, std::numbers::pi / 3.0) + (rng.below(2) ? std::numbers::pi / 2.0 : 0.0);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double kx = std::cos(theta) * 2.0 * std::numbers::pi / period;
  const double ky = std::sin(theta) * 2.0 * std::numbers::pi / period;
  const double ramp = rng.uniform(30.0, 40.0);
  for (int r = 0; r < kSize; ++r) {
    const double shade = ramp * (2.0 * r / (kSize - 1) - 1.0);
    for (int c = 0; c < kSize; ++c) f[r * kSize + c] += shade + amp * std::sin(kx * c + ky * r + phase);
  }
  return f;
}

imaging::GrayImage8 render(int label, Rng& rng) {
  std::vector<double> f = label == 0 ? benign_field(rng) : label == 1 ? malignant_field(rng) : normal_field(rng);
  imaging::GrayImage8 img(kSize, kSize);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f[i] + 2.0 * rng.normal();
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return img;
}

}  // namespace

DatasetManifest synth_generate(int n_per_class, std::uint64_t seed, const fs::path& dir) {
  if (n_per_class <= 0) throw std::invalid_argument("synth_generate: n_per_class must be positive");
  StagedOutput staged(dir);
  std::vector<Sample> samples;
  for (int label = 0; label < kClassCount; ++label) {
    const fs::path class_dir = staged.dir() / kClassNames[label];
    fs::create_directories(class_dir);
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(label));
    for (int i = 0; i < n_per_class; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04d.png", kClassNames[label], i);
      imaging::save_grayscale(render(label, rng), class_dir / name);
      samples.push_back({dir / kClassNames[label] / name, label});
    }
  }
  staged.commit();
  return DatasetManifest::from_samples(std::move(samples));
}

}  // namespace data

}  // namespace wmlp
