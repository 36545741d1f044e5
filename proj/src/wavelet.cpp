#include "wmlp/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wmlp/csv.hpp"

namespace wmlp::wavelet {

WaveletDecomposition haar_dwt2(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0 || x.rows() % 2 != 0 || x.cols() % 2 != 0) {
    throw std::invalid_argument("haar_dwt2: both dimensions must be even and non-zero");
  }
  const Eigen::Index h = x.rows() / 2;
  const Eigen::Index w = x.cols() / 2;
  WaveletDecomposition d{Matrix(h, w), Matrix(h, w), Matrix(h, w), Matrix(h, w)};
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      const double a = x(2 * i, 2 * j);
      const double b = x(2 * i, 2 * j + 1);
      const double c = x(2 * i + 1, 2 * j);
      const double e = x(2 * i + 1, 2 * j + 1);
      d.cA(i, j) = (a + b + c + e) / 2.0;
      d.cH(i, j) = (a + b - c - e) / 2.0;
      d.cV(i, j) = (a - b + c - e) / 2.0;
      d.cD(i, j) = (a - b - c + e) / 2.0;
    }
  }
  return d;
}

Matrix haar_idwt2(const WaveletDecomposition& d) {
  const auto same = [&](const Matrix& m) { return m.rows() == d.cA.rows() && m.cols() == d.cA.cols(); };
  if (!same(d.cH) || !same(d.cV) || !same(d.cD)) throw std::invalid_argument("haar_idwt2: subband shapes differ");
  Matrix x(2 * d.cA.rows(), 2 * d.cA.cols());
  for (Eigen::Index i = 0; i < d.cA.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cA.cols(); ++j) {
      const double ca = d.cA(i, j);
      const double ch = d.cH(i, j);
      const double cv = d.cV(i, j);
      const double cd = d.cD(i, j);
      x(2 * i, 2 * j) = (ca + ch + cv + cd) / 2.0;
      x(2 * i, 2 * j + 1) = (ca + ch - cv - cd) / 2.0;
      x(2 * i + 1, 2 * j) = (ca - ch + cv - cd) / 2.0;
      x(2 * i + 1, 2 * j + 1) = (ca - ch - cv + cd) / 2.0;
    }
  }
  return x;
}

SubbandStats subband_stats(const Matrix& m) {
  if (m.size() == 0) throw std::invalid_argument("subband_stats: empty matrix");
  const auto n = static_cast<double>(m.size());
  const double* begin = m.data();
  const double* end = begin + m.size();

  SubbandStats s;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double* p = begin; p != end; ++p) {
    sum += *p;
    sum_sq += *p * *p;
  }
  s.mean = sum / n;
  s.energy = sum_sq;
  double var = 0.0;
  for (const double* p = begin; p != end; ++p) var += (*p - s.mean) * (*p - s.mean);
  s.std = std::sqrt(var / n);

  const auto [lo, hi] = std::minmax_element(begin, end);
  const double min = *lo;
  const double range = *hi - min;
  if (range > 0.0) {
    std::array<std::size_t, 256> hist{};
    for (const double* p = begin; p != end; ++p) {
      const auto bin = static_cast<std::size_t>(std::min(255.0, std::floor((*p - min) / range * 256.0)));
      ++hist[bin];
    }
    double entropy = 0.0;
    for (std::size_t count : hist) {
      if (count == 0) continue;
      const double p = static_cast<double>(count) / n;
      entropy -= p * std::log2(p);
    }
    s.entropy = entropy;
  }
  return s;
}

Matrix to_matrix(const imaging::NormalizedImage& img) {
  return Eigen::Map<const Matrix>(img.values.data(), img.height, img.width);
}

Matrix to_matrix(const imaging::EdgeMap& edges) {
  Matrix m(edges.height, edges.width);
  for (int r = 0; r < edges.height; ++r) {
    for (int c = 0; c < edges.width; ++c) m(r, c) = edges.at(r, c) ? 1.0 : 0.0;
  }
  return m;
}

namespace {

void append_variant(const Matrix& x, FeatureVector& out, std::size_t variant) {
  const WaveletDecomposition d = haar_dwt2(x);
  const std::array<const Matrix*, kSubbands> bands{&d.cA, &d.cH, &d.cV, &d.cD};
  for (std::size_t b = 0; b < kSubbands; ++b) {
    const SubbandStats s = subband_stats(*bands[b]);
    const std::size_t base = (variant * kSubbands + b) * kStats;
    out[base + 0] = s.mean;
    out[base + 1] = s.std;
    out[base + 2] = s.energy;
    out[base + 3] = s.entropy;
  }
}

}  // namespace

FeatureVector feature_vector(const imaging::NormalizedImage& img) {
  if (img.width != imaging::kPipelineSize || img.height != imaging::kPipelineSize ||
      img.values.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw std::invalid_argument("feature_vector: expected a 128x128 image");
  }
  FeatureVector out{};
  append_variant(to_matrix(img), out, 0);
  // Canny runs on the 8-bit image; normalize is exactly invertible on 8-bit values.
  const std::vector<imaging::EdgeMap> edges = imaging::canny_multi(imaging::denormalize(img));
  for (std::size_t v = 0; v < edges.size(); ++v) append_variant(to_matrix(edges[v]), out, v + 1);
  return out;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    const std::array<const char*, kVariants> variants{"raw", "canny50_150", "canny100_200", "canny150_250"};
    const std::array<const char*, kSubbands> bands{"cA", "cH", "cV", "cD"};
    const std::array<const char*, kStats> stats{"mean", "std", "energy", "entropy"};
    std::vector<std::string> out;
    for (const char* v : variants) {
      for (const char* b : bands) {
        for (const char* s : stats) out.push_back(std::string(v) + "." + b + "." + s);
      }
    }
    return out;
  }();
  return names;
}

void write_feature_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& rows,
                       const std::vector<int>& labels) {
  if (rows.size() != labels.size()) throw std::invalid_argument("write_feature_csv: row/label count mismatch");
  auto out = csv::open(path);
  for (const auto& name : feature_names()) out << name << ',';
  out << "label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i]) out << csv::num(v) << ',';
    out << labels[i] << '\n';
  }
  csv::close(out, path);
}

}  // namespace wmlp::wavelet
