#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "wmlp/imaging.hpp"

namespace wmlp::wavelet {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One level of a 2D Haar decomposition. Every subband is (rows/2) x (cols/2).
struct WaveletDecomposition {
  Matrix cA;  // approximation
  Matrix cH;  // horizontal detail
  Matrix cV;  // vertical detail
  Matrix cD;  // diagonal detail
};

struct SubbandStats {
  double mean = 0.0;
  double std = 0.0;  // population
  double energy = 0.0;
  double entropy = 0.0;  // bits, 256-bin histogram over [min, max]
};

inline constexpr std::size_t kVariants = 4;
inline constexpr std::size_t kSubbands = 4;
inline constexpr std::size_t kStats = 4;
inline constexpr std::size_t kFeatureCount = kVariants * kSubbands * kStats;

using FeatureVector = std::array<double, kFeatureCount>;

/// Orthonormal single-level Haar transform. Throws on odd dimensions.
WaveletDecomposition haar_dwt2(const Matrix& x);

/// Exact inverse of haar_dwt2. Throws if subband shapes differ.
Matrix haar_idwt2(const WaveletDecomposition& d);

SubbandStats subband_stats(const Matrix& m);

/// 64 statistics: {raw, canny 50/150, canny 100/200, canny 150/250}
/// x {cA, cH, cV, cD} x {mean, std, energy, entropy}, in that nesting order.
/// Requires a 128x128 image.
FeatureVector feature_vector(const imaging::NormalizedImage& img);

/// Column names "variant.subband.stat" in feature order.
const std::vector<std::string>& feature_names();

Matrix to_matrix(const imaging::NormalizedImage& img);
Matrix to_matrix(const imaging::EdgeMap& edges);

/// Header row of feature names plus "label"; one row per sample.
void write_feature_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& rows,
                       const std::vector<int>& labels);

}  // namespace wmlp::wavelet
