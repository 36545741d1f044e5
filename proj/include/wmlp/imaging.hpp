#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wmlp::imaging {

/// Row-major 8-bit grayscale raster.
struct GrayImage8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage8() = default;
  GrayImage8(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }

  /// Pixel with coordinates clamped into the image (edge replication).
  std::uint8_t clamped(int row, int col) const;

  friend bool operator==(const GrayImage8&, const GrayImage8&) = default;
};

/// Row-major real-valued image, pixel values mapped to [-1, 1].
struct NormalizedImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<bool> edges;

  bool at(int row, int col) const { return edges[static_cast<std::size_t>(row) * width + col]; }
  std::size_t count() const;
};

struct ThresholdPair {
  double low = 0.0;
  double high = 0.0;
};

/// The three fixed threshold pairs, weakest first.
inline constexpr std::array<ThresholdPair, 3> kCannyThresholds{{{50, 150}, {100, 200}, {150, 250}}};

/// Side length of the square images the pipeline works on.
inline constexpr int kPipelineSize = 128;

GrayImage8 load_grayscale(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG (or binary PGM when the extension is .pgm).
void save_grayscale(const GrayImage8& img, const std::filesystem::path& path);

/// 0.299 R + 0.587 G + 0.114 B, rounded to nearest.
std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);

GrayImage8 resize_bilinear(const GrayImage8& img, int out_w, int out_h);

NormalizedImage normalize(const GrayImage8& img);

/// Inverse of normalize: round((v * 0.5 + 0.5) * 255), clamped.
GrayImage8 denormalize(const NormalizedImage& img);

/// Normalized 5x5 Gaussian kernel (sigma 1.4), row-major.
const std::array<double, 25>& gaussian_kernel();

GrayImage8 gaussian_blur(const GrayImage8& img);

/// Intermediate products of one Canny run, kept for debugging output.
struct CannyStages {
  GrayImage8 blurred;
  std::vector<double> magnitude;   // before suppression
  std::vector<double> suppressed;  // after non-maximum suppression, 0 where removed
  std::vector<bool> strong;
  std::vector<bool> weak;
  EdgeMap edges;
};

CannyStages canny_stages(const GrayImage8& img, ThresholdPair t);

EdgeMap canny(const GrayImage8& img, ThresholdPair t);

/// Edge maps for kCannyThresholds, in order.
std::vector<EdgeMap> canny_multi(const GrayImage8& img);

/// Writes <stem>_blur, <stem>_mag, <stem>_nms and <stem>_t<lo>-<hi>_edges PNGs
/// for every fixed threshold pair.
void write_canny_debug(const GrayImage8& img, const std::filesystem::path& dir, const std::string& stem);

}  // namespace wmlp::imaging
